"""Numeric evaluation of expression trees.

Trees are compiled once into straight-line Python (one temporary per distinct
subtree) against either a scalar ``math`` backend, which raises
:class:`DomainError`, or a numpy backend, which marks out-of-domain entries
with NaN.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from .lambertw import LambertDomainError, lambert_w, lambert_w_array
from .nodes import Binary, Const, Expr, Unary, Var


class DomainError(ArithmeticError):
    """An intermediate value left the domain of an operation."""


# Scalar backend -------------------------------------------------------------


def _s_div(a, b):
    if b == 0.0:
        raise DomainError("division by zero")
    return a / b


def _s_pow(a, b):
    if a < 0.0 and not float(b).is_integer():
        raise DomainError("negative base with non-integer exponent")
    try:
        return math.pow(a, b)
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise DomainError(f"pow({a!r}, {b!r})") from exc


def _s_wrap(fn, name):
    def call(a):
        try:
            return fn(a)
        except (ValueError, OverflowError) as exc:
            raise DomainError(f"{name}({a!r})") from exc

    return call


def _s_cot(a):
    s = math.sin(a)
    if s == 0.0:
        raise DomainError(f"cot({a!r})")
    return math.cos(a) / s


def _s_lambert_w(a):
    try:
        return lambert_w(a)
    except LambertDomainError as exc:
        raise DomainError(str(exc)) from exc


def _s_finite(a):
    if not math.isfinite(a):
        raise DomainError("non-finite result")
    return a


_SCALAR = {
    "_div": _s_div,
    "_pow": _s_pow,
    "_fin": _s_finite,
    "_sin": math.sin,
    "_cos": math.cos,
    "_tan": _s_wrap(math.tan, "tan"),
    "_cot": _s_cot,
    "_sinh": _s_wrap(math.sinh, "sinh"),
    "_cosh": _s_wrap(math.cosh, "cosh"),
    "_tanh": math.tanh,
    "_exp": _s_wrap(math.exp, "exp"),
    "_ln": _s_wrap(math.log, "ln"),
    "_sqrt": _s_wrap(math.sqrt, "sqrt"),
    "_lambert_w": _s_lambert_w,
}


# Array backend --------------------------------------------------------------


def _a_clean(r):
    r = np.asarray(r, dtype=float)
    return np.where(np.isfinite(r), r, np.nan)


def _a_pow(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    r = np.power(a, b)
    bad = np.isnan(a) | np.isnan(b) | ((a < 0) & (b != np.round(b))) | ((a == 0) & (b < 0))
    return np.where(bad | ~np.isfinite(r), np.nan, r)


def _a_wrap(fn):
    return lambda a: _a_clean(fn(a))


def _a_cot(a):
    s = np.sin(a)
    return _a_clean(np.cos(a) / np.where(s == 0, np.nan, s))


_ARRAY = {
    "_div": lambda a, b: _a_clean(np.divide(a, np.where(np.asarray(b) == 0, np.nan, b))),
    "_pow": _a_pow,
    "_fin": _a_clean,
    "_sin": np.sin,
    "_cos": np.cos,
    "_tan": _a_wrap(np.tan),
    "_cot": _a_cot,
    "_sinh": _a_wrap(np.sinh),
    "_cosh": _a_wrap(np.cosh),
    "_tanh": np.tanh,
    "_exp": _a_wrap(np.exp),
    "_ln": lambda a: _a_clean(np.log(np.where(np.asarray(a) > 0, a, np.nan))),
    "_sqrt": lambda a: _a_clean(np.sqrt(np.where(np.asarray(a) >= 0, a, np.nan))),
    "_lambert_w": lambert_w_array,
}


# Code generation ------------------------------------------------------------

_INFIX = {"add": "+", "sub": "-", "mul": "*"}


def _generate(e: Expr) -> str:
    names: dict[Expr, str] = {}
    lines: list[str] = []

    def visit(node: Expr) -> str:
        if isinstance(node, Var):
            return node.name
        if isinstance(node, Const):
            return repr(node.value)
        hit = names.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Unary):
            arg = visit(node.child)
            code = f"-{arg}" if node.op == "neg" else f"_{node.op}({arg})"
        else:
            assert isinstance(node, Binary)
            a, b = visit(node.left), visit(node.right)
            if node.op in _INFIX:
                code = f"{a} {_INFIX[node.op]} {b}"
            else:
                code = f"_{node.op}({a}, {b})"
        name = f"t{len(names)}"
        names[node] = name
        lines.append(f"    {name} = {code}")
        return name

    result = visit(e)
    body = "\n".join(lines)
    return f"def _f(x, u):\n{body}\n    return _fin({result})\n" if body else (
        f"def _f(x, u):\n    return _fin({result})\n"
    )


@lru_cache(maxsize=4096)
def _compile(e: Expr, backend: str):
    namespace = dict(_SCALAR if backend == "scalar" else _ARRAY)
    exec(compile(_generate(e), "<expr>", "exec"), namespace)
    return namespace["_f"]


def compile_scalar(e: Expr):
    """Return ``f(x, u) -> float`` raising :class:`DomainError` outside the domain."""
    fn = _compile(e, "scalar")

    def call(x, u):
        try:
            return fn(float(x), float(u))
        except OverflowError as exc:
            raise DomainError("overflow") from exc

    return call


def evaluate(e: Expr, x: float, u: float) -> float:
    """IEEE double value of ``e`` at ``(x, u)``."""
    return compile_scalar(e)(x, u)


def evaluate_array(e: Expr, xs, us) -> np.ndarray:
    """Vectorized evaluation over broadcast arrays; NaN marks points outside the domain."""
    xs = np.asarray(xs, dtype=float)
    us = np.asarray(us, dtype=float)
    shape = np.broadcast_shapes(xs.shape, us.shape)
    with np.errstate(all="ignore"):
        out = _compile(e, "array")(xs, us)
    return np.array(np.broadcast_to(out, shape), dtype=float)
