"""Symbolic partial derivatives and substitution."""

from __future__ import annotations

from .nodes import ONE, ZERO, Binary, Const, Expr, Unary, Var, as_expr


def _is_const(e: Expr, value: float) -> bool:
    return isinstance(e, Const) and e.value == value


# Light constructors that skip trivial nodes so derivative trees stay small
# before simplify sees them.
def _add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    return Binary("add", a, b)


def _sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return _neg(b)
    return Binary("sub", a, b)


def _neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    return Unary("neg", a)


def _mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    return Binary("mul", a, b)


def _div(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    return Binary("div", a, b)


def _pow(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 1):
        return a
    return Binary("pow", a, b)


def _outer_derivative(op: str, g: Expr) -> Expr:
    """d op(g) / dg, as a tree in g."""
    if op == "sin":
        return Unary("cos", g)
    if op == "cos":
        return _neg(Unary("sin", g))
    if op == "tan":
        return _add(ONE, _pow(Unary("tan", g), Const(2)))
    if op == "cot":
        return _neg(_add(ONE, _pow(Unary("cot", g), Const(2))))
    if op == "sinh":
        return Unary("cosh", g)
    if op == "cosh":
        return Unary("sinh", g)
    if op == "tanh":
        return _sub(ONE, _pow(Unary("tanh", g), Const(2)))
    if op == "exp":
        return Unary("exp", g)
    if op == "ln":
        return _div(ONE, g)
    if op == "sqrt":
        return _div(ONE, _mul(Const(2), Unary("sqrt", g)))
    if op == "lambert_w":
        w = Unary("lambert_w", g)
        return _div(ONE, _mul(Unary("exp", w), _add(ONE, w)))
    raise ValueError(op)


def derivative(e: Expr, v: str) -> Expr:
    """Raw (unsimplified) partial derivative of ``e`` with respect to ``v``."""
    cache: dict[Expr, Expr] = {}

    def d(node: Expr) -> Expr:
        hit = cache.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Const):
            out = ZERO
        elif isinstance(node, Var):
            out = ONE if node.name == v else ZERO
        elif isinstance(node, Unary):
            dg = d(node.child)
            if node.op == "neg":
                out = _neg(dg) if not _is_const(dg, 0) else ZERO
            elif _is_const(dg, 0):
                out = ZERO
            else:
                out = _mul(_outer_derivative(node.op, node.child), dg)
        else:
            a, b = node.left, node.right
            da, db = d(a), d(b)
            if node.op == "add":
                out = _add(da, db)
            elif node.op == "sub":
                out = _sub(da, db)
            elif node.op == "mul":
                out = _add(_mul(da, b), _mul(a, db))
            elif node.op == "div":
                if _is_const(db, 0):
                    out = _div(da, b)
                else:
                    out = _div(_sub(_mul(da, b), _mul(a, db)), _pow(b, Const(2)))
            else:
                out = _diff_pow(a, b, da, db)
        cache[node] = out
        return out

    return d(e)


def _diff_pow(a: Expr, b: Expr, da: Expr, db: Expr) -> Expr:
    if _is_const(db, 0):
        if _is_const(da, 0):
            return ZERO
        if isinstance(b, Const):
            lowered = _pow(a, Const(b.value - 1))
        else:
            lowered = _pow(a, _sub(b, ONE))
        return _mul(_mul(b, lowered), da)
    power = Binary("pow", a, b)
    if _is_const(da, 0):
        return _mul(_mul(power, Unary("ln", a)), db)
    return _mul(power, _add(_mul(db, Unary("ln", a)), _div(_mul(b, da), a)))


def diff(e: Expr, v: str) -> Expr:
    """Exact partial derivative of ``e`` with respect to variable ``v``, simplified."""
    from .simplify import simplify

    if v not in ("x", "u"):
        raise ValueError(f"unknown variable {v!r}")
    return simplify(derivative(e, v))


def substitute(e: Expr, **bindings) -> Expr:
    """Replace variables by expressions (or numbers): ``substitute(e, u=Const(0.5))``."""
    repl = {name: as_expr(value) for name, value in bindings.items()}
    cache: dict[Expr, Expr] = {}

    def sub(node: Expr) -> Expr:
        hit = cache.get(node)
        if hit is not None:
            return hit
        if isinstance(node, Var):
            out = repl.get(node.name, node)
        elif isinstance(node, Unary):
            child = sub(node.child)
            out = node if child is node.child else Unary(node.op, child)
        elif isinstance(node, Binary):
            left, right = sub(node.left), sub(node.right)
            out = node if (left is node.left and right is node.right) else Binary(node.op, left, right)
        else:
            out = node
        cache[node] = out
        return out

    return sub(e)
