"""Immutable expression trees in the two variables ``x`` and ``u``."""

from __future__ import annotations

import math

UNARY_OPS = frozenset(
    {"neg", "sin", "cos", "tan", "cot", "sinh", "cosh", "tanh", "exp", "ln", "sqrt", "lambert_w"}
)
BINARY_OPS = frozenset({"add", "sub", "mul", "div", "pow"})
VARIABLES = ("x", "u")


class Expr:
    """Base node. Subclasses are immutable and compare structurally."""

    __slots__ = ("_hash", "_key")

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    def _init(self, **fields):
        for name, value in fields.items():
            object.__setattr__(self, name, value)
        object.__setattr__(self, "_key", None)

    def __hash__(self):
        return self._hash

    def __str__(self):
        from .parser import to_text

        return to_text(self)

    # Operator sugar so trees can be built as ``X**2 + 3*U``.
    def __add__(self, other):
        return Binary("add", self, as_expr(other))

    def __radd__(self, other):
        return Binary("add", as_expr(other), self)

    def __sub__(self, other):
        return Binary("sub", self, as_expr(other))

    def __rsub__(self, other):
        return Binary("sub", as_expr(other), self)

    def __mul__(self, other):
        return Binary("mul", self, as_expr(other))

    def __rmul__(self, other):
        return Binary("mul", as_expr(other), self)

    def __truediv__(self, other):
        return Binary("div", self, as_expr(other))

    def __rtruediv__(self, other):
        return Binary("div", as_expr(other), self)

    def __pow__(self, other):
        return Binary("pow", self, as_expr(other))

    def __rpow__(self, other):
        return Binary("pow", as_expr(other), self)

    def __neg__(self):
        return Unary("neg", self)

    @property
    def sort_key(self) -> tuple:
        """Total order used to canonicalize sums and products: node kind first, then recursively."""
        key = self._key
        if key is None:
            key = self._make_key()
            object.__setattr__(self, "_key", key)
        return key

    def _make_key(self) -> tuple:
        raise NotImplementedError


class Const(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"constants must be finite, got {value!r}")
        if value == 0.0:
            value = 0.0  # drop the sign of -0.0
        self._init(value=value)
        object.__setattr__(self, "_hash", hash(("c", value)))

    __hash__ = Expr.__hash__

    def __eq__(self, other):
        return isinstance(other, Const) and self.value == other.value

    def __repr__(self):
        return f"Const({self.value!r})"

    def _make_key(self):
        return (0, self.value)


class Var(Expr):
    __slots__ = ("name",)

    def __init__(self, name: str):
        if name not in VARIABLES:
            raise ValueError(f"only x and u are allowed, got {name!r}")
        self._init(name=name)
        object.__setattr__(self, "_hash", hash(("v", name)))

    __hash__ = Expr.__hash__

    def __eq__(self, other):
        return isinstance(other, Var) and self.name == other.name

    def __repr__(self):
        return f"Var({self.name!r})"

    def _make_key(self):
        return (1, VARIABLES.index(self.name))


class Unary(Expr):
    __slots__ = ("op", "child")

    def __init__(self, op: str, child: Expr):
        if op not in UNARY_OPS:
            raise ValueError(f"unknown unary op {op!r}")
        if not isinstance(child, Expr):
            raise TypeError("child must be an Expr")
        self._init(op=op, child=child)
        object.__setattr__(self, "_hash", hash(("1", op, child._hash)))

    __hash__ = Expr.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Unary)
            and self._hash == other._hash
            and self.op == other.op
            and self.child == other.child
        )

    def __repr__(self):
        return f"Unary({self.op!r}, {self.child!r})"

    def _make_key(self):
        return (2, self.op, self.child.sort_key)


class Binary(Expr):
    __slots__ = ("op", "left", "right")

    def __init__(self, op: str, left: Expr, right: Expr):
        if op not in BINARY_OPS:
            raise ValueError(f"unknown binary op {op!r}")
        if not isinstance(left, Expr) or not isinstance(right, Expr):
            raise TypeError("operands must be Expr")
        self._init(op=op, left=left, right=right)
        object.__setattr__(self, "_hash", hash(("2", op, left._hash, right._hash)))

    __hash__ = Expr.__hash__

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, Binary)
            and self._hash == other._hash
            and self.op == other.op
            and self.left == other.left
            and self.right == other.right
        )

    def __repr__(self):
        return f"Binary({self.op!r}, {self.left!r}, {self.right!r})"

    def _make_key(self):
        return (3, self.op, self.left.sort_key, self.right.sort_key)


X = Var("x")
U = Var("u")
ZERO = Const(0)
ONE = Const(1)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float)):
        return Const(value)
    raise TypeError(f"cannot convert {type(value).__name__} to Expr")


def func(op: str, arg) -> Unary:
    return Unary(op, as_expr(arg))


def variables_in(e: Expr) -> set[str]:
    found = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            found.add(node.name)
        elif isinstance(node, Unary):
            stack.append(node.child)
        elif isinstance(node, Binary):
            stack.extend((node.left, node.right))
    return found


def size(e: Expr) -> int:
    """Number of nodes, counting shared subtrees once per occurrence."""
    if isinstance(e, Unary):
        return 1 + size(e.child)
    if isinstance(e, Binary):
        return 1 + size(e.left) + size(e.right)
    return 1
