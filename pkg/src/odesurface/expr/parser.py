"""Text front-end for expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?
    atom   := number | 'x' | 'u' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus (``-2^2`` is ``-(2^2)``) and is
right-associative. ``**`` is accepted as a synonym for ``^``. A minus sign
written directly in front of a numeric literal that is not raised to a power
produces a negative constant rather than a negation node.
"""

from __future__ import annotations

import math
import re

from .nodes import BINARY_OPS, Binary, Const, Expr, UNARY_OPS, Unary, Var

FUNCTIONS = frozenset(UNARY_OPS - {"neg"})
NAMED_CONSTANTS = {"pi": math.pi, "e": math.e}


class ParseError(ValueError):
    """Base class for text front-end errors; ``offset`` is a byte offset into the input."""

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        self.offset = len(text[:position].encode("utf-8"))
        super().__init__(f"{message} at byte {self.offset}")


class ExprSyntaxError(ParseError):
    pass


class UnknownIdentifier(ParseError):
    def __init__(self, name: str, text: str, position: int):
        self.name = name
        super().__init__(f"unknown identifier {name!r}", text, position)


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if value == "**":
                value = "^"
            tokens.append((kind, value, pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self, ahead: int = 0):
        return self.tokens[min(self.i + ahead, len(self.tokens) - 1)]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, tok, pos = self.peek()
        if tok != value or kind == "end":
            found = "end of input" if kind == "end" else repr(tok)
            raise ExprSyntaxError(f"expected {value!r}, found {found}", self.text, pos)
        return self.advance()

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            raise ExprSyntaxError("empty expression", self.text, 0)
        e = self.expr()
        kind, tok, pos = self.peek()
        if kind != "end":
            raise ExprSyntaxError(f"unexpected {tok!r}", self.text, pos)
        return e

    def expr(self) -> Expr:
        left = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = "add" if self.advance()[1] == "+" else "sub"
            left = Binary(op, left, self.term())
        return left

    def term(self) -> Expr:
        left = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = "mul" if self.advance()[1] == "*" else "div"
            left = Binary(op, left, self.unary())
        return left

    def unary(self) -> Expr:
        kind, tok, _ = self.peek()
        if kind == "op" and tok == "-":
            nxt, after = self.peek(1), self.peek(2)
            if nxt[0] == "num" and after[1] != "^":
                self.advance()
                self.advance()
                return Const(-float(nxt[1]))
            self.advance()
            return Unary("neg", self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.advance()
            return Binary("pow", base, self.unary())
        return base

    def atom(self) -> Expr:
        kind, tok, pos = self.advance()
        if kind == "num":
            value = float(tok)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"number {tok!r} out of range", self.text, pos)
            return Const(value)
        if kind == "name":
            if tok in ("x", "u"):
                return Var(tok)
            if tok in NAMED_CONSTANTS:
                return Const(NAMED_CONSTANTS[tok])
            if tok in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(tok, arg)
            raise UnknownIdentifier(tok, self.text, pos)
        if kind == "op" and tok == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        found = "end of input" if kind == "end" else repr(tok)
        raise ExprSyntaxError(f"unexpected {found}", self.text, pos)


def parse(text: str) -> Expr:
    """Parse ``text`` into an expression tree."""
    if not isinstance(text, str) or not text.strip():
        raise ExprSyntaxError("empty expression", text if isinstance(text, str) else "", 0)
    return _Parser(text).parse()


# Printing ------------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2, "pow": 4}
_SYMBOL = {"add": " + ", "sub": " - ", "mul": "*", "div": "/", "pow": "^"}
_NEG_PREC = 3
_ATOM_PREC = 5


def format_number(value: float) -> str:
    if value.is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(value)


def _prec(e: Expr) -> int:
    if isinstance(e, Const):
        return _NEG_PREC if e.value < 0 else _ATOM_PREC
    if isinstance(e, Unary):
        return _NEG_PREC if e.op == "neg" else _ATOM_PREC
    if isinstance(e, Binary):
        return _PREC[e.op]
    return _ATOM_PREC


def _wrap(e: Expr, needed: int, strict: bool) -> str:
    p = _prec(e)
    ok = p > needed if strict else p >= needed
    text = to_text(e)
    return text if ok else f"({text})"


def to_text(e: Expr) -> str:
    """Print ``e`` in the parser grammar; ``parse(to_text(e)) == e`` for every tree."""
    if isinstance(e, Const):
        return format_number(e.value)
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unary):
        if e.op == "neg":
            c = e.child
            if isinstance(c, Const) and c.value >= 0:
                return f"-({format_number(c.value)})"
            return "-" + _wrap(c, _NEG_PREC + 1, strict=False)
        return f"{e.op}({to_text(e.child)})"
    assert isinstance(e, Binary) and e.op in BINARY_OPS
    p = _PREC[e.op]
    if e.op == "pow":
        left = _wrap(e.left, _ATOM_PREC, strict=False)
        right = _wrap(e.right, p, strict=False)
    else:
        left = _wrap(e.left, p, strict=False)
        rp = _prec(e.right)
        # negative right operands get parentheses for readability only
        right = f"({to_text(e.right)})" if rp <= p or rp == _NEG_PREC else to_text(e.right)
    return f"{left}{_SYMBOL[e.op]}{right}"
