"""Expression front-end: parse, evaluate, differentiate, simplify."""

from .calculus import derivative, diff, substitute
from .evaluate import DomainError, compile_scalar, evaluate, evaluate_array
from .lambertw import lambert_w
from .nodes import (
    BINARY_OPS,
    ONE,
    UNARY_OPS,
    ZERO,
    Binary,
    Const,
    Expr,
    U,
    Unary,
    Var,
    X,
    as_expr,
    func,
    variables_in,
)
from .parser import ExprSyntaxError, ParseError, UnknownIdentifier, parse, to_text
from .sampling import Region, RegionUnusable, SweepStats, ZeroCheck, is_numerically_zero, sweep
from .simplify import expand, simplify, tidy

__all__ = [
    "BINARY_OPS", "UNARY_OPS", "Binary", "Const", "DomainError", "Expr", "ExprSyntaxError",
    "ONE", "ParseError", "Region", "RegionUnusable", "SweepStats", "U", "Unary",
    "UnknownIdentifier", "Var", "X", "ZERO", "ZeroCheck", "as_expr", "compile_scalar",
    "derivative", "diff", "evaluate", "evaluate_array", "expand", "func", "is_numerically_zero",
    "lambert_w", "parse", "simplify", "substitute", "sweep", "tidy", "to_text", "variables_in",
]
