"""Canonical simplification.

An expression is normalized into a sum of ``coefficient * monomial`` terms,
where a monomial is a sorted tuple of ``(base, exponent)`` pairs with
constant rational exponents and coefficients kept as exact fractions. Bases
are atoms (variables, function applications, powers with non-constant
exponents) or sums that could not be distributed. The normal form is then
rendered back into a left-nested tree, so structural equality of simplified
trees detects syntactic zero and ``simplify`` is idempotent.

Rules beyond collecting like terms and exponents:

* ``(a^b)^c -> a^(bc)`` unless ``b`` is an even integer and ``c`` is not an
  integer (that case would drop an absolute value);
* ``exp(a)*exp(b) -> exp(a+b)``, ``exp(c*ln(a) + r) -> a^c * exp(r)`` and
  ``ln(exp(a)) -> a``;
* ``exp(c*W(exp(b)) + r) -> W(exp(b))^(-c) * exp(c*b + r)``, from
  ``W(z) e^W(z) = z``;
* a sum used as a factor carries its leading coefficient outside, and a
  lone ``c * (sum)`` term is distributed back into a sum;
* function applications on constants are folded when they evaluate;
* when expanding, ``sinh`` and ``cosh`` become exponentials and
  denominators are normalized without distributing.

Every rule preserves values wherever the input evaluates; some widen the
domain (``x/x -> 1``).
"""

from __future__ import annotations

import sys
from fractions import Fraction

from .evaluate import DomainError, evaluate
from .nodes import ONE, ZERO, Binary, Const, Expr, Unary, Var

_MAX_DEN = 10**6
_EXPAND_MAX_POWER = 6

Mono = tuple  # tuple[tuple[Expr, Fraction], ...]
Poly = dict  # dict[Mono, Fraction]

_HALF = Fraction(1, 2)


def _frac(value: float) -> Fraction:
    exact = Fraction(value)
    nice = exact.limit_denominator(_MAX_DEN)
    return nice if float(nice) == value else exact


def _clean(q: Fraction) -> Fraction:
    if q.denominator <= _MAX_DEN:
        return q
    try:
        return _frac(float(q))
    except OverflowError:
        return q


def _const(c) -> Poly:
    c = Fraction(c)
    return {} if c == 0 else {(): c}


def _as_const(p: Poly):
    if not p:
        return Fraction(0)
    if len(p) == 1 and () in p:
        return p[()]
    return None


def _mono_key(mono: Mono):
    return tuple((base.sort_key, exp) for base, exp in mono)


def _is_even_integer(q: Fraction) -> bool:
    return q.denominator == 1 and q.numerator % 2 == 0


def _is_sum(base: Expr) -> bool:
    return isinstance(base, Binary) and base.op in ("add", "sub")


def _is_exp(base: Expr) -> bool:
    return isinstance(base, Unary) and base.op == "exp"


def _nice_power(c: Fraction, k: Fraction):
    """``c**k`` as a small-denominator fraction, or None."""
    if k.denominator == 1:
        return c ** k.numerator
    if c <= 0:
        return None
    try:
        value = float(c) ** float(k)
    except OverflowError:
        return None
    q = Fraction(value).limit_denominator(_MAX_DEN)
    if q == 0 or abs(float(q) - value) > 4e-16 * abs(value):
        return None
    return q


class _Normalizer:
    def __init__(self, expand: bool):
        self.expand = expand
        self.cache: dict[Expr, Poly] = {}
        self.rendered: dict[tuple, Expr] = {}
        self._plain = None

    @property
    def plain(self) -> "_Normalizer":
        if self._plain is None:
            self._plain = _Normalizer(False)
        return self._plain

    # -- building blocks --------------------------------------------------

    def add(self, *polys: Poly, scales=None) -> Poly:
        out: Poly = {}
        for i, p in enumerate(polys):
            s = 1 if scales is None else scales[i]
            for mono, c in p.items():
                if len(mono) == 1 and mono[0][1] == 1 and _is_sum(mono[0][0]):
                    # a bare sum factor (left by sqrt(s)^2, say) joins the enclosing sum
                    for m2, c2 in self.norm(mono[0][0]).items():
                        out[m2] = out.get(m2, 0) + c2 * c * s
                    continue
                out[mono] = out.get(mono, 0) + c * s
        return {m: _clean(c) for m, c in out.items() if c != 0}

    def scale(self, p: Poly, s) -> Poly:
        if s == 0:
            return {}
        return {m: _clean(c * s) for m, c in p.items()}

    def make(self, coeff: Fraction, factors: dict, flatten: bool = True) -> Poly:
        """Canonical single term; fuses exponential factors."""
        if coeff == 0:
            return {}
        factors = {b: e for b, e in factors.items() if e != 0}
        for b, e in list(factors.items()):
            if _is_sum(b) and e.denominator == 1:
                # a sum reaching an integer power (sqrt(s)^2) gets the content split as_factor uses
                c, q = self.content(self.norm(b), integral=True)
                if c != 1:
                    del factors[b]
                    nb = self.render(q)
                    factors[nb] = factors.get(nb, 0) + e
                    coeff *= c ** e
        factors = {b: e for b, e in factors.items() if e != 0}
        if flatten and len(factors) == 1:
            ((b, e),) = factors.items()
            if e == 1 and _is_sum(b):
                # c * (sum) is distributed, the same as a re-parse would do
                return {m: _clean(c * coeff) for m, c in self.norm(b).items()}
        exps = [(b, e) for b, e in factors.items() if _is_exp(b)]
        if len(exps) > 1 or (exps and exps[0][1] != 1):
            for b, _ in exps:
                del factors[b]
            arg = self.add(*[self.norm(b.child) for b, _ in exps], scales=[e for _, e in exps])
            fused = self.func("exp", self.render(arg))
            rest = self.make(coeff, factors)
            return self.mul(rest, fused)
        mono = tuple(sorted(factors.items(), key=lambda be: (be[0].sort_key, be[1])))
        return {mono: _clean(Fraction(coeff))}

    def atom(self, base: Expr, exponent=Fraction(1)) -> Poly:
        return self.make(Fraction(1), {base: Fraction(exponent)}, flatten=False)

    def content(self, p: Poly, integral: bool):
        """Split a multi-term sum as ``c * q`` with the leading term of ``q`` at coefficient +-1."""
        lead = min(p, key=_mono_key)
        c = p[lead]
        if not integral:
            c = abs(c)
        return c, self.scale(p, 1 / c)

    def mul(self, p: Poly, q: Poly) -> Poly:
        if not p or not q:
            return {}
        cp, cq = _as_const(p), _as_const(q)
        if cp is not None:
            return self.scale(q, cp)
        if cq is not None:
            return self.scale(p, cq)
        if len(p) == 1 and len(q) == 1:
            (mp, ap), = p.items()
            (mq, aq), = q.items()
            factors = dict(mp)
            for b, e in mq:
                factors[b] = factors.get(b, 0) + e
            return self.make(ap * aq, factors)
        if self.expand:
            parts = []
            for mp, ap in p.items():
                for mq, aq in q.items():
                    parts.append(self.mul({mp: ap}, {mq: aq}))
            return self.add(*parts)
        return self.mul(self.as_factor(p), self.as_factor(q))

    def as_factor(self, p: Poly) -> Poly:
        if len(p) <= 1:
            return p
        c, q = self.content(p, integral=True)
        return self.scale(self.atom(self.render(q)), c)

    def pow(self, p: Poly, k: Fraction) -> Poly:
        k = Fraction(k)
        if k == 0:
            return _const(1)
        if k == 1:
            return p
        if not p:
            if k > 0:
                return {}
            return self.atom(Binary("pow", ZERO, Const(float(k))))
        c = _as_const(p)
        if c is not None:
            q = _nice_power(c, k)
            if q is not None:
                return _const(q)
            if c > 0:
                return _const(_frac(float(c) ** float(k)))
            return self.atom(Binary("pow", Const(float(c)), Const(float(k))))
        integral = k.denominator == 1
        if len(p) == 1:
            (mono, c), = p.items()
            splittable = integral or (
                c > 0 and len(mono) == 1 and not _is_even_integer(mono[0][1])
            )
            coeff = _nice_power(c, k) if splittable else None
            if coeff is not None:
                return self.make(coeff, {b: e * k for b, e in mono})
            return self.atom(self.render(p), k)
        if self.expand and integral and 1 < k <= _EXPAND_MAX_POWER:
            out = p
            for _ in range(k.numerator - 1):
                out = self.mul(out, p)
            return out
        c, q = self.content(p, integral)
        coeff = _nice_power(c, k)
        if coeff is None:
            coeff, q = Fraction(1), p
        return self.scale(self.atom(self.render(q), k), coeff)

    def func(self, op: str, arg: Expr) -> Poly:
        if isinstance(arg, Const):
            try:
                return _const(_frac(evaluate(Unary(op, arg), 0.0, 0.0)))
            except DomainError:
                return self.atom(Unary(op, arg))
        if op == "exp":
            p = self.norm(arg)
            lamb = self._lambert_terms(p)
            if lamb:
                # e^(c W(e^b)) = (e^b / W(e^b))^c, and e^b > 0 keeps the split valid
                factor, shifted = _const(1), dict(p)
                for mono, w, b, c in lamb:
                    del shifted[mono]
                    shifted = self.add(shifted, self.scale(self.norm(b), c))
                    factor = self.mul(factor, self.pow(self.norm(w), -c))
                return self.mul(factor, self.func("exp", self.render(shifted)))
            logs, rest = [], {}
            for mono, c in p.items():
                if len(mono) == 1 and mono[0][1] == 1 and isinstance(mono[0][0], Unary) and mono[0][0].op == "ln":
                    logs.append((mono[0][0].child, c))
                else:
                    rest[mono] = c
            if not logs:
                return self.atom(Unary("exp", arg))
            out = _const(1)
            for a, c in logs:
                out = self.mul(out, self.pow(self.norm(a), c))
            if rest:
                out = self.mul(out, self.atom(Unary("exp", self.render(rest))))
            return out
        if self.expand and op in ("sinh", "cosh"):
            sign = -1 if op == "sinh" else 1
            pos = self.func("exp", arg)
            neg = self.func("exp", self.render(self.scale(self.norm(arg), -1)))
            return self.add(pos, neg, scales=(_HALF, sign * _HALF))
        if op == "ln" and isinstance(arg, Unary) and arg.op == "exp":
            return self.norm(arg.child)
        return self.atom(Unary(op, arg))

    @staticmethod
    def _lambert_terms(p: Poly) -> list:
        found = []
        for mono, c in p.items():
            if len(mono) == 1 and mono[0][1] == 1:
                w = mono[0][0]
                if isinstance(w, Unary) and w.op == "lambert_w" and _is_exp(w.child):
                    found.append((mono, w, w.child.child, c))
        return found

    # -- traversal --------------------------------------------------------

    def norm(self, e: Expr) -> Poly:
        hit = self.cache.get(e)
        if hit is not None:
            return hit
        if isinstance(e, Const):
            out = _const(_frac(e.value))
        elif isinstance(e, Var):
            out = {((e, Fraction(1)),): Fraction(1)}
        elif isinstance(e, Unary):
            if e.op == "neg":
                out = self.scale(self.norm(e.child), -1)
            elif e.op == "sqrt":
                out = self.pow(self.norm(e.child), _HALF)
            else:
                out = self.func(e.op, self.render(self.norm(e.child)))
        else:
            a = self.norm(e.left)
            if e.op == "add":
                out = self.add(a, self.norm(e.right))
            elif e.op == "sub":
                out = self.add(a, self.norm(e.right), scales=(1, -1))
            elif e.op == "mul":
                out = self.mul(a, self.norm(e.right))
            elif e.op == "div":
                # denominators stay factored even when expanding
                b = self.norm(e.right) if not self.expand else self.plain.norm(e.right)
                if not b:
                    out = self.mul(a, self.atom(Binary("pow", ZERO, Const(-1))))
                elif a == b:
                    out = _const(1)
                else:
                    out = self.mul(a, self.pow(b, Fraction(-1)))
            else:
                b = self.norm(e.right)
                k = _as_const(b)
                if k is not None:
                    out = self.pow(a, k)
                elif _as_const(a) == 1:
                    out = _const(1)
                else:
                    out = self.atom(Binary("pow", self.render(a), self.render(b)))
        self.cache[e] = out
        return out

    # -- rendering --------------------------------------------------------

    def render(self, p: Poly) -> Expr:
        key = tuple(sorted(p.items(), key=lambda mc: _mono_key(mc[0])))
        hit = self.rendered.get(key)
        if hit is not None:
            return hit
        acc = None
        for mono, c in key:
            if acc is None:
                acc = _render_term(c, mono)
            elif c < 0:
                acc = Binary("sub", acc, _render_term(-c, mono))
            else:
                acc = Binary("add", acc, _render_term(c, mono))
        out = ZERO if acc is None else acc
        self.rendered[key] = out
        self.cache.setdefault(out, p)
        return out


def _render_factor(base: Expr, exp: Fraction) -> Expr:
    if exp == 1:
        return base
    if exp == _HALF:
        return Unary("sqrt", base)
    return Binary("pow", base, Const(float(exp)))


def _chain(items: list) -> Expr | None:
    if not items:
        return None
    acc = items[0]
    for item in items[1:]:
        acc = Binary("mul", acc, item)
    return acc


def _render_term(c: Fraction, mono: Mono) -> Expr:
    num = [_render_factor(b, e) for b, e in mono if e > 0]
    den = _chain([_render_factor(b, -e) for b, e in mono if e < 0])
    cval = Const(float(c))
    if not num:
        return cval if den is None else Binary("div", cval, den)
    if c == -1:
        num[0] = Unary("neg", num[0])
    elif c != 1:
        num.insert(0, cval)
    top = _chain(num)
    return top if den is None else Binary("div", top, den)


def _run(e: Expr, expand: bool) -> Expr:
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20000))
    try:
        n = _Normalizer(expand)
        return n.render(n.norm(e))
    finally:
        sys.setrecursionlimit(limit)


def simplify(e: Expr) -> Expr:
    """Normalize ``e``: fold constants, collect like terms and powers, order sums and products."""
    return _run(e, expand=False)


def expand(e: Expr) -> Expr:
    """Like :func:`simplify`, additionally distributing products and small integer powers over sums."""
    return _run(e, expand=True)


def tidy(e: Expr) -> Expr:
    """Whichever of :func:`simplify` and :func:`expand` gives the smaller tree.

    A sum over one shared denominator whose numerator is a constant multiple
    of it collapses to that constant first.
    """
    from .nodes import size

    a = simplify(e)
    b = expand(a)
    for cand in (a, b):
        c = _constant_over_denominator(cand)
        if c is not None:
            return c
    return b if size(b) < size(a) else a


def _over(e: Expr, d: Expr) -> Expr:
    """``e * d`` with the shared denominator ``d`` struck out of each term."""
    if isinstance(e, Binary) and e.op in ("add", "sub"):
        return Binary(e.op, _over(e.left, d), _over(e.right, d))
    if isinstance(e, Unary) and e.op == "neg":
        return Unary("neg", _over(e.child, d))
    if isinstance(e, Binary) and e.op == "div" and e.right == d:
        return e.left
    return Binary("mul", e, d)


def _denominators(e: Expr) -> list[Expr]:
    if isinstance(e, Binary) and e.op in ("add", "sub"):
        return _denominators(e.left) + _denominators(e.right)
    if isinstance(e, Unary) and e.op == "neg":
        return _denominators(e.child)
    if isinstance(e, Binary) and e.op == "div":
        return [e.right]
    return []


def _constant_over_denominator(e: Expr) -> Expr | None:
    """``c`` when ``e`` is a sum over one shared denominator ``D`` with numerator ``c D``."""
    dens = set(_denominators(e))
    if len(dens) != 1:
        return None
    (d,) = dens
    num, den = expand(_over(e, d)), expand(d)
    if den == ZERO:
        return None
    for point in ((0.3713, 0.1291), (0.6180, -0.2718)):
        try:
            ratio = evaluate(num, *point) / evaluate(den, *point)
        except (DomainError, ZeroDivisionError):
            continue
        c = Const(float(Fraction(ratio).limit_denominator(1000)))
        if expand(Binary("sub", num, Binary("mul", c, den))) == ZERO:
            return c
        return None
    return None


def is_syntactic_zero(e: Expr) -> bool:
    return simplify(e) == ZERO or expand(e) == ZERO


def is_constant(e: Expr) -> bool:
    return isinstance(simplify(e), Const)


__all__ = ["simplify", "expand", "tidy", "is_syntactic_zero", "is_constant", "ONE"]
