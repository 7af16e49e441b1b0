"""Integrating factors, symmetries and first integrals from curvature.

Two routes are implemented. A flat undeformed surface (``K_0 = 0``) makes
``A(phi)`` a function of ``x`` alone, and ``F = phi - Psi`` with
``Psi' = A(phi)`` is a first integral. A deformation ``eps`` with constant
curvature ``k`` gives the Jacobi solution ``delta`` of ``delta'' + k delta = 0``
along ``A``; then either ``S(delta) = 0`` and ``e^eps / delta`` is an
integrating factor, or ``e^eps S(delta)`` is one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .expr import (
    ONE,
    ZERO,
    Binary,
    Const,
    DomainError,
    Expr,
    Region,
    Unary,
    Var,
    X,
    compile_scalar,
    diff,
    evaluate,
    evaluate_array,
    expand,
    is_numerically_zero,
    simplify,
    substitute,
    sweep,
    tidy,
    to_text,
    variables_in,
)
from .numerics import LeftDomain, Trajectory, adaptive_simpson, solve_ode
from .surface import (
    Deformation,
    OdeProblem,
    apply_A,
    build_surface,
    classify_curvature,
    curvature,
    delta_eps,
    metric_factor,
)

SPLIT_TOL = 1e-9
CLOSED_TOL = 1e-7
QUAD_TOL = 1e-10
DRIFT_TRAJECTORIES = 5
DRIFT_STEP = 1e-3
DRIFT_EVERY = 25


class IntegrabilityError(ArithmeticError):
    """Base class; ``evidence`` carries whatever numbers justified the refusal."""

    def __init__(self, message: str, evidence: dict | None = None):
        super().__init__(message)
        self.evidence = evidence or {}


class NotFlat(IntegrabilityError):
    pass


class NotConstantCurvature(IntegrabilityError):
    pass


class DeltaVanishesOnRegion(IntegrabilityError):
    pass


class DegenerateField(IntegrabilityError):
    pass


class NotClosed(IntegrabilityError):
    pass


class PathCrossesSingularity(IntegrabilityError):
    pass


class ResidualCheckFailed(IntegrabilityError):
    """A produced integrating factor or first integral failed its own verification."""


# Operators ------------------------------------------------------------------


def _A2(phi: Expr, h: Expr) -> Expr:
    return apply_A(phi, apply_A(phi, h))


def op_T(phi: Expr, eps: Expr, h: Expr) -> Expr:
    """``T(h) = A(h) + Delta h``."""
    return tidy(Binary("add", apply_A(phi, h), Binary("mul", delta_eps(phi, eps), h)))


def op_S(phi: Expr, eps: Expr, h: Expr) -> Expr:
    """``S(h) = A(h) - Delta h``."""
    return tidy(Binary("sub", apply_A(phi, h), Binary("mul", delta_eps(phi, eps), h)))


def closedness_residual(phi: Expr, mu: Expr) -> Expr:
    """``mu_x + (mu phi)_u``; vanishes exactly when ``mu (-phi dx + du)`` is closed."""
    return tidy(Binary("add", diff(mu, "x"), diff(Binary("mul", mu, phi), "u")))


def factorization_check(phi: Expr, eps: Expr, h: Expr) -> Expr:
    """``T(S(h)) - (A(A(h)) + K h)``, identically zero."""
    lhs = op_T(phi, eps, op_S(phi, eps, h))
    rhs = Binary("add", _A2(phi, h), Binary("mul", curvature(phi, eps), h))
    return tidy(Binary("sub", lhs, rhs))


def jacobi_residuals(phi: Expr, eps: Expr, sigma: Expr, delta: Expr) -> tuple[Expr, Expr]:
    """``(A^2(sigma), A^2(delta) + K delta)`` for ``J = sigma A + delta e^-eps d/du``."""
    r1 = tidy(_A2(phi, sigma))
    r2 = tidy(Binary("add", _A2(phi, delta), Binary("mul", curvature(phi, eps), delta)))
    return r1, r2


# Symmetries -----------------------------------------------------------------


@dataclass(frozen=True)
class VectorFieldXY:
    """``xi d/dx + eta d/du``."""

    xi: Expr
    eta: Expr


def perp_component(phi: Expr, V: VectorFieldXY) -> Expr:
    """``eta - xi phi``, the coefficient of the component of ``V`` along ``d/du`` orthogonal to ``A``."""
    return simplify(Binary("sub", V.eta, Binary("mul", V.xi, phi)))


@dataclass(frozen=True)
class SymmetryCheck:
    is_symmetry: bool
    rho: Expr
    test_max: float
    rho_gap: float | None
    evidence: dict

    def __bool__(self):
        return self.is_symmetry

    def as_dict(self) -> dict:
        return {
            "is_symmetry": self.is_symmetry,
            "rho": to_text(self.rho),
            "test_max": self.test_max,
            "rho_gap": self.rho_gap,
            "evidence": self.evidence,
        }


def lie_symmetry_check(phi: Expr, V: VectorFieldXY, region: Region, tol: float = 1e-8) -> SymmetryCheck:
    """Test ``[V, A] = rho A``.

    The commutator has components ``(-A(xi), V(phi) - A(eta))``; it is a
    multiple of ``A = (1, phi)`` iff ``c2 - c1 phi`` vanishes, and then
    ``rho = c1``. ``rho`` is cross-checked against ``-A(g(V, A))`` with the
    undeformed metric.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    delta = perp_component(phi, V)
    xs, us = region.points
    dv = evaluate_array(delta, xs, us)
    ok = np.isfinite(dv)
    scale = 1.0 + np.abs(evaluate_array(V.eta, xs, us))
    parallel = ok & (np.abs(dv) <= tol * np.where(np.isfinite(scale), scale, 1.0))
    if parallel.sum() > 0.5 * dv.size:
        raise DegenerateField("V is parallel to A on most of the region",
                              {"parallel_points": int(parallel.sum()), "total": int(dv.size)})

    c1 = simplify(Unary("neg", apply_A(phi, V.xi)))
    v_phi = Binary("add", Binary("mul", V.xi, diff(phi, "x")), Binary("mul", V.eta, diff(phi, "u")))
    c2 = simplify(Binary("sub", v_phi, apply_A(phi, V.eta)))
    test = simplify(Binary("sub", c2, Binary("mul", c1, phi)))
    zc = is_numerically_zero(test, region, tol)
    evidence = {"test": zc.as_dict(), "c1": to_text(c1), "c2": to_text(c2)}
    if not zc:
        return SymmetryCheck(False, c1, zc.max_abs, None, evidence)

    s = build_surface(OdeProblem(phi, region))
    g_va = Binary("add", Binary("mul", V.xi, Binary("add", s.E, Binary("mul", s.F, phi))),
                  Binary("mul", V.eta, Binary("add", s.F, Binary("mul", s.G, phi))))
    rho_metric = simplify(Unary("neg", apply_A(phi, g_va)))
    a, b = evaluate_array(c1, xs, us), evaluate_array(rho_metric, xs, us)
    both = np.isfinite(a) & np.isfinite(b)
    gap = float(np.max(np.abs(a[both] - b[both]))) if both.any() else 0.0
    evidence["rho_metric"] = to_text(rho_metric)
    return SymmetryCheck(True, c1, zc.max_abs, gap, evidence)


# First integrals ------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class NumericField:
    """A function of ``(x, u)`` known only through an evaluator."""

    fn: Callable[[float, float], float]
    description: str

    def __call__(self, x: float, u: float) -> float:
        return self.fn(x, u)

    def values(self, xs, us) -> np.ndarray:
        out = np.empty(len(xs))
        for i, (x, u) in enumerate(zip(xs, us)):
            try:
                out[i] = self.fn(float(x), float(u))
            except (DomainError, PathCrossesSingularity):
                out[i] = np.nan
        return out


def _field_values(F, xs, us) -> np.ndarray:
    if isinstance(F, Expr):
        return evaluate_array(F, np.asarray(xs, float), np.asarray(us, float))
    return F.values(xs, us)


def _launch_points(region: Region, count: int = DRIFT_TRAJECTORIES) -> list[tuple[float, float]]:
    x0 = region.x_min + 0.1 * (region.x_max - region.x_min)
    return [(x0, float(u)) for u in np.linspace(region.u_min, region.u_max, count + 2)[1:-1]]


def trajectory_drift(p: OdeProblem, F, step: float = 1e-3, every: int = 1,
                     starts: list[tuple[float, float]] | None = None) -> dict:
    """Max ``|F(x, u(x)) - F(x0, u0)|`` along RK4 solutions launched inside the region.

    Trajectories run to 90% of the x-range and are cut where they leave the
    region or the domain; the relative drift is ``drift / (1 + |F(x0, u0)|)``.
    """
    region = p.region
    x_stop = region.x_max - 0.1 * (region.x_max - region.x_min)
    worst, worst_rel, used, lengths = 0.0, 0.0, 0, []
    for x0, u0 in starts or _launch_points(region):
        try:
            t = solve_ode(p, x0, u0, x_stop, step)
        except LeftDomain as exc:
            t = exc.trajectory
        except ValueError:
            continue
        outside = np.flatnonzero((t.us < region.u_min) | (t.us > region.u_max))
        stop = outside[0] if len(outside) else len(t.xs)
        keep = np.r_[np.arange(0, stop, every), stop - 1] if stop else np.array([], int)
        xs, us = t.xs[np.unique(keep)], t.us[np.unique(keep)]
        if len(xs) < 2:
            continue
        vals = _field_values(F, xs, us)
        if not np.isfinite(vals[0]):
            continue
        ok = np.isfinite(vals)
        d = float(np.max(np.abs(vals[ok] - vals[0])))
        worst = max(worst, d)
        worst_rel = max(worst_rel, d / (1.0 + abs(vals[0])))
        used += 1
        lengths.append(len(t))
    return {"max_drift": worst, "max_relative_drift": worst_rel, "trajectories": used, "samples": lengths}


@dataclass
class IntegrationReport:
    """Outcome of an integration route.

    ``method`` is ``FlatDirect``, ``ConstantCurvatureDeformation`` or
    ``UserSuppliedMu``; ``branch`` is ``S_vanishes`` or ``S_nonvanishing``
    for the deformation route.
    """

    method: str
    problem: OdeProblem
    mu: Expr | None
    first_integral: Expr | NumericField | None
    epsilon: Expr = ZERO
    delta_used: Expr | None = None
    branch: str | None = None
    k: float | None = None
    basepoint: tuple[float, float] | None = None
    psi: Expr | None = None
    notes: list[str] = field(default_factory=list)

    def closedness_max(self) -> float | None:
        if self.mu is None:
            return None
        return sweep(closedness_residual(self.problem.phi, self.mu), self.problem.region).max_abs

    def first_integral_residual(self) -> dict:
        F = self.first_integral
        if F is None:
            return {"kind": None, "value": None}
        if isinstance(F, Expr):
            return {"kind": "max_abs_A(F)", "value": sweep(apply_A(self.problem.phi, F), self.problem.region).max_abs}
        drift = trajectory_drift(self.problem, F, step=DRIFT_STEP, every=DRIFT_EVERY)
        return {"kind": "trajectory_drift", "value": drift["max_drift"], "detail": drift}

    def mu_max(self) -> float | None:
        if self.mu is None:
            return None
        return sweep(self.mu, self.problem.region).max_abs

    def as_dict(self) -> dict:
        F = self.first_integral
        return {
            "method": self.method,
            "branch": self.branch,
            "k": self.k,
            "phi": to_text(self.problem.phi),
            "epsilon": to_text(self.epsilon),
            "mu": None if self.mu is None else to_text(self.mu),
            "first_integral": None if F is None else (to_text(F) if isinstance(F, Expr) else "numeric"),
            "first_integral_description": None if F is None or isinstance(F, Expr) else F.description,
            "psi": None if self.psi is None else to_text(self.psi),
            "delta_used": None if self.delta_used is None else to_text(self.delta_used),
            "basepoint": None if self.basepoint is None else list(self.basepoint),
            # recomputed here so the serialized numbers are always current
            "residual_closedness": self.closedness_max(),
            "residual_first_integral": self.first_integral_residual(),
            "notes": list(self.notes),
        }


def _linear_in_x(e: Expr) -> tuple[float, float] | None:
    """``(a, b)`` with ``e = a x + b``, ``a != 0``, or None."""
    if variables_in(e) != {"x"}:
        return None
    slope = simplify(diff(e, "x"))
    if not isinstance(slope, Const) or slope.value == 0.0:
        return None
    if not isinstance(simplify(diff(slope, "x")), Const):
        return None
    try:
        b = evaluate(e, 0.0, 0.0)
    except DomainError:
        return None
    return slope.value, b


def _split_const(term: Expr) -> tuple[float, Expr]:
    """Peel a constant multiplier off a rendered product or quotient."""
    if isinstance(term, Const):
        return term.value, ONE
    if isinstance(term, Unary) and term.op == "neg":
        c, rest = _split_const(term.child)
        return -c, rest
    if isinstance(term, Binary) and term.op == "mul" and isinstance(term.left, Const):
        return term.left.value, term.right
    if isinstance(term, Binary) and term.op == "div":
        c, rest = _split_const(term.left)
        if rest == ONE:
            return c, Binary("div", ONE, term.right)
        return c, Binary("div", rest, term.right)
    return 1.0, term


def _terms(e: Expr) -> list[tuple[float, Expr]]:
    if isinstance(e, Binary) and e.op in ("add", "sub"):
        left = _terms(e.left)
        right = _terms(e.right)
        if e.op == "sub":
            right = [(-c, t) for c, t in right]
        return left + right
    return [_split_const(e)]


def _antiderivative_factor(f: Expr, x_range: tuple[float, float]) -> Expr | None:
    """Catalog antiderivative in ``x`` of one non-constant factor."""
    if f == ONE:
        return X
    base, n = f, 1.0
    if isinstance(f, Binary) and f.op == "pow" and isinstance(f.right, Const):
        base, n = f.left, f.right.value
    elif isinstance(f, Unary) and f.op == "sqrt":
        base, n = f.child, 0.5
    elif isinstance(f, Binary) and f.op == "div" and f.left == ONE:
        inner = f.right
        if isinstance(inner, Binary) and inner.op == "pow" and isinstance(inner.right, Const):
            base, n = inner.left, -inner.right.value
        else:
            base, n = inner, -1.0
    elif isinstance(f, Unary) and f.op in ("exp", "sin", "cos", "sinh", "cosh"):
        lin = _linear_in_x(f.child)
        if lin is None:
            return None
        a = Const(1.0 / lin[0])
        prim = {"exp": "exp", "sin": "cos", "cos": "sin", "sinh": "cosh", "cosh": "sinh"}[f.op]
        out = Binary("mul", a, Unary(prim, f.child))
        return Unary("neg", out) if f.op == "sin" else out
    lin = _linear_in_x(base)
    if lin is None:
        return None
    a, b = lin
    if n == -1.0:
        # ln |a x + b|, picking the sign that holds on the region
        lo, hi = (a * x_range[0] + b), (a * x_range[1] + b)
        if lo > 0 and hi > 0:
            return Binary("div", Unary("ln", base), Const(a))
        if lo < 0 and hi < 0:
            return Binary("div", Unary("ln", Unary("neg", base)), Const(a))
        return None
    return Binary("div", Binary("pow", base, Const(n + 1)), Const(a * (n + 1)))


def antiderivative_x(e: Expr, x_range: tuple[float, float]) -> Expr | None:
    """Symbolic antiderivative in ``x`` from a small catalog, or None.

    Handles sums of constant multiples of ``(a x + b)^n`` (including
    ``ln`` for ``n = -1``), ``exp``, ``sin``, ``cos``, ``sinh`` and ``cosh``
    of linear arguments.
    """
    if "u" in variables_in(e):
        return None
    if isinstance(simplify(e), Const):
        return simplify(Binary("mul", simplify(e), X))
    acc: Expr = ZERO
    for c, f in _terms(expand(e)):
        if "x" not in variables_in(f):
            acc = Binary("add", acc, Binary("mul", Const(c * evaluate(f, 0.0, 0.0)), X))
            continue
        prim = _antiderivative_factor(f, x_range)
        if prim is None:
            return None
        acc = Binary("add", acc, Binary("mul", Const(c), prim))
    return simplify(acc)


def _quadrature_field(integrand: Expr, x0: float, u_ref: float | None, description: str) -> NumericField:
    """``G(x, u) = int_x0^x integrand(s, u_ref or u) ds`` by adaptive Simpson."""
    f = compile_scalar(integrand)

    def value(x, u):
        uu = u if u_ref is None else u_ref
        try:
            return adaptive_simpson(lambda s: f(s, uu), x0, x, QUAD_TOL)
        except DomainError as exc:
            raise PathCrossesSingularity(f"quadrature from x={x0} to x={x} failed: {exc}") from exc

    return NumericField(value, description)


def flat_first_integral(p: OdeProblem, tol: float = 1e-8) -> IntegrationReport:
    """First integral of a flat undeformed surface: ``F = phi - Psi`` with ``Psi' = A(phi)``.

    For ``u``-independent ``phi`` that construction returns zero, so the
    elementary quadrature ``F = u - int phi dx`` is used instead.
    """
    phi, region = p.phi, p.region
    s = build_surface(p)
    cls = classify_curvature(s, tol)
    if cls.kind != "zero":
        raise NotFlat("curvature of the undeformed surface is not zero", cls.as_dict())
    a_phi = apply_A(phi, phi)
    dep = is_numerically_zero(diff(a_phi, "u"), region, tol)
    if not dep:
        raise NotFlat("A(phi) depends on u", {"d_u_A_phi": dep.as_dict()})
    x_range = (region.x_min, region.x_max)
    u_ref = region.center[1]
    x0 = region.center[0]
    notes = []

    if is_numerically_zero(diff(phi, "u"), region, tol):
        notes.append("DegenerateFirstIntegral: phi does not depend on u, so phi - Psi vanishes; "
                     "using F = u - int phi dx")
        phi_x = simplify(substitute(phi, u=Const(u_ref)))
        prim = antiderivative_x(phi_x, x_range)
        if prim is not None:
            F = expand(Binary("sub", Var("u"), prim))
            return IntegrationReport("FlatDirect", p, None, F, psi=prim, notes=notes)
        q = _quadrature_field(phi_x, x0, u_ref, "u - int phi dx")
        F_num = NumericField(lambda x, u: u - q(x, u), "u - int_x0^x phi(s) ds")
        notes.append("Psi by adaptive Simpson")
        return IntegrationReport("FlatDirect", p, None, F_num, basepoint=(x0, u_ref), notes=notes)

    a_phi_x = simplify(substitute(a_phi, u=Const(u_ref)))
    psi = antiderivative_x(a_phi_x, x_range)
    if psi is not None:
        F = expand(Binary("sub", phi, psi))
        return IntegrationReport("FlatDirect", p, None, F, psi=psi, notes=notes)
    q = _quadrature_field(a_phi_x, x0, u_ref, "Psi")
    f_phi = compile_scalar(phi)
    F_num = NumericField(lambda x, u: f_phi(x, u) - q(x, u), "phi(x, u) - int_x0^x A(phi)(s, u_ref) ds")
    notes.append("Psi by adaptive Simpson")
    return IntegrationReport("FlatDirect", p, None, F_num, basepoint=(x0, u_ref), notes=notes)


# Constant curvature ---------------------------------------------------------


def delta_for_constant_k(k: float) -> Expr:
    """A nontrivial solution of ``delta'' + k delta = 0``: ``sin(sqrt(k) x)``, ``1`` or ``sinh(sqrt(-k) x)``."""
    if k > 0:
        return simplify(Unary("sin", Binary("mul", Const(math.sqrt(k)), X)))
    if k < 0:
        return simplify(Unary("sinh", Binary("mul", Const(math.sqrt(-k)), X)))
    return ONE


def _delta_zero_in(k: float, region: Region) -> float | None:
    """A zero of ``delta_for_constant_k(k)`` inside the closed x-range, if any."""
    if k > 0:
        w = math.sqrt(k)
        m = math.ceil(region.x_min * w / math.pi)
        z = m * math.pi / w
        return z if z <= region.x_max else None
    if k < 0:
        return 0.0 if region.x_min <= 0.0 <= region.x_max else None
    return None


def check_integrating_factor(phi: Expr, mu: Expr, region: Region, rel_tol: float = CLOSED_TOL) -> dict:
    """Closedness residual of ``mu`` against the bound ``rel_tol (1 + max|mu|)``."""
    res = sweep(closedness_residual(phi, mu), region)
    mu_max = sweep(mu, region).max_abs
    bound = rel_tol * (1.0 + mu_max)
    return {"max_abs": res.max_abs, "argmax": list(res.argmax), "bound": bound, "mu_max": mu_max,
            "skipped": res.skipped, "passed": res.max_abs <= bound}


def constant_curvature_integrating_factor(p: OdeProblem, d: Deformation, tol: float = 1e-8) -> IntegrationReport:
    s = build_surface(p, d)
    cls = classify_curvature(s, tol)
    if not cls.is_constant:
        raise NotConstantCurvature("deformed curvature is not constant on the region", cls.as_dict())
    k = cls.k
    phi, eps = p.phi, d.epsilon
    delta = delta_for_constant_k(k)
    s_delta = op_S(phi, eps, delta)
    density = simplify(Unary("exp", eps))
    if is_numerically_zero(s_delta, p.region, SPLIT_TOL):
        z = _delta_zero_in(k, p.region)
        if z is not None:
            raise DeltaVanishesOnRegion(f"delta = {to_text(delta)} vanishes at x = {z!r} inside the region",
                                        {"x_zero": z, "delta": to_text(delta)})
        mu, branch = tidy(Binary("div", density, delta)), "S_vanishes"
    else:
        mu, branch = tidy(Binary("mul", density, s_delta)), "S_nonvanishing"
    report = IntegrationReport("ConstantCurvatureDeformation", p, mu, None, epsilon=eps,
                               delta_used=delta, branch=branch, k=k)
    check = check_integrating_factor(phi, mu, p.region)
    if not check["passed"]:
        raise ResidualCheckFailed("produced integrating factor does not close", check)
    return report


def first_integral_from_mu(p: OdeProblem, mu: Expr, basepoint: tuple[float, float],
                           tol: float = CLOSED_TOL) -> tuple[NumericField, dict]:
    """``F(x, u) = int_u0^u mu(x0, t) dt - int_x0^x (mu phi)(s, u) ds`` along an L-shaped path.

    Returns the field and its drift along RK4 trajectories.
    """
    check = check_integrating_factor(p.phi, mu, p.region, tol)
    if not check["passed"]:
        raise NotClosed("mu is not an integrating factor on the region", check)
    x0, u0 = basepoint
    f_mu = compile_scalar(mu)
    f_flux = compile_scalar(simplify(Binary("mul", mu, p.phi)))
    try:
        f_mu(x0, u0)
        f_flux(x0, u0)
    except DomainError as exc:
        raise PathCrossesSingularity(f"basepoint ({x0}, {u0}) is not evaluable") from exc

    def value(x, u):
        try:
            leg_u = adaptive_simpson(lambda t: f_mu(x0, t), u0, u, QUAD_TOL)
            leg_x = adaptive_simpson(lambda s: f_flux(s, u), x0, x, QUAD_TOL)
        except DomainError as exc:
            raise PathCrossesSingularity(f"path from ({x0}, {u0}) to ({x}, {u}) meets {exc}") from exc
        return leg_u - leg_x

    F = NumericField(value, f"int mu (-phi dx + du) from ({x0!r}, {u0!r})")
    return F, trajectory_drift(p, F, step=DRIFT_STEP, every=DRIFT_EVERY)


def user_mu_report(p: OdeProblem, mu: Expr, basepoint: tuple[float, float] | None = None) -> IntegrationReport:
    bp = basepoint or p.region.center
    F, drift = first_integral_from_mu(p, mu, bp)
    report = IntegrationReport("UserSuppliedMu", p, mu, F, basepoint=bp)
    report.notes.append(f"drift along {drift['trajectories']} trajectories: {drift['max_drift']:.3g}")
    return report


def integrate(p: OdeProblem, d: Deformation = Deformation(), tol: float = 1e-8) -> IntegrationReport:
    """Dispatch: flat undeformed surface, otherwise constant deformed curvature."""
    s = build_surface(p, d)
    cls = classify_curvature(s, tol)
    if d.is_trivial and cls.kind == "zero":
        return flat_first_integral(p, tol)
    if cls.is_constant:
        return constant_curvature_integrating_factor(p, d, tol)
    raise NotConstantCurvature("curvature is not constant; supply a deformation with constant curvature",
                               cls.as_dict())


__all__ = [
    "DegenerateField", "DeltaVanishesOnRegion", "IntegrabilityError", "IntegrationReport", "NotClosed",
    "NotConstantCurvature", "NotFlat", "NumericField", "PathCrossesSingularity", "ResidualCheckFailed",
    "SymmetryCheck", "VectorFieldXY", "antiderivative_x", "check_integrating_factor", "closedness_residual",
    "constant_curvature_integrating_factor", "delta_for_constant_k", "factorization_check",
    "first_integral_from_mu", "flat_first_integral", "integrate", "jacobi_residuals", "lie_symmetry_check",
    "metric_factor", "op_S", "op_T", "perp_component", "trajectory_drift", "user_mu_report",
]
