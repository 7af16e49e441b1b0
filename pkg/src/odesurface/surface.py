"""The Riemannian surface attached to ``u' = phi(x, u)`` and its deformations.

For a deformation function ``eps`` the metric in ``(x, u)`` coordinates is::

    E = 1 + phi^2 e^(2 eps),   F = -phi e^(2 eps),   G = e^(2 eps)

with orthonormal coframe ``dx, e^eps (-phi dx + du)``. The vector field
``A = d/dx + phi d/du`` has unit length and is orthogonal to ``d/du`` for
every ``eps``. All connection data reduce to the single function
``Delta = A(eps) + phi_u`` and the Gaussian curvature is
``K = -A(Delta) - Delta^2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .expr import (
    ONE,
    ZERO,
    Binary,
    Const,
    Expr,
    Region,
    RegionUnusable,
    Unary,
    diff,
    evaluate_array,
    is_numerically_zero,
    simplify,
    tidy,
    to_text,
)
from .expr.sampling import MIN_EVALUABLE, SweepStats, sample_values, stats_of

DEFAULT_CLASSIFY_TOL = 1e-8
FRAME_TOL = 1e-10
REDUCTION_TOL = 1e-9


class SurfaceInvariantError(ArithmeticError):
    """A pointwise identity of the metric failed on the sample region."""


def _check_evaluable(e: Expr, region: Region, what: str) -> None:
    xs, us = region.points
    vals = evaluate_array(e, xs, us)
    ok = int(np.isfinite(vals).sum())
    if ok < MIN_EVALUABLE * vals.size:
        raise RegionUnusable(f"{what} = {e} evaluates at only {ok} of {vals.size} sample points", ok, vals.size)


@dataclass(frozen=True)
class OdeProblem:
    """``u' = phi(x, u)`` together with a sample region avoiding its singularities."""

    phi: Expr
    region: Region

    def __post_init__(self):
        _check_evaluable(self.phi, self.region, "phi")


@dataclass(frozen=True)
class Deformation:
    epsilon: Expr = ZERO

    @property
    def is_trivial(self) -> bool:
        return simplify(self.epsilon) == ZERO

    def check(self, region: Region) -> None:
        # The geometry depends on eps only through e^(2 eps) and derivatives
        # of eps, so evaluability is judged on the metric factor.
        _check_evaluable(metric_factor(self.epsilon), region, "e^(2 eps)")


def apply_A(phi: Expr, h: Expr) -> Expr:
    """``A(h) = h_x + phi h_u``."""
    return simplify(Binary("add", diff(h, "x"), Binary("mul", phi, diff(h, "u"))))


def delta_eps(phi: Expr, eps: Expr) -> Expr:
    """``Delta = A(eps) + phi_u``."""
    return tidy(Binary("add", apply_A(phi, eps), diff(phi, "u")))


def curvature(phi: Expr, eps: Expr = ZERO) -> Expr:
    """Gaussian curvature ``K = -A(Delta) - Delta^2`` of the deformed surface."""
    d = delta_eps(phi, eps)
    return tidy(Binary("sub", Unary("neg", apply_A(phi, d)), Binary("pow", d, Const(2))))


def curvature_undeformed(phi: Expr) -> Expr:
    """``-d/du A(phi)``, the curvature of the undeformed surface computed the other way round."""
    return tidy(Unary("neg", diff(apply_A(phi, phi), "u")))


def metric_factor(eps: Expr) -> Expr:
    """``e^(2 eps)``, which is also the metric determinant ``EG - F^2``."""
    return simplify(Unary("exp", Binary("mul", Const(2), eps)))


def volume_form_density(eps: Expr) -> Expr:
    """Density ``e^eps`` of the area form ``e^eps dx ^ du``."""
    return simplify(Unary("exp", eps))


@dataclass(frozen=True)
class SurfaceData:
    phi: Expr
    epsilon: Expr
    region: Region
    E: Expr
    F: Expr
    G: Expr
    delta_eps: Expr
    curvature: Expr
    checks: dict = field(default_factory=dict)

    @property
    def coframe(self) -> tuple[str, str]:
        if self.epsilon == ZERO:
            return ("dx", f"-({to_text(self.phi)})*dx + du")
        return ("dx", f"exp({to_text(self.epsilon)})*(-({to_text(self.phi)})*dx + du)")

    def as_dict(self) -> dict:
        return {
            "phi": to_text(self.phi),
            "epsilon": to_text(self.epsilon),
            "E": to_text(self.E),
            "F": to_text(self.F),
            "G": to_text(self.G),
            "delta_eps": to_text(self.delta_eps),
            "curvature": to_text(self.curvature),
            "volume_density": to_text(volume_form_density(self.epsilon)),
            "coframe": list(self.coframe),
            "checks": self.checks,
        }


def _max_rel(a: np.ndarray, b: np.ndarray) -> float:
    ok = np.isfinite(a) & np.isfinite(b)
    if not ok.any():
        return 0.0
    return float(np.max(np.abs(a[ok] - b[ok]) / (1.0 + np.abs(b[ok]))))


def build_surface(problem: OdeProblem, deformation: Deformation = Deformation()) -> SurfaceData:
    """Assemble metric, connection function and curvature, and check the frame identities on the region."""
    phi, eps, region = problem.phi, deformation.epsilon, problem.region
    deformation.check(region)
    g = metric_factor(eps)
    E = simplify(Binary("add", ONE, Binary("mul", Binary("pow", phi, Const(2)), g)))
    F = simplify(Unary("neg", Binary("mul", phi, g)))
    G = g
    d = delta_eps(phi, eps)
    K = curvature(phi, eps)

    xs, us = region.points
    Ev, Fv, Gv, pv = (evaluate_array(e, xs, us) for e in (E, F, G, phi))
    ok = np.isfinite(Ev) & np.isfinite(Fv) & np.isfinite(Gv) & np.isfinite(pv)
    if ok.sum() < MIN_EVALUABLE * ok.size:
        raise RegionUnusable("metric evaluates on fewer than half of the sample points", int(ok.sum()), ok.size)
    Ev, Fv, Gv, pv = Ev[ok], Fv[ok], Gv[ok], pv[ok]
    det = Ev * Gv - Fv * Fv
    checks = {
        "E_positive": bool(np.all(Ev > 0)),
        "det_positive": bool(np.all(det > 0)),
        # |A| = 1 and A orthogonal to d/du, and the determinant identity
        "unit_A": float(np.max(np.abs(Ev + Fv * pv - 1.0) / (1.0 + np.abs(Fv * pv)))),
        "A_perp_du": float(np.max(np.abs(Fv + Gv * pv) / (1.0 + np.abs(Gv * pv)))),
        "det_identity": float(np.max(np.abs(det - Gv) / (1.0 + np.abs(Ev * Gv)))),
        "evaluated": int(ok.sum()),
    }
    if not (checks["E_positive"] and checks["det_positive"]):
        raise SurfaceInvariantError("metric is not positive definite on the region")
    for name in ("unit_A", "A_perp_du", "det_identity"):
        if checks[name] > FRAME_TOL:
            raise SurfaceInvariantError(f"{name} identity off by {checks[name]:.3g}")

    if eps == ZERO or simplify(eps) == ZERO:
        other = curvature_undeformed(phi)
        gap = _max_rel(evaluate_array(K, xs, us), evaluate_array(other, xs, us))
        checks["curvature_forms_gap"] = gap
        if gap > REDUCTION_TOL:
            raise SurfaceInvariantError(f"the two curvature formulas disagree by {gap:.3g}")

    return SurfaceData(phi, eps, region, E, F, G, d, K, checks)


@dataclass(frozen=True)
class CurvatureClass:
    """``kind`` is ``"zero"``, ``"constant"`` or ``"nonconstant"``; ``k`` is set for constants."""

    kind: str
    k: float | None
    stats: SweepStats
    max_deviation: float
    tol: float

    @property
    def is_constant(self) -> bool:
        return self.kind in ("zero", "constant")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "k": self.k,
            "max_deviation": self.max_deviation,
            "tol": self.tol,
            "evidence": self.stats.as_dict(),
        }


def _snap(value: float, max_den: int = 100) -> float:
    return float(Fraction(value).limit_denominator(max_den))


def classify_curvature(s: SurfaceData, tol: float = DEFAULT_CLASSIFY_TOL) -> CurvatureClass:
    """Decide whether the curvature vanishes, is constant, or varies over the region.

    The constant candidate is the sample mean, replaced by a nearby simple
    fraction when that still passes the same test.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    xs, us, vals = sample_values(s.curvature, s.region)
    stats = stats_of(xs, us, vals)
    if is_numerically_zero(s.curvature, s.region, tol):
        return CurvatureClass("zero", 0.0, stats, stats.max_abs, tol)
    v = vals[np.isfinite(vals)]
    k = stats.mean_value
    dev = float(np.max(np.abs(v - k)))
    if dev <= tol * (1.0 + abs(k)):
        snapped = _snap(k)
        sdev = float(np.max(np.abs(v - snapped)))
        if sdev <= tol * (1.0 + abs(snapped)):
            k, dev = snapped, sdev
        if k == 0.0:
            return CurvatureClass("zero", 0.0, stats, dev, tol)
        return CurvatureClass("constant", k, stats, dev, tol)
    return CurvatureClass("nonconstant", None, stats, dev, tol)
