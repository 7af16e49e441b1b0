"""Numeric integrators and independent oracles.

Trajectories of ``u' = phi`` and of the pregeodesic equation
``u'' = A(phi) - phi_u (u' - phi)^3`` use fixed-step RK4. The Brioschi formula
gives a curvature estimate from the metric components alone, so it checks the
symbolic frame formula without sharing any code path with it.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Callable, TextIO

import numpy as np

from .expr import DomainError, Expr, Region, compile_scalar, diff, evaluate_array, sweep
from .surface import OdeProblem, SurfaceData, apply_A

MAX_HALVINGS = 12
SLOPE_LIMIT = 1e6


class LeftDomain(ArithmeticError):
    """The integrator could not continue; ``trajectory`` holds the samples computed so far."""

    def __init__(self, message: str, trajectory: "Trajectory"):
        super().__init__(message)
        self.trajectory = trajectory


class StencilLeftDomain(ArithmeticError):
    pass


@dataclass(frozen=True)
class Trajectory:
    xs: np.ndarray
    us: np.ndarray
    slopes: np.ndarray
    step: float
    method: str

    def __len__(self):
        return len(self.xs)

    @property
    def samples(self) -> list[tuple[float, float, float]]:
        return list(zip(self.xs.tolist(), self.us.tolist(), self.slopes.tolist()))

    @property
    def end(self) -> tuple[float, float]:
        return float(self.xs[-1]), float(self.us[-1])

    def u_at(self, x) -> np.ndarray:
        """Cubic Hermite interpolation between samples, exact at the nodes."""
        x = np.asarray(x, dtype=float)
        i = np.clip(np.searchsorted(self.xs, x) - 1, 0, len(self.xs) - 2)
        x0, x1 = self.xs[i], self.xs[i + 1]
        h = x1 - x0
        t = (x - x0) / h
        h00 = 2 * t**3 - 3 * t**2 + 1
        h10 = t**3 - 2 * t**2 + t
        h01 = -2 * t**3 + 3 * t**2
        h11 = t**3 - t**2
        return (h00 * self.us[i] + h10 * h * self.slopes[i]
                + h01 * self.us[i + 1] + h11 * h * self.slopes[i + 1])


def _trajectory(xs, us, ps, step, method) -> Trajectory:
    return Trajectory(np.array(xs), np.array(us), np.array(ps), step, method)


def _rk4(rhs: Callable, x0: float, y0: tuple, x_end: float, step: float, method: str,
         slope_of: Callable, guard: Callable | None = None) -> Trajectory:
    """Generic fixed-step RK4 on a tuple state, halving the step near domain trouble."""
    if not step > 0:
        raise ValueError("step must be positive")
    if not x_end > x0:
        raise ValueError("x_end must exceed x0")
    y = tuple(float(v) for v in y0)
    try:
        p0 = slope_of(x0, y)
    except DomainError as exc:
        raise ValueError(f"initial point ({x0}, {y[0]}) is not evaluable: {exc}") from exc
    xs, us, ps = [x0], [y[0]], [p0]
    n = max(1, math.ceil((x_end - x0) / step - 1e-9))
    x, k = x0, 0
    h_nominal = (x_end - x0) / n

    def stage(xx, yy, h):
        k1 = rhs(xx, yy)
        k2 = rhs(xx + h / 2, tuple(a + h / 2 * b for a, b in zip(yy, k1)))
        k3 = rhs(xx + h / 2, tuple(a + h / 2 * b for a, b in zip(yy, k2)))
        k4 = rhs(xx + h, tuple(a + h * b for a, b in zip(yy, k3)))
        out = tuple(a + h / 6 * (b1 + 2 * b2 + 2 * b3 + b4) for a, b1, b2, b3, b4 in zip(yy, k1, k2, k3, k4))
        if not all(math.isfinite(v) for v in out):
            raise DomainError("non-finite state")
        return out

    while k < n:
        target = x0 + (k + 1) * h_nominal if k + 1 < n else x_end
        h, halvings = target - x, 0
        # sub-steps only appear after a halving; every accepted node is recorded
        while x < target:
            last = h >= target - x
            h = target - x if last else h
            try:
                ynew = stage(x, y, h)
                xnew = target if last else x + h
                pnew = slope_of(xnew, ynew)
                if guard is not None:
                    guard(ynew)
            except DomainError as exc:
                halvings += 1
                if halvings > MAX_HALVINGS:
                    raise LeftDomain(f"left the domain near x={x!r}: {exc}",
                                     _trajectory(xs, us, ps, step, method)) from exc
                h /= 2
                continue
            x, y = xnew, ynew
            xs.append(x)
            us.append(y[0])
            ps.append(pnew)
        k += 1
    return _trajectory(xs, us, ps, step, method)


def solve_ode(p: OdeProblem, x0: float, u0: float, x_end: float, step: float) -> Trajectory:
    """Classic RK4 for ``u' = phi(x, u)`` from ``(x0, u0)`` to ``x_end``."""
    f = compile_scalar(p.phi)

    def slope_of(x, y):
        # finite-time blow-up: stop at a huge slope instead of waiting for overflow
        v = f(x, y[0])
        if abs(v) > SLOPE_LIMIT:
            raise DomainError(f"slope exceeded {SLOPE_LIMIT:g}")
        return v

    return _rk4(lambda x, y: (f(x, y[0]),), x0, (u0,), x_end, step, "rk4", slope_of=slope_of)


def pregeodesic_rhs(phi: Expr) -> tuple[Expr, Expr]:
    """``(A(phi), phi_u)``, the coefficients of the pregeodesic equation."""
    return apply_A(phi, phi), diff(phi, "u")


def solve_pregeodesic(p: OdeProblem, x0: float, u0: float, slope0: float, x_end: float,
                      step: float) -> Trajectory:
    """RK4 on ``u' = v, v' = A(phi) - phi_u (v - phi)^3``."""
    if not math.isfinite(slope0):
        raise ValueError("slope0 must be finite")
    a_phi, phi_u = (compile_scalar(e) for e in pregeodesic_rhs(p.phi))
    f = compile_scalar(p.phi)

    def rhs(x, y):
        u, v = y
        return (v, a_phi(x, u) - phi_u(x, u) * (v - f(x, u)) ** 3)

    def guard(y):
        if abs(y[1]) > SLOPE_LIMIT:
            raise DomainError(f"slope exceeded {SLOPE_LIMIT:g}")

    def slope_of(x, y):
        f(x, y[0])
        return y[1]

    return _rk4(rhs, x0, (u0, slope0), x_end, step, "rk4-pregeodesic", slope_of, guard)


def pregeodesic_residual(phi: Expr, f: Callable, fp: Callable, fpp: Callable, xs) -> float:
    """Max of ``|f'' - A(phi) + phi_u (f' - phi)^3|`` along the curve ``u = f(x)``."""
    a_phi, phi_u = pregeodesic_rhs(phi)
    xs = np.asarray(xs, dtype=float)
    us = f(xs)
    res = fpp(xs) - evaluate_array(a_phi, xs, us) + evaluate_array(phi_u, xs, us) * (
        fp(xs) - evaluate_array(phi, xs, us)) ** 3
    return float(np.max(np.abs(res)))


# Curvature oracle -----------------------------------------------------------


def _brioschi_from_grid(E, F, G, h):
    """Brioschi's determinant formula on 3x3 stencils (axis 0 = x, axis 1 = u)."""
    def d1(m, axis):
        return (m[2, 1] - m[0, 1]) / (2 * h) if axis == 0 else (m[1, 2] - m[1, 0]) / (2 * h)

    def d2(m, axis):
        return (m[2, 1] - 2 * m[1, 1] + m[0, 1]) / h**2 if axis == 0 else (m[1, 2] - 2 * m[1, 1] + m[1, 0]) / h**2

    def dxu(m):
        return (m[2, 2] - m[2, 0] - m[0, 2] + m[0, 0]) / (4 * h * h)

    e, f, g = E[1, 1], F[1, 1], G[1, 1]
    Ex, Eu, Euu = d1(E, 0), d1(E, 1), d2(E, 1)
    Fx, Fu, Fxu = d1(F, 0), d1(F, 1), dxu(F)
    Gx, Gu, Gxx = d1(G, 0), d1(G, 1), d2(G, 0)
    m1 = np.array([
        [-Euu / 2 + Fxu - Gxx / 2, Ex / 2, Fx - Eu / 2],
        [Fu - Gx / 2, e, f],
        [Gu / 2, f, g],
    ])
    m2 = np.array([
        [np.zeros_like(e), Eu / 2, Gx / 2],
        [Eu / 2, e, f],
        [Gx / 2, f, g],
    ])
    # move the leading 3x3 axes to the end so det broadcasts over points
    det = np.linalg.det(np.moveaxis(m1, (0, 1), (-2, -1))) - np.linalg.det(np.moveaxis(m2, (0, 1), (-2, -1)))
    return det / (e * g - f * f) ** 2


def _brioschi_raw(s: SurfaceData, xs, us, h):
    offs = np.array([-h, 0.0, h])
    px = xs[None, None, :] + offs[:, None, None]
    pu = us[None, None, :] + offs[None, :, None]
    px, pu = np.broadcast_arrays(px, pu)
    grids = [evaluate_array(c, px.ravel(), pu.ravel()).reshape(px.shape) for c in (s.E, s.F, s.G)]
    bad = ~np.all(np.isfinite(np.stack(grids)), axis=(0, 1, 2))
    return _brioschi_from_grid(*grids, h), bad


def brioschi_curvature_array(s: SurfaceData, xs, us, h: float = 1e-3) -> np.ndarray:
    """Richardson-extrapolated Brioschi curvature at many points; NaN where a stencil leaves the domain."""
    if not h > 0:
        raise ValueError("h must be positive")
    xs = np.atleast_1d(np.asarray(xs, dtype=float))
    us = np.atleast_1d(np.asarray(us, dtype=float))
    with np.errstate(invalid="ignore"):
        k1, bad1 = _brioschi_raw(s, xs, us, h)
        k2, bad2 = _brioschi_raw(s, xs, us, h / 2)
    out = (4 * k2 - k1) / 3
    out[bad1 | bad2] = np.nan
    return out


def brioschi_curvature(s: SurfaceData, x: float, u: float, h: float = 1e-3) -> float:
    k = brioschi_curvature_array(s, [x], [u], h)[0]
    if not math.isfinite(k):
        raise StencilLeftDomain(f"Brioschi stencil of width {h:g} at ({x}, {u}) leaves the domain")
    return float(k)


def covariant_derivative_frame(delta_eps_value: float, tangent: tuple[float, float],
                               field: tuple[float, float],
                               field_derivs: tuple[float, float]) -> tuple[float, float]:
    """``nabla_X Y`` in the orthonormal frame ``(A, e^-eps d/du)``.

    The connection has ``T^1_12 = 0`` and ``T^2_12 = Delta_eps``; ``field_derivs``
    are the derivatives of the frame components of ``Y`` along ``X``.
    """
    _, a2 = tangent
    y1, y2 = field
    dy1, dy2 = field_derivs
    return (dy1 + delta_eps_value * a2 * y2, dy2 - delta_eps_value * a2 * y1)


def residual_sweep(e: Expr, r: Region) -> dict:
    s = sweep(e, r)
    return {"max_abs": s.max_abs, "argmax": list(s.argmax), "mean_abs": s.mean_abs, "skipped": s.skipped}


# Quadrature -----------------------------------------------------------------


def adaptive_simpson(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10,
                     max_depth: int = 50) -> float:
    """Adaptive Simpson quadrature with Richardson correction on each accepted panel."""
    if a == b:
        return 0.0
    fa, fb, fm = f(a), f(b), f(0.5 * (a + b))
    whole = (b - a) / 6 * (fa + 4 * fm + fb)
    total = 0.0
    stack = [(a, b, fa, fm, fb, whole, tol, max_depth)]
    while stack:
        lo, hi, flo, fmid, fhi, s, eps, depth = stack.pop()
        mid = 0.5 * (lo + hi)
        fl, fr = f(0.5 * (lo + mid)), f(0.5 * (mid + hi))
        left = (mid - lo) / 6 * (flo + 4 * fl + fmid)
        right = (hi - mid) / 6 * (fmid + 4 * fr + fhi)
        diff_ = left + right - s
        if depth <= 0 or abs(diff_) <= 15 * eps:
            total += left + right + diff_ / 15
        else:
            stack.append((mid, hi, fmid, fr, fhi, right, eps / 2, depth - 1))
            stack.append((lo, mid, flo, fl, fmid, left, eps / 2, depth - 1))
    return total


# CSV hand-off ---------------------------------------------------------------


def write_csv(t: Trajectory, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["x", "u", "uprime"])
    for x, u, p in zip(t.xs, t.us, t.slopes):
        w.writerow([f"{x:.17g}", f"{u:.17g}", f"{p:.17g}"])
