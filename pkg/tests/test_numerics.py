import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad

from conftest import SPHERE_PHI, random_points
from odesurface.expr import Binary, Const, Region, evaluate, evaluate_array, parse
from odesurface.integrability import closedness_residual
from odesurface.numerics import (
    LeftDomain,
    StencilLeftDomain,
    adaptive_simpson,
    brioschi_curvature,
    brioschi_curvature_array,
    covariant_derivative_frame,
    pregeodesic_residual,
    residual_sweep,
    solve_ode,
    solve_pregeodesic,
    write_csv,
)
from odesurface.surface import Deformation, OdeProblem, build_surface, curvature

SQUARE = OdeProblem(parse("u^2"), Region(0, 0.9, 0.5, 10))


# solve_ode -------------------------------------------------------------------


def test_square_field_closed_form():
    t = solve_ode(SQUARE, 0, 1, 0.5, 1e-3)
    assert t.end[0] == 0.5
    assert abs(t.end[1] - 2) < 1e-8
    assert np.max(np.abs(t.us - 1 / (1 - t.xs))) < 1e-8


def test_sine_field_quadrature():
    t = solve_ode(OdeProblem(parse("sin(x)"), Region(0, 2, -1, 1)), 0, 0, 2, 1e-3)
    assert np.max(np.abs(t.us - (1 - np.cos(t.xs)))) < 1e-12


def test_rational_field_keeps_first_integral():
    t = solve_ode(OdeProblem(parse("(1-3*x*u)/x^2"), Region(1, 2, -1, 1)), 1, 0.25, 2, 1e-3)
    F = t.xs**3 * t.us - t.xs**2 / 2
    assert np.ptp(F) < 1e-10


def test_blow_up_raises_with_partial_trajectory():
    with pytest.raises(LeftDomain) as info:
        solve_ode(SQUARE, 0, 1, 1.5, 1e-2)
    t = info.value.trajectory
    # the numerical pole trails the exact one at x = 1 by O(step)
    assert abs(t.xs[-1] - 1) < 1e-2 and t.us[-1] > 100 and len(t) > 10


@pytest.mark.parametrize("step, x_end", [(0, 1), (-1e-3, 1), (1e-3, 0)])
def test_bad_integration_arguments(step, x_end):
    with pytest.raises(ValueError):
        solve_ode(SQUARE, 0, 1, x_end, step)


def test_rk4_order_of_convergence():
    errs = [abs(solve_ode(SQUARE, 0, 1, 0.5, h).end[1] - 2) for h in (0.02, 0.01)]
    assert 12 <= errs[0] / errs[1] <= 20


@given(st.floats(0.2, 0.8), st.floats(-0.5, 0.5))
def test_interpolation_is_exact_at_nodes(x_end, u0):
    t = solve_ode(OdeProblem(parse("sin(x*u) + u"), Region(0, 1, -2, 2)), 0, u0, x_end, 0.01)
    assert np.array_equal(t.u_at(t.xs), t.us) or np.allclose(t.u_at(t.xs), t.us, rtol=1e-15, atol=1e-15)


# pregeodesics ------------------------------------------------------------------


def test_pregeodesic_with_slope_phi_matches_ode():
    xs = np.linspace(0, 0.5, 51)
    ode = solve_ode(SQUARE, 0, 1, 0.5, 1e-3)
    geo = solve_pregeodesic(SQUARE, 0, 1, 1.0, 0.5, 1e-3)
    assert np.max(np.abs(ode.u_at(xs) - geo.u_at(xs))) < 1e-6


def test_pregeodesic_with_other_slope_diverges():
    xs = np.linspace(0, 0.5, 51)
    ode = solve_ode(SQUARE, 0, 1, 0.5, 1e-3)
    geo = solve_pregeodesic(SQUARE, 0, 1, 1.5, 0.5, 1e-3)
    assert np.max(np.abs(ode.u_at(xs) - geo.u_at(xs))) > 1e-2


def test_geodesic_equivalence_over_matrix(pair):
    r = pair["region"]
    p = OdeProblem(pair["phi"], r)
    x0, u0 = r.center
    x_end = x0 + 0.25 * (r.x_max - r.x_min)
    xs = np.linspace(x0, x_end, 41)
    slope = evaluate(p.phi, x0, u0)
    ode = solve_ode(p, x0, u0, x_end, 1e-3)
    geo = solve_pregeodesic(p, x0, u0, slope, x_end, 1e-3)
    assert np.max(np.abs(ode.u_at(xs) - geo.u_at(xs))) < 1e-6
    off = solve_pregeodesic(p, x0, u0, slope + 0.5, x_end, 1e-3)
    assert np.max(np.abs(ode.u_at(xs) - off.u_at(xs))) > 1e-2


def test_sine_counterexample():
    phi = parse("sin(x)")
    xs = np.linspace(0, 2, 41)
    res = pregeodesic_residual(phi, lambda t: t - np.cos(t), lambda t: 1 + np.sin(t), np.cos, xs)
    assert res < 1e-12
    p = OdeProblem(phi, Region(0, 2, -2, 2))
    geo = solve_pregeodesic(p, 0, -1, 1.0, math.pi / 2, 1e-3)
    ode = solve_ode(p, 0, -1, math.pi / 2, 1e-3)
    assert abs(geo.end[1] - (math.pi / 2)) < 1e-10
    assert abs(geo.end[1] - ode.end[1]) > 0.5


def test_pregeodesic_slope_guard():
    with pytest.raises(LeftDomain):
        solve_pregeodesic(OdeProblem(parse("u^2"), Region(0, 1, 0, 1)), 0, 1, 5.0, 2, 1e-2)


def test_pregeodesic_rejects_nonfinite_slope():
    with pytest.raises(ValueError):
        solve_pregeodesic(SQUARE, 0, 1, math.inf, 0.5, 1e-3)


# Brioschi oracle ------------------------------------------------------------------


def test_brioschi_examples():
    s = build_surface(OdeProblem(parse("u^2"), Region(-1, 1, 1, 3)))
    assert brioschi_curvature(s, 0.3, 2.0) == pytest.approx(-24, abs=1e-4)
    flat = build_surface(OdeProblem(Const(0), Region(-1, 1, -1, 1)))
    assert abs(brioschi_curvature(flat, 0.2, 0.1)) < 1e-8
    sphere = build_surface(OdeProblem(parse(SPHERE_PHI), Region(-0.3, 0.3, -0.3, 0.3)))
    assert brioschi_curvature(sphere, 0.1, 0.2) == pytest.approx(1, abs=1e-3)


def test_brioschi_agrees_with_symbolic_curvature(pair):
    s = build_surface(OdeProblem(pair["phi"], pair["region"]), Deformation(pair["eps"]))
    r = pair["region"]
    inner = Region(*(np.array([r.x_min, r.x_max, r.u_min, r.u_max])
                     + 0.1 * np.array([1, -1, 1, -1]) * np.array([r.x_max - r.x_min] * 2 + [r.u_max - r.u_min] * 2)))
    xs, us = random_points(inner, 25)
    k_sym = evaluate_array(s.curvature, xs, us)
    k_num = brioschi_curvature_array(s, xs, us)
    assert np.all(np.abs(k_sym - k_num) <= 1e-4 * (1 + np.abs(k_sym)))


def test_brioschi_stencil_outside_domain():
    s = build_surface(OdeProblem(parse("sqrt(u)"), Region(0, 1, 0, 1)))
    with pytest.raises(StencilLeftDomain):
        brioschi_curvature(s, 0.5, 1e-4)
    with pytest.raises(ValueError):
        brioschi_curvature(s, 0.5, 0.5, h=0)


# frame connection --------------------------------------------------------------------


def test_covariant_derivative_examples():
    assert covariant_derivative_frame(0.7, (1, 0), (1, 0), (0, 0)) == (0, 0)
    assert covariant_derivative_frame(0.7, (1, 0), (0, 1), (0, 0)) == (0, 0)
    assert covariant_derivative_frame(0.0, (0.3, 0.4), (1, 2), (5, 6)) == (5, 6)


@given(st.floats(-3, 3), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1), st.floats(-1, 1))
def test_covariant_derivative_is_metric(d, a1, a2, y1, y2):
    # for a field of constant length the derivative stays orthogonal to it
    n = math.hypot(y1, y2)
    if n < 1e-3:
        return
    y = (y1 / n, y2 / n)
    v = covariant_derivative_frame(d, (a1, a2), y, (0.0, 0.0))
    assert abs(v[0] * y[0] + v[1] * y[1]) < 1e-12


# sweeps, quadrature, csv -----------------------------------------------------------


def test_residual_sweep_examples():
    assert residual_sweep(Const(0), Region(0, 1, 0, 1))["max_abs"] == 0
    r = closedness_residual(parse("(1-3*x*u)/x^2"), parse("x^3"))
    assert residual_sweep(r, Region(1, 2, -1, 1))["max_abs"] < 1e-12
    k = Binary("add", curvature(parse("u^2")), parse("6*u^2"))
    assert residual_sweep(k, Region(-1, 1, 1, 2))["max_abs"] < 1e-10


def test_adaptive_simpson_examples():
    assert adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2, abs=1e-10)
    assert adaptive_simpson(math.exp, 1, 1) == 0
    assert adaptive_simpson(lambda t: 1 / t, 2, 1) == pytest.approx(-math.log(2), abs=1e-10)


@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0.1, 3))
def test_adaptive_simpson_matches_scipy(a, b, c):
    f = lambda t: math.exp(-c * t * t) * math.cos(3 * t)  # noqa: E731
    ref = quad(f, a, b, epsabs=1e-13, epsrel=1e-13)[0]
    assert abs(adaptive_simpson(f, a, b) - ref) < 1e-9


def test_csv_format():
    t = solve_ode(SQUARE, 0, 1, 0.01, 5e-3)
    buf = io.StringIO()
    write_csv(t, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "x,u,uprime" and len(lines) == 1 + len(t)
    x, u, p = map(float, lines[-1].split(","))
    assert (x, u, p) == (t.xs[-1], t.us[-1], t.slopes[-1])
