"""Command-line front end.

Exit codes: 0 success, 2 parse error, 3 unusable region (or a path or
trajectory that left the domain), 4 not integrable by this tool, 5 a produced
result failed its own residual check.
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass

import click
import numpy as np

from . import integrability as ig
from .expr import ZERO, DomainError, Expr, ParseError, Region, RegionUnusable, evaluate, parse, sweep, to_text
from .numerics import LeftDomain, Trajectory, solve_ode, solve_pregeodesic, write_csv
from .reports import SCHEMA_VERSION, dumps
from .surface import Deformation, OdeProblem, SurfaceInvariantError, build_surface, classify_curvature

EXIT_OK, EXIT_PARSE, EXIT_REGION, EXIT_NOT_INTEGRABLE, EXIT_RESIDUAL = 0, 2, 3, 4, 5
DEFAULT_REGION = "1,2,1,2"


class Abort(Exception):
    def __init__(self, code: int, message: str, report: dict | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


@dataclass(frozen=True)
class RunConfig:
    command: str
    phi: Expr
    phi_text: str
    epsilon: Expr
    epsilon_text: str | None
    region: Region
    zero_tol: float
    residual_tol: float
    out: str | None

    @property
    def problem(self) -> OdeProblem:
        return OdeProblem(self.phi, self.region)

    def as_dict(self) -> dict:
        return {
            "command": self.command,
            "phi": self.phi_text,
            "epsilon": self.epsilon_text,
            "region": self.region.as_dict(),
            "zero_tol": self.zero_tol,
            "residual_tol": self.residual_tol,
        }


def _parse(text: str, flag: str) -> Expr:
    try:
        return parse(text)
    except ParseError as exc:
        caret = " " * exc.offset + "^"
        raise Abort(EXIT_PARSE, f"{flag}: {exc}\n  {text}\n  {caret}") from exc


def _pair(text: str, flag: str) -> tuple[Expr, Expr]:
    parts = text.split(";")
    if len(parts) != 2:
        raise Abort(EXIT_PARSE, f"{flag} expects two expressions separated by ';', got {text!r}")
    return _parse(parts[0], flag), _parse(parts[1], flag)


def _config(command, phi, epsilon, region, grid, zero_tol, residual_tol, seed, out) -> RunConfig:
    if not (zero_tol > 0 and residual_tol > 0):
        raise Abort(EXIT_PARSE, "tolerances must be positive")
    try:
        reg = Region.parse(region, grid_n=grid, seed=seed)
    except ValueError as exc:
        raise Abort(EXIT_PARSE, f"--region: {exc}") from exc
    return RunConfig(command, _parse(phi, "--phi"), phi, ZERO if epsilon is None else _parse(epsilon, "--epsilon"),
                     epsilon, reg, zero_tol, residual_tol, out)


def _emit(cfg: RunConfig, report: dict, summary: list[str]) -> None:
    body = {"schema": SCHEMA_VERSION, "config": cfg.as_dict(), **report}
    text = dumps(body)
    if cfg.out == "-":
        click.echo(text, nl=False)
        return
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    for line in summary:
        click.echo(line)


def _run(fn, cfg_args: dict, *extra):
    """Run a command body and translate failures into exit codes."""
    cfg = None
    try:
        cfg = _config(**cfg_args)
        fn(cfg, *extra)
    except Abort as exc:
        click.echo(f"error: {exc}", err=True)
        if exc.report is not None and cfg is not None:
            body = {"status": "error", "exit_code": exc.code, **exc.report}
            if cfg.out:
                _emit(cfg, body, [])
            else:
                click.echo(dumps(body), err=True, nl=False)
        sys.exit(exc.code)
    except RegionUnusable as exc:
        click.echo(f"error: region unusable: {exc}", err=True)
        if cfg is not None:
            _emit(cfg, {"status": "error", "exit_code": EXIT_REGION, "error": str(exc),
                        "evaluated": exc.evaluated, "total": exc.total}, [])
        sys.exit(EXIT_REGION)
    sys.exit(EXIT_OK)


def common(f):
    options = [
        click.option("--phi", required=True, help="Right-hand side phi(x, u) of u' = phi."),
        click.option("--epsilon", default=None, help="Deformation eps(x, u); default 0."),
        click.option("--region", default=DEFAULT_REGION, show_default=True, help="xmin,xmax,umin,umax"),
        click.option("--grid", default=33, show_default=True, type=click.IntRange(min=2), help="Samples per axis."),
        click.option("--zero-tol", default=1e-8, show_default=True, type=float),
        click.option("--residual-tol", default=1e-7, show_default=True, type=float,
                     help="Relative bound on closedness residuals: tol * (1 + max|mu|)."),
        click.option("--seed", default=42, show_default=True, type=int),
        click.option("--out", default=None, help="JSON report path; '-' prints JSON instead of the summary."),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


def _cfg_args(command, kw) -> dict:
    keys = ("phi", "epsilon", "region", "grid", "zero_tol", "residual_tol", "seed", "out")
    return {"command": command, **{k: kw.pop(k) for k in keys}}


@click.group()
def main():
    """Curvature of the surface attached to u' = phi(x, u), and integrability from it."""


# analyze ---------------------------------------------------------------------


def _analyze(cfg: RunConfig):
    try:
        s = build_surface(cfg.problem, Deformation(cfg.epsilon))
    except SurfaceInvariantError as exc:
        raise Abort(EXIT_RESIDUAL, str(exc), {"error": str(exc)}) from exc
    cls = classify_curvature(s, cfg.zero_tol)
    verdict = {"zero": "Zero", "constant": f"Constant({cls.k!r})", "nonconstant": "NonConstant"}[cls.kind]
    if cls.kind == "nonconstant":
        verdict += f" (range [{cls.stats.min_value:.6g}, {cls.stats.max_value:.6g}])"
    _emit(cfg, {"status": "ok", "surface": s.as_dict(), "classification": cls.as_dict()}, [
        f"phi      = {to_text(s.phi)}",
        f"epsilon  = {to_text(s.epsilon)}",
        f"E, F, G  = {to_text(s.E)} | {to_text(s.F)} | {to_text(s.G)}",
        f"Delta    = {to_text(s.delta_eps)}",
        f"K        = {to_text(s.curvature)}",
        f"verdict  = {verdict} (max deviation {cls.max_deviation:.3g}, "
        f"{cls.stats.evaluated} points, {cls.stats.skipped} skipped)",
    ])


@main.command()
@common
def analyze(**kw):
    """Metric, connection function and curvature, with a constancy verdict."""
    _run(_analyze, _cfg_args("analyze", kw))


# integrate -------------------------------------------------------------------


def _verification_trajectories(p: OdeProblem) -> list[Trajectory]:
    r = p.region
    x_stop = r.x_max - 0.1 * (r.x_max - r.x_min)
    out = []
    for x0, u0 in ig._launch_points(r):
        try:
            out.append(solve_ode(p, x0, u0, x_stop, 1e-2))
        except LeftDomain as exc:
            out.append(exc.trajectory)
        except ValueError:
            continue
    return out


def _integrate(cfg: RunConfig, mu_text: str | None, csv_path: str | None):
    p = cfg.problem
    d = Deformation(cfg.epsilon)
    try:
        if mu_text is not None:
            report = ig.user_mu_report(p, _parse(mu_text, "--mu"))
        else:
            report = ig.integrate(p, d, cfg.zero_tol)
    except (ig.NotConstantCurvature, ig.NotFlat) as exc:
        raise Abort(EXIT_NOT_INTEGRABLE, f"NotIntegrableByThisTool: {exc}",
                    {"error": "NotIntegrableByThisTool", "detail": str(exc), "evidence": exc.evidence}) from exc
    except (ig.ResidualCheckFailed, ig.NotClosed) as exc:
        raise Abort(EXIT_RESIDUAL, str(exc), {"error": type(exc).__name__, "evidence": exc.evidence}) from exc
    except (ig.DeltaVanishesOnRegion, ig.PathCrossesSingularity) as exc:
        raise Abort(EXIT_REGION, str(exc), {"error": type(exc).__name__, "evidence": exc.evidence}) from exc
    except SurfaceInvariantError as exc:
        raise Abort(EXIT_RESIDUAL, str(exc), {"error": str(exc)}) from exc

    data = report.as_dict()
    fi = data["residual_first_integral"]
    if report.mu is None and fi["value"] is not None and not fi["value"] <= cfg.residual_tol:
        raise Abort(EXIT_RESIDUAL, f"first integral residual {fi['value']:.3g} exceeds {cfg.residual_tol:g}",
                    {"report": data})
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            fh.write("trajectory,x,u,uprime\n")
            for i, t in enumerate(_verification_trajectories(p)):
                for x, u, up in zip(t.xs, t.us, t.slopes):
                    fh.write(f"{i},{x:.17g},{u:.17g},{up:.17g}\n")
    lines = [f"method   = {report.method}" + (f" ({report.branch}, k = {report.k:g})" if report.branch else "")]
    if report.mu is not None:
        lines.append(f"mu       = {data['mu']}")
        lines.append(f"closedness residual max = {data['residual_closedness']:.3g}")
    if data["first_integral"] is not None:
        lines.append(f"F        = {data['first_integral']}")
        lines.append(f"{fi['kind']} = {fi['value']:.3g}")
    lines.extend(f"note: {n}" for n in report.notes)
    _emit(cfg, {"status": "ok", "integration": data}, lines)


@main.command()
@common
@click.option("--mu", "mu_text", default=None, help="Use this integrating factor instead of the curvature routes.")
@click.option("--csv", "csv_path", default=None, help="Write the verification trajectories as CSV.")
def integrate(mu_text, csv_path, **kw):
    """Integrating factor or first integral from flat or constant curvature."""
    _run(_integrate, _cfg_args("integrate", kw), mu_text, csv_path)


# verify ----------------------------------------------------------------------


def _verify(cfg: RunConfig, mu_text, symmetry_text, jacobi_text):
    if not (mu_text or symmetry_text or jacobi_text):
        raise Abort(EXIT_PARSE, "verify needs at least one of --mu, --symmetry, --jacobi")
    phi, eps, region = cfg.phi, cfg.epsilon, cfg.region
    results, lines = {}, []
    if mu_text:
        mu = _parse(mu_text, "--mu")
        check = ig.check_integrating_factor(phi, mu, region, cfg.residual_tol)
        results["mu"] = {"mu": to_text(mu), "residual": to_text(ig.closedness_residual(phi, mu)), **check,
                         "verdict": "PASS" if check["passed"] else "FAIL"}
        lines.append(f"mu: {results['mu']['verdict']} (max residual {check['max_abs']:.3g} "
                     f"at x={check['argmax'][0]:.6g}, u={check['argmax'][1]:.6g})")
    if symmetry_text:
        xi, eta = _pair(symmetry_text, "--symmetry")
        try:
            sym = ig.lie_symmetry_check(phi, ig.VectorFieldXY(xi, eta), region, cfg.zero_tol)
        except ig.DegenerateField as exc:
            raise Abort(EXIT_REGION, str(exc), {"error": "DegenerateField", "evidence": exc.evidence}) from exc
        results["symmetry"] = {**sym.as_dict(), "verdict": "PASS" if sym else "FAIL"}
        lines.append(f"symmetry: {results['symmetry']['verdict']}"
                     + (f" (rho = {to_text(sym.rho)})" if sym else f" (max |c2 - c1 phi| {sym.test_max:.3g})"))
    if jacobi_text:
        sigma, delta = _pair(jacobi_text, "--jacobi")
        r1, r2 = ig.jacobi_residuals(phi, eps, sigma, delta)
        s1, s2 = sweep(r1, region), sweep(r2, region)
        ok = s1.max_abs <= cfg.zero_tol and s2.max_abs <= cfg.zero_tol
        results["jacobi"] = {
            "sigma": to_text(sigma), "delta": to_text(delta),
            "residual_sigma": to_text(r1), "residual_delta": to_text(r2),
            "max_sigma": s1.max_abs, "max_delta": s2.max_abs,
            "argmax_sigma": list(s1.argmax), "argmax_delta": list(s2.argmax),
            "verdict": "PASS" if ok else "FAIL",
        }
        lines.append(f"jacobi: {results['jacobi']['verdict']} (max residuals {s1.max_abs:.3g}, {s2.max_abs:.3g})")
    verdict = "PASS" if all(r["verdict"] == "PASS" for r in results.values()) else "FAIL"
    lines.append(f"verdict: {verdict}")
    _emit(cfg, {"status": "ok", "verdict": verdict, "checks": results}, lines)


@main.command()
@common
@click.option("--mu", "mu_text", default=None, help="Candidate integrating factor.")
@click.option("--symmetry", "symmetry_text", default=None, help="Candidate symmetry 'xi;eta'.")
@click.option("--jacobi", "jacobi_text", default=None, help="Candidate Jacobi field 'sigma;delta'.")
def verify(mu_text, symmetry_text, jacobi_text, **kw):
    """Residuals of a candidate integrating factor, symmetry or Jacobi field."""
    _run(_verify, _cfg_args("verify", kw), mu_text, symmetry_text, jacobi_text)


# geodesic --------------------------------------------------------------------


def _geodesic(cfg: RunConfig, x0, u0, slope0, x_end, step, csv_path):
    p = cfg.problem
    try:
        phi0 = evaluate(cfg.phi, x0, u0)
    except DomainError as exc:
        raise Abort(EXIT_REGION, f"phi is not defined at ({x0}, {u0})") from exc
    slope = phi0 if slope0 is None else slope0
    status = "ok"
    try:
        t = solve_pregeodesic(p, x0, u0, slope, x_end, step)
    except LeftDomain as exc:
        t, status = exc.trajectory, f"left_domain: {exc}"
    except ValueError as exc:
        raise Abort(EXIT_PARSE, str(exc)) from exc
    try:
        ode = solve_ode(p, x0, u0, float(t.xs[-1]), step) if t.xs[-1] > x0 else None
    except LeftDomain as exc:
        ode = exc.trajectory
    gap = None
    if ode is not None:
        n = min(len(ode), len(t))
        if np.array_equal(ode.xs[:n], t.xs[:n]):
            gap = float(np.max(np.abs(ode.us[:n] - t.us[:n])))
    if csv_path:
        with open(csv_path, "w", encoding="utf-8", newline="") as fh:
            write_csv(t, fh)
    summary = {
        "status": status,
        "x0": x0, "u0": u0, "slope0": slope, "phi_at_start": phi0, "x_end": x_end, "step": step,
        "samples": len(t), "end": list(t.end), "end_slope": float(t.slopes[-1]),
        "max_gap_to_ode_solution": gap, "csv": csv_path,
    }
    lines = [f"pregeodesic from ({x0:g}, {u0:g}) with slope {slope:.6g}: {len(t)} samples, "
             f"ends at ({t.end[0]:.6g}, {t.end[1]:.10g})"]
    if gap is not None:
        lines.append(f"max |u_geodesic - u_solution| = {gap:.3g}")
    if status != "ok":
        lines.append(status)
    _emit(cfg, {"geodesic": summary}, lines)
    if status != "ok":
        sys.exit(EXIT_REGION)


@main.command()
@common
@click.option("--x0", type=float, required=True)
@click.option("--u0", type=float, required=True)
@click.option("--slope0", type=float, default=None, help="Initial slope; default phi(x0, u0).")
@click.option("--xend", "x_end", type=float, required=True)
@click.option("--step", type=float, default=1e-3, show_default=True)
@click.option("--csv", "csv_path", default=None, help="Trajectory CSV path (x,u,uprime).")
def geodesic(x0, u0, slope0, x_end, step, csv_path, **kw):
    """Pregeodesic of the associated surface through (x0, u0)."""
    if not (math.isfinite(x0) and math.isfinite(u0)):
        raise click.BadParameter("x0 and u0 must be finite")
    _run(_geodesic, _cfg_args("geodesic", kw), x0, u0, slope0, x_end, step, csv_path)


if __name__ == "__main__":
    main()
