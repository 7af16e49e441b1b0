"""Rectangular sample regions and numeric zero testing."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .evaluate import evaluate_array
from .nodes import ZERO, Expr
from .simplify import expand, simplify

RANDOM_POINTS = 64
MIN_EVALUABLE = 0.5


class RegionUnusable(ValueError):
    """Fewer than half of a region's sample points could be evaluated."""

    def __init__(self, message: str, evaluated: int = 0, total: int = 0):
        super().__init__(message)
        self.evaluated = evaluated
        self.total = total


@dataclass(frozen=True)
class Region:
    x_min: float
    x_max: float
    u_min: float
    u_max: float
    grid_n: int = 33
    seed: int = 42

    def __post_init__(self):
        if not self.x_min < self.x_max:
            raise ValueError(f"x_min must be < x_max, got {self.x_min}, {self.x_max}")
        if not self.u_min < self.u_max:
            raise ValueError(f"u_min must be < u_max, got {self.u_min}, {self.u_max}")
        if int(self.grid_n) != self.grid_n or self.grid_n < 2:
            raise ValueError(f"grid_n must be an integer >= 2, got {self.grid_n}")

    @classmethod
    def parse(cls, text: str, grid_n: int = 33, seed: int = 42) -> "Region":
        """Build from ``"xmin,xmax,umin,umax"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 4:
            raise ValueError(f"region needs 4 comma-separated numbers, got {text!r}")
        x0, x1, u0, u1 = (float(p) for p in parts)
        return cls(x0, x1, u0, u1, grid_n=grid_n, seed=seed)

    @property
    def center(self) -> tuple[float, float]:
        return (0.5 * (self.x_min + self.x_max), 0.5 * (self.u_min + self.u_max))

    @cached_property
    def points(self) -> tuple[np.ndarray, np.ndarray]:
        """Grid points (boundary included) followed by seeded uniform random points."""
        gx = np.linspace(self.x_min, self.x_max, self.grid_n)
        gu = np.linspace(self.u_min, self.u_max, self.grid_n)
        mx, mu = np.meshgrid(gx, gu, indexing="ij")
        rng = np.random.default_rng(self.seed)
        rx = rng.uniform(self.x_min, self.x_max, RANDOM_POINTS)
        ru = rng.uniform(self.u_min, self.u_max, RANDOM_POINTS)
        return np.concatenate([mx.ravel(), rx]), np.concatenate([mu.ravel(), ru])

    def interior_grid(self, n: int, margin: float = 0.1) -> tuple[np.ndarray, np.ndarray]:
        """``n x n`` grid keeping a relative ``margin`` away from the boundary."""
        dx = (self.x_max - self.x_min) * margin
        du = (self.u_max - self.u_min) * margin
        gx = np.linspace(self.x_min + dx, self.x_max - dx, n)
        gu = np.linspace(self.u_min + du, self.u_max - du, n)
        mx, mu = np.meshgrid(gx, gu, indexing="ij")
        return mx.ravel(), mu.ravel()

    def as_dict(self) -> dict:
        return {
            "x_min": self.x_min, "x_max": self.x_max, "u_min": self.u_min, "u_max": self.u_max,
            "grid_n": self.grid_n, "seed": self.seed,
        }


@dataclass(frozen=True)
class SweepStats:
    max_abs: float
    argmax: tuple[float, float]
    mean_abs: float
    min_value: float
    max_value: float
    mean_value: float
    evaluated: int
    skipped: int

    @property
    def total(self) -> int:
        return self.evaluated + self.skipped

    def as_dict(self) -> dict:
        return {
            "max_abs": self.max_abs, "argmax": list(self.argmax), "mean_abs": self.mean_abs,
            "min": self.min_value, "max": self.max_value, "mean": self.mean_value,
            "evaluated": self.evaluated, "skipped": self.skipped,
        }


def sample_values(e: Expr, region: Region) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Values of ``e`` on the region's sample points; raises RegionUnusable below 50% coverage."""
    xs, us = region.points
    vals = evaluate_array(e, xs, us)
    ok = np.isfinite(vals)
    if ok.sum() < MIN_EVALUABLE * vals.size:
        raise RegionUnusable(
            f"{e} evaluates at only {int(ok.sum())} of {vals.size} sample points",
            int(ok.sum()), vals.size,
        )
    return xs, us, vals


def stats_of(xs, us, vals) -> SweepStats:
    ok = np.isfinite(vals)
    v = vals[ok]
    a = np.abs(v)
    i = int(np.argmax(a))
    return SweepStats(
        max_abs=float(a[i]),
        argmax=(float(xs[ok][i]), float(us[ok][i])),
        mean_abs=float(a.mean()),
        min_value=float(v.min()),
        max_value=float(v.max()),
        mean_value=float(v.mean()),
        evaluated=int(ok.sum()),
        skipped=int((~ok).sum()),
    )


def sweep(e: Expr, region: Region) -> SweepStats:
    return stats_of(*sample_values(e, region))


@dataclass(frozen=True)
class ZeroCheck:
    is_zero: bool
    max_abs: float
    argmax: tuple[float, float] | None
    evaluated: int
    skipped: int
    method: str  # "symbolic" or "sampled"

    def __bool__(self):
        return self.is_zero

    def as_dict(self) -> dict:
        return {
            "is_zero": self.is_zero, "max_abs": self.max_abs,
            "argmax": None if self.argmax is None else list(self.argmax),
            "evaluated": self.evaluated, "skipped": self.skipped, "method": self.method,
        }


def is_numerically_zero(e: Expr, region: Region, tol: float) -> ZeroCheck:
    """True iff ``|e| <= tol`` at every evaluable sample point of ``region``.

    Simplification is tried first; a syntactic zero short-circuits sampling.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if simplify(e) == ZERO or expand(e) == ZERO:
        return ZeroCheck(True, 0.0, None, 0, 0, "symbolic")
    s = sweep(e, region)
    return ZeroCheck(s.max_abs <= tol, s.max_abs, s.argmax, s.evaluated, s.skipped, "sampled")
