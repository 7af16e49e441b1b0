"""Principal branch W0 of the Lambert W function."""

import math

import numpy as np

BRANCH_POINT = -math.exp(-1.0)
REL_TOL = 1e-14


class LambertDomainError(ValueError):
    pass


def _initial_guess(z: float) -> float:
    if z < -0.25:
        # series about the branch point, in p = sqrt(2(ez + 1))
        p = math.sqrt(max(2.0 * (math.e * z + 1.0), 0.0))
        return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    if z < 3.0:
        return math.log1p(z) * (1.0 - math.log1p(math.log1p(z)) / (2.0 + math.log1p(z)))
    l1 = math.log(z)
    l2 = math.log(l1)
    return l1 - l2 + l2 / l1


def lambert_w(z: float) -> float:
    """W0(z) for real ``z >= -1/e`` by Halley iteration.

    Iterates until the Halley step is below ``1e-14`` relative to the iterate.
    """
    z = float(z)
    if math.isnan(z) or z < BRANCH_POINT:
        if z >= BRANCH_POINT - 4e-17:
            return -1.0
        raise LambertDomainError(f"lambert_w argument {z!r} below -1/e")
    if math.isinf(z):
        raise LambertDomainError("lambert_w of infinity")
    if z == 0.0:
        return 0.0
    w = _initial_guess(z)
    for _ in range(100):
        ew = math.exp(w)
        f = w * ew - z
        wp1 = w + 1.0
        if wp1 == 0.0:
            break
        denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1)
        if denom == 0.0:
            break
        dw = f / denom
        w -= dw
        if abs(dw) <= REL_TOL * abs(w):
            break
    return w


def lambert_w_array(z):
    """Elementwise W0; arguments outside the domain (and NaN) map to NaN."""
    z = np.asarray(z, dtype=float)
    out = np.full(z.shape, np.nan)
    flat_in = z.ravel()
    flat_out = out.ravel()
    for i, value in enumerate(flat_in):
        if np.isfinite(value) and value >= BRANCH_POINT - 4e-17:
            flat_out[i] = lambert_w(value)
    return flat_out.reshape(z.shape)
