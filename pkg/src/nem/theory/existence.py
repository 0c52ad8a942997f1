"""Pair-counting existence certificate: the rate function and its threshold."""

from __future__ import annotations

import math

import numpy as np

from ._solve import bisect_boundary, golden_max


def _check_flat_origin(xi):
    d1 = xi.eval(0.0, 1)
    d2 = xi.eval(0.0, 2)
    if d1 != 0.0 or d2 != 0.0:
        raise ValueError(
            f"rate function needs xi'(0) = xi''(0) = 0, got xi'(0)={d1}, xi''(0)={d2}"
        )


def _psi_vec(r, alpha, xi):
    xi0 = xi.eval(0.0)
    xi1 = xi.eval(1.0)
    span = xi1 - xi0
    if span <= 0.0:
        raise ValueError("xi must have a nonconstant part")
    xir = xi.eval(r)
    rho = (xir - xi0) / span
    return (
        0.5 * np.log1p(-r * r)
        - 0.5 * alpha * np.log1p(-rho * rho)
        - alpha * xi0 / (xi1 + xir - 2.0 * xi0)
        + alpha * xi0 / span
    )


def psi(r, alpha, xi):
    """Pair-counting exponent at overlap r.

    While the running maximum over r stays nonpositive, the second moment
    of the solution count certifies that solutions exist; alpha_lb is the
    first alpha where the maximum turns positive. Requires a mixture with
    no linear or quadratic component, where the exponent formula is valid.
    """
    r = float(r)
    if not 0.0 <= r < 1.0:
        raise ValueError(f"overlap r must lie in [0, 1), got {r}")
    _check_flat_origin(xi)
    return float(_psi_vec(np.asarray(r), alpha, xi))


def alpha_lb(xi, grid_n=4000):
    """Largest alpha below which the pair-counting certificate holds.

    Bisects alpha over [0, 20]. The inner maximum over r uses a uniform
    grid on [1e-4, 1-1e-6] plus golden-section refinement around the grid
    argmax; r=0 is excluded (the exponent vanishes there identically) and
    so is the r->1 endpoint, where the log terms diverge to -infinity.
    Returns math.inf when the certificate never fails up to alpha=20.
    """
    _check_flat_origin(xi)
    grid = np.linspace(1e-4, 1.0 - 1e-6, int(grid_n))

    def sup_psi(a):
        vals = _psi_vec(grid, a, xi)
        i = int(np.argmax(vals))
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, len(grid) - 1)]
        _, refined = golden_max(lambda r: float(_psi_vec(np.asarray(r), a, xi)), lo, hi)
        return max(refined, float(vals[i]))

    threshold = 1e-10
    if sup_psi(20.0) <= threshold:
        return math.inf
    return bisect_boundary(lambda a: sup_psi(a) <= threshold, 0.0, 20.0)
