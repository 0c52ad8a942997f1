"""Upper bounds on the solvability threshold: the direct one and the tilted one."""

from __future__ import annotations

import math

import numpy as np

from ._solve import bisect_boundary, golden_max, golden_min
from .ground_state import e_star_parisi, e_star_pure, theta_p


def alpha_ub1(xi):
    """Direct threshold bound E_*(xi - xi(0))^2 / xi(0), with its energy-gap map.

    Returns (value, eps0_fn) where eps0_fn(alpha) is the guaranteed
    relative energy floor (xi(0)/xi(1)) * (1 - sqrt(value/alpha))_+^2 for
    alpha above the bound.
    """
    xi0 = xi.eval(0.0)
    if xi0 <= 0.0:
        raise ValueError(f"needs xi(0) > 0, got {xi0}")
    estar = e_star_parisi(xi.without_constant())
    value = estar * estar / xi0
    xi1 = xi.eval(1.0)

    def eps0_fn(alpha):
        return (xi0 / xi1) * max(1.0 - math.sqrt(value / alpha), 0.0) ** 2

    return value, eps0_fn


def _theta_vec(E, p):
    ratio = p / (p - 1.0)
    s = np.sqrt(np.maximum(ratio * E * E - 4.0, 0.0))
    return (
        0.5 * math.log(p - 1.0)
        - (p - 2.0) / (p - 1.0) * E * E / 4.0
        - math.sqrt(ratio) * E / 4.0 * s
        + np.log(0.5 * (s + math.sqrt(ratio) * E))
    )


def phi1(c, p, xi0):
    """sup over t,s >= 0 of c(E_* + t + s) - s^2/(2 xi0) + theta_p(E_* + t).

    The s part is an exact quadratic maximum, c^2 xi0 / 2 at s = c xi0.
    The t part is maximized on [0, T_cap] with T_cap = 10 sqrt(xi0)(1+c);
    the exponent decays quadratically with slope steeper than -E, so the
    maximizer is interior, which is asserted before returning.
    """
    if c < 0.0:
        raise ValueError(f"c must be nonnegative, got {c}")
    if xi0 <= 0.0:
        raise ValueError(f"needs xi0 > 0, got {xi0}")
    estar = e_star_pure(p)
    t_cap = 10.0 * math.sqrt(xi0) * (1.0 + c)
    grid = np.linspace(0.0, t_cap, 768)
    vals = c * grid + _theta_vec(estar + grid, p)
    i = int(np.argmax(vals))
    if i >= len(grid) - 2:
        raise RuntimeError("t maximizer hit the cap; no decrease certificate")
    _, best = golden_max(
        lambda t: c * t + theta_p(estar + t, p),
        grid[max(i - 1, 0)],
        grid[i + 1],
    )
    t_part = max(best, float(vals[i]))
    return c * estar + t_part + 0.5 * c * c * xi0


def phi2(c, alpha, xi1_total):
    """Closed-form tilt value -c sqrt(alpha xi(1)) t_* - alpha(t_*^2-1)/2 + alpha log t_*.

    t_* is the positive root of t^2 + c sqrt(xi(1)/alpha) t - 1 = 0, the
    exact maximizer of the same expression over t > 0.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if xi1_total <= 0.0:
        raise ValueError(f"needs xi(1) > 0, got {xi1_total}")
    if c == 0.0:
        return 0.0
    ratio = c * math.sqrt(xi1_total / alpha)
    t_star = 0.5 * (math.sqrt(ratio * ratio + 4.0) - ratio)
    return (
        -c * math.sqrt(alpha * xi1_total) * t_star
        - 0.5 * alpha * (t_star * t_star - 1.0)
        + alpha * math.log(t_star)
    )


def _ub2_margin(alpha, xi0, p):
    """inf over c > 0 of phi1(c,p,xi0) + phi2(c,alpha,xi0+1) - c^2 (1+xi0)/2."""
    xi1_total = xi0 + 1.0

    def expr(c):
        return phi1(c, p, xi0) + phi2(c, alpha, xi1_total) - 0.5 * c * c * (1.0 + xi0)

    cs = np.geomspace(1e-4, 50.0, 140)
    vals = np.array([expr(c) for c in cs])
    i = int(np.argmin(vals))
    _, refined = golden_min(expr, cs[max(i - 1, 0)], cs[min(i + 1, len(cs) - 1)])
    return min(refined, float(vals[i]))


def alpha_ub2(xi0, p):
    """Tilted threshold bound for the pure mixture xi0 + t^p.

    First alpha at which some tilt c makes the combined exponent negative;
    the inner expression decreases pointwise in alpha, so bisection over
    alpha is valid. Returns math.inf when no crossing occurs by alpha=40.
    """
    if xi0 <= 0.0:
        raise ValueError(f"needs xi0 > 0, got {xi0}")
    if int(p) != p or p < 3:
        raise ValueError(f"defined for integer degree p >= 3, got {p}")
    p = int(p)
    tol = -1e-12
    hi = 1.0
    while _ub2_margin(hi, xi0, p) >= tol:
        hi *= 2.0
        if hi > 40.0:
            return math.inf
    return bisect_boundary(lambda a: _ub2_margin(a, xi0, p) >= tol, 1e-6, hi)
