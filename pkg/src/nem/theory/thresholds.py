"""Algorithmic thresholds: the two-phase scheme and the gradient descent scale."""

from __future__ import annotations

import math

from ._solve import bisect_boundary
from .descent_ode import alpha_hd, hd_ode
from .rs import rs_quantities, u_rs_value

_U_TOL = 1e-6
_ALPHA_CAP = 16.0


def _two_phase_final_energy(alpha, xi, delta0, saturation_rate_factor):
    """Energy left after message passing to overlap q_* - delta0 then descent."""
    try:
        r = rs_quantities(alpha, xi)
    except ValueError:
        return math.inf
    if r.q_star >= 1.0:
        # overlap saturates inside phase one; descent has no band left to work
        gap = math.sqrt(xi.eval(1.0)) - math.sqrt(
            saturation_rate_factor * xi.eval(1.0, 1) / alpha
        )
        return 0.5 * max(gap, 0.0) ** 2
    q = max(r.q_star - delta0, 0.0)
    u0 = u_rs_value(q, alpha, xi)
    if u0 <= 1e-15 and alpha <= 1.0:
        # the descent phase cannot raise the energy at or below alpha = 1
        return 0.0
    return float(hd_ode(alpha, xi, q_start=q, u0=u0).u[-1])


def alpha_tp(xi, delta0=0.0, saturation_rate_factor=1.0):
    """Break-even alpha of the two-phase scheme.

    Phase one equilibrates at overlap q_* = min(q_rs, q0); phase two runs the
    eigenvector descent over the remaining band [q_* - delta0, 1]. The
    threshold is where the terminal energy stops vanishing. When q_* >= 1
    phase one alone saturates and the residual level is
    (sqrt(xi(1)) - sqrt(f xi'(1)/alpha))_+^2 / 2 with f the
    saturation_rate_factor; f=1 continues u_rs to q=1, f=2 is the
    alternative convention with a doubled rate inside the root.
    """
    if delta0 < 0.0:
        raise ValueError(f"delta0 must be nonnegative, got {delta0}")
    if xi.eval(0.0, 1) == 0.0:
        # without a linear part the map has zero derivative at the origin, so
        # phase one never moves and the scheme is the plain descent walk
        return alpha_hd(xi)
    # surface hypothesis violations now; inside the bisection a ValueError
    # can only mean the alpha probe left the overlap equation's domain
    rs_quantities(1e-3, xi)

    def below(a):
        return _two_phase_final_energy(a, xi, delta0, saturation_rate_factor) <= _U_TOL

    lo = 1e-4
    for _ in range(4):
        if below(lo):
            break
        lo *= 0.1
    else:
        return 0.0  # not achievable even at vanishing alpha
    hi = 0.5
    while below(hi):
        hi *= 2.0
        if hi > _ALPHA_CAP:
            return math.inf
    return bisect_boundary(below, lo, hi)


def alpha_gd_threshold(xi, c0=1.0):
    """Gradient descent threshold scale, c0 xi'(1)^2 / (xi''(1) xi(1) (log(xi'''(1)/xi''(1)) v 1)).

    c0 is an undetermined absolute constant, exposed so callers can calibrate;
    the output is linear in it and qualitative in nature.
    """
    if c0 <= 0.0:
        raise ValueError(f"c0 must be positive, got {c0}")
    v1 = float(xi.eval(1.0, 1))
    v2 = float(xi.eval(1.0, 2))
    v3 = float(xi.eval(1.0, 3))
    if v2 <= 0.0:
        raise ValueError("needs xi''(1) > 0")
    term = math.log(v3 / v2) if v3 > 0.0 else 1.0
    return c0 * v1 * v1 / (v2 * float(xi.eval(1.0)) * max(term, 1.0))
