"""Replica-symmetric overlap fixed points and the matching energy level."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np
from scipy import optimize

from ._solve import bisect_boundary

_Q_CAP = 10.0


class RsQuantities(NamedTuple):
    q_rs: float
    q0: float
    q_star: float
    gamma_star: float
    u_rs: float


def gamma_for_overlap(q, xi):
    """Step size whose state evolution has a fixed point at overlap q."""
    if q <= 0.0:
        raise ValueError(f"overlap must be positive, got {q}")
    return -math.sqrt(q / (xi.eval(q) * xi.eval(q, 1)))


def u_rs_value(q, alpha, xi):
    """Energy density of the replica-symmetric solution pinned at overlap q."""
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    gap = math.sqrt(xi.eval(q)) - math.sqrt(q * xi.eval(q, 1) / alpha)
    return 0.5 * max(gap, 0.0) ** 2


def rs_quantities(alpha, xi):
    """Overlap landmarks of the replica-symmetric prediction.

    q_rs minimizes V(q) = xi(q) xi'(q) / q (infinite for linear mixtures,
    where V is strictly increasing); q0 solves q xi'(q) / xi(q) = alpha and
    is where the energy level hits zero. The smaller of the two, q_star, is
    the overlap an optimally tuned descent equilibrates at, gamma_star the
    matching step size, and u_rs the energy density left there.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if xi.eval(0.0) <= 0.0:
        raise ValueError("needs xi(0) > 0")
    if xi.eval(0.0, 1) <= 0.0:
        raise ValueError("needs a linear component, xi'(0) > 0")
    # g(q) = q xi'(q) / xi(q) increases from 0 toward the top degree
    if alpha >= xi.degree:
        raise ValueError(
            f"alpha={alpha} is at or above the mixture degree {xi.degree}; "
            "no overlap fixed point exists"
        )

    if xi.is_linear():
        q_rs = math.inf
    else:
        res = optimize.minimize_scalar(
            lambda q: xi.eval(q) * xi.eval(q, 1) / q,
            bounds=(1e-9, _Q_CAP),
            method="bounded",
            options={"xatol": 1e-12},
        )
        q_rs = float(res.x)

    def g_below(q):
        return q * xi.eval(q, 1) <= alpha * xi.eval(q)

    hi = 1.0
    while g_below(hi):
        hi *= 2.0
    q0 = bisect_boundary(g_below, 0.0, hi)

    q_star = min(q_rs, q0)
    return RsQuantities(
        q_rs=q_rs,
        q0=q0,
        q_star=q_star,
        gamma_star=gamma_for_overlap(q_star, xi),
        u_rs=u_rs_value(q_star, alpha, xi),
    )


def state_evolution(gamma, xi, L):
    """Iterate q_{l+1} = gamma^2 xi(q_l) xi'(q_l) from q_0 = 0 for L steps."""
    if L < 0:
        raise ValueError(f"L must be nonnegative, got {L}")
    q = np.empty(L + 1)
    q[0] = 0.0
    g2 = gamma * gamma
    with np.errstate(over="ignore", invalid="ignore"):
        for l in range(L):
            q[l + 1] = g2 * xi.eval(q[l]) * xi.eval(q[l], 1)
    return q
