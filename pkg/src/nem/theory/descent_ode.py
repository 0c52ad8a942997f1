"""Energy decay along eigenvector descent: the edge-driven ODE and its threshold."""

from __future__ import annotations

import functools
import math
from typing import NamedTuple

import numpy as np
from scipy import integrate

from ._solve import bisect_boundary
from .edge import _z_star_newton


class OdeCurve(NamedTuple):
    t: np.ndarray
    u: np.ndarray


class HdBounds(NamedTuple):
    u_lb: float
    u_ub: float
    A: float


def _edge_rate(alpha, u, d2, d1, memo):
    """du/dt = -z_star(alpha, sqrt(2 alpha u xi''), xi') / (2 alpha)."""
    aa = 2.0 * alpha * max(u, 0.0) * d2
    if aa <= 0.0:
        if alpha <= 1.0 or d1 <= 0.0:
            return 0.0
        return d1 * (math.sqrt(alpha) - 1.0) ** 2 / (2.0 * alpha)
    a = math.sqrt(aa)
    if d1 <= 0.0:
        return -a / alpha
    z, memo[0] = _z_star_newton(alpha, a, d1, memo[0])
    return -z / (2.0 * alpha)


def hd_ode(alpha, xi, q_start=0.0, u0=None, step_h=1e-3):
    """Integrate the edge-driven energy ODE on [0, 1 - q_start].

    Classical fixed-step Runge-Kutta; derivatives of xi are taken at
    q_start + t and u0 defaults to xi(0)/2, the energy density of a
    uniformly random start. The exact flow keeps u nonnegative (zero is
    invariant for alpha <= 1 and repelling above), but the rate behaves like
    sqrt(u) near zero, so a step crossing the boundary layer lands slightly
    negative, never deeper than the step times the fastest stage rate; such
    landings clamp to 0 and the clamp error vanishes with the step. A
    non-finite value means the rates blew up and raises.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not 0.0 <= q_start < 1.0:
        raise ValueError(f"q_start must lie in [0, 1), got {q_start}")
    if u0 is None:
        u0 = 0.5 * xi.eval(0.0)
    if u0 < 0.0:
        raise ValueError(f"u0 must be nonnegative, got {u0}")
    span = 1.0 - q_start
    n_steps = max(int(math.ceil(span / step_h)), 1)
    h = span / n_steps
    t = q_start + h * np.arange(n_steps + 1)
    d2 = xi.eval(t, 2)
    d1 = xi.eval(t, 1)
    d2_mid = xi.eval(t[:-1] + 0.5 * h, 2)
    d1_mid = xi.eval(t[:-1] + 0.5 * h, 1)

    u = np.empty(n_steps + 1)
    u[0] = float(u0)
    memo = [None]
    for k in range(n_steps):
        uk = u[k]
        k1 = _edge_rate(alpha, uk, d2[k], d1[k], memo)
        k2 = _edge_rate(alpha, uk + 0.5 * h * k1, d2_mid[k], d1_mid[k], memo)
        k3 = _edge_rate(alpha, uk + 0.5 * h * k2, d2_mid[k], d1_mid[k], memo)
        k4 = _edge_rate(alpha, uk + h * k3, d2[k + 1], d1[k + 1], memo)
        nxt = uk + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not math.isfinite(nxt):
            raise RuntimeError(f"integration blew up at t={t[k + 1]} (alpha={alpha})")
        u[k + 1] = nxt if nxt > 0.0 else 0.0
    return OdeCurve(t=t - q_start, u=u)


def hd_bounds(alpha, xi):
    """Closed-form sandwich for the terminal energy, and the threshold ratio A.

    u_lb and u_ub bracket u(1) for alpha < 1 (u_ub is NaN at or above 1);
    A = (integral of sqrt(xi''/xi(0)))^2 brackets the descent threshold via
    A/(1+A) <= alpha_hd <= A.
    """
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    xi0 = xi.eval(0.0)
    if xi0 <= 0.0:
        raise ValueError(f"needs xi(0) > 0, got {xi0}")
    curve_mass, _ = integrate.quad(lambda s: math.sqrt(max(xi.eval(s, 2), 0.0)), 0.0, 1.0)
    root0 = math.sqrt(xi0)
    u_lb = 0.5 * max(root0 - curve_mass / math.sqrt(alpha), 0.0) ** 2
    if alpha < 1.0:
        u_ub = 0.5 * max(root0 - curve_mass * math.sqrt((1.0 - alpha) / alpha), 0.0) ** 2
    else:
        u_ub = math.nan
    return HdBounds(u_lb=u_lb, u_ub=u_ub, A=curve_mass * curve_mass / xi0)


_U_TOL = 1e-6


@functools.lru_cache(maxsize=128)
def alpha_hd(xi, step_h=1e-3):
    """Largest alpha at which the descent ODE still reaches zero energy at t=1.

    The terminal energy grows with alpha, so the threshold is bracketed by
    the closed-form sandwich around A and bisected. Mixtures with no
    curvature at all never move, reported as a 0.0 sentinel.
    """
    if all(c == 0.0 for c in xi.coeffs[2:]):
        return 0.0
    A = hd_bounds(1.0, xi).A

    def below(a):
        return float(hd_ode(a, xi, step_h=step_h).u[-1]) <= _U_TOL

    lo = 0.5 * A / (1.0 + A)
    for _ in range(8):
        if below(lo):
            break
        lo *= 0.25
    hi = 2.0 * A
    for _ in range(8):
        if not below(hi):
            break
        hi *= 2.0
    return bisect_boundary(below, lo, hi)
