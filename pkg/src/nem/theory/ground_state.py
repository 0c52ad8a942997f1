"""Ground-state energy: pure-model exponent root and the mixture variational value."""

from __future__ import annotations

import functools
import math
import warnings

import numpy as np
from scipy import integrate, optimize

from ._solve import bisect_boundary


def theta_p(E, p):
    """Complexity exponent of deep level sets for the pure degree-p model.

    Defined for E >= 2*sqrt((p-1)/p) and strictly decreasing there; its
    single sign change locates the ground-state energy for p >= 3.
    """
    p = _check_degree(p)
    edge = 2.0 * math.sqrt((p - 1.0) / p)
    if E < edge - 1e-12:
        raise ValueError(f"E={E} below the domain edge {edge}")
    E = max(float(E), edge)
    ratio = p / (p - 1.0)
    s = math.sqrt(max(ratio * E * E - 4.0, 0.0))
    return (
        0.5 * math.log(p - 1.0)
        - (p - 2.0) / (p - 1.0) * E * E / 4.0
        - math.sqrt(ratio) * E / 4.0 * s
        + math.log(0.5 * (s + math.sqrt(ratio) * E))
    )


def _check_degree(p):
    if int(p) != p or p < 2:
        raise ValueError(f"degree p must be an integer >= 2, got {p}")
    return int(p)


@functools.lru_cache(maxsize=None)
def e_star_pure(p):
    """Ground-state energy of the pure degree-p model: where theta_p vanishes.

    For p=2 the exponent is nonpositive on its whole domain and vanishes
    exactly at the domain edge sqrt(2), which is returned directly.
    """
    p = _check_degree(p)
    edge = 2.0 * math.sqrt((p - 1.0) / p)
    if p == 2:
        return edge
    hi = edge + 1.0
    while theta_p(hi, p) > 0.0:
        hi += 1.0
    return bisect_boundary(lambda E: theta_p(E, p) > 0.0, edge, hi)


def _sqrt_xi2(xi):
    return lambda t: math.sqrt(max(xi.eval(t, 2), 0.0))


def e_star_parisi(xi, grid_n=200):
    """Variational ground-state energy of a general mixture.

    Minimizes

        (1/2) [ integral_0^1 (xi''(t) G(t) + 1/G(t)) dt  +  xi'(0) G(0) ]

    over positive, non-increasing, concave G on [0, 1]. The boundary term
    xi'(0) G(0) carries the degree-1 component (it makes the pure linear
    case come out at sqrt(xi'(0)) exactly); it vanishes whenever the
    mixture has no linear part. When the pointwise optimum xi''(t)^(-1/2)
    is itself feasible the integral shortcut is exact; otherwise the
    constraint cone is swept by a slope-increment parametrization, on which
    feasibility is a coordinate box and the objective stays convex, and
    minimized by projected quasi-Newton descent.
    """
    xi1p0 = xi.eval(0.0, 1)
    if all(c == 0.0 for c in xi.coeffs[2:]):
        # no curvature anywhere: constant G = L is optimal and the value
        # is inf_L (xi'(0) L + 1/L)/2
        if xi1p0 <= 0.0:
            raise ValueError("ground state undefined for a constant mixture")
        return math.sqrt(xi1p0)

    if xi1p0 == 0.0 and xi.eval(0.0, 2) > 0.0:
        tt = np.linspace(0.0, 1.0, 2001)
        g_star = xi.eval(tt, 2) ** -0.5
        curv = np.diff(g_star, 2)
        if np.all(np.diff(g_star) <= 1e-12) and np.all(curv <= 1e-12):
            val, _ = integrate.quad(_sqrt_xi2(xi), 0.0, 1.0)
            return val

    return _parisi_descent(xi, int(grid_n))


def _parisi_descent(xi, grid_n):
    J = grid_n
    t = (np.arange(J) + 0.5) / J
    d = xi.eval(t, 2)
    lin = xi.eval(0.0, 1)
    idx = np.arange(J)
    drop = np.maximum(J - 1 - idx, 0)

    def unpack(x):
        c, mu = x[0], x[1:]
        # G_j = c + (1/J) sum_i mu_i * (J-1-max(i,j))_+, realized via cumsums
        prefix = np.cumsum(mu)
        suffix = np.concatenate((np.cumsum((mu * drop)[::-1])[::-1][1:], [0.0]))
        G = c + (drop * prefix + suffix) / J
        return c, mu, G

    def objective(x):
        c, mu, G = unpack(x)
        L = G[0] + mu[0] / (2.0 * J)
        f = 0.5 * np.mean(d * G + 1.0 / G) + 0.5 * lin * L
        w = 0.5 * (d - 1.0 / G**2) / J
        grad = np.empty_like(x)
        grad[0] = np.sum(w) + 0.5 * lin
        wpre = np.cumsum(w)
        wsuf = np.concatenate((np.cumsum((w * drop)[::-1])[::-1][1:], [0.0]))
        grad[1:] = (drop * wpre + wsuf) / J + 0.5 * lin * drop / J
        grad[1] += 0.5 * lin / (2.0 * J)
        return f, grad

    mean_curv = float(np.mean(d))
    x0 = np.zeros(J + 1)
    x0[0] = 1.0 / math.sqrt(mean_curv + lin)
    bounds = [(1e-8, None)] + [(0.0, None)] * J
    res = optimize.minimize(
        objective,
        x0,
        jac=True,
        method="L-BFGS-B",
        bounds=bounds,
        options={"maxiter": 20000, "ftol": 1e-14, "gtol": 1e-12},
    )
    if not res.success:
        warnings.warn(
            f"variational descent stopped early ({res.message}); returning best value",
            RuntimeWarning,
        )
    return float(res.fun)
