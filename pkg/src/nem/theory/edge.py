"""Spectral edge and Stieltjes transform of the tangential Hessian ensemble.

At a point with squared radius q and energy density u, the projected
Hessian is in law a scaled GOE bulk plus a Wishart-type positive part.
The limiting spectral measure mu_{alpha,a,b} of that family is encoded by
the rational map

    Q(m; alpha, a, b) = -1/m + alpha*b/(1 + b*m) - a^2*m,

whose inverse on the upper half-plane is the Stieltjes transform of mu.
The lower edge of the support sits at -z_star, where

    z_star(alpha, a, b) = -sup_{m>0} Q(m; alpha, a, b).
"""

from __future__ import annotations

import math

import numpy as np

from ._solve import golden_max


def q_of_m(m, alpha, a, b):
    """The rational map Q(m) = -1/m + alpha*b/(1+b*m) - a^2*m."""
    return -1.0 / m + alpha * b / (1.0 + b * m) - a * a * m


def _q_prime(m, alpha, a, b):
    return 1.0 / (m * m) - alpha * b * b / (1.0 + b * m) ** 2 - a * a


def _argmax_bracket(alpha, a, b):
    # The interior critical point satisfies 1/m^2 = a^2 + alpha*b^2/(1+b*m)^2,
    # which forces m between 1/sqrt(a^2 + alpha*b^2) and 1/a.
    return 1.0 / math.sqrt(a * a + alpha * b * b), 1.0 / a


def _check_params(alpha, a, b):
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if a < 0.0 or b < 0.0:
        raise ValueError(f"a and b must be nonnegative, got a={a}, b={b}")


def z_star(alpha, a, b):
    """Negated supremum of Q over m > 0; the lower spectral edge is -z_star.

    Closed forms cover a=0 or b=0. Otherwise Q' has exactly one positive
    root (Q' = h(m) - a^2 with h having a single sign change), so the
    maximum is interior and golden section in log m over the analytic
    bracket finds it.
    """
    _check_params(alpha, a, b)
    if a == 0.0 and b == 0.0:
        return 0.0
    if b == 0.0:
        return 2.0 * a
    if a == 0.0:
        # Q climbs to 0 at large m when alpha <= 1; above that the Wishart
        # part develops a gap of width b*(sqrt(alpha)-1)^2 at the bottom.
        if alpha <= 1.0:
            return 0.0
        return -b * (math.sqrt(alpha) - 1.0) ** 2
    z, _ = _z_star_golden(alpha, a, b)
    return z


def _z_star_golden(alpha, a, b):
    lo, hi = _argmax_bracket(alpha, a, b)
    lo *= 0.9
    hi *= 1.1
    for _ in range(40):
        t, qmax = golden_max(
            lambda t: q_of_m(math.exp(t), alpha, a, b), math.log(lo), math.log(hi)
        )
        m = math.exp(t)
        if 1.02 * lo < m < hi / 1.02:
            return -qmax, m
        lo /= 4.0
        hi *= 4.0
    raise RuntimeError("bracket expansion exhausted in the edge search")


def _z_star_newton(alpha, a, b, m_guess=None):
    """Fast path for a,b > 0: safeguarded Newton on Q'(m) = 0.

    Returns (z_star, m_star). Thousands of nearby edge problems are solved
    along the descent ODE, so m_guess warm-starts from the previous call;
    any step leaving the analytic bracket falls back to bisection.
    """
    lo, hi = _argmax_bracket(alpha, a, b)
    if m_guess is not None and lo < m_guess < hi:
        m = m_guess
    else:
        m = math.sqrt(lo * hi)
    for _ in range(120):
        g = _q_prime(m, alpha, a, b)
        if g > 0.0:
            lo = m
        elif g < 0.0:
            hi = m
        else:
            break
        curv = -2.0 / m**3 + 2.0 * alpha * b**3 / (1.0 + b * m) ** 3
        m_new = m - g / curv if curv < 0.0 else math.nan
        if not lo < m_new < hi:
            m_new = 0.5 * (lo + hi)
        done = abs(m_new - m) <= 1e-15 * m
        m = m_new
        if done or hi - lo <= 1e-15 * hi:
            break
    return -q_of_m(m, alpha, a, b), m


def _clearing_coeffs(z, alpha, a, b):
    # Q(S) = z multiplied through by S*(1+b*S); highest degree first.
    if a == 0.0 and b == 0.0:
        raise ValueError("degenerate ensemble: both a and b vanish")
    if a == 0.0:
        return [z * b, z + b * (1.0 - alpha), 1.0]
    if b == 0.0:
        return [a * a, z, 1.0]
    return [a * a * b, a * a + z * b, z + b * (1.0 - alpha), 1.0]


def _upper_roots(z, alpha, a, b):
    roots = np.roots(np.asarray(_clearing_coeffs(z, alpha, a, b), dtype=complex))
    return [complex(s) for s in roots if s.imag > 0.0]


def support_radius(alpha, a, b):
    """Crude outer bound on the spectral radius, for integration windows."""
    return 2.0 * a + b * (1.0 + math.sqrt(alpha)) ** 2 + 1.0


def stieltjes(z, alpha, a, b):
    """Stieltjes transform S(z) of mu_{alpha,a,b} for Im z > 0.

    Solves the polynomial form of Q(S) = z and picks the branch with
    Im S > 0 and the -1/z decay at infinity. Wishart-type ensembles carry a
    second upper-half-plane branch (the transform of the companion matrix
    with the roles of the two dimensions swapped), so when more than one
    candidate root survives, the physical one is tracked by continuation
    along the segment from i*R down to z, with R beyond the spectral radius.
    """
    z = complex(z)
    if z.imag <= 0.0:
        raise ValueError(f"need Im z > 0, got z={z}")
    _check_params(alpha, a, b)
    if a == 0.0 and b == 0.0:
        return -1.0 / z
    candidates = _upper_roots(z, alpha, a, b)
    if len(candidates) == 1:
        return candidates[0]
    z_far = 1j * 4.0 * support_radius(alpha, a, b)
    # quadratic clustering toward the target resolves the fast root motion
    # when z sits close to the real axis
    steps = (1.0 - np.linspace(1.0, 0.0, 48) ** 2)[1:]
    track = min(
        (complex(s) for s in np.roots(np.asarray(_clearing_coeffs(z_far, alpha, a, b), dtype=complex))),
        key=lambda s: abs(s + 1.0 / z_far),
    )
    for frac in steps:
        zz = (1.0 - frac) * z_far + frac * z
        roots = np.roots(np.asarray(_clearing_coeffs(zz, alpha, a, b), dtype=complex))
        track = min((complex(s) for s in roots), key=lambda s: abs(s - track))
    return track
