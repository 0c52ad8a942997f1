"""Message passing phase: drive the iterate to a macroscopic overlap."""

from __future__ import annotations

import math

import numpy as np

from ..gmap import OutsideBallError
from ..trace import RunTrace


class AmpDivergenceError(RuntimeError):
    """Iterates overflowed or left the working ball; gamma is too aggressive."""

    def __init__(self, ell, detail):
        super().__init__(f"message passing diverged at iteration {ell}: {detail}")
        self.ell = ell


def amp_phase(gmap, gamma, L, jacobi=False):
    """Run L message passing iterations, returning (m^L, h^L, trace).

    Starting from m^0 = h^0 = 0, each iteration evaluates the map once at
    the current estimate and updates residual first, estimate second:

        h^{l+1} = F(m^l)/sqrt(n) - gamma B_l h^l
        m^{l+1} = (gamma/sqrt(d)) DF(m^l)^T h^{l+1}
                  - gamma C_l m^l - gamma^2 D_l m^{l-1}

    with alpha = n/d and coefficients

        B_l = xi'(<m^l, m^{l-1}>) / sqrt(alpha)
        C_l = sqrt(alpha) xi'(|m^l|^2)
        D_l = xi''(<m^l, m^{l-1}>) <h^{l+1}, h^l>

    The corrections cancel the feedback from reusing the couplings across
    iterations: C_l is exact since E[DF(x)^T F(x)] = n xi'(|x|^2) x, B_l
    compensates the estimate's dependence on the residual it was built
    from, and D_l removes the second-order bias of DF(m^l)^T h^{l+1} along
    the previous estimate (it vanishes for linear mixtures). With this
    ordering |m^l|^2 follows the one-step overlap recursion q_{l+1} =
    gamma^2 xi(q_l) xi'(q_l); for linear mixtures the iterates match the
    minimum-norm root to machine precision, while for curved mixtures the
    tracking error floor scales like 1/sqrt(d) and compounds when gamma
    sits exactly at the fixed-point step size, so moderate dimensions call
    for a gamma slightly inside it.

    jacobi=True instead updates both sequences synchronously from the
    previous iteration's state, with corrections on h^{l-1} and m^{l-1} and
    D_l = xi'(<m^l, m^{l-1}>)<h^l, h^{l-1}>. At gamma near the fixed-point
    value the synchronous form is marginally stable and in practice
    diverges after a few dozen iterations; it is kept for comparison runs
    only.

    The trace row at step l records the state entering iteration l
    (squared norms, residual energy u, the overlap fed to the correction
    coefficients, and B, C, D themselves); a final row at step L records
    the returned state.
    """
    if L < 2:
        raise ValueError(f"need L >= 2, got {L}")
    if not math.isfinite(gamma):
        raise ValueError(f"gamma must be finite, got {gamma}")
    n, d = gmap.n, gmap.d
    sqrt_alpha = math.sqrt(n / d)
    m_prev = np.zeros(d)
    m = np.zeros(d)
    h_prev = np.zeros(n)
    h = np.zeros(n)
    trace = RunTrace("amp", meta={"gamma": gamma, "L": L, "n": n, "d": d,
                                  "jacobi": bool(jacobi)})

    for ell in range(L):
        try:
            F = gmap.evaluate(m)
        except OutsideBallError as exc:
            raise AmpDivergenceError(ell, exc) from exc
        radius_sq = float(m @ m)
        overlap = float(m @ m_prev)
        B = float(gmap.xi.eval(overlap, 1)) / sqrt_alpha
        if jacobi:
            C = sqrt_alpha * float(gmap.xi.eval(overlap, 1))
            D = float(gmap.xi.eval(overlap, 1)) * float(h @ h_prev)
            h_new = F / math.sqrt(n) - gamma * B * h_prev
            m_new = (gamma / math.sqrt(d)) * gmap.jacobian_apply(m, h, transpose=True)
            m_new -= (gamma * C + gamma * gamma * D) * m_prev
        else:
            C = sqrt_alpha * float(gmap.xi.eval(radius_sq, 1))
            h_new = F / math.sqrt(n) - gamma * B * h
            D = float(gmap.xi.eval(overlap, 2)) * float(h_new @ h)
            m_new = (gamma / math.sqrt(d)) * gmap.jacobian_apply(m, h_new, transpose=True)
            m_new -= gamma * C * m + gamma * gamma * D * m_prev
        trace.append(ell, float(ell), radius_sq, 0.5 * float(F @ F) / n,
                     h_norm_sq=float(h @ h), overlap=overlap, B=B, C=C, D=D)
        if not (np.all(np.isfinite(m_new)) and np.all(np.isfinite(h_new))):
            raise AmpDivergenceError(ell, "iterate overflowed")
        m_prev, m = m, m_new
        h_prev, h = h, h_new

    try:
        F = gmap.evaluate(m)
    except OutsideBallError as exc:
        raise AmpDivergenceError(L, exc) from exc
    trace.append(L, float(L), float(m @ m), 0.5 * float(F @ F) / n,
                 h_norm_sq=float(h @ h), overlap=float(m @ m_prev),
                 B=0.0, C=0.0, D=0.0)
    return m, h, trace
