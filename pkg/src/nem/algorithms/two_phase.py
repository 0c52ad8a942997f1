"""Two-phase solver: message passing into the ball, then the Hessian walk
out to the sphere, constrained to stay orthogonal to the phase-one output."""

from __future__ import annotations

import numpy as np

from ..trace import RunTrace
from .amp import amp_phase
from .hessian_walk import hessian_descent


def two_phase(gmap, delta, gamma, L, seed):
    """Run amp_phase(gamma, L), then hessian_descent from m^L, returning
    (x, trace) with x on the unit sphere.

    The walk starts at m^L, keeps every step orthogonal to it, and takes
    K = floor((1 - |m^L|^2)/delta) steps before the closing normalization.
    If phase one already reaches the sphere (|m^L| >= 1) the walk is skipped
    and m^L is normalized directly.  gamma = 0 keeps m^L at the origin and
    degenerates to a plain Hessian walk from a random sqrt(delta) start.

    The combined trace carries the phase-one rows (aux phase=1, t = l) then
    the phase-two rows (aux phase=2, t = k*delta); meta records the entry
    overlap q_entry = |m^L|^2 and entry energy u_entry = |F(m^L)|^2/(2n).
    """
    m, h, amp_trace = amp_phase(gmap, gamma, L)
    q_entry = float(m @ m)
    u_entry = amp_trace.last().u
    trace = RunTrace("two_phase", meta={
        "gamma": float(gamma), "L": int(L), "delta": float(delta),
        "seed": int(seed), "n": gmap.n, "d": gmap.d,
        "q_entry": q_entry, "u_entry": u_entry})
    for r in amp_trace:
        trace.append(r.step, r.t, r.radius_sq, r.u, **dict(r.aux, phase=1))

    if q_entry >= 1.0:
        return m / float(np.linalg.norm(m)), trace
    if q_entry == 0.0:
        x, hd_trace = hessian_descent(gmap, delta, seed)
    else:
        x, hd_trace = hessian_descent(gmap, delta, seed,
                                      subspace_extras=[m], start=m)
    offset = trace.last().step + 1
    for r in hd_trace:
        trace.append(r.step + offset, r.t, r.radius_sq, r.u,
                     **dict(r.aux, phase=2))
    return x, trace
