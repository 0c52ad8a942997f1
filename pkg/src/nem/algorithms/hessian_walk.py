"""Hessian descent: a radial walk from near the origin to the sphere.

Each step moves sqrt(delta) along a near-minimal eigenvector of the energy
Hessian restricted to the directions orthogonal to the current iterate (and
any caller-supplied vectors), signed against the gradient.  Steps are
orthogonal to the iterate, so the squared radius grows by exactly delta per
step and the walk reaches the sphere in about 1/delta steps.
"""

from __future__ import annotations

import math

import numpy as np

from ..subspace import ConstraintSubspace
from ..trace import RunTrace
from .lanczos import min_eig_direction


def hessian_descent(gmap, delta, seed, subspace_extras=(), start=None):
    """Walk K = floor((1 - |start|^2)/delta) Hessian steps, returning (x, trace).

    With start=None the walk begins at a uniform random point of radius
    sqrt(delta).  At each step the direction v is a unit vector orthogonal
    to the iterate and to every vector in subspace_extras, with Rayleigh
    quotient certified within d*delta of the restricted minimum eigenvalue
    (the relaxed eigenvector condition; Lanczos budget 40 log(1/delta)).
    The step is -sign(<v, grad H>) sqrt(delta) v, so the first-order energy
    change is never positive; a zero inner product takes the + sign for
    deterministic replay.  The returned point is the final iterate scaled
    onto the unit sphere, which shifts u by O(delta) at most.

    The trace records one row per visited iterate: step k, t = k*delta,
    the exact squared radius, u = H/n, and for rows where a step is taken
    the certified rayleigh quotient, the sign s, and <v, grad H>.
    """
    if not (0.0 < delta < 1.0):
        raise ValueError(f"need 0 < delta < 1, got {delta}")
    d = gmap.d
    rng = np.random.default_rng(seed)
    if start is None:
        x = rng.standard_normal(d)
        x *= math.sqrt(delta) / float(np.linalg.norm(x))
    else:
        x = np.asarray(start, dtype=float).copy()
        if x.shape != (d,):
            raise ValueError(f"start has shape {x.shape}, expected ({d},)")
    r_sq = float(x @ x)
    K = max(0, int(math.floor((1.0 - r_sq) / delta + 1e-12)))
    tol_abs = d * delta
    max_lanczos = max(1, int(math.ceil(40.0 * math.log(1.0 / delta))))
    trace = RunTrace("hd", meta={"delta": float(delta), "seed": int(seed),
                                 "K": K, "n": gmap.n, "d": d,
                                 "extras": len(tuple(subspace_extras))})

    extras = tuple(np.asarray(e, dtype=float) for e in subspace_extras)
    for k in range(K):
        point = gmap.at_point(x)
        subspace = ConstraintSubspace(x, extras, skip_dependent=True)
        v, rayleigh = min_eig_direction(
            gmap, x, subspace, tol_abs=tol_abs, max_lanczos=max_lanczos,
            seed=int(rng.integers(2**63)), point=point)
        g_dot = float(v @ point.grad)
        s = -1.0 if g_dot < 0.0 else 1.0
        trace.append(k, k * delta, float(x @ x), point.energy / gmap.n,
                     rayleigh=rayleigh, sign=s, grad_overlap=g_dot)
        x = x - s * math.sqrt(delta) * v
    trace.append(K, K * delta, float(x @ x), gmap.energy(x) / gmap.n)
    x /= float(np.linalg.norm(x))
    return x, trace
