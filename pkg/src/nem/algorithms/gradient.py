"""Projected gradient descent on the sphere."""

from __future__ import annotations

import numpy as np

from ..subspace import tangent_projector_apply
from ..trace import RunTrace


def gradient_descent(gmap, eta, max_iters, seed, stop_energy=0.0):
    """Minimize H = |F|^2/2 over the unit sphere, returning (x, trace).

    Starting from a uniform random point x^0 on the sphere, each iteration
    steps against the tangential gradient and renormalizes:

        z^{k+1} = x^k - eta (I - x x^T) DF(x^k)^T F(x^k)
        x^{k+1} = z^{k+1} / |z^{k+1}|

    The run stops after max_iters updates or as soon as the energy H(x^k)
    drops to stop_energy or below.  Non-convergence is not an error; the
    caller reads the trace.  The trace records one row per visited iterate
    (including the final one) with u = H/n and the squared tangential
    gradient norm.
    """
    if not (eta > 0.0 and np.isfinite(eta)):
        raise ValueError(f"need a positive finite step size, got eta={eta}")
    if max_iters < 1:
        raise ValueError(f"need max_iters >= 1, got {max_iters}")
    n, d = gmap.n, gmap.d
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(d)
    x /= np.linalg.norm(x)
    trace = RunTrace("gd", meta={"eta": float(eta), "max_iters": int(max_iters),
                                 "seed": int(seed), "stop_energy": float(stop_energy)})

    for k in range(max_iters + 1):
        F = gmap.evaluate(x)
        energy = 0.5 * float(F @ F)
        grad_t = tangent_projector_apply(x, gmap.jacobian_apply(x, F, transpose=True))
        trace.append(k, float(k), float(x @ x), energy / n,
                     grad_sq=float(grad_t @ grad_t))
        if energy <= stop_energy or k == max_iters:
            break
        z = x - eta * grad_t
        nz = float(np.linalg.norm(z))
        if not (nz > 0.0 and np.isfinite(nz)):
            raise ValueError(f"step collapsed the iterate at k={k} (|z|={nz}); "
                             "eta is out of scale for this map")
        x = z / nz
    return x, trace
