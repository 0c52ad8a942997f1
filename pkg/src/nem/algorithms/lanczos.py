"""Smallest-eigenvalue directions of the projected energy Hessian.

The walk needs, at every step, a unit vector v inside the constraint
subspace with Rayleigh quotient within an absolute tolerance of the
restricted minimum eigenvalue.  Lanczos with full reorthogonalization
delivers that in O(log(1/tol)) Hessian-vector products; each product costs
O(nd + d^2) after the one-time derivative precomputation at x.
"""

from __future__ import annotations

import numpy as np

_MAX_RESTARTS = 3


class LanczosBreakdownError(RuntimeError):
    """Krylov space degenerated on every restart attempt."""


def min_eig_direction(gmap, x, subspace, tol_abs, max_lanczos, seed, point=None):
    """Return (v, rayleigh) with v a unit vector in the subspace and
    rayleigh = <v, Hess H(x) v> certified within tol_abs of the minimum
    eigenvalue of the Hessian restricted to the subspace.

    Certification uses the standard residual bound: a Ritz pair (theta, y)
    of the j-step tridiagonal matrix satisfies |A y - theta y| = beta_j
    |y_j|, so once that falls below tol_abs/2 the Ritz value sits within
    tol_abs/2 of a true eigenvalue, and Ritz values bound the minimum from
    above.  If the Krylov space degenerates (beta ~ 0) before certification
    the iteration restarts from a fresh random vector, at most 3 times.  If
    the iteration budget runs out the best uncertified Ritz pair is
    returned; callers pass max_lanczos ~ 40 log(1/delta), which in practice
    certifies at the d*delta tolerances the walk uses.

    A caller that already holds the derivative data at x (gmap.at_point)
    passes it as `point` to skip recomputing it.
    """
    if not (tol_abs > 0.0):
        raise ValueError(f"need tol_abs > 0, got {tol_abs}")
    if max_lanczos < 1:
        raise ValueError(f"need max_lanczos >= 1, got {max_lanczos}")
    x = np.asarray(x, dtype=float)
    if np.linalg.norm(subspace.project(x)) > 1e-8 * max(1.0, np.linalg.norm(x)):
        raise ValueError("subspace is not anchored at x (x must be spanned "
                         "by the constraint vectors)")
    if point is None:
        point = gmap.at_point(x)
    dim = subspace.dim_ambient - subspace.codim
    budget = min(int(max_lanczos), dim)
    rng = np.random.default_rng(seed)
    best = None  # (theta, v) with smallest uncertified Ritz value seen

    for attempt in range(1 + _MAX_RESTARTS):
        v0 = subspace.project(rng.standard_normal(gmap.d))
        nv0 = float(np.linalg.norm(v0))
        if nv0 == 0.0:
            continue
        q = v0 / nv0
        basis = [q]
        alphas = []
        betas = []
        scale = 1.0
        for _ in range(budget):
            w = point.hvp_in(q, subspace)
            a = float(q @ w)
            alphas.append(a)
            w -= a * q
            if betas:
                w -= betas[-1] * basis[-2]
            # full reorthogonalization keeps the basis usable well past the
            # point where plain three-term recurrence loses orthogonality
            w -= np.asarray(basis).T @ (np.asarray(basis) @ w)
            w = subspace.project(w)
            b = float(np.linalg.norm(w))
            scale = max(scale, abs(a), b)
            theta, y = _min_ritz(alphas, betas)
            resid = b * abs(y[-1])
            if resid <= 0.5 * tol_abs or len(alphas) == dim:
                return _assemble(point, subspace, basis, y)
            if b <= 1e-13 * scale:
                break  # degenerate Krylov space, cannot certify further
            betas.append(b)
            q = w / b
            basis.append(q)
        j = len(alphas)
        theta, y = _min_ritz(alphas, betas[:j - 1])
        cand = _assemble(point, subspace, basis[:j], y)
        if best is None or cand[1] < best[1]:
            best = cand
        if j == budget:
            return best  # budget exhausted, not degenerate: best effort
    raise LanczosBreakdownError(
        f"Krylov space degenerated before certification on {1 + _MAX_RESTARTS} "
        f"attempts (tol_abs={tol_abs}, max_lanczos={max_lanczos})")


def _min_ritz(alphas, betas):
    """Smallest eigenpair of the tridiagonal with diag alphas, offdiag betas."""
    if len(alphas) == 1:
        return alphas[0], np.ones(1)
    vals, vecs = np.linalg.eigh(np.diag(alphas) + np.diag(betas, 1) + np.diag(betas, -1))
    return float(vals[0]), vecs[:, 0]


def _assemble(point, subspace, basis, y):
    v = np.asarray(basis).T @ y
    v = subspace.project(v)
    v /= np.linalg.norm(v)
    rayleigh = float(v @ point.hvp_in(v, subspace))
    return v, rayleigh
