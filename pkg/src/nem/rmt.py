"""Monte Carlo checks of the random-matrix claims behind the descent theory.

The synthetic ensemble is

    A = a sqrt(N) W + b Z^T Z,

with W an N x N GOE matrix (diagonal variance 2, off-diagonal 1), Z an
M x N matrix of i.i.d. standard normals, and alpha = M/N.  Its smallest
eigenvalue concentrates at -z_star(alpha, a, b) * N and its empirical
spectral distribution converges to the measure whose Stieltjes transform
the theory package computes.  The tangential Hessian of the energy of a
random map at a fixed independent point x with |x|^2 = q is a copy of this
ensemble with a = sqrt(2 alpha xi''(q) H(x)/n) and b = xi'(q), which is
what makes the descent analysis quantitative; verify_hessian_law rebuilds
the dense projected Hessian from sampled maps and checks that match.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
import scipy.linalg
import scipy.sparse.linalg as spla

from .gmap import GaussianMap, MemoryBudgetError
from .mixture import MixtureXi
from .theory import support_radius, z_star

# dense eigensolvers up to here, Lanczos on the shifted operator beyond
EDGE_DENSE_MAX = 1200
# above this even one N x N instance is out of budget on this machine
EDGE_N_MAX = 3000


@dataclass(frozen=True)
class EnsembleSpec:
    """Parameters of one A = a sqrt(N) W + b Z^T Z ensemble."""

    N: int
    M: int
    a: float
    b: float
    seed: int

    def __post_init__(self):
        if self.N < 1:
            raise ValueError(f"need N >= 1, got N={self.N}")
        if not 1 <= self.M <= self.N:
            raise ValueError(f"need 1 <= M <= N, got M={self.M}, N={self.N}")
        if self.a < 0.0 or self.b < 0.0:
            raise ValueError(f"a and b must be nonnegative, got a={self.a}, b={self.b}")

    @property
    def alpha(self) -> float:
        return self.M / self.N


class EdgeStats(NamedTuple):
    """Per-trial smallest eigenvalues of A/N and their summary statistics."""

    mean: float
    sd: float
    values: np.ndarray


class HessianLawReport(NamedTuple):
    """Per-trial projected-Hessian edges of sampled maps at one fixed point.

    lam_min_over_d pairs with z0, the edge predicted from each trial's own
    realized energy; u pairs with u_center = xi(q)/2, the mean of the
    chi-square energy law.
    """

    lam_min_over_d: np.ndarray
    z0: np.ndarray
    u: np.ndarray
    u_center: float
    q: float
    alpha: float


def _trial_rng(spec: EnsembleSpec, trial: int) -> np.random.Generator:
    # one counter-based stream per trial: trials are independent and can be
    # drawn in any order or on any worker
    seq = np.random.SeedSequence(entropy=spec.seed, spawn_key=(trial,))
    return np.random.Generator(np.random.Philox(seq))


def _check_edge_budget(N: int):
    if N > EDGE_N_MAX:
        raise MemoryBudgetError(
            f"eigensolve budget is N <= {EDGE_N_MAX}, got N={N}")


def _sample_parts(spec: EnsembleSpec, rng: np.random.Generator):
    """Draw (W, Z) for one trial, always in the same stream order."""
    G = rng.standard_normal((spec.N, spec.N))
    # (G + G^T)/sqrt(2) has off-diagonal variance 1 and diagonal variance 2
    W = (G + G.T) / math.sqrt(2.0)
    Z = rng.standard_normal((spec.M, spec.N))
    return W, Z


def _min_eig_dense(spec: EnsembleSpec, W, Z) -> float:
    A = (spec.a * math.sqrt(spec.N)) * W
    if spec.b > 0.0:
        A += spec.b * (Z.T @ Z)
    lam = scipy.linalg.eigh(A, eigvals_only=True, subset_by_index=(0, 0))
    return float(lam[0])


def _min_eig_lanczos(spec: EnsembleSpec, W, Z, rng: np.random.Generator) -> float:
    """Smallest eigenvalue via Lanczos on the shifted operator c*I - A.

    c sits above the spectral radius of A, so c*I - A is positive definite
    and its top eigenvalue c - lam_min(A) is the dominant one, which plain
    Lanczos iteration resolves quickly without factorizations.
    """
    N = spec.N
    c = N * support_radius(spec.alpha, spec.a, spec.b)
    asc = spec.a * math.sqrt(N)

    def matvec(v):
        Av = asc * (W @ v)
        if spec.b > 0.0:
            Av += spec.b * (Z.T @ (Z @ v))
        return c * v - Av

    op = spla.LinearOperator((N, N), matvec=matvec, dtype=float)
    v0 = rng.standard_normal(N)
    theta = spla.eigsh(op, k=1, which="LA", v0=v0, ncv=min(N, 48),
                       return_eigenvectors=False)
    return float(c - theta[0])


def sample_edge(spec: EnsembleSpec, trials: int = 5, method: str | None = None) -> EdgeStats:
    """Sample lam_min(A)/N over independent trials, returning EdgeStats.

    The limit is -z_star(alpha, a, b).  method picks the eigensolver:
    "dense" or "lanczos", defaulting to dense up to N = EDGE_DENSE_MAX and
    Lanczos beyond; both must agree, the dense path is the oracle.
    """
    _check_edge_budget(spec.N)
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    if method is None:
        method = "dense" if spec.N <= EDGE_DENSE_MAX else "lanczos"
    if method not in ("dense", "lanczos"):
        raise ValueError(f"unknown method {method!r}, expected 'dense' or 'lanczos'")
    values = np.empty(trials)
    for t in range(trials):
        rng = _trial_rng(spec, t)
        W, Z = _sample_parts(spec, rng)
        if method == "dense":
            lam = _min_eig_dense(spec, W, Z)
        else:
            lam = _min_eig_lanczos(spec, W, Z, rng)
        values[t] = lam / spec.N
    sd = float(values.std(ddof=1)) if trials > 1 else 0.0
    return EdgeStats(mean=float(values.mean()), sd=sd, values=values)


def spectral_cdf(spec: EnsembleSpec, grid) -> np.ndarray:
    """Empirical CDF of the eigenvalues of A/N at the given grid points.

    One instance is drawn (trial stream 0, so its smallest eigenvalue is
    the first value sample_edge reports) and fully diagonalized.
    """
    _check_edge_budget(spec.N)
    rng = _trial_rng(spec, 0)
    W, Z = _sample_parts(spec, rng)
    A = (spec.a * math.sqrt(spec.N)) * W
    if spec.b > 0.0:
        A += spec.b * (Z.T @ Z)
    eigs = np.linalg.eigvalsh(A) / spec.N
    grid = np.asarray(grid, dtype=float)
    return np.searchsorted(eigs, grid, side="right") / spec.N


def verify_hessian_law(xi: MixtureXi, n: int, d: int, q: float,
                       trials: int = 5, seed: int = 0) -> HessianLawReport:
    """Compare projected-Hessian edges of sampled maps against the theory.

    A point x with |x|^2 = q is drawn first, then `trials` independent maps;
    x never sees the couplings, which is what puts the Hessian at x in the
    synthetic ensemble's law.  For each map the dense Hessian of H is
    restricted to an orthonormal basis of the hyperplane orthogonal to x and
    its smallest eigenvalue over d is recorded next to the prediction

        z0 = -z_star(n/d; sqrt(2 (n/d) xi''(q) H(x)/n), xi'(q)),

    which uses the trial's own realized energy.  The energies H(x)/n are
    reported next to their chi-square center xi(q)/2.
    """
    if not (q > 0.0 and math.isfinite(q)):
        raise ValueError(f"need q > 0, got q={q}")
    if trials < 1:
        raise ValueError(f"need trials >= 1, got {trials}")
    meta = np.random.Generator(np.random.Philox(
        np.random.SeedSequence(entropy=seed, spawn_key=(0,))))
    x = meta.standard_normal(d)
    x *= math.sqrt(q) / float(np.linalg.norm(x))
    map_seeds = [int(meta.integers(2**63)) for _ in range(trials)]

    # Householder reflection sending e_1 to x/|x|: its last d-1 columns are
    # an orthonormal basis of the hyperplane orthogonal to x
    xhat = x / math.sqrt(q)
    w = xhat - np.eye(d)[:, 0]
    nw = float(np.linalg.norm(w))
    if nw < 1e-12:
        U = np.eye(d)[:, 1:]
    else:
        U = (np.eye(d) - (2.0 / nw**2) * np.outer(w, w))[:, 1:]

    alpha = n / d
    b = float(xi.eval(q, 1))
    ddxi = float(xi.eval(q, 2))
    lam = np.empty(trials)
    z0 = np.empty(trials)
    u = np.empty(trials)
    for t in range(trials):
        gmap = GaussianMap(xi, n, d, seed=map_seeds[t])
        point = gmap.at_point(x)
        hess = point.J.T @ point.J + point.M
        proj = U.T @ hess @ U
        lam[t] = scipy.linalg.eigh(proj, eigvals_only=True,
                                   subset_by_index=(0, 0))[0] / d
        u[t] = point.energy / n
        a_x = math.sqrt(max(0.0, 2.0 * alpha * ddxi * u[t]))
        z0[t] = -z_star(alpha, a_x, b)
        # drop the couplings before the next map is drawn, else two dense
        # tensors are alive at once and large mixtures blow the heap
        del gmap, point, hess, proj
    return HessianLawReport(lam_min_over_d=lam, z0=z0, u=u,
                            u_center=float(xi.eval(q)) / 2.0,
                            q=float(q), alpha=alpha)
