"""Random-label interpolation with a two-layer ELU network.

The network is f(z; W) = (a/sqrt(m)) sum_j s_j sigma(<w_j, z>) with fixed
balanced signs s and weights constrained to the Frobenius ball
|W|_F^2 <= m.  Fitting n random labels y_i in {+-1} against Gaussian
inputs z_i by SGD is the finite-size stand-in for solving F(x) = 0 with
x = W/sqrt(m) in d = m*D dimensions, and H = n * training error.

The covariance-matching construction turns the network into a polynomial
mixture for the theory modules: the linear component of the activation is
projected out first (it has only D degrees of freedom, not m*D, so the
rotationally invariant model would badly overcount it), then

    xi(q) = 1 + a^2 [K(q) - sigma1^2 q],   K(q) = E sigma(G1) sigma(G2)

with (G1, G2) standard normal with correlation q.  Expanding sigma in
Hermite polynomials writes K as a power series with squared coefficients,
which is what makes the matched xi a valid nonnegative mixture.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .mixture import MixtureXi
from .trace import RunTrace


def elu(x):
    """ELU activation: x for x >= 0, exp(x) - 1 below; C^1 at the origin."""
    x = np.asarray(x, dtype=float)
    out = np.maximum(x, 0.0) + np.expm1(np.minimum(x, 0.0))
    return float(out) if out.ndim == 0 else out


def _elu_prime(x):
    # 1 for x >= 0, exp(x) below; exp(min(x, 0)) covers both branches
    return np.exp(np.minimum(x, 0.0))


def _gh_nodes(nodes):
    x, w = np.polynomial.hermite_e.hermegauss(nodes)
    return x, w / math.sqrt(2.0 * math.pi)


def kernel_quadrature(q, nodes=64, sigma: Callable = elu):
    """(K(q), sigma1) by Gauss-Hermite quadrature, default 64 nodes per axis.

    K(q) = E[sigma(G1) sigma(G2)] for unit Gaussians with correlation q is
    reduced to the conditional form G2 = q G1 + sqrt(1-q^2) G3 and summed on
    the tensorized rule; sigma1 = E[G sigma(G)] comes from the same nodes.
    """
    q = float(q)
    if not -1.0 <= q <= 1.0:
        raise ValueError(f"correlation must be in [-1, 1], got q={q}")
    x, w = _gh_nodes(nodes)
    sig = np.asarray(sigma(x), dtype=float)
    sigma1 = float(w @ (x * sig))
    root = math.sqrt(max(0.0, 1.0 - q * q))
    inner = np.asarray(sigma(q * x[:, None] + root * x[None, :]), dtype=float)
    K = float(w @ ((sig[:, None] * inner) @ w))
    return K, sigma1


@dataclass(frozen=True)
class ActivationKernel:
    """Covariance kernel data of one activation under Gaussian inputs."""

    sigma1: float
    K: Callable
    K0: Callable


def activation_kernel(nodes=64, sigma: Callable = elu) -> ActivationKernel:
    """Bundle K, the de-linearized K0(q) = K(q) - sigma1^2 q, and sigma1."""
    _, sigma1 = kernel_quadrature(0.0, nodes=nodes, sigma=sigma)

    def K(q):
        return kernel_quadrature(q, nodes=nodes, sigma=sigma)[0]

    def K0(q):
        return K(q) - sigma1 * sigma1 * q

    return ActivationKernel(sigma1=sigma1, K=K, K0=K0)


def xi_from_network(a, degree_cap=12, nodes=64, sigma: Callable = elu) -> MixtureXi:
    """Covariance-matched mixture xi(q) = 1 + a^2 [K(q) - sigma1^2 q].

    The Hermite coefficients mu_k = E[sigma(G) He_k(G)] give
    K(q) = sum_k mu_k^2 q^k / k!, so the matched coefficients are squares
    and nonnegative up to quadrature noise; tiny negatives are clipped, a
    real negative means the activation does not fit this model.  The k = 1
    term is removed exactly (mu_1 is sigma1), which kills the linear part.
    """
    if a < 0.0:
        raise ValueError(f"scale must be nonnegative, got a={a}")
    if degree_cap < 3:
        raise ValueError(f"need degree_cap >= 3, got {degree_cap}")
    x, w = _gh_nodes(nodes)
    sig = np.asarray(sigma(x), dtype=float)
    coeffs = [0.0] * (degree_cap + 1)
    hk_prev = np.zeros_like(x)
    hk = np.ones_like(x)
    for k in range(degree_cap + 1):
        mu_k = float(w @ (sig * hk))
        coeffs[k] = a * a * mu_k * mu_k / math.factorial(k)
        hk_prev, hk = hk, x * hk - k * hk_prev
    coeffs[0] += 1.0
    coeffs[1] = 0.0
    for k, c in enumerate(coeffs):
        if c < -1e-6:
            raise ValueError(
                f"matched coefficient xi_{k} = {c} is significantly negative; "
                "the activation does not admit this covariance model")
        # quadrature dust, on either side of zero, is not a real component
        if abs(c) < 1e-12:
            coeffs[k] = 0.0
    return MixtureXi(tuple(coeffs))


@dataclass(frozen=True)
class NNConfig:
    """Architecture, data size and SGD settings for one training run."""

    m: int
    D: int
    n: int
    a: float
    lr: float
    epochs: int
    batch: int = 4
    eps_init: float = 0.03
    seed: int = 0

    def __post_init__(self):
        if self.m < 2 or self.m % 2 != 0:
            raise ValueError(f"m must be even and positive, got m={self.m}")
        if self.D < 1 or self.n < 1:
            raise ValueError(f"need D >= 1 and n >= 1, got D={self.D}, n={self.n}")
        if not self.a > 0.0:
            raise ValueError(f"scale must be positive, got a={self.a}")
        if not self.lr > 0.0:
            raise ValueError(f"learning rate must be positive, got lr={self.lr}")
        if self.epochs < 1:
            raise ValueError(f"need epochs >= 1, got {self.epochs}")
        if self.batch < 1:
            raise ValueError(f"need batch >= 1, got {self.batch}")
        if not self.eps_init > 0.0:
            raise ValueError(f"init scale must be positive, got {self.eps_init}")

    @property
    def alpha(self) -> float:
        """Samples per parameter, n / (m D)."""
        return self.n / (self.m * self.D)


def _project(W, m):
    """Scale W back onto the ball |W|_F^2 <= m if the step left it."""
    norm = float(np.linalg.norm(W))
    bound = math.sqrt(m)
    if norm > bound:
        return W * (bound / norm)
    return W


def train_interpolation(cfg: NNConfig) -> RunTrace:
    """SGD on random labels under the Frobenius-ball constraint.

    Labels y ~ Unif{+-1} and inputs z ~ N(0, I_D) are drawn independently,
    the signs are a balanced random pattern, and W starts at
    N(0, eps_init^2 I / D), near the center of the ball.  Steps follow

        W <- project(W - (eta_k / 2) sum_{i in B} grad (y_i - f(z_i; W))^2)

    with eta_k = lr / sqrt(1 + E(k)) and epoch index E(k) = floor(k*batch/n);
    minibatches are a fresh random permutation each epoch.  The trace has one
    row per epoch (step 0 is the initial state) with u = training error
    R_hat = |y - f|^2 / (2n) and radius_sq = |W|_F^2 / m; aux columns carry
    the stepsize and the largest post-step radius seen inside the epoch.
    """
    rng = np.random.default_rng(cfg.seed)
    m, D, n = cfg.m, cfg.D, cfg.n
    Z = rng.standard_normal((n, D))
    y = rng.integers(0, 2, size=n).astype(float) * 2.0 - 1.0
    s = np.repeat([1.0, -1.0], m // 2)
    s = s[rng.permutation(m)]
    W = rng.standard_normal((m, D)) * (cfg.eps_init / math.sqrt(D))
    scale = cfg.a / math.sqrt(m)

    def risk(W):
        preds = scale * (elu(Z @ W.T) @ s)
        return float(np.sum((y - preds) ** 2)) / (2.0 * n)

    trace = RunTrace("nn", meta={
        "m": m, "D": D, "n": n, "a": cfg.a, "lr": cfg.lr,
        "epochs": cfg.epochs, "batch": cfg.batch,
        "eps_init": cfg.eps_init, "seed": cfg.seed, "alpha": cfg.alpha})
    radius = float(W.ravel() @ W.ravel()) / m
    trace.append(0, 0.0, radius, risk(W), eta=cfg.lr, max_radius_sq=radius)

    k = 0
    for epoch in range(cfg.epochs):
        order = rng.permutation(n)
        eta_first = cfg.lr / math.sqrt(1.0 + (k * cfg.batch) // n)
        max_radius = 0.0
        for lo in range(0, n, cfg.batch):
            idx = order[lo:lo + cfg.batch]
            eta = cfg.lr / math.sqrt(1.0 + (k * cfg.batch) // n)
            Zb = Z[idx]
            pre = Zb @ W.T
            resid = y[idx] - scale * (elu(pre) @ s)
            # (eta/2) grad of the squared residuals, summed over the batch
            back = (resid[:, None] * _elu_prime(pre)) * s[None, :]
            W = _project(W + (eta * scale) * (back.T @ Zb), m)
            max_radius = max(max_radius, float(W.ravel() @ W.ravel()) / m)
            k += 1
        trace.append(epoch + 1, float(epoch + 1),
                     float(W.ravel() @ W.ravel()) / m, risk(W),
                     eta=eta_first, max_radius_sq=max_radius)
    return trace
