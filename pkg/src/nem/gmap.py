"""Dense Gaussian random polynomial maps F: R^d -> R^n with covariance
E[F_i(x) F_j(y)] = delta_ij * xi(<x, y>).

Each degree-k component with xi_k > 0 is represented by an i.i.d. standard
normal coupling array of shape (n, d, ..., d) (k trailing axes, stored dense
and non-symmetrized):

    F_i(x) = sum_k sqrt(xi_k) * sum_{j1..jk} G^(k)[i, j1..jk] x_j1 ... x_jk

Couplings are regenerated on demand from the seed; a saved snapshot stores
only the header (no payload).
"""

from __future__ import annotations

import io
import struct
from dataclasses import dataclass

import numpy as np

from .mixture import MixtureXi
from .subspace import ConstraintSubspace

_AXIS_LETTERS = "abcdefgh"
DEFAULT_BUDGET_BYTES = 2 << 30  # 2 GiB
DEFAULT_BALL_SLACK = 0.05

_SNAPSHOT_MAGIC = b"NEMMAP\x00\x00"
_SNAPSHOT_VERSION = 1


class MemoryBudgetError(MemoryError):
    """Dense coupling storage would exceed the configured budget."""


class OutsideBallError(ValueError):
    """Query point lies outside the model ball (radius 1 plus slack)."""


def _coupling_bytes(n: int, d: int, degrees, itemsize: int) -> int:
    return sum(n * d**k * itemsize for k in degrees)


class GaussianMap:
    """A sampled instance of the random map, with exact derivative actions.

    Arrays are read-only after sampling; the map is fully determined by
    (xi, n, d, seed, dtype).
    """

    def __init__(self, xi: MixtureXi, n: int, d: int, seed: int,
                 budget_bytes: int = DEFAULT_BUDGET_BYTES,
                 ball_slack: float = DEFAULT_BALL_SLACK,
                 dtype=np.float64):
        if n < 1 or d < 1:
            raise ValueError(f"need n >= 1 and d >= 1, got n={n}, d={d}")
        self.xi = xi
        self.n = int(n)
        self.d = int(d)
        self.seed = int(seed)
        self.ball_slack = float(ball_slack)
        self.dtype = np.dtype(dtype)
        degrees = xi.active_degrees()
        need = _coupling_bytes(self.n, self.d, degrees, self.dtype.itemsize)
        if need > budget_bytes:
            worst = max(degrees)
            raise MemoryBudgetError(
                f"dense couplings need {need/2**30:.2f} GiB "
                f"(worst tensor: degree {worst}, n*d^{worst} = {self.n * self.d**worst} entries) "
                f"but the budget is {budget_bytes/2**30:.2f} GiB")
        self._couplings = {}
        for k in degrees:
            # one counter-based stream per tensor: reproducible regardless of
            # the order tensors are drawn in, and across thread counts
            bitgen = np.random.Philox(np.random.SeedSequence(entropy=self.seed, spawn_key=(k,)))
            g = np.random.Generator(bitgen).standard_normal(
                size=(self.n,) + (self.d,) * k, dtype=self.dtype)
            g.flags.writeable = False
            self._couplings[k] = g

    # -- basic queries ---------------------------------------------------

    def coupling(self, k: int):
        return self._couplings[k]

    def _check_ball(self, x):
        r = float(np.linalg.norm(x))
        if r > 1.0 + self.ball_slack:
            raise OutsideBallError(
                f"|x| = {r:.6f} exceeds 1 + slack = {1.0 + self.ball_slack}")

    def _as_vec(self, v):
        v = np.asarray(v, dtype=self.dtype)
        if v.shape != (self.d,):
            raise ValueError(f"expected shape ({self.d},), got {v.shape}")
        return v

    def evaluate(self, x):
        """F(x), shape (n,)."""
        x = self._as_vec(x)
        self._check_ball(x)
        F = np.zeros(self.n, dtype=self.dtype)
        for k, g in self._couplings.items():
            if k == 0:
                part = g.astype(self.dtype, copy=True)
            else:
                part = g.reshape(self.n, -1)
                for _ in range(k):
                    part = (part.reshape(-1, self.d) @ x).reshape(self.n, -1)
                part = part.reshape(self.n)
            F += np.sqrt(self.xi.coeffs[k]) * part
        return F

    def energy(self, x) -> float:
        """H(x) = |F(x)|^2 / 2."""
        F = self.evaluate(x)
        return 0.5 * float(F @ F)

    def jacobian_apply(self, x, v, transpose: bool = False):
        """DF(x) v (shape n) or DF(x)^T v (shape d).

        The derivative of a degree-k term sums over all k slot positions the
        coupling can hit the direction vector in; the couplings are not
        symmetrized, so the slots genuinely differ.
        """
        x = self._as_vec(x)
        self._check_ball(x)
        if transpose:
            v = np.asarray(v, dtype=self.dtype)
            if v.shape != (self.n,):
                raise ValueError(f"expected shape ({self.n},), got {v.shape}")
            out = np.zeros(self.d, dtype=self.dtype)
            for k, g in self._couplings.items():
                if k == 0:
                    continue
                u = np.tensordot(v, g, axes=(0, 0))  # shape (d,)*k
                acc = np.zeros(self.d, dtype=self.dtype)
                for s in range(k):
                    acc += _contract_all_but_one(u, x, s)
                out += np.sqrt(self.xi.coeffs[k]) * acc
            return out
        v = self._as_vec(v)
        out = np.zeros(self.n, dtype=self.dtype)
        for k, g in self._couplings.items():
            if k == 0:
                continue
            t = g.reshape(self.n, -1)
            acc = np.zeros(self.d**k, dtype=self.dtype)
            for s in range(k):
                acc += _outer_power_with(x, k, s, v)
            out += np.sqrt(self.xi.coeffs[k]) * (t @ acc)
        return out

    def grad_energy(self, x):
        """grad H(x) = DF(x)^T F(x), shape (d,)."""
        return self.at_point(x).grad

    def hessian_energy_apply(self, x, v, subspace: ConstraintSubspace | None = None,
                             tol: float = 1e-8):
        """(P Hess H(x) P) v, P the projector onto the constraint subspace.

        Without a subspace this is the ambient Hessian-vector product.  With
        one, v must already lie in the subspace (within tol, relative).
        """
        point = self.at_point(x)
        v = self._as_vec(v)
        if subspace is None:
            return point.hvp(v)
        pv = subspace.project(v)
        nv = float(np.linalg.norm(v))
        if nv > 0 and float(np.linalg.norm(v - pv)) > tol * nv:
            raise ValueError("direction is not inside the constraint subspace "
                             f"(relative deviation {np.linalg.norm(v - pv)/nv:.3e} > {tol})")
        return subspace.project(point.hvp(pv))

    def at_point(self, x) -> "MapPoint":
        """Precompute F, DF and the weighted second-derivative matrix at x.

        After this, Hessian-vector products cost O(n d + d^2) each, which is
        what makes Lanczos iterations affordable.
        """
        x = self._as_vec(x)
        self._check_ball(x)
        F = np.zeros(self.n, dtype=self.dtype)
        J = np.zeros((self.n, self.d), dtype=self.dtype)
        for k, g in self._couplings.items():
            w = np.sqrt(self.xi.coeffs[k])
            if k == 0:
                F += w * g
                continue
            # right[j] = coupling contracted with x on the trailing k-j slots
            right = [None] * (k + 1)
            right[k] = g.reshape(self.n, -1)
            for j in range(k, 0, -1):
                right[j - 1] = (right[j].reshape(-1, self.d) @ x).reshape(self.n, -1)
            F += w * right[0].reshape(self.n)
            for s in range(k):
                # keep slot s free, contract the s slots before it too
                block = right[s + 1].reshape(self.n, -1)
                for _ in range(s):
                    block = np.tensordot(block.reshape(self.n, self.d, -1), x, axes=(1, 0))
                J += w * block.reshape(self.n, self.d)
        M = np.zeros((self.d, self.d), dtype=self.dtype)
        for k, g in self._couplings.items():
            if k < 2:
                continue
            w = np.sqrt(self.xi.coeffs[k])
            u = np.tensordot(F, g, axes=(0, 0))  # (d,)*k, one pass over g
            for s in range(k):
                for tt in range(s + 1, k):
                    pair = _contract_all_but_two(u, x, s, tt)
                    M += w * (pair + pair.T)
        return MapPoint(self, x, F, J, M)


@dataclass
class MapPoint:
    """Cached derivative data of a map at a fixed point."""

    gmap: GaussianMap
    x: np.ndarray
    F: np.ndarray
    J: np.ndarray   # DF(x), rows are gradients of the equations
    M: np.ndarray   # sum_i F_i(x) * Hess F_i(x)

    @property
    def energy(self) -> float:
        return 0.5 * float(self.F @ self.F)

    @property
    def grad(self):
        return self.J.T @ self.F

    def hvp(self, v):
        """Hess H(x) v = DF^T DF v + sum_i F_i Hess F_i v."""
        return self.J.T @ (self.J @ v) + self.M @ v

    def hvp_in(self, v, subspace: ConstraintSubspace):
        return subspace.project(self.hvp(subspace.project(v)))


# -- contraction helpers -------------------------------------------------

def _outer_power_with(x, k, slot, v):
    """Flattened x (x) ... v at position slot ... (x) x."""
    parts = [x] * k
    parts[slot] = v
    out = parts[0]
    for p in parts[1:]:
        out = np.multiply.outer(out, p)
    return out.reshape(-1)


def _contract_all_but_one(u, x, slot):
    """Contract all axes of u (shape (d,)*k) with x except `slot`."""
    k = u.ndim
    sub = _AXIS_LETTERS[:k]
    operands = [u]
    expr = [sub]
    for s in range(k):
        if s != slot:
            operands.append(x)
            expr.append(sub[s])
    return np.einsum(",".join(expr) + "->" + sub[slot], *operands, optimize=True)


def _contract_all_but_two(u, x, s1, s2):
    """Contract all axes of u with x except s1 < s2; result (d, d)."""
    k = u.ndim
    sub = _AXIS_LETTERS[:k]
    operands = [u]
    expr = [sub]
    for s in range(k):
        if s not in (s1, s2):
            operands.append(x)
            expr.append(sub[s])
    return np.einsum(",".join(expr) + "->" + sub[s1] + sub[s2], *operands, optimize=True)


# -- module-level operations (functional spellings) ----------------------

def sample_map(xi: MixtureXi, n: int, d: int, seed: int,
               budget_bytes: int = DEFAULT_BUDGET_BYTES,
               ball_slack: float = DEFAULT_BALL_SLACK,
               dtype=np.float64) -> GaussianMap:
    return GaussianMap(xi, n, d, seed, budget_bytes=budget_bytes,
                       ball_slack=ball_slack, dtype=dtype)


def map_eval(gmap: GaussianMap, x):
    return gmap.evaluate(x)


def jacobian_apply(gmap: GaussianMap, x, v, transpose: bool = False):
    return gmap.jacobian_apply(x, v, transpose=transpose)


def grad_energy(gmap: GaussianMap, x):
    return gmap.grad_energy(x)


def hessian_energy_apply(gmap: GaussianMap, x, v, subspace=None, tol: float = 1e-8):
    return gmap.hessian_energy_apply(x, v, subspace=subspace, tol=tol)


# -- snapshots: header only, payload regenerated from the seed -----------

def save_snapshot(gmap: GaussianMap, path):
    header = struct.pack("<8sIQQq", _SNAPSHOT_MAGIC, _SNAPSHOT_VERSION,
                         gmap.n, gmap.d, gmap.seed)
    coeffs = np.asarray(gmap.xi.coeffs, dtype="<f8")
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(struct.pack("<I", coeffs.size))
        fh.write(coeffs.tobytes())


def load_snapshot(path, budget_bytes: int = DEFAULT_BUDGET_BYTES,
                  ball_slack: float = DEFAULT_BALL_SLACK,
                  dtype=np.float64) -> GaussianMap:
    with open(path, "rb") as fh:
        raw = fh.read()
    buf = io.BytesIO(raw)
    head_size = struct.calcsize("<8sIQQq")
    head = buf.read(head_size)
    if len(head) < head_size or not head.startswith(_SNAPSHOT_MAGIC):
        raise ValueError(f"not a map snapshot (bad magic in {len(raw)}-byte file)")
    magic, version, n, d, seed = struct.unpack("<8sIQQq", head)
    if magic != _SNAPSHOT_MAGIC:
        raise ValueError(f"not a map snapshot (magic {magic!r})")
    if version != _SNAPSHOT_VERSION:
        raise ValueError(f"unsupported snapshot version {version}")
    (ncoef,) = struct.unpack("<I", buf.read(4))
    coeffs = np.frombuffer(buf.read(8 * ncoef), dtype="<f8")
    if coeffs.size != ncoef:
        raise ValueError("truncated snapshot")
    xi = MixtureXi(tuple(coeffs))
    return GaussianMap(xi, n, d, seed, budget_bytes=budget_bytes,
                       ball_slack=ball_slack, dtype=dtype)
