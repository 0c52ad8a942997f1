"""Linear constraint subspaces: the orthogonal complement of a small set of
anchor vectors (the current iterate, plus any vectors the walk must stay
orthogonal to)."""

from __future__ import annotations

import numpy as np


class DegenerateConstraintError(ValueError):
    """A constraint vector is (numerically) dependent on the previous ones."""

    def __init__(self, index: int):
        self.index = index
        super().__init__(f"constraint vector {index} is linearly dependent on "
                         "the earlier ones (or zero)")


class ConstraintSubspace:
    """Orthogonal complement of span{anchor, *extra_orthogonals}.

    The constraint vectors are orthonormalized once (modified Gram-Schmidt);
    `project` removes their span from a vector.

    skip_dependent=True silently drops extra vectors already spanned by the
    earlier constraints instead of raising; the anchor must always be
    independent (nonzero).  The walk needs this at its first step, where the
    iterate coincides with the vector it must stay orthogonal to.
    """

    def __init__(self, anchor, extra_orthogonals=(), tol: float = 1e-10,
                 skip_dependent: bool = False):
        vecs = [np.asarray(anchor, dtype=float)]
        vecs += [np.asarray(v, dtype=float) for v in extra_orthogonals]
        d = vecs[0].size
        basis = []
        for idx, v in enumerate(vecs):
            if v.shape != (d,):
                raise ValueError(f"constraint vector {idx} has shape {v.shape}, expected ({d},)")
            w = v.copy()
            for b in basis:
                w -= (b @ w) * b
            # second sweep stabilizes nearly dependent inputs
            for b in basis:
                w -= (b @ w) * b
            nw = np.linalg.norm(w)
            if nw <= tol * max(1.0, np.linalg.norm(v)):
                if skip_dependent and idx > 0:
                    continue
                raise DegenerateConstraintError(idx)
            basis.append(w / nw)
        self.dim_ambient = d
        self.basis = np.array(basis)  # rows orthonormal

    @property
    def codim(self) -> int:
        return self.basis.shape[0]

    def project(self, v):
        """Project v onto the subspace (drop components along the constraints)."""
        v = np.asarray(v, dtype=float)
        return v - self.basis.T @ (self.basis @ v)

    def contains(self, v, tol: float = 1e-8) -> bool:
        v = np.asarray(v, dtype=float)
        nv = np.linalg.norm(v)
        if nv == 0.0:
            return True
        return float(np.linalg.norm(self.basis @ v)) <= tol * nv


def tangent_projector_apply(x, v):
    """Project v onto the tangent space of the sphere through x:
    (I - x x^T / |x|^2) v."""
    x = np.asarray(x, dtype=float)
    v = np.asarray(v, dtype=float)
    r2 = float(x @ x)
    if r2 == 0.0:
        raise ValueError("tangent projector undefined at the origin")
    return v - (x @ v) / r2 * x
