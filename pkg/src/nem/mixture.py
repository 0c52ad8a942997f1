"""Mixture covariance functions xi(t) = sum_k xi_k t^k with nonnegative weights."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class MixtureXi:
    """Polynomial covariance mixture xi(t) = sum_{k>=0} coeffs[k] * t^k.

    All coefficients must be nonnegative (they are squared weights of the
    independent degree-k components of the random map) and at least one
    must be positive so that xi(1) > 0.
    """

    coeffs: tuple = field(default_factory=tuple)

    def __post_init__(self):
        c = tuple(float(v) for v in self.coeffs)
        if not c:
            raise ValueError("mixture needs at least one coefficient")
        if any(v < 0.0 for v in c):
            k = next(i for i, v in enumerate(c) if v < 0.0)
            raise ValueError(f"negative mixture coefficient xi_{k} = {c[k]}")
        if not any(v > 0.0 for v in c):
            raise ValueError("xi(1) must be positive, all coefficients are zero")
        # strip trailing zeros so degree() is meaningful
        last = max(i for i, v in enumerate(c) if v > 0.0)
        object.__setattr__(self, "coeffs", c[: last + 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, t, order: int = 0):
        return self.eval(t, order)

    def eval(self, t, order: int = 0):
        """Evaluate the order-th derivative of xi at t (exact polynomial arithmetic).

        d^l/dt^l sum_k xi_k t^k = sum_{k>=l} xi_k * k!/(k-l)! * t^(k-l)
        """
        if order < 0:
            raise ValueError("derivative order must be >= 0")
        import numpy as np

        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for k in range(len(self.coeffs) - 1, order - 1, -1):
            ck = self.coeffs[k] * math.factorial(k) / math.factorial(k - order)
            out = out * t + ck
        if order > len(self.coeffs) - 1:
            out = np.zeros_like(t)
        return out if out.ndim else float(out)

    def active_degrees(self):
        """Degrees k with xi_k > 0, ascending."""
        return [k for k, v in enumerate(self.coeffs) if v > 0.0]

    def without_constant(self) -> "MixtureXi":
        """The centered part xi(t) - xi(0)."""
        if len(self.coeffs) == 1:
            raise ValueError("xi is a pure constant, xi - xi(0) would vanish")
        return MixtureXi((0.0,) + self.coeffs[1:])

    def is_linear(self) -> bool:
        return self.degree <= 1

    @classmethod
    def parse(cls, text: str) -> "MixtureXi":
        """Parse '1,0,0,1' style comma-separated coefficient lists."""
        parts = [p.strip() for p in text.split(",") if p.strip()]
        if not parts:
            raise ValueError(f"cannot parse mixture coefficients from {text!r}")
        return cls(tuple(float(p) for p in parts))

    def format(self) -> str:
        return ",".join(repr(v) for v in self.coeffs)
