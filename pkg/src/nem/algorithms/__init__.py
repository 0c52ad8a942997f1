"""Solvers: projected gradient descent, Hessian descent, message passing,
and the two-phase combination."""

from .amp import AmpDivergenceError, amp_phase
from .gradient import gradient_descent
from .hessian_walk import hessian_descent
from .lanczos import LanczosBreakdownError, min_eig_direction
from .two_phase import two_phase

__all__ = [
    "AmpDivergenceError",
    "LanczosBreakdownError",
    "amp_phase",
    "gradient_descent",
    "hessian_descent",
    "min_eig_direction",
    "two_phase",
]
