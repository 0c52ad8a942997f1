"""Random nonlinear equations on the sphere: sampled polynomial maps,
sphere-constrained solvers, and the matching phase-boundary theory."""

from .mixture import MixtureXi
from .gmap import (GaussianMap, MemoryBudgetError, OutsideBallError,
                   sample_map, map_eval, jacobian_apply, grad_energy,
                   hessian_energy_apply, save_snapshot, load_snapshot)
from .subspace import ConstraintSubspace, DegenerateConstraintError, tangent_projector_apply
from .trace import RunTrace, TraceRecord, TRACE_SCHEMA

__version__ = "0.1.0"

__all__ = [
    "MixtureXi", "GaussianMap", "MemoryBudgetError", "OutsideBallError",
    "sample_map", "map_eval", "jacobian_apply", "grad_energy",
    "hessian_energy_apply", "save_snapshot", "load_snapshot",
    "ConstraintSubspace", "DegenerateConstraintError", "tangent_projector_apply",
    "RunTrace", "TraceRecord", "TRACE_SCHEMA",
]
