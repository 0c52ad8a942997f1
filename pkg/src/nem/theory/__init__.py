"""Closed-form, variational, root-finding, and ODE predictions for the
sphere-constrained random equations model: where solutions exist, the
ground-state energy when they stop existing, and what each algorithm
family can reach."""

from .descent_ode import HdBounds, OdeCurve, alpha_hd, hd_bounds, hd_ode
from .edge import q_of_m, stieltjes, support_radius, z_star
from .existence import alpha_lb, psi
from .ground_state import e_star_parisi, e_star_pure, theta_p
from .report import TheoryReport, build_theory_report
from .rs import (
    RsQuantities,
    gamma_for_overlap,
    rs_quantities,
    state_evolution,
    u_rs_value,
)
from .thresholds import alpha_gd_threshold, alpha_tp
from .upper_bounds import alpha_ub1, alpha_ub2, phi1, phi2

__all__ = [
    "HdBounds",
    "OdeCurve",
    "RsQuantities",
    "TheoryReport",
    "alpha_gd_threshold",
    "alpha_hd",
    "alpha_lb",
    "alpha_tp",
    "alpha_ub1",
    "alpha_ub2",
    "build_theory_report",
    "e_star_parisi",
    "e_star_pure",
    "gamma_for_overlap",
    "hd_bounds",
    "hd_ode",
    "phi1",
    "phi2",
    "psi",
    "q_of_m",
    "rs_quantities",
    "state_evolution",
    "stieltjes",
    "support_radius",
    "theta_p",
    "u_rs_value",
    "z_star",
]
