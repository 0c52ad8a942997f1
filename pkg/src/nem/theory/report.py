"""Assemble every scalar prediction for one mixture into a report."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field, fields

import numpy as np

from .descent_ode import alpha_hd, hd_bounds, hd_ode
from .existence import alpha_lb
from .ground_state import e_star_parisi
from .rs import rs_quantities
from .thresholds import alpha_gd_threshold, alpha_tp
from .upper_bounds import alpha_ub1, alpha_ub2

_HEADER = "nem-theory-report v1"


@dataclass
class TheoryReport:
    """Scalar phase-boundary predictions plus the sampled energy curve.

    Fields a mixture does not support (a threshold whose hypotheses it
    violates, say) hold NaN, with the reason recorded in notes under the
    field name. ode_t/ode_u tabulate u(t) from the descent ODE at this
    alpha, started from the uniform-random energy xi(0)/2.
    """

    xi_coeffs: tuple
    alpha: float
    c0: float
    alpha_lb: float = math.nan
    alpha_ub1: float = math.nan
    eps0: float = math.nan
    alpha_ub2: float = math.nan
    alpha_gd: float = math.nan
    alpha_hd: float = math.nan
    alpha_tp: float = math.nan
    e_star: float = math.nan
    q_rs: float = math.nan
    q0: float = math.nan
    q_star: float = math.nan
    gamma_star: float = math.nan
    u_rs: float = math.nan
    A_xi: float = math.nan
    u_lb: float = math.nan
    u_ub: float = math.nan
    ode_t: tuple = ()
    ode_u: tuple = ()
    notes: dict = field(default_factory=dict)

    def scalar_items(self):
        skip = {"xi_coeffs", "ode_t", "ode_u", "notes"}
        return [(f.name, getattr(self, f.name)) for f in fields(self) if f.name not in skip]

    def to_json(self):
        def enc(v):
            if isinstance(v, float) and not math.isfinite(v):
                return str(v)  # strict JSON has no nan/inf literals
            return v

        payload = {"format": _HEADER, "xi_coeffs": list(self.xi_coeffs)}
        payload.update((k, enc(v)) for k, v in self.scalar_items())
        payload["ode_t"] = list(self.ode_t)
        payload["ode_u"] = list(self.ode_u)
        payload["notes"] = dict(self.notes)
        return json.dumps(payload, indent=2, allow_nan=False) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        buf.write(f"# {_HEADER}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["field", "value"])
        w.writerow(["xi_coeffs", " ".join(repr(c) for c in self.xi_coeffs)])
        for k, v in self.scalar_items():
            w.writerow([k, repr(v)])
        for k, v in self.notes.items():
            w.writerow([f"note:{k}", v])
        w.writerow([])
        w.writerow(["t", "u"])
        for t, u in zip(self.ode_t, self.ode_u):
            w.writerow([repr(t), repr(u)])
        return buf.getvalue()


def _pure_form(xi):
    """Return (xi0_effective, p) when xi = xi0 + c t^p with p >= 3, else None.

    The zero set of the map is unchanged by a common rescaling of xi, so
    c t^p reduces to t^p with the constant renormalized to xi0/c.
    """
    live = [k for k in xi.active_degrees() if k >= 1]
    if len(live) != 1 or live[0] < 3:
        return None
    p = live[0]
    xi0 = xi.coeffs[0]
    if xi0 <= 0.0:
        return None
    return xi0 / xi.coeffs[p], p


def build_theory_report(xi, alpha, c0=1.0, step_h=1e-3):
    """Evaluate all predictions for the mixture, recording failures per field."""
    if alpha <= 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    report = TheoryReport(xi_coeffs=xi.coeffs, alpha=float(alpha), c0=float(c0))
    notes = report.notes

    def attempt(name, fn):
        # one unsupported field must not sink the whole report
        try:
            return fn()
        except Exception as exc:
            notes[name] = f"{type(exc).__name__}: {exc}"
            return math.nan

    report.alpha_lb = attempt("alpha_lb", lambda: alpha_lb(xi))

    def ub1_pair():
        val, eps0_fn = alpha_ub1(xi)
        report.eps0 = eps0_fn(alpha)
        return val

    report.alpha_ub1 = attempt("alpha_ub1", ub1_pair)
    if math.isnan(report.alpha_ub1):
        notes.setdefault("eps0", notes["alpha_ub1"])

    pure = _pure_form(xi)
    if pure is None:
        notes["alpha_ub2"] = "defined for pure mixtures xi0 + t^p with p >= 3 only"
    else:
        report.alpha_ub2 = attempt("alpha_ub2", lambda: alpha_ub2(*pure))

    report.alpha_gd = attempt("alpha_gd", lambda: alpha_gd_threshold(xi, c0))
    report.alpha_hd = attempt("alpha_hd", lambda: alpha_hd(xi, step_h=step_h))
    report.alpha_tp = attempt("alpha_tp", lambda: alpha_tp(xi))
    report.e_star = attempt("e_star", lambda: e_star_parisi(xi))

    def rs_block():
        r = rs_quantities(alpha, xi)
        report.q0 = r.q0
        report.q_star = r.q_star
        report.gamma_star = r.gamma_star
        report.u_rs = r.u_rs
        return r.q_rs

    report.q_rs = attempt("q_rs", rs_block)
    if math.isnan(report.q_rs) and "q_rs" in notes:
        for name in ("q0", "q_star", "gamma_star", "u_rs"):
            notes.setdefault(name, notes["q_rs"])

    def bounds_block():
        b = hd_bounds(alpha, xi)
        report.u_lb = b.u_lb
        report.u_ub = b.u_ub
        return b.A

    report.A_xi = attempt("A_xi", bounds_block)

    def curve():
        c = hd_ode(alpha, xi, step_h=step_h)
        report.ode_t = tuple(float(v) for v in c.t)
        report.ode_u = tuple(float(v) for v in c.u)
        return 0.0

    attempt("ode_curve", curve)
    return report
