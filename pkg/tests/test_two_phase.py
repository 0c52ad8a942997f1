import numpy as np
import pytest

from nem.algorithms.amp import AmpDivergenceError
from nem.algorithms.hessian_walk import hessian_descent
from nem.algorithms.two_phase import two_phase
from nem.gmap import GaussianMap
from nem.mixture import MixtureXi
from nem.theory import (
    gamma_for_overlap,
    hd_ode,
    rs_quantities,
    u_rs_value,
)


def test_linear_benchmark_solves():
    # alpha = 0.2 < 1/(1 + xi0): phase one already reaches a near-solution and
    # the PSD walk cannot spoil it
    xi = MixtureXi((1.0, 1.0))
    rs = rs_quantities(0.2, xi)
    gmap = GaussianMap(xi, 300, 1500, seed=2)
    x, trace = two_phase(gmap, delta=1.0 / 50, gamma=rs.gamma_star, L=60, seed=4)
    assert trace.column("u")[-1] <= 0.02
    # energy at the phase boundary sits at the level matching the overlap
    assert trace.meta["u_entry"] <= 0.03 * xi.eval(1.0)
    assert abs(trace.meta["q_entry"] - rs.q0) <= 0.05
    assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)


def test_composite_energy_tracks_theory():
    # above the two-phase threshold the final energy is positive and follows
    # the descent curve started from the message passing overlap
    xi = MixtureXi((1.0, 1.0, 1.0))
    alpha, n, d = 1.4, 560, 400
    rs = rs_quantities(alpha, xi)
    u_theory = hd_ode(alpha, xi, q_start=rs.q_star,
                      u0=u_rs_value(rs.q_star, alpha, xi)).u[-1]
    gamma = gamma_for_overlap(0.7 * rs.q_rs, xi)
    for seed in (0, 1):
        gmap = GaussianMap(xi, n, d, seed=seed)
        x, trace = two_phase(gmap, delta=1.0 / 50, gamma=gamma, L=30,
                             seed=seed + 50)
        u_fin = trace.column("u")[-1]
        assert u_fin >= 0.02
        assert abs(u_fin - u_theory) <= 0.05
        q_e = trace.meta["q_entry"]
        u_e = trace.meta["u_entry"]
        assert abs(u_e - u_rs_value(min(q_e, rs.q0), alpha, xi)) <= 0.03 * xi.eval(1.0)


def test_gamma_zero_degenerates_to_plain_walk():
    xi = MixtureXi((1.0, 0.0, 1.0))
    gmap = GaussianMap(xi, 30, 60, seed=7)
    delta = 1.0 / 25
    x_tp, tr_tp = two_phase(gmap, delta=delta, gamma=0.0, L=2, seed=9)
    x_hd, tr_hd = hessian_descent(gmap, delta=delta, seed=9)
    assert np.array_equal(x_tp, x_hd)
    u_phase2 = [r.u for r in tr_tp if r.aux.get("phase") == 2]
    assert u_phase2 == tr_hd.column("u")
    assert tr_tp.meta["q_entry"] == 0.0


def test_saturated_phase_one_skips_the_walk():
    # step size tuned so the overlap fixed point exceeds 1: the walk has no
    # band left and the message passing output is normalized directly
    xi = MixtureXi((1.0, 1.0))
    gamma = gamma_for_overlap(1.05, xi)
    gmap = GaussianMap(xi, 180, 400, seed=1, ball_slack=0.2)
    x, trace = two_phase(gmap, delta=1.0 / 50, gamma=gamma, L=40, seed=3)
    assert trace.meta["q_entry"] >= 1.0
    assert trace.column("phase").count(2.0) == 0
    assert np.linalg.norm(x) == pytest.approx(1.0, abs=1e-12)


def test_divergent_gamma_propagates():
    xi = MixtureXi((1.0, 1.0, 1.0))
    gmap = GaussianMap(xi, 30, 60, seed=7)
    with pytest.raises(AmpDivergenceError):
        two_phase(gmap, delta=1.0 / 25, gamma=-5.0, L=40, seed=0)


def test_trace_schema():
    xi = MixtureXi((1.0, 1.0))
    rs = rs_quantities(0.2, xi)
    gmap = GaussianMap(xi, 40, 200, seed=5)
    x, trace = two_phase(gmap, delta=1.0 / 10, gamma=rs.gamma_star, L=12, seed=6)
    assert trace.algorithm == "two_phase"
    for key in ("gamma", "L", "delta", "seed", "q_entry", "u_entry"):
        assert key in trace.meta
    steps = trace.column("step")
    assert steps == sorted(steps)
    phases = trace.column("phase")
    assert set(phases) == {1.0, 2.0}
    assert phases == sorted(phases)
