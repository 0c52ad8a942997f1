import math

import numpy as np
import pytest
from scipy.integrate import solve_ivp

from nem.mixture import MixtureXi
from nem.theory.descent_ode import alpha_hd, hd_bounds, hd_ode
from nem.theory.edge import z_star

CUBIC = MixtureXi((1.0, 0.0, 0.0, 1.0))
QUARTIC = MixtureXi((1.0, 0.0, 0.0, 0.0, 1.0))
LINEAR = MixtureXi((1.0, 1.0))
MIXED = MixtureXi((1.0, 1.0, 0.0, 1.0))


def test_grid_shape_and_endpoints():
    curve = hd_ode(0.5, CUBIC, step_h=1e-2)
    assert curve.t[0] == 0.0
    assert curve.t[-1] == pytest.approx(1.0, abs=1e-15)
    assert np.allclose(np.diff(curve.t), curve.t[1] - curve.t[0])
    assert curve.u[0] == 0.5


def test_default_init_is_half_xi0():
    xi = MixtureXi((3.0, 0.0, 1.0))
    curve = hd_ode(0.4, xi, step_h=1e-2)
    assert curve.u[0] == 1.5


def test_linear_mixture_is_frozen_below_alpha_one():
    # no curvature means a = 0, and for alpha <= 1 the edge sits at zero
    curve = hd_ode(0.7, LINEAR, step_h=1e-2)
    assert np.all(curve.u == 0.5)


def test_linear_mixture_grows_at_known_rate_above_alpha_one():
    # constant rate xi'(t) (sqrt(alpha)-1)^2 / (2 alpha), integrated exactly
    curve = hd_ode(4.0, LINEAR, step_h=1e-2)
    assert curve.u[-1] == pytest.approx(0.5 + 1.0 / 8.0, abs=1e-12)


def test_matches_adaptive_reference_integrator():
    alpha = 2.0 * hd_bounds(1.0, CUBIC).A

    def rhs(t, y):
        a = math.sqrt(2.0 * alpha * max(y[0], 0.0) * CUBIC.eval(t, 2))
        return [-z_star(alpha, a, CUBIC.eval(t, 1)) / (2.0 * alpha)]

    ref = solve_ivp(rhs, (0.0, 1.0), [0.5], rtol=1e-10, atol=1e-12, method="RK45")
    mine = hd_ode(alpha, CUBIC)
    # the rate has a sqrt(t) kink at t=0 (xi''(0)=0), so expect ~1e-6 not 1e-12
    assert mine.u[-1] == pytest.approx(ref.y[0, -1], abs=2e-6)


def test_step_halving_converges():
    alpha = 2.0 * hd_bounds(1.0, CUBIC).A
    coarse = hd_ode(alpha, CUBIC, step_h=2e-3).u[-1]
    fine = hd_ode(alpha, CUBIC, step_h=1e-3).u[-1]
    finer = hd_ode(alpha, CUBIC, step_h=5e-4).u[-1]
    # sqrt(t) kink at the origin caps the order at h^1.5, ratio 2^1.5 per halving
    assert 2.5 * abs(fine - finer) < abs(coarse - fine)
    assert abs(fine - finer) < 1e-6


def test_absorption_hits_zero_and_stays():
    A = hd_bounds(1.0, CUBIC).A
    curve = hd_ode(0.5 * A / (1.0 + A), CUBIC)
    assert curve.u[-1] == 0.0
    assert np.all(np.diff(curve.u) <= 1e-15)
    first_zero = np.argmax(curve.u == 0.0)
    assert np.all(curve.u[first_zero:] == 0.0)


@pytest.mark.parametrize("xi", [CUBIC, QUARTIC])
@pytest.mark.parametrize("alpha", [0.5, 0.9])
def test_terminal_energy_sandwich(xi, alpha):
    bounds = hd_bounds(alpha, xi)
    terminal = hd_ode(alpha, xi, step_h=5e-4).u[-1]
    assert terminal >= bounds.u_lb - 1e-3
    assert terminal <= bounds.u_ub + 1e-3


def test_short_interval_first_order():
    alpha, u0 = 0.5, 0.2
    a = math.sqrt(2.0 * alpha * u0 * MIXED.eval(0.99, 2))
    rate = -z_star(alpha, a, MIXED.eval(0.99, 1)) / (2.0 * alpha)
    curve = hd_ode(alpha, MIXED, q_start=0.99, u0=u0, step_h=1e-3)
    assert curve.t[-1] == pytest.approx(0.01, abs=1e-15)
    assert curve.u[-1] == pytest.approx(u0 + 0.01 * rate, abs=5e-4)


def test_ratio_closed_forms():
    assert hd_bounds(0.5, CUBIC).A == pytest.approx(8.0 / 3.0, abs=1e-7)
    assert hd_bounds(0.5, QUARTIC).A == pytest.approx(3.0, abs=1e-7)


def test_bounds_degenerate_above_alpha_one():
    assert math.isnan(hd_bounds(1.0, CUBIC).u_ub)
    assert math.isnan(hd_bounds(1.5, CUBIC).u_ub)
    assert hd_bounds(0.999999, CUBIC).u_ub >= 0.0


def test_input_validation():
    with pytest.raises(ValueError):
        hd_ode(0.0, CUBIC)
    with pytest.raises(ValueError):
        hd_ode(0.5, CUBIC, q_start=1.0)
    with pytest.raises(ValueError):
        hd_ode(0.5, CUBIC, u0=-0.1)
    with pytest.raises(ValueError):
        hd_bounds(-1.0, CUBIC)
    with pytest.raises(ValueError):
        hd_bounds(0.5, MixtureXi((0.0, 0.0, 0.0, 1.0)))


def test_threshold_sentinel_for_flat_mixtures():
    assert alpha_hd(LINEAR) == 0.0
    assert alpha_hd(MixtureXi((2.0,))) == 0.0


def test_threshold_inside_sandwich():
    A = hd_bounds(1.0, CUBIC).A
    a_hd = alpha_hd(CUBIC)
    assert A / (1.0 + A) - 1e-9 <= a_hd <= A + 1e-9
    assert a_hd == pytest.approx(1.0151, abs=2e-3)
    # terminal energy is monotone in alpha across the threshold
    assert hd_ode(0.95 * a_hd, CUBIC).u[-1] <= 1e-6
    assert hd_ode(1.05 * a_hd, CUBIC).u[-1] > 1e-6
