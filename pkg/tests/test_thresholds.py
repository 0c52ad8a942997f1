import math

import pytest

from nem.mixture import MixtureXi
from nem.theory.descent_ode import alpha_hd
from nem.theory.thresholds import alpha_gd_threshold, alpha_tp

LINEAR = MixtureXi((1.0, 1.0))
MIXED = MixtureXi((1.0, 1.0, 0.0, 1.0))


def test_linear_threshold_is_half():
    # phase one alone solves the linear model exactly below xi1/(xi0+xi1)
    assert alpha_tp(LINEAR) == pytest.approx(0.5, abs=2e-3)


def test_linear_threshold_scales_with_xi0():
    assert alpha_tp(MixtureXi((3.0, 1.0))) == pytest.approx(0.25, abs=2e-3)


def test_saturation_factor_conventions():
    # the doubled-rate reading would put the linear threshold at 1, which the
    # exact analysis contradicts; the default continues u_rs to q=1
    assert alpha_tp(LINEAR, saturation_rate_factor=2.0) == pytest.approx(1.0, abs=1e-6)
    assert alpha_tp(LINEAR, saturation_rate_factor=1.0) == pytest.approx(0.5, abs=2e-3)


def test_two_phase_dominates_plain_descent():
    assert alpha_tp(MIXED) >= alpha_hd(MIXED) + 0.05


def test_backing_off_the_overlap_never_helps():
    assert alpha_tp(MIXED, delta0=0.05) <= alpha_tp(MIXED) + 1e-9


def test_hypothesis_violations_propagate():
    # no linear part: phase one is stuck at the origin and the scheme is a
    # plain descent walk, so the threshold collapses onto alpha_hd
    cubic = MixtureXi((1.0, 0.0, 0.0, 1.0))
    assert alpha_tp(cubic) == alpha_hd(cubic)
    with pytest.raises(ValueError):
        alpha_tp(MixtureXi((0.0, 1.0, 1.0)))  # xi(0) = 0
    with pytest.raises(ValueError):
        alpha_tp(MIXED, delta0=-0.1)


@pytest.mark.parametrize("p", [3, 4, 5, 7])
def test_gd_scale_pure_symbolic(p):
    coeffs = (1.0,) + (0.0,) * (p - 1) + (1.0,)
    expected = p * p / (p * (p - 1) * 2.0 * max(math.log(p - 2), 1.0))
    assert alpha_gd_threshold(MixtureXi(coeffs)) == pytest.approx(expected, rel=1e-12)


def test_gd_scale_linear_in_c0():
    v1 = alpha_gd_threshold(MIXED, c0=1.0)
    assert alpha_gd_threshold(MIXED, c0=2.5) == pytest.approx(2.5 * v1, rel=1e-12)


def test_gd_scale_decreases_in_degree():
    vals = []
    for p in [5, 10, 20, 40]:
        coeffs = (1.0,) + (0.0,) * (p - 1) + (1.0,)
        vals.append(alpha_gd_threshold(MixtureXi(coeffs)))
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_gd_scale_validation():
    with pytest.raises(ValueError):
        alpha_gd_threshold(LINEAR)  # xi''(1) = 0
    with pytest.raises(ValueError):
        alpha_gd_threshold(MIXED, c0=0.0)
    # no third derivative: the log guard bottoms out at 1
    assert alpha_gd_threshold(MixtureXi((1.0, 0.0, 1.0))) == pytest.approx(1.0)
