import numpy as np
import pytest

from nem import MixtureXi


def test_eval_matches_numpy_polynomial_derivatives():
    rng = np.random.default_rng(7)
    for _ in range(20):
        deg = rng.integers(1, 7)
        coeffs = rng.uniform(0.0, 2.0, size=deg + 1)
        coeffs[rng.integers(0, deg + 1)] += 0.5  # ensure not all zero
        xi = MixtureXi(tuple(coeffs))
        poly = np.polynomial.Polynomial(np.array(xi.coeffs))
        ts = rng.uniform(-1.0, 1.0, size=8)
        for order in range(0, 5):
            want = poly.deriv(order)(ts) if order > 0 else poly(ts)
            got = xi.eval(ts, order)
            assert np.allclose(got, want, rtol=1e-13, atol=1e-13)


def test_scalar_and_array_evaluation():
    xi = MixtureXi((1.0, 0.0, 0.0, 1.0))
    assert xi(0.5) == pytest.approx(1.0 + 0.125)
    assert xi(0.5, order=1) == pytest.approx(3 * 0.25)
    assert xi(0.5, order=2) == pytest.approx(6 * 0.5)
    assert xi(0.5, order=3) == pytest.approx(6.0)
    assert xi(0.5, order=4) == 0.0
    out = xi(np.array([0.0, 1.0]))
    assert out.shape == (2,)
    assert out[1] == pytest.approx(2.0)


def test_rejects_negative_and_empty():
    with pytest.raises(ValueError, match="negative"):
        MixtureXi((1.0, -0.1))
    with pytest.raises(ValueError):
        MixtureXi(())
    with pytest.raises(ValueError, match="positive"):
        MixtureXi((0.0, 0.0))


def test_trailing_zeros_stripped_and_degree():
    xi = MixtureXi((1.0, 0.0, 2.0, 0.0, 0.0))
    assert xi.degree == 2
    assert xi.active_degrees() == [0, 2]


def test_without_constant():
    xi = MixtureXi((1.5, 0.0, 1.0))
    c = xi.without_constant()
    assert c(1.0) == pytest.approx(xi(1.0) - xi(0.0))
    assert c(0.0) == 0.0
    with pytest.raises(ValueError):
        MixtureXi((2.0,)).without_constant()


def test_parse_and_format_roundtrip():
    xi = MixtureXi.parse("1, 0, 0.5,2")
    assert xi.coeffs == (1.0, 0.0, 0.5, 2.0)
    assert MixtureXi.parse(xi.format()).coeffs == xi.coeffs
