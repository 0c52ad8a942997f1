import numpy as np
import pytest

from nem.algorithms.lanczos import LanczosBreakdownError, min_eig_direction
from nem.gmap import GaussianMap
from nem.mixture import MixtureXi
from nem.subspace import ConstraintSubspace


def _point_on_radius(d, r, seed):
    rng = np.random.default_rng(seed)
    x = rng.standard_normal(d)
    return x * (r / np.linalg.norm(x))


def _dense_restricted_hessian(gmap, x, subspace):
    d = gmap.d
    point = gmap.at_point(x)
    A = np.zeros((d, d))
    for j in range(d):
        e = np.zeros(d)
        e[j] = 1.0
        A[:, j] = point.hvp_in(e, subspace)
    return 0.5 * (A + A.T)


def test_argument_validation():
    gmap = GaussianMap(MixtureXi((0.0, 1.0)), 4, 10, seed=0)
    x = _point_on_radius(10, 0.5, 1)
    sub = ConstraintSubspace(x)
    with pytest.raises(ValueError):
        min_eig_direction(gmap, x, sub, tol_abs=0.0, max_lanczos=20, seed=0)
    with pytest.raises(ValueError):
        min_eig_direction(gmap, x, sub, tol_abs=1e-6, max_lanczos=0, seed=0)
    other = ConstraintSubspace(_point_on_radius(10, 0.5, 2))
    with pytest.raises(ValueError):
        min_eig_direction(gmap, x, other, tol_abs=1e-6, max_lanczos=20, seed=0)


def test_linear_hessian_is_psd():
    # pure linear mixture: Hess H = G^T G, so the restricted minimum cannot
    # dip below zero
    gmap = GaussianMap(MixtureXi((0.0, 1.0)), 8, 30, seed=1)
    x = _point_on_radius(30, 0.5, 3)
    sub = ConstraintSubspace(x)
    v, ray = min_eig_direction(gmap, x, sub, tol_abs=1e-8, max_lanczos=200, seed=4)
    assert ray >= -1e-8
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_matches_dense_eigendecomposition():
    xi = MixtureXi((1.0, 0.5, 0.5, 0.3))
    gmap = GaussianMap(xi, 20, 40, seed=3)
    x = _point_on_radius(40, 0.6, 5)
    extra = np.random.default_rng(6).standard_normal(40)
    sub = ConstraintSubspace(x, (extra,))
    A = _dense_restricted_hessian(gmap, x, sub)
    vals, vecs = np.linalg.eigh(A)
    lam_min = None
    for i in range(40):
        if sub.contains(vecs[:, i], tol=1e-8):
            lam_min = vals[i]
            break
    assert lam_min is not None
    for tol in (0.8, 1e-6):
        v, ray = min_eig_direction(gmap, x, sub, tol_abs=tol, max_lanczos=400, seed=7)
        assert abs(ray - lam_min) <= tol
        assert ray == pytest.approx(float(v @ (A @ v)), abs=1e-9)


def test_direction_stays_in_subspace():
    xi = MixtureXi((1.0, 0.0, 1.0))
    gmap = GaussianMap(xi, 15, 35, seed=9)
    x = _point_on_radius(35, 0.4, 10)
    extras = [np.random.default_rng(s).standard_normal(35) for s in (11, 12)]
    sub = ConstraintSubspace(x, extras)
    v, ray = min_eig_direction(gmap, x, sub, tol_abs=1e-6, max_lanczos=300, seed=13)
    assert abs(float(v @ x)) <= 1e-10
    for e in extras:
        assert abs(float(v @ e)) <= 1e-10
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_zero_hessian_certifies_zero():
    gmap = GaussianMap(MixtureXi((1.0,)), 5, 10, seed=1)
    x = _point_on_radius(10, 0.3, 2)
    v, ray = min_eig_direction(gmap, x, ConstraintSubspace(x),
                               tol_abs=1e-9, max_lanczos=20, seed=2)
    assert ray == 0.0
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)


def test_budget_exhaustion_returns_best_effort():
    xi = MixtureXi((1.0, 0.5, 0.5, 0.3))
    gmap = GaussianMap(xi, 20, 40, seed=3)
    x = _point_on_radius(40, 0.6, 5)
    sub = ConstraintSubspace(x)
    v, ray = min_eig_direction(gmap, x, sub, tol_abs=1e-12, max_lanczos=3, seed=7)
    assert np.linalg.norm(v) == pytest.approx(1.0, abs=1e-12)
    assert np.isfinite(ray)
    # three Krylov steps already land well below the bulk of the spectrum
    A = _dense_restricted_hessian(gmap, x, sub)
    vals = np.linalg.eigvalsh(A)
    assert ray <= vals[len(vals) // 2]


def test_breakdown_error_after_restarts():
    # rank-one Hessian closes the Krylov space after two steps; round-off
    # keeps the residual above an absurdly small tolerance, so every restart
    # degenerates
    gmap = GaussianMap(MixtureXi((0.0, 1.0)), 1, 8, seed=2)
    x = _point_on_radius(8, 0.5, 5)
    sub = ConstraintSubspace(x)
    with pytest.raises(LanczosBreakdownError):
        min_eig_direction(gmap, x, sub, tol_abs=1e-22, max_lanczos=50, seed=0)


def test_certified_within_tolerance_on_degree_two():
    # quadratic mixture at an interior point, moderate size, tight tolerance
    xi = MixtureXi((1.0, 0.0, 1.0))
    gmap = GaussianMap(xi, 12, 24, seed=4)
    x = _point_on_radius(24, 0.7, 8)
    sub = ConstraintSubspace(x)
    A = _dense_restricted_hessian(gmap, x, sub)
    vals, vecs = np.linalg.eigh(A)
    lam_min = None
    for i in range(24):
        if sub.contains(vecs[:, i], tol=1e-8):
            lam_min = vals[i]
            break
    v, ray = min_eig_direction(gmap, x, sub, tol_abs=1e-9, max_lanczos=300, seed=1)
    assert abs(ray - lam_min) <= 1e-9
