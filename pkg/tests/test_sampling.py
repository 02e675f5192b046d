import math

import numpy as np
import pytest
from scipy import stats

from heavytail.errors import InputError, InvalidRho
from heavytail.sampling import (
    ExperimentDesign,
    ar1_scatter,
    chi_radial,
    market_scatter,
    mvt_radial,
    sample_elliptical,
    sample_mvt,
)
from heavytail.spd import quad_form_inv, trace_mean


def test_ar1_examples():
    np.testing.assert_array_equal(ar1_scatter(4, 0.0, 2.5).entries, 2.5 * np.eye(4))
    np.testing.assert_array_equal(ar1_scatter(2, 0.6, 1.0).entries, [[1.0, 0.6], [0.6, 1.0]])
    assert trace_mean(ar1_scatter(100, 0.6, 1.0)) == 1.0


@pytest.mark.parametrize("rho", [-0.99, -0.5, 0.3, 0.95, 0.999])
def test_ar1_positive_definite(rho):
    S = ar1_scatter(60, rho, 3.0)
    assert S.factor.shape == (60, 60)
    assert trace_mean(S) == pytest.approx(3.0, rel=1e-15)
    assert S.entries[5, 8] == pytest.approx(3.0 * rho**3, rel=1e-14)


@pytest.mark.parametrize("rho", [1.0, -1.0, 1.5])
def test_ar1_invalid_rho(rho):
    with pytest.raises(InvalidRho):
        ar1_scatter(3, rho)
    with pytest.raises(InvalidRho):
        ExperimentDesign(p=3, n=10, rho=rho)


@pytest.mark.parametrize("kw", [dict(p=5, n=5), dict(p=2, n=10, eta=0.0), dict(p=2, n=10, replications=0),
                                dict(p=2, n=10, seed=-1), dict(p=2, n=10, nu=0.0)])
def test_design_validation(kw):
    with pytest.raises(InputError):
        ExperimentDesign(**kw)


def test_determinism():
    d = ExperimentDesign(p=5, n=50, nu=4.0, seed=123)
    np.testing.assert_array_equal(sample_mvt(d, replication=7), sample_mvt(d, replication=7))
    assert not np.array_equal(sample_mvt(d, replication=7), sample_mvt(d, replication=8))


def test_gaussian_lln():
    X = sample_mvt(ExperimentDesign(p=4, n=100_000, nu=math.inf, rho=0.0, seed=1))
    assert np.linalg.norm(X.T @ X / len(X) - np.eye(4)) / 2.0 < 0.05


def test_mvt_theta_moment():
    X = sample_mvt(ExperimentDesign(p=4, n=1_000_000, nu=5.0, rho=0.0, seed=2))
    assert np.mean(np.sum(X**2, axis=1)) / 4 == pytest.approx(5 / 3, abs=0.01)


def test_mvt_mahalanobis_moment():
    d = ExperimentDesign(p=6, n=1_000_000, nu=7.0, rho=0.6, seed=3)
    q = quad_form_inv(ar1_scatter(6, 0.6), sample_mvt(d)) / 6
    assert np.mean(q) == pytest.approx(7 / 5, rel=0.01)


def test_constant_radial_on_sphere():
    d = ExperimentDesign(p=5, n=200, seed=4)
    X = sample_elliptical(d, np.eye(5), lambda rng, size: np.full(size, math.sqrt(5)))
    np.testing.assert_allclose(np.linalg.norm(X, axis=1), math.sqrt(5), rtol=1e-14)


def test_chi_radial_is_gaussian():
    d = ExperimentDesign(p=6, n=10_000, seed=5)
    Sigma = ar1_scatter(6, 0.6)
    q = quad_form_inv(Sigma, sample_elliptical(d, Sigma, chi_radial(6)))
    assert stats.kstest(q, stats.chi2(6).cdf).pvalue > 0.01


def test_mvt_radial_matches_sample_mvt():
    d = ExperimentDesign(p=4, n=1_000_000, nu=6.0, rho=0.3, seed=6)
    Sigma = ar1_scatter(4, 0.3)
    a = quad_form_inv(Sigma, sample_elliptical(d, Sigma, mvt_radial(4, 6.0)))
    b = quad_form_inv(Sigma, sample_mvt(d, Sigma))
    assert np.mean(a) == pytest.approx(np.mean(b), rel=0.01)
    # second moment of r^2 exists for nu > 4; compare on a log scale to keep noise low
    assert np.mean(np.log(a)) == pytest.approx(np.mean(np.log(b)), abs=0.01)


def test_radial_sampler_checked():
    d = ExperimentDesign(p=2, n=10, seed=0)
    with pytest.raises(InputError):
        sample_elliptical(d, np.eye(2), lambda rng, size: -np.ones(size))
    with pytest.raises(InputError):
        sample_elliptical(d, np.eye(2), None)


def test_directions_uniform():
    n = 100_000
    X = sample_mvt(ExperimentDesign(p=5, n=n, nu=3.0, rho=0.0, seed=9))
    U = X / np.linalg.norm(X, axis=1, keepdims=True)
    # each coordinate of a uniform direction has variance 1/p
    assert np.all(np.abs(U.mean(axis=0)) < 3 * math.sqrt(1 / 5 / n))


def test_replication_streams_uncorrelated():
    d = ExperimentDesign(p=3, n=10_000, nu=5.0, rho=0.0, seed=10)
    a, b = sample_mvt(d, replication=0), sample_mvt(d, replication=1)
    for j in range(3):
        assert abs(np.corrcoef(a[:, j], b[:, j])[0, 1]) < 0.05


def test_scatter_dimension_checked():
    with pytest.raises(InputError):
        sample_mvt(ExperimentDesign(p=3, n=10), np.eye(2))


def test_market_scatter():
    S = market_scatter(100, seed=1)
    assert trace_mean(S) == pytest.approx(1.0, rel=1e-12)
    np.testing.assert_array_equal(S.entries, market_scatter(100, seed=1).entries)
    ev = np.linalg.eigvalsh(S.entries)
    assert ev[-1] > 3 * ev[-2] > 0  # one dominant market factor
