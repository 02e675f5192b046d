"""Synthetic elliptical data for Monte-Carlo experiments.

Every replication draws from its own counter-based stream (Philox keyed by
``SeedSequence(seed, spawn_key=(replication,))``), so a replication's
sample depends only on ``(seed, replication)`` and never on scheduling.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError, InvalidRho
from .spd import SpdMatrix, make_spd


@dataclass(frozen=True)
class ExperimentDesign:
    """One Monte-Carlo cell: data dimensions, t law and AR(1) scatter."""

    p: int
    n: int
    nu: float = math.inf
    rho: float = 0.6
    eta: float = 1.0
    replications: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.p < 1 or self.n <= self.p:
            raise InputError(f"need n > p >= 1, got n={self.n}, p={self.p}")
        if not -1.0 < self.rho < 1.0:
            raise InvalidRho(f"rho must lie in (-1, 1), got {self.rho}")
        if not self.eta > 0:
            raise InputError(f"eta must be positive, got {self.eta}")
        if not self.nu > 0:
            raise InputError(f"nu must be positive, got {self.nu}")
        if self.replications < 1:
            raise InputError("replications must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must be an unsigned 64-bit integer")


def ar1_scatter(p, rho, eta=1.0):
    """``eta * rho**|i-j|``; its mean eigenvalue is exactly ``eta``."""
    if not -1.0 < rho < 1.0:
        raise InvalidRho(f"rho must lie in (-1, 1), got {rho}")
    if not eta > 0:
        raise InputError(f"eta must be positive, got {eta}")
    lag = np.abs(np.subtract.outer(np.arange(p), np.arange(p)))
    return make_spd(eta * np.power(float(rho), lag))


def replication_rng(seed, replication):
    """Independent generator for one replication."""
    ss = np.random.SeedSequence(int(seed), spawn_key=(int(replication),))
    return np.random.Generator(np.random.Philox(ss))


def _scatter_for(design, Sigma):
    if Sigma is None:
        return ar1_scatter(design.p, design.rho, design.eta)
    Sigma = make_spd(Sigma)
    if Sigma.dim != design.p:
        raise InputError(f"scatter has dim {Sigma.dim}, design has p={design.p}")
    return Sigma


def sample_mvt(design, Sigma=None, replication=0):
    """n draws of ``L z sqrt(nu / q)``, ``z ~ N(0, I)``, ``q ~ chi2(nu)``.

    ``Sigma`` defaults to the design's AR(1) scatter. Infinite ``nu`` gives
    Gaussian data. Rows are observations.
    """
    Sigma = _scatter_for(design, Sigma)
    rng = replication_rng(design.seed, replication)
    z = rng.standard_normal((design.n, design.p))
    X = z @ Sigma.factor.T
    if math.isfinite(design.nu):
        q = rng.chisquare(design.nu, design.n)
        X *= np.sqrt(design.nu / q)[:, None]
    return X


def sample_elliptical(design, Sigma=None, radial=None, replication=0):
    """General elliptical sample ``r * L u`` with ``u`` uniform on the sphere.

    Parameters
    ----------
    radial : callable ``(rng, size) -> ndarray``
        Draws of the modular variate ``r >= 0`` (not squared).
    """
    if radial is None:
        raise InputError("radial sampler is required")
    Sigma = _scatter_for(design, Sigma)
    rng = replication_rng(design.seed, replication)
    u = rng.standard_normal((design.n, design.p))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    r = np.asarray(radial(rng, design.n), dtype=float)
    if r.shape != (design.n,) or np.any(r < 0):
        raise InputError("radial sampler must return n nonnegative values")
    return (u @ Sigma.factor.T) * r[:, None]


def chi_radial(p):
    """Radial law of ``N(0, Sigma)``: ``r ~ chi(p)``."""
    return lambda rng, size: np.sqrt(rng.chisquare(p, size))


def mvt_radial(p, nu):
    """Radial law of the t distribution: ``r^2 = p F(p, nu)``."""
    return lambda rng, size: np.sqrt(p * rng.f(p, nu, size))


def market_scatter(p, seed=0, n_factors=3):
    """Seeded factor-model scatter resembling an equity covariance matrix.

    ``B B' + D`` with one dominant market factor plus ``n_factors - 1``
    weaker sector factors, rescaled to mean eigenvalue 1. Stands in for a
    measured stock covariance when none is supplied.
    """
    rng = replication_rng(seed, 0)
    B = np.empty((p, n_factors))
    B[:, 0] = rng.normal(1.0, 0.3, p) * 0.15
    B[:, 1:] = rng.normal(0.0, 0.08, (p, n_factors - 1))
    D = rng.uniform(0.01, 0.05, p) ** 2 * 25
    S = B @ B.T + np.diag(D)
    S *= p / np.trace(S)
    return make_spd(S)
