"""Density generators and the scatter-to-covariance ratio ``theta``.

For ``x ~ E_p(0, Sigma, g)`` with finite second moments the covariance is
``R = theta * Sigma`` with ``theta = E[r^2] / p``, where ``r^2`` is the
squared Mahalanobis radius whose density is proportional to
``t**(p/2 - 1) * g(t)``. For the multivariate t family ``theta = nu/(nu-2)``.

Infinite degrees of freedom (Gaussian tail) are represented by ``math.inf``.
"""

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate, optimize

from .errors import DivergentIntegral, InputError, NonFiniteInput, TailTooHeavy

NU_MIN = 2.01
NU_MAX = 1000.0
THETA_EPS = 1e-6
QUAD_RTOL = 1e-8

GAUSSIAN = "gaussian"
MVT = "mvt"
CUSTOM = "custom"


def theta_mvt(nu):
    """``nu / (nu - 2)``; needs ``nu > 2``. ``inf`` maps to 1."""
    if nu == math.inf:
        return 1.0
    if not nu > 2:
        raise TailTooHeavy(f"nu={nu}: covariance exists only for nu > 2")
    return nu / (nu - 2.0)


def nu_from_theta(theta):
    """Invert :func:`theta_mvt`.

    Returns ``inf`` when ``theta <= 1 + THETA_EPS`` (no evidence of a tail
    heavier than Gaussian); finite results are clamped to
    ``[NU_MIN, NU_MAX]``.
    """
    theta = float(theta)
    if not math.isfinite(theta):
        raise NonFiniteInput(f"theta={theta}")
    if theta <= 1.0 + THETA_EPS:
        return math.inf
    nu = 2.0 * theta / (theta - 1.0)
    return min(max(nu, NU_MIN), NU_MAX)


@dataclass(frozen=True)
class DensityGenerator:
    """Density generator ``g`` of a p-variate elliptical law.

    Use the :meth:`gaussian`, :meth:`mvt` and :meth:`custom` constructors.
    Only ``g`` up to a constant is needed; the normalizing constant of the
    full p-variate density never enters any estimator.
    """

    family: str
    dim: int
    nu: float = math.inf
    custom_g: Optional[Callable] = None

    def __post_init__(self):
        if self.dim < 1:
            raise InputError("dim must be >= 1")
        if self.family == MVT:
            if not self.nu > 0:
                raise InputError(f"nu must be positive, got {self.nu}")
        elif self.family == CUSTOM:
            if self.custom_g is None:
                raise InputError("custom family needs custom_g")
            try:
                norm = _log_moment(self, self.dim / 2.0 - 1.0)
            except DivergentIntegral:
                norm = math.inf
            if not math.isfinite(norm):
                raise InputError("custom_g is not normalizable: t^(p/2-1) g(t) has no finite integral")
        elif self.family != GAUSSIAN:
            raise InputError(f"unknown family {self.family!r}")

    @classmethod
    def gaussian(cls, dim):
        return cls(GAUSSIAN, dim)

    @classmethod
    def mvt(cls, nu, dim):
        if nu == math.inf:
            return cls(GAUSSIAN, dim)
        return cls(MVT, dim, nu=float(nu))

    @classmethod
    def custom(cls, g, dim):
        return cls(CUSTOM, dim, custom_g=g)

    def log_g(self, t):
        t = np.asarray(t, dtype=float)
        if self.family == GAUSSIAN:
            return -0.5 * t
        if self.family == MVT:
            return -0.5 * (self.dim + self.nu) * np.log1p(t / self.nu)
        with np.errstate(divide="ignore"):
            return np.log(np.asarray(self.custom_g(t), dtype=float))

    def g(self, t):
        return np.exp(self.log_g(t))

    def radial_pdf(self, t):
        """Density of the squared Mahalanobis radius ``r^2`` at ``t``."""
        t = np.asarray(t, dtype=float)
        a = self.dim / 2.0 - 1.0
        log_c = _log_moment(self, a)
        with np.errstate(divide="ignore"):
            out = np.exp(a * np.log(t) + self.log_g(t) - log_c)
        return np.where(t > 0, out, 0.0) if a >= 0 else out

    def theta(self):
        """Closed form where available, quadrature otherwise."""
        if self.family == GAUSSIAN:
            return 1.0
        if self.family == MVT:
            return theta_mvt(self.nu)
        return theta_numeric(self)

    def nu_from_theta(self, theta):
        if self.family in (GAUSSIAN, MVT):
            return nu_from_theta(theta)
        raise InputError("no inverse of h is available for a custom generator")


def _log_moment(gen, a):
    """``log of integral_0^inf t**a g(t) dt``.

    The substitution ``t = c u / (1 - u)`` maps the half line onto [0, 1),
    with ``c`` the mode of the integrand on the log scale so that the mass
    sits near ``u = 1/2``. The integrand is rescaled by its value at the
    mode before exponentiating.
    """

    def phi_log_t(y):
        y = min(max(y, -700.0), 700.0)
        return (a + 1.0) * y + float(gen.log_g(math.exp(y)))

    y_start = math.log(gen.dim)
    with np.errstate(all="ignore"), warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        res = optimize.minimize_scalar(lambda y: -phi_log_t(y), bracket=(y_start - 1.0, y_start + 1.0))
    y0 = float(np.clip(res.x, -700.0, 700.0))
    c = math.exp(y0)
    ref = phi_log_t(y0)
    if not math.isfinite(ref):
        raise DivergentIntegral("integrand is not finite at its mode")

    def f(u):
        if u <= 0.0:
            return 0.0 if a > -1.0 else math.inf
        if u >= 1.0:
            return 0.0
        t = c * u / (1.0 - u)
        lv = a * math.log(t) + float(gen.log_g(t)) + y0 - 2.0 * math.log1p(-u) - ref
        return math.exp(lv) if lv < 700 else math.inf

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err, info = integrate.quad(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-10, limit=500, full_output=1)[:3]
    if not (math.isfinite(val) and val > 0) or not err <= QUAD_RTOL * val:
        raise DivergentIntegral(f"quadrature did not converge (value {val:g}, error estimate {err:g})")
    return math.log(val) + ref


def theta_numeric(gen):
    """``E[r^2] / p`` by adaptive quadrature of the radial density.

    Raises :class:`DivergentIntegral` when the first moment of ``r^2`` does
    not exist (e.g. multivariate t with ``nu <= 2``).
    """
    p = gen.dim
    if gen.family == MVT and gen.nu <= 2:
        raise DivergentIntegral(f"E[r^2] is infinite for nu={gen.nu}")
    log_num = _log_moment(gen, p / 2.0)
    log_den = _log_moment(gen, p / 2.0 - 1.0)
    return math.exp(log_num - log_den) / p
