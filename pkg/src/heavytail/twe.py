"""Scale, scatter and covariance estimates built from Tyler's weights.

Tyler's shape estimate carries no scale. The harmonic mean of the
reciprocal weights ``1/w_i`` recovers it, and multiplying the shape by that
scale gives an affine equivariant scatter estimate, which is also a
weighted sample covariance matrix with mean-one weights.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import stats

from .errors import BetaOutOfRange, InconsistentForms, InvalidTheta
from .spd import SpdMatrix
from .tyler import TylerFit

FORMS_RTOL = 1e-6


@dataclass(frozen=True)
class TweEstimate:
    """Scale and scatter estimate.

    ``covariance`` and ``theta`` are filled in by :func:`with_covariance`.
    """

    scale: float
    scatter: SpdMatrix
    normalized_weights: np.ndarray
    forms_gap: float
    theta: Optional[float] = None
    covariance: Optional[SpdMatrix] = None


def twe_scale(fit: TylerFit) -> float:
    """Harmonic mean of ``1/w_i``, i.e. ``1 / mean(w)``."""
    return 1.0 / float(np.mean(fit.weights))


def twe_scatter(fit: TylerFit) -> TweEstimate:
    """Scatter estimate ``eta * shape``.

    The same matrix is also formed as ``(1/n) sum_i v_i x_i x_i'`` with
    normalized weights ``v_i = w_i / mean(w)``; the two must agree, and a
    disagreement above 1e-6 (relative Frobenius) raises
    :class:`InconsistentForms`, which points at an unconverged fit.
    """
    eta = twe_scale(fit)
    v = fit.weights / np.mean(fit.weights)
    product = eta * fit.shape.entries
    X = fit.data
    Y = X * np.sqrt(v)[:, None]
    weighted = (Y.T @ Y) / X.shape[0]
    gap = float(np.linalg.norm(product - weighted) / np.linalg.norm(product))
    if gap > FORMS_RTOL:
        raise InconsistentForms(f"product and weighted-SCM forms differ by {gap:g}")
    v.flags.writeable = False
    return TweEstimate(scale=eta, scatter=SpdMatrix(product), normalized_weights=v, forms_gap=gap)


def shrink_scatter(est: TweEstimate, beta: float) -> SpdMatrix:
    """``beta * scatter + (1 - beta) * scale * I``.

    The mean eigenvalue is preserved for every ``beta`` in [0, 1].
    """
    if not 0.0 <= beta <= 1.0:
        raise BetaOutOfRange(f"beta must lie in [0, 1], got {beta}")
    S = est.scatter.entries
    return SpdMatrix(beta * S + (1.0 - beta) * est.scale * np.eye(S.shape[0]))


def twe_covariance(est: TweEstimate, theta: float) -> SpdMatrix:
    """Covariance ``theta * scatter``; ``theta`` is ``E[r^2]/p`` of the model."""
    if not (math.isfinite(theta) and theta >= 1.0):
        raise InvalidTheta(f"theta must be finite and >= 1, got {theta}")
    return SpdMatrix(theta * est.scatter.entries)


def with_covariance(est: TweEstimate, theta: float) -> TweEstimate:
    """Copy of ``est`` carrying ``theta`` and the covariance estimate."""
    R = twe_covariance(est, theta)
    return TweEstimate(est.scale, est.scatter, est.normalized_weights, est.forms_gap, float(theta), R)


def reciprocal_weight_scales(fit: TylerFit, trim=0.1):
    """Alternative robust scale statistics of ``1/w_i``, for diagnostics.

    Returns a dict with the harmonic mean (the TWE scale), median and
    ``trim``-trimmed mean.
    """
    r = 1.0 / fit.weights
    return {
        "harmonic_mean": twe_scale(fit),
        "median": float(np.median(r)),
        "trimmed_mean": float(stats.trim_mean(r, trim)),
    }
