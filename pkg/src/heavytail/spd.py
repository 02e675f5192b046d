"""Symmetric positive-definite matrices with a cached Cholesky factor."""

import threading

import numpy as np
from scipy.linalg import LinAlgError, cholesky, solve_triangular

from .errors import DimensionMismatch, NonFiniteInput, NotPositiveDefinite, NotSymmetric

SYMMETRY_RTOL = 1e-12


class SpdMatrix:
    """Immutable SPD matrix.

    The lower Cholesky factor is computed at most once and then shared, so
    instances are safe to hand to concurrent readers.

    Parameters
    ----------
    entries : array_like, shape (p, p)
        Symmetric matrix. It is symmetrized as ``(S + S.T) / 2`` after the
        symmetry check.
    """

    def __init__(self, entries):
        a = np.array(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
            raise DimensionMismatch(f"expected a square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NonFiniteInput("matrix has non-finite entries")
        scale = np.max(np.abs(a))
        if np.max(np.abs(a - a.T)) > SYMMETRY_RTOL * scale:
            raise NotSymmetric("matrix is not symmetric to relative tolerance 1e-12")
        a = 0.5 * (a + a.T)
        a.flags.writeable = False
        self._a = a
        self._factor = None
        self._lock = threading.Lock()

    @property
    def dim(self):
        return self._a.shape[0]

    @property
    def entries(self):
        """Read-only view of the matrix."""
        return self._a

    @property
    def factor(self):
        """Lower-triangular ``L`` with ``L @ L.T == entries``."""
        if self._factor is None:
            with self._lock:
                if self._factor is None:
                    try:
                        L = cholesky(self._a, lower=True, check_finite=False)
                    except LinAlgError as exc:
                        raise NotPositiveDefinite(str(exc)) from None
                    L.flags.writeable = False
                    self._factor = L
        return self._factor

    def trace(self):
        return float(np.trace(self._a))

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._a.copy() if copy else self._a
        return self._a.astype(dtype)

    def __repr__(self):
        return f"SpdMatrix(dim={self.dim})"


def make_spd(entries):
    """Validate ``entries`` and return an :class:`SpdMatrix`.

    The factorization is forced here so that a matrix that is not positive
    definite fails at construction with :class:`NotPositiveDefinite`.
    """
    S = entries if isinstance(entries, SpdMatrix) else SpdMatrix(entries)
    S.factor
    return S


def quad_form_inv(S, x):
    """Return ``x.T @ inv(S) @ x`` using the cached factor.

    ``x`` may be a single p-vector (scalar result) or an (n, p) array of
    rows (length-n result). No explicit inverse is formed.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != S.dim or x.ndim > 2:
        raise DimensionMismatch(f"vector of length {x.shape[-1]} vs matrix of dim {S.dim}")
    z = solve_triangular(S.factor, x.T, lower=True, check_finite=False)
    q = np.einsum("i...,i...->...", z, z)
    return float(q) if x.ndim == 1 else q


def trace_mean(S):
    """Mean eigenvalue ``tr(S) / p``; plain square arrays are accepted too."""
    if isinstance(S, SpdMatrix):
        return S.trace() / S.dim
    S = np.asarray(S, dtype=float)
    return float(np.trace(S)) / S.shape[0]
