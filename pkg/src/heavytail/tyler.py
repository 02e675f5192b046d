"""Tyler's M-estimator of shape.

The solver iterates the map

    H(S) = (1/n) sum_i  p / (x_i' S^-1 x_i) * x_i x_i'

from ``S = I`` and rescales every iterate to trace ``p``. ``H`` is
homogeneous of degree one, so the trace-``p`` fixed point also solves the
unnormalized equation ``S = H(S)``.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cholesky, solve_triangular

from .errors import DegenerateData, DimensionMismatch, NonFiniteInput, NotConverged, SingularIterate
from .spd import SpdMatrix

ZERO_ROW_NORM = 1e-150
SINGULAR_QUAD_FORM = 1e-300


def as_data_matrix(X, *, min_rows=None):
    """Validate an (n, p) array of observations, one row each.

    Rejects non-finite entries and (near-)zero rows rather than dropping
    them. ``min_rows`` defaults to ``p + 1``.
    """
    X = np.array(X, dtype=float, order="C")
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[1] < 1:
        raise DimensionMismatch(f"data must be 2-D (n, p), got shape {X.shape}")
    n, p = X.shape
    bad = ~np.isfinite(X)
    if bad.any():
        i, j = np.argwhere(bad)[0]
        raise NonFiniteInput(f"non-finite entry at row {i}, column {j}")
    norms = np.linalg.norm(X, axis=1)
    if np.any(norms < ZERO_ROW_NORM):
        i = int(np.argmax(norms < ZERO_ROW_NORM))
        raise DegenerateData(f"row {i} is (numerically) zero")
    need = p + 1 if min_rows is None else min_rows
    if n < need:
        raise DegenerateData(f"need at least {need} observations for p={p}, got n={n}")
    X.flags.writeable = False
    return X


@dataclass(frozen=True)
class TylerFit:
    """Converged Tyler shape estimate.

    Attributes
    ----------
    shape : SpdMatrix
        Shape matrix with trace ``p``.
    weights : ndarray, shape (n,)
        Tyler's weights ``p / (x_i' shape^-1 x_i)``.
    iterations : int
    residual : float
        Relative Frobenius change of the last iteration.
    data : ndarray, shape (n, p)
        The observations the fit was computed from.
    history : tuple of float
        Relative change at every iteration.
    """

    shape: SpdMatrix
    weights: np.ndarray
    iterations: int
    residual: float
    data: np.ndarray
    history: tuple = ()

    @property
    def n(self):
        return self.data.shape[0]

    @property
    def p(self):
        return self.data.shape[1]


def _weights(L, X):
    p = X.shape[1]
    Z = solve_triangular(L, X.T, lower=True, check_finite=False)
    d = np.einsum("ij,ij->j", Z, Z)
    if d.min() < SINGULAR_QUAD_FORM:
        raise SingularIterate(f"quadratic form {d.min():g} at sample {int(np.argmin(d))}")
    return p / d


def _chol(S):
    try:
        return cholesky(S, lower=True, check_finite=False)
    except LinAlgError:
        raise SingularIterate("iterate lost positive definiteness") from None


def _weighted_scm(X, w):
    # sum_i w_i x_i x_i' / n as (sqrt(w) X)'(sqrt(w) X): symmetric by construction
    Y = X * np.sqrt(w)[:, None]
    return (Y.T @ Y) / X.shape[0]


def tyler_map(S, X):
    """One application of ``H(S; X)`` (no trace normalization)."""
    S = S if isinstance(S, SpdMatrix) else SpdMatrix(S)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != S.dim:
        raise DimensionMismatch(f"data has shape {X.shape}, matrix dim {S.dim}")
    w = _weights(S.factor, X)
    return SpdMatrix(_weighted_scm(X, w))


def fit_tyler(X, tol=1e-10, max_iter=500):
    """Solve Tyler's fixed-point equation under the trace-``p`` convention.

    Parameters
    ----------
    X : array_like, shape (n, p)
        Centered observations, ``n > p``.
    tol : float
        Stop once the relative Frobenius change between successive
        trace-normalized iterates drops below ``tol``.
    max_iter : int

    Returns
    -------
    TylerFit

    Raises
    ------
    DegenerateData
        ``n <= p``, a zero row, or data so concentrated on a subspace
        that no solution exists.
    SingularIterate
        An iterate is numerically singular.
    NotConverged
        ``max_iter`` reached; ``exc.diagnostics`` has the last iterate.
    """
    X = as_data_matrix(X)
    n, p = X.shape
    S = np.eye(p)
    L = np.eye(p)
    resid = math.inf
    history = []
    for it in range(1, max_iter + 1):
        w = _weights(L, X)
        H = _weighted_scm(X, w)
        H *= p / np.trace(H)
        resid = float(np.linalg.norm(H - S) / np.linalg.norm(S))
        history.append(resid)
        S = H
        L = _chol(S)
        if resid < tol:
            break
    else:
        raise NotConverged(
            f"Tyler iteration did not reach tol={tol:g} in {max_iter} iterations (last change {resid:g})",
            diagnostics={"iterations": max_iter, "residual": resid, "shape": S},
        )
    w = _weights(L, X)
    fp_resid = float(np.linalg.norm(_weighted_scm(X, w) - S) / np.linalg.norm(S))
    if fp_resid > max(10 * tol, 1e-9):
        # normalized iterates can settle while drifting to a singular limit
        raise DegenerateData(
            f"no Tyler solution: fixed-point residual {fp_resid:g} after the iterates settled; "
            "data are too concentrated on a subspace"
        )
    shape = SpdMatrix(S)
    shape._factor = L  # reuse the factor of the last iterate
    L.flags.writeable = False
    w.flags.writeable = False
    return TylerFit(shape=shape, weights=w, iterations=it, residual=resid, data=X, history=tuple(history))


def fixed_point_residual(fit):
    """``||H(S) - S||_F / ||S||_F`` at the returned shape matrix."""
    S = fit.shape.entries
    H = tyler_map(fit.shape, fit.data).entries
    return float(np.linalg.norm(H - S) / np.linalg.norm(S))
