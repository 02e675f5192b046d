"""Slow reference implementations used only as test oracles."""

import math

import numpy as np


def cholesky_ref(A):
    """Cholesky-Banachiewicz in plain Python."""
    n = len(A)
    L = [[0.0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1):
            s = sum(L[i][k] * L[j][k] for k in range(j))
            if i == j:
                d = A[i][i] - s
                if d <= 0:
                    raise ValueError("not positive definite")
                L[i][j] = math.sqrt(d)
            else:
                L[i][j] = (A[i][j] - s) / L[j][j]
    return np.array(L)


def jacobi_eigenvalues(A, tol=1e-14, sweeps=100):
    """Cyclic Jacobi rotations; returns sorted eigenvalues."""
    A = np.array(A, dtype=float)
    n = A.shape[0]
    for _ in range(sweeps):
        off = np.sqrt(np.sum(A**2) - np.sum(np.diag(A) ** 2))
        if off < tol * np.linalg.norm(A):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(A[p, q]) <= 1e-18 * (abs(A[p, p]) + abs(A[q, q])):
                    continue
                tau = (A[q, q] - A[p, p]) / (2 * A[p, q])
                t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1 + tau * tau))
                c = 1 / math.sqrt(1 + t * t)
                s = t * c
                J = np.eye(n)
                J[p, p] = J[q, q] = c
                J[p, q] = s
                J[q, p] = -s
                A = J.T @ A @ J
    return np.sort(np.diag(A))


def tyler_normalized_data(X, tol=1e-12, max_iter=5000):
    """Tyler's shape via the normalized-data form, started from the SCM of
    unit-norm rows and using an explicit inverse."""
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    U = X / np.linalg.norm(X, axis=1, keepdims=True)
    S = U.T @ U / n
    S *= p / np.trace(S)
    for _ in range(max_iter):
        Sinv = np.linalg.inv(S)
        q = np.einsum("ij,jk,ik->i", U, Sinv, U)
        w = p * (1 / q) / np.mean(1 / q)
        S_new = (U.T * w) @ U / n
        if np.linalg.norm(S_new - S) < tol * np.linalg.norm(S):
            return S_new
        S = S_new
    raise RuntimeError("oracle did not converge")


def mvt_mle_plain(X, nu, tol=1e-13, max_iter=20000):
    """Unaccelerated t-MLE fixed point (divides by n), explicit inverse."""
    X = np.asarray(X, dtype=float)
    n, p = X.shape
    S = X.T @ X / n
    for _ in range(max_iter):
        d = np.einsum("ij,jk,ik->i", X, np.linalg.inv(S), X)
        w = (p + nu) / (nu + d)
        S_new = (X.T * w) @ X / n
        if np.linalg.norm(S_new - S) < tol * np.linalg.norm(S):
            return S_new
        S = S_new
    raise RuntimeError("oracle did not converge")


def random_spd(rng, p, cond=None):
    A = rng.standard_normal((p, p))
    S = A @ A.T + np.eye(p)
    if cond is not None:
        Q, _ = np.linalg.qr(rng.standard_normal((p, p)))
        ev = np.geomspace(1.0, cond, p)
        S = (Q * ev) @ Q.T
        S = 0.5 * (S + S.T)
    return S


def random_invertible(rng, p, max_cond=100.0):
    """U diag(s) V' with singular values in [1, max_cond]."""
    U, _ = np.linalg.qr(rng.standard_normal((p, p)))
    V, _ = np.linalg.qr(rng.standard_normal((p, p)))
    s = rng.uniform(1.0, max_cond, p)
    s[0], s[-1] = 1.0, max_cond
    return (U * s) @ V.T


def excess_kurtosis_g2(x):
    """Bias-corrected sample excess kurtosis written out from its formula."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    d = x - x.mean()
    m2 = np.mean(d**2)
    m4 = np.mean(d**4)
    g2 = m4 / m2**2 - 3.0
    return (n - 1) / ((n - 2) * (n - 3)) * ((n + 1) * g2 + 6.0)
