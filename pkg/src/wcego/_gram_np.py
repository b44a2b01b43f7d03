"""NumPy backend for pairwise kernel-matrix assembly.

Mirrors the API of the compiled backend ``_gram_cy``; which one is used is
decided once in :mod:`wcego.backend`.
"""

import numpy as np

BACKEND_NAME = "numpy"


def _sqdist(X, Y):
    # (t, m) matrix of squared Euclidean distances, clipped at 0 for round-off
    d2 = (
        np.sum(X * X, axis=1)[:, None]
        + np.sum(Y * Y, axis=1)[None, :]
        - 2.0 * (X @ Y.T)
    )
    return np.maximum(d2, 0.0)


def se_matrix(X, Y, lengthscale):
    return np.exp(-_sqdist(X, Y) / (lengthscale * lengthscale))


def matern_matrix(X, Y, nu, rho, variance):
    r = np.sqrt(_sqdist(X, Y)) / rho
    if nu == 0.5:
        poly = 1.0
        s = r
    elif nu == 1.5:
        s = np.sqrt(3.0) * r
        poly = 1.0 + s
    elif nu == 2.5:
        s = np.sqrt(5.0) * r
        poly = 1.0 + s + (5.0 / 3.0) * r * r
    elif nu == 3.5:
        s = np.sqrt(7.0) * r
        poly = 1.0 + s + (14.0 / 5.0) * r * r + (7.0 * np.sqrt(7.0) / 15.0) * r**3
    else:  # guarded upstream by KernelSpec validation
        raise ValueError(f"unsupported Matern nu={nu}")
    return variance * poly * np.exp(-s)


def quadratic_matrix(X, Y):
    ip = X @ Y.T
    return ip * ip
