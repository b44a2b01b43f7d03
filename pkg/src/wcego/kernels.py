"""Kernel functions, Gram matrices and cross-covariance vectors.

Supported kernels:

* ``se``        -- squared exponential, k(x,y) = exp(-||x-y||^2 / l^2)
                   (note: no factor 2 in the denominator; implicit unit
                   variance, so k(x,x) = 1)
* ``matern``    -- half-integer Matern with nu in {1/2, 3/2, 5/2, 7/2},
                   evaluated by the polynomial-times-exponential closed
                   forms; k(x,x) = variance
* ``quadratic`` -- k(x,y) = (x^T y)^2, the finite-dimensional kernel whose
                   RKHS is the set of quadratic forms x^T A x

All heavy pairwise evaluation is delegated to the selected backend
(compiled core or NumPy fallback, see :mod:`wcego.backend`).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import backend
from .errors import DimensionError, UnsupportedParameter

SUPPORTED_NU = (0.5, 1.5, 2.5, 3.5)


@dataclass(frozen=True)
class KernelSpec:
    """Immutable kernel configuration."""

    name: str
    lengthscale: float = 1.0
    nu: float = 2.5
    rho: float = 1.0
    variance: float = 1.0

    def __post_init__(self):
        if self.name not in ("se", "matern", "quadratic"):
            raise UnsupportedParameter(f"unknown kernel {self.name!r}")
        if self.name == "se" and self.lengthscale <= 0:
            raise UnsupportedParameter("SE lengthscale must be > 0")
        if self.name == "matern":
            if self.nu not in SUPPORTED_NU:
                raise UnsupportedParameter(
                    f"Matern nu must be one of {SUPPORTED_NU}, got {self.nu}")
            if self.rho <= 0 or self.variance <= 0:
                raise UnsupportedParameter("Matern rho and variance must be > 0")

    @classmethod
    def se(cls, lengthscale=1.0):
        return cls(name="se", lengthscale=float(lengthscale))

    @classmethod
    def matern(cls, nu=2.5, rho=1.0, variance=1.0):
        return cls(name="matern", nu=float(nu), rho=float(rho),
                   variance=float(variance))

    @classmethod
    def quadratic(cls):
        return cls(name="quadratic")

    @property
    def stationary(self) -> bool:
        return self.name in ("se", "matern")

    def diag_value(self, x=None) -> float:
        """k(x,x); constant for stationary kernels."""
        if self.name == "se":
            return 1.0
        if self.name == "matern":
            return self.variance
        x = np.asarray(x, dtype=float)
        return float(np.dot(x, x) ** 2)

    def bounded_by_one(self, domain) -> bool:
        """Assumption-conformance flag: k(x,y) <= 1 over the given box.

        Exact for SE and Matern; for the quadratic kernel (x^T y)^2 is
        coordinate-wise convex, so the maximum over the box pair is
        attained at vertex pairs and checked there.
        """
        if self.name == "se":
            return True
        if self.name == "matern":
            return self.variance <= 1.0
        corners = np.array(list(itertools.product(*zip(domain.lower, domain.upper))))
        vals = pairwise_matrix(self, corners, corners)
        return bool(vals.max() <= 1.0 + 1e-12)


@dataclass(frozen=True)
class BoxDomain:
    """Compact axis-aligned box [lower_i, upper_i]^d."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if len(lo) != len(hi) or len(lo) < 1:
            raise DimensionError("lower/upper must be equal-length, d >= 1")
        if any(a >= b for a, b in zip(lo, hi)):
            raise DimensionError("need lower[i] < upper[i] in every coordinate")

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def center(self) -> np.ndarray:
        return (np.asarray(self.lower) + np.asarray(self.upper)) / 2.0

    def contains(self, x, tol=1e-9) -> bool:
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= np.asarray(self.lower) - tol)
                    and np.all(x <= np.asarray(self.upper) + tol))


def as_points(X, dim=None):
    """Coerce to a C-contiguous (t, d) float64 array; validate dimension."""
    A = np.ascontiguousarray(np.atleast_2d(np.asarray(X, dtype=np.float64)))
    if A.ndim != 2:
        raise DimensionError(f"expected points of shape (t, d), got {A.shape}")
    if dim is not None and A.shape[1] != dim:
        raise DimensionError(f"expected dimension {dim}, got {A.shape[1]}")
    return A


def pairwise_matrix(spec: KernelSpec, X, Y) -> np.ndarray:
    """(t, m) matrix of k(x_i, y_j) via the selected backend."""
    X = as_points(X)
    Y = as_points(Y, dim=X.shape[1])
    if spec.name == "se":
        return backend.impl.se_matrix(X, Y, spec.lengthscale)
    if spec.name == "matern":
        return backend.impl.matern_matrix(X, Y, spec.nu, spec.rho, spec.variance)
    return backend.impl.quadratic_matrix(X, Y)


def kernel_eval(spec: KernelSpec, x, y) -> float:
    """Pointwise k(x, y)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = np.atleast_1d(np.asarray(y, dtype=float))
    if x.shape != y.shape:
        raise DimensionError(f"x has shape {x.shape}, y has shape {y.shape}")
    return float(pairwise_matrix(spec, x[None, :], y[None, :])[0, 0])


def gram(spec: KernelSpec, X) -> np.ndarray:
    """Gram matrix K[i][j] = k(x_i, x_j), exactly symmetric."""
    X = as_points(X)
    K = pairwise_matrix(spec, X, X)
    # mirror the upper triangle so symmetry holds bit-for-bit
    iu = np.triu_indices(K.shape[0], k=1)
    K[(iu[1], iu[0])] = K[iu]
    return K


def cross(spec: KernelSpec, X, x) -> np.ndarray:
    """Cross-covariance vector [k(x_1, x), ..., k(x_t, x)]."""
    X = as_points(X)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return pairwise_matrix(spec, X, x[None, :])[:, 0]
