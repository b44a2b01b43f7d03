"""Noiseless kernel interpolation: posterior mean/deviation, norm
certificates, certified envelopes, minimum-norm interpolants and random
RKHS-ball sampling.

The fitted posterior mean is the minimum-norm interpolant of the data;
``norm_sq`` is its squared RKHS norm f_X^T K^{-1} f_X and certifies
membership of the data in the ball of radius R.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_solve, cholesky, solve_triangular

from .errors import (DimensionError, IllConditioned, NormBudgetExceeded,
                     RejectionBudgetExhausted, SizeOverflow)
from .kernels import BoxDomain, KernelSpec, as_points, gram, pairwise_matrix

# jitter ladder: multiples of trace(K)/t tried in order until Cholesky succeeds
JITTER_LADDER = tuple(1e-12 * 10.0**k for k in range(7))

# exact (jitter-free) factors are kept only when the Cholesky diagonal
# indicates cond(K) small enough that round-off stays inside VAR_CLAMP
_EXACT_COND_CAP = 1e5

VAR_CLAMP = 1e-10          # sigma^2 in (-VAR_CLAMP, 0) clamps to 0
NORM_BUDGET_SLACK = 1e-6   # norm_sq may exceed R^2 by this relative slack
KNOT_SEPARATION = 1e-9
GRID_CAP = 10**6


@dataclass(frozen=True)
class Design:
    """Finite sample set with observed values."""

    points: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        P = as_points(self.points) if np.size(self.points) else \
            np.zeros((0, 1))
        v = np.asarray(self.values, dtype=float).ravel()
        if P.shape[0] != v.shape[0]:
            raise DimensionError(
                f"{P.shape[0]} points but {v.shape[0]} values")
        object.__setattr__(self, "points", P)
        object.__setattr__(self, "values", v)

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


def _factor_with_jitter(K: np.ndarray):
    """Lower Cholesky of K + jitter*I along the ladder.

    Returns (L, jitter_used). Raises IllConditioned when every rung fails.
    """
    t = K.shape[0]
    scale = np.trace(K) / t if t else 0.0
    try:
        L = cholesky(K, lower=True)
        d = np.diag(L)
        if d.min() > 0.0 and (d.max() / d.min()) ** 2 <= _EXACT_COND_CAP:
            return L, 0.0
    except Exception:
        pass
    for rung in JITTER_LADDER:
        jit = rung * scale
        try:
            L = cholesky(K + jit * np.eye(t), lower=True)
            return L, jit
        except np.linalg.LinAlgError:
            continue
        except Exception:
            continue
    raise IllConditioned(
        f"Gram factorization failed for t={t} at every jitter rung")


@dataclass(frozen=True)
class Posterior:
    """Fitted noiseless interpolant. Immutable; evaluations are pure."""

    kernel: KernelSpec
    design: Design
    chol: np.ndarray
    alpha: np.ndarray
    norm_sq: float
    jitter_used: float

    @property
    def size(self) -> int:
        return self.design.size

    def mean_many(self, Xq) -> np.ndarray:
        Xq = as_points(Xq)
        if self.design.size == 0:
            return np.zeros(Xq.shape[0])
        Kxq = pairwise_matrix(self.kernel, self.design.points, Xq)
        return Kxq.T @ self.alpha

    def std_many(self, Xq) -> np.ndarray:
        Xq = as_points(Xq)
        if self.kernel.stationary:
            kxx = np.full(Xq.shape[0], self.kernel.diag_value())
        else:
            kxx = np.einsum("ij,ij->i", Xq, Xq) ** 2
        if self.design.size == 0:
            return np.sqrt(kxx)
        Kxq = pairwise_matrix(self.kernel, self.design.points, Xq)
        V = solve_triangular(self.chol, Kxq, lower=True)
        var = kxx - np.einsum("ij,ij->j", V, V)
        bad = var < -VAR_CLAMP
        if np.any(bad):
            raise IllConditioned(
                f"negative posterior variance {var[bad].min():.3e}")
        return np.sqrt(np.maximum(var, 0.0))

    def mean(self, x) -> float:
        return float(self.mean_many(np.atleast_1d(np.asarray(x, float))[None, :])[0])

    def std(self, x) -> float:
        return float(self.std_many(np.atleast_1d(np.asarray(x, float))[None, :])[0])

    def envelope_many(self, R: float, Xq):
        """Certified lower/upper bounds on every f in the R-ball matching
        the data: m(x) -/+ sigma(x) * sqrt(R^2 - norm_sq)."""
        if self.norm_sq > R * R * (1.0 + NORM_BUDGET_SLACK):
            raise NormBudgetExceeded(
                f"norm_sq={self.norm_sq:.6g} exceeds R^2={R*R:.6g}")
        radius = np.sqrt(max(R * R - self.norm_sq, 0.0))
        m = self.mean_many(Xq)
        s = self.std_many(Xq)
        return m - radius * s, m + radius * s

    def envelope(self, R: float, x):
        lo, hi = self.envelope_many(R, np.atleast_1d(np.asarray(x, float))[None, :])
        return float(lo[0]), float(hi[0])


def empty_posterior(kernel: KernelSpec, dim: int) -> Posterior:
    """Prior state (t = 0): mean 0, std sqrt(k(x,x)), norm_sq 0."""
    design = Design(points=np.zeros((0, dim)), values=np.zeros(0))
    return Posterior(kernel=kernel, design=design,
                     chol=np.zeros((0, 0)), alpha=np.zeros(0),
                     norm_sq=0.0, jitter_used=0.0)


def fit(kernel: KernelSpec, design: Design, R: float | None = None) -> Posterior:
    """Fit the noiseless interpolating posterior.

    When R is given, the norm certificate is checked against the ball:
    norm_sq > R^2 (1 + slack) raises NormBudgetExceeded, since no ball
    function is consistent with the data and envelopes are undefined.
    """
    if design.size == 0:
        return empty_posterior(kernel, design.dim)
    K = gram(kernel, design.points)
    L, jit = _factor_with_jitter(K)
    alpha = cho_solve((L, True), design.values)
    norm_sq = float(design.values @ alpha)
    if -1e-10 < norm_sq < 0.0:
        norm_sq = 0.0
    post = Posterior(kernel=kernel, design=design, chol=L, alpha=alpha,
                     norm_sq=norm_sq, jitter_used=jit)
    if R is not None and norm_sq > R * R * (1.0 + NORM_BUDGET_SLACK):
        raise NormBudgetExceeded(
            f"norm_sq={norm_sq:.6g} exceeds R^2={R*R:.6g}; data leaves the ball")
    return post


@dataclass(frozen=True)
class RkhsFunction:
    """Finite kernel expansion f(x) = sum_i w_i k(c_i, x)."""

    kernel: KernelSpec
    centers: np.ndarray
    weights: np.ndarray
    attempts: int = 1  # rejection-sampling attempts that produced it

    def __post_init__(self):
        object.__setattr__(self, "centers", as_points(self.centers))
        object.__setattr__(self, "weights",
                           np.asarray(self.weights, dtype=float).ravel())
        if self.centers.shape[0] != self.weights.shape[0]:
            raise DimensionError("centers/weights length mismatch")

    def __call__(self, Xq):
        Xq = np.asarray(Xq, dtype=float)
        scalar = Xq.ndim <= 1
        Kcq = pairwise_matrix(self.kernel, self.centers, np.atleast_2d(Xq))
        out = Kcq.T @ self.weights
        return float(out[0]) if scalar else out

    @property
    def norm(self) -> float:
        """RKHS norm sqrt(w^T K w), recomputed from the Gram matrix."""
        K = gram(self.kernel, self.centers)
        q = float(self.weights @ K @ self.weights)
        return float(np.sqrt(max(q, 0.0)))

    def to_json(self) -> str:
        return json.dumps({
            "kernel": {"name": self.kernel.name,
                       "lengthscale": self.kernel.lengthscale,
                       "nu": self.kernel.nu, "rho": self.kernel.rho,
                       "variance": self.kernel.variance},
            "centers": self.centers.tolist(),
            "weights": self.weights.tolist(),
        })

    @classmethod
    def from_json(cls, blob: str) -> "RkhsFunction":
        d = json.loads(blob)
        return cls(kernel=KernelSpec(**d["kernel"]),
                   centers=np.asarray(d["centers"]),
                   weights=np.asarray(d["weights"]))


def min_norm_interpolant(kernel: KernelSpec, knots, values) -> RkhsFunction:
    """Minimum-RKHS-norm function through (knots, values)."""
    knots = as_points(knots)
    values = np.asarray(values, dtype=float).ravel()
    if knots.shape[0] > 1:
        diff = knots[:, None, :] - knots[None, :, :]
        dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        np.fill_diagonal(dist, np.inf)
        if dist.min() <= KNOT_SEPARATION:
            raise IllConditioned(
                f"duplicate knots (separation {dist.min():.3e})")
    post = fit(kernel, Design(points=knots, values=values))
    return RkhsFunction(kernel=kernel, centers=knots, weights=post.alpha)


def sample_rkhs(kernel: KernelSpec, domain: BoxDomain, n_knots: int,
                R: float, seed: int, mode: str = "reject",
                max_attempts: int = 1000) -> RkhsFunction:
    """Draw a random function from the R-ball as a minimum-norm interpolant
    of uniform knots with Gaussian marginal values.

    mode="reject": resample until the norm fits in the ball (capped).
    mode="rescale": scale the values by u*R/norm with u uniform on (0, 1].
    """
    if n_knots < 1:
        raise DimensionError("n_knots must be >= 1")
    if mode not in ("reject", "rescale"):
        raise ValueError(f"unknown sampling mode {mode!r}")
    rng = np.random.default_rng(seed)
    lo = np.asarray(domain.lower)
    hi = np.asarray(domain.upper)

    def draw():
        knots = lo + rng.random((n_knots, domain.dim)) * (hi - lo)
        K = gram(kernel, knots)
        L, _ = _factor_with_jitter(K)
        values = L @ rng.standard_normal(n_knots)
        return min_norm_interpolant(kernel, knots, values)

    if mode == "reject":
        for attempt in range(1, max_attempts + 1):
            f = draw()
            if f.norm <= R:
                return RkhsFunction(kernel=f.kernel, centers=f.centers,
                                    weights=f.weights, attempts=attempt)
        raise RejectionBudgetExhausted(
            f"no norm <= {R} draw in {max_attempts} attempts "
            "(hint: try mode='rescale')")

    f = draw()
    norm = f.norm
    if norm == 0.0:
        return f
    u = 1.0 - rng.random()  # uniform on (0, 1]
    return RkhsFunction(kernel=f.kernel, centers=f.centers,
                        weights=f.weights * (u * R / norm))


def grid(domain: BoxDomain, points_per_dim: int, cap: int = GRID_CAP) -> np.ndarray:
    """Uniform lattice {lower + (k/N)(upper-lower), k in {0..N-1}^d} in
    lexicographic order of the index tuple."""
    N = int(points_per_dim)
    if N < 1:
        raise SizeOverflow("points_per_dim must be >= 1")
    d = domain.dim
    if N**d > cap:
        raise SizeOverflow(f"{N}^{d} lattice exceeds cap {cap}")
    lo = np.asarray(domain.lower)
    hi = np.asarray(domain.upper)
    axes = [lo[i] + (np.arange(N) / N) * (hi[i] - lo[i]) for i in range(d)]
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)
