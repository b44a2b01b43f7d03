"""Shared fixtures and small numerical helpers for the test suite."""

import numpy as np
import pytest

from wcego import BoxDomain, KernelSpec, gram


def rkhs_norm_sq(kernel, centers, weights) -> float:
    """w^T K w for a finite kernel expansion."""
    K = gram(kernel, centers)
    w = np.asarray(weights, dtype=float).ravel()
    return float(w @ K @ w)


def expansion_diff_norm(f, g) -> float:
    """RKHS norm of f - g for two finite expansions of the same kernel."""
    centers = np.vstack([f.centers, g.centers])
    weights = np.concatenate([f.weights, -g.weights])
    return float(np.sqrt(max(rkhs_norm_sq(f.kernel, centers, weights), 0.0)))


@pytest.fixture
def matern_demo():
    """1-d Matern configuration used throughout the adversarial examples."""
    kernel = KernelSpec.matern(nu=2.5, rho=1.0, variance=1.0)
    domain = BoxDomain(lower=(-10.0,), upper=(10.0,))
    return kernel, domain


@pytest.fixture
def unit_interval():
    return BoxDomain(lower=(0.0,), upper=(1.0,))


def random_kernel(rng) -> KernelSpec:
    pick = rng.integers(0, 3)
    if pick == 0:
        return KernelSpec.se(lengthscale=float(rng.uniform(0.5, 2.0)))
    if pick == 1:
        nu = float(rng.choice([0.5, 1.5, 2.5, 3.5]))
        return KernelSpec.matern(nu=nu, rho=float(rng.uniform(0.5, 2.0)),
                                 variance=float(rng.uniform(0.5, 2.0)))
    return KernelSpec.quadratic()


def random_design(rng, kernel, d, t) -> np.ndarray:
    """Well-posed random design: separated points for stationary kernels;
    for the quadratic kernel, at most dim-of-RKHS points away from the
    origin with a conditioning check (its Gram is exactly rank-deficient
    beyond d(d+1)/2 points)."""
    if kernel.name == "quadratic":
        t = min(t, d * (d + 1) // 2)
        while True:
            X = rng.uniform(0.5, 1.5, size=(t, d)) * \
                rng.choice([-1.0, 1.0], size=(t, d))
            if np.linalg.cond(gram(kernel, X)) < 1e4:
                return X
    while True:
        X = rng.uniform(-3, 3, size=(t, d))
        if t == 1:
            return X
        diff = X[:, None, :] - X[None, :, :]
        dist = np.sqrt((diff ** 2).sum(-1))
        np.fill_diagonal(dist, np.inf)
        if dist.min() >= 0.5:
            return X


def random_ball_function(rng, kernel, d, t, seed, R=2.0):
    """Random function of RKHS norm <= R with a well-conditioned
    representation (the ball sampler's interpolation step breaks down on the
    exactly singular quadratic Gram, so that kernel gets direct weights)."""
    from wcego import RkhsFunction, sample_rkhs

    if kernel.name == "quadratic":
        C = random_design(rng, kernel, d, d * (d + 1) // 2)
        w = rng.uniform(-1, 1, size=C.shape[0])
        f = RkhsFunction(kernel=kernel, centers=C, weights=w)
        scale = R * rng.random() / max(f.norm, 1e-12)
        return RkhsFunction(kernel=kernel, centers=C, weights=w * scale)
    return sample_rkhs(kernel, BoxDomain((-3.0,) * d, (3.0,) * d),
                       n_knots=t + 2, R=R, seed=seed, mode="rescale")
