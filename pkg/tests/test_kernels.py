"""Kernel evaluation against closed forms, an independent Bessel-function
oracle, positive-semidefiniteness, and backend equivalence."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wcego import BoxDomain, KernelSpec, cross, gram, kernel_eval
from wcego.backend import available_backends
from wcego.errors import DimensionError, UnsupportedParameter
from wcego.kernels import as_points, pairwise_matrix

# Matern 5/2, rho=1, var=1 at r=1, frozen from the general Bessel-function
# formula (2^{1-nu}/Gamma(nu)) (sqrt(2 nu) r/rho)^nu K_nu(sqrt(2 nu) r/rho)
MATERN_52_AT_1 = 0.5239941088318203


def test_se_closed_form_values():
    k = KernelSpec.se(lengthscale=1.0)
    assert kernel_eval(k, [0.0], [0.0]) == 1.0
    assert kernel_eval(k, [0.0], [1.0]) == pytest.approx(math.exp(-1.0), abs=1e-15)
    # no factor 2 in the denominator: k(0, l) = e^{-1}, not e^{-1/2}
    k2 = KernelSpec.se(lengthscale=2.0)
    assert kernel_eval(k2, [0.0], [2.0]) == pytest.approx(math.exp(-1.0), abs=1e-15)
    assert kernel_eval(k2, [0.0, 0.0], [1.0, 1.0]) == pytest.approx(
        math.exp(-0.5), abs=1e-15)


def test_matern_52_matches_bessel_oracle():
    k = KernelSpec.matern(nu=2.5, rho=1.0, variance=1.0)
    assert kernel_eval(k, [0.0], [1.0]) == pytest.approx(
        MATERN_52_AT_1, abs=1e-12)
    # recompute the oracle from scipy's modified Bessel function
    from scipy.special import gamma, kv
    nu, r = 2.5, 1.0
    arg = math.sqrt(2 * nu) * r
    oracle = (2.0 ** (1 - nu) / gamma(nu)) * arg ** nu * kv(nu, arg)
    assert kernel_eval(k, [0.0], [1.0]) == pytest.approx(oracle, abs=1e-12)


@pytest.mark.parametrize("nu", [0.5, 1.5, 2.5, 3.5])
def test_matern_all_orders_match_bessel_oracle(nu):
    from scipy.special import gamma, kv
    k = KernelSpec.matern(nu=nu, rho=0.7, variance=1.3)
    for r in (0.05, 0.4, 1.1, 3.0):
        arg = math.sqrt(2 * nu) * r / 0.7
        oracle = 1.3 * (2.0 ** (1 - nu) / gamma(nu)) * arg ** nu * kv(nu, arg)
        assert kernel_eval(k, [0.0], [r]) == pytest.approx(oracle, rel=1e-10)


def test_matern_12_is_exponential():
    k = KernelSpec.matern(nu=0.5, rho=0.8, variance=2.0)
    for r in (0.0, 0.3, 1.7):
        assert kernel_eval(k, [0.0], [r]) == pytest.approx(
            2.0 * math.exp(-r / 0.8), abs=1e-14)


def test_quadratic_closed_form():
    k = KernelSpec.quadratic()
    assert kernel_eval(k, [1.0, 2.0], [3.0, 4.0]) == pytest.approx(121.0)
    assert kernel_eval(k, [1.0, 0.0], [0.0, 1.0]) == 0.0
    assert k.diag_value([2.0, 1.0]) == pytest.approx(25.0)


def test_unsupported_parameters():
    with pytest.raises(UnsupportedParameter):
        KernelSpec.matern(nu=2.0)
    with pytest.raises(UnsupportedParameter):
        KernelSpec.se(lengthscale=0.0)
    with pytest.raises(UnsupportedParameter):
        KernelSpec(name="rbf")
    with pytest.raises(UnsupportedParameter):
        KernelSpec.matern(nu=2.5, rho=-1.0)


def test_dimension_mismatch():
    k = KernelSpec.se()
    with pytest.raises(DimensionError):
        kernel_eval(k, [0.0], [0.0, 1.0])
    with pytest.raises(DimensionError):
        pairwise_matrix(k, np.zeros((3, 2)), np.zeros((3, 1)))


def test_gram_symmetric_and_psd():
    rng = np.random.default_rng(0)
    for k in (KernelSpec.se(0.7), KernelSpec.matern(2.5, 0.5, 1.0),
              KernelSpec.quadratic()):
        X = rng.uniform(-2, 2, size=(20, 2))
        K = gram(k, X)
        assert np.array_equal(K, K.T)
        # eigenvalue oracle: min eigenvalue >= -1e-8 * trace
        eigs = np.linalg.eigvalsh(K)
        assert eigs.min() >= -1e-8 * np.trace(K)


def test_cross_matches_gram_column():
    rng = np.random.default_rng(1)
    k = KernelSpec.matern(1.5, 1.0, 1.0)
    X = rng.uniform(-1, 1, size=(6, 3))
    x = rng.uniform(-1, 1, size=3)
    v = cross(k, X, x)
    full = gram(k, np.vstack([X, x[None, :]]))
    assert np.allclose(v, full[:6, 6], atol=1e-15)


def test_as_points_shapes():
    assert as_points([1.0, 2.0]).shape == (1, 2)
    assert as_points([[1.0], [2.0]]).shape == (2, 1)
    with pytest.raises(DimensionError):
        as_points(np.zeros((2, 3)), dim=2)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=2, max_size=2),
       st.lists(st.floats(-5, 5), min_size=2, max_size=2),
       st.lists(st.floats(-3, 3), min_size=2, max_size=2))
def test_stationary_kernels_translation_invariant(x, y, shift):
    x, y, shift = map(np.asarray, (x, y, shift))
    for k in (KernelSpec.se(0.9), KernelSpec.matern(3.5, 1.2, 1.0)):
        a = kernel_eval(k, x, y)
        b = kernel_eval(k, x + shift, y + shift)
        assert a == pytest.approx(b, abs=1e-12)
        assert kernel_eval(k, y, x) == pytest.approx(a, abs=1e-15)
        assert 0.0 <= a <= k.diag_value() + 1e-15


@settings(max_examples=30, deadline=None)
@given(st.floats(0.01, 10.0), st.floats(0.2, 3.0))
def test_matern_monotone_decreasing_in_distance(r, rho):
    k = KernelSpec.matern(nu=2.5, rho=rho, variance=1.0)
    assert kernel_eval(k, [0.0], [r]) > kernel_eval(k, [0.0], [r * 1.5])


def test_bounded_by_one_flags():
    box = BoxDomain((-1.0, -1.0), (1.0, 1.0))
    assert KernelSpec.se(0.5).bounded_by_one(box)
    assert KernelSpec.matern(2.5, 1.0, 1.0).bounded_by_one(box)
    assert not KernelSpec.matern(2.5, 1.0, 2.0).bounded_by_one(box)
    # (x^T y)^2 reaches 4 at corner pairs of [-1,1]^2
    assert not KernelSpec.quadratic().bounded_by_one(box)
    small = BoxDomain((-0.5, -0.5), (0.5, 0.5))
    assert KernelSpec.quadratic().bounded_by_one(small)


@pytest.mark.skipif(len(available_backends()) < 2,
                    reason="compiled backend not built")
def test_backends_agree():
    from wcego import _gram_np
    from wcego import _gram_cy
    rng = np.random.default_rng(7)
    X = rng.uniform(-3, 3, size=(17, 2))
    Y = rng.uniform(-3, 3, size=(11, 2))
    for args in (("se_matrix", (X, Y, 0.8)),
                 ("matern_matrix", (X, Y, 2.5, 0.6, 1.4)),
                 ("matern_matrix", (X, Y, 3.5, 1.1, 1.0)),
                 ("quadratic_matrix", (X, Y))):
        name, a = args
        got_np = getattr(_gram_np, name)(*a)
        got_cy = getattr(_gram_cy, name)(*a)
        assert np.allclose(got_np, got_cy, rtol=1e-14, atol=1e-14)
