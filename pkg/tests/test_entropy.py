"""Packing estimation: greedy correctness against an exhaustive oracle,
candidate generation, monotonicity, rate reference curves and the entropy
report integration."""

import itertools
import math

import numpy as np
import pytest

from wcego import (BoxDomain, KernelSpec, candidate_ball_functions,
                   entropy_report, greedy_packing, rate_theoretical)
from wcego.adversary import lower_bound_steps
from wcego.entropy import FunctionTable
from wcego.errors import OutOfRegime


def make_table(rows):
    rows = np.asarray(rows, dtype=float)
    return FunctionTable(eval_grid=np.zeros((rows.shape[1], 1)), rows=rows,
                         provenance=["interpolant"] * rows.shape[0],
                         norms=np.ones(rows.shape[0]),
                         grid_resolution=rows.shape[1])


def test_greedy_packing_small_examples():
    # three functions with sup-distances d(0,1)=0.5, d(0,2)=0.3, d(1,2)=0.8
    table = make_table([[0.0, 0.0], [0.5, 0.2], [-0.3, 0.1]])
    assert greedy_packing(table, 0.4).count == 2
    assert greedy_packing(table, 0.25).count == 3
    assert greedy_packing(table, 10.0).count == 1
    with pytest.raises(ValueError):
        greedy_packing(table, 0.0)


def test_greedy_kept_pairs_are_separated():
    rng = np.random.default_rng(5)
    table = make_table(rng.uniform(-1, 1, size=(30, 8)))
    est = greedy_packing(table, 0.7)
    kept = table.rows[list(est.selected_indices)]
    for i, j in itertools.combinations(range(len(kept)), 2):
        assert np.max(np.abs(kept[i] - kept[j])) > 0.7


def test_greedy_against_exhaustive_oracle():
    """Greedy count never exceeds the true maximum packing and achieves at
    least half of it (maximal-packing guarantee) on random tables."""
    rng = np.random.default_rng(0)
    for trial in range(40):
        n = int(rng.integers(3, 10))
        rows = rng.uniform(-1, 1, size=(n, 6))
        table = make_table(rows)
        eps = float(rng.uniform(0.2, 1.5))
        greedy = greedy_packing(table, eps).count
        D = np.max(np.abs(rows[:, None, :] - rows[None, :, :]), axis=2)
        opt = 1
        for k in range(n, 0, -1):
            for S in itertools.combinations(range(n), k):
                sub = D[np.ix_(S, S)]
                iu = np.triu_indices(k, 1)
                if k == 1 or np.all(sub[iu] > eps):
                    opt = k
                    break
            if opt == k:
                break
        assert greedy <= opt
        assert 2 * greedy >= opt


def test_packing_monotone_in_eps():
    rng = np.random.default_rng(1)
    table = make_table(rng.uniform(-1, 1, size=(40, 10)))
    counts = [greedy_packing(table, e).count for e in (0.2, 0.4, 0.8, 1.6)]
    assert counts == sorted(counts, reverse=True)


def test_candidate_translates_have_norm_R():
    kernel = KernelSpec.matern(2.5, 0.3, 1.0)
    dom = BoxDomain((0.0,), (1.0,))
    table = candidate_ball_functions(kernel, dom, R=1.5,
                                     strategy="translates", count=10, seed=0)
    assert table.count == 10
    assert np.allclose(table.norms, 1.5, atol=1e-9)
    assert set(table.provenance) == {"translate+", "translate-"}
    # translate pairs are exact mirror images on the grid
    assert np.allclose(table.rows[0], -table.rows[1], atol=1e-12)


def test_candidate_norms_stay_in_ball():
    kernel = KernelSpec.matern(2.5, 0.3, 1.0)
    dom = BoxDomain((0.0,), (1.0,))
    table = candidate_ball_functions(kernel, dom, R=1.0, strategy="mixed",
                                     count=200, seed=3)
    assert table.count == 200
    assert np.all(table.norms <= 1.0 * (1.0 + 1e-6))
    assert "interpolant" in table.provenance


def test_candidate_generation_deterministic():
    kernel = KernelSpec.se(0.4)
    dom = BoxDomain((0.0,), (1.0,))
    a = candidate_ball_functions(kernel, dom, 1.0, "mixed", 30, seed=7)
    b = candidate_ball_functions(kernel, dom, 1.0, "mixed", 30, seed=7)
    assert np.array_equal(a.rows, b.rows)
    with pytest.raises(ValueError):
        candidate_ball_functions(kernel, dom, 1.0, "bogus", 10, seed=0)


def test_packing_count_grows_with_grid_refinement():
    """A finer evaluation grid can only increase sup-distances, so the
    packing estimate is monotone in the resolution."""
    kernel = KernelSpec.matern(2.5, 0.2, 1.0)
    dom = BoxDomain((0.0,), (1.0,))
    counts = []
    for res in (8, 64, 512):
        from wcego.interpolate import grid as make_grid
        from wcego import RkhsFunction
        eval_pts = make_grid(dom, res)
        centers = make_grid(dom, 12)
        rows = []
        for c in centers:
            f = RkhsFunction(kernel=kernel, centers=c[None, :],
                             weights=np.array([1.0]))
            rows.append(f(eval_pts))
        table = FunctionTable(eval_grid=eval_pts, rows=np.vstack(rows),
                              provenance=["translate+"] * len(rows),
                              norms=np.ones(len(rows)), grid_resolution=res)
        counts.append(greedy_packing(table, 0.5).count)
    assert counts == sorted(counts)


def test_rate_theoretical_shapes():
    # SE lower bound in d=2 is (log R/eps)^0 = 1 for every eps
    assert rate_theoretical("se_lower", 1.0, 0.1, d=2) == pytest.approx(1.0)
    L = math.log(10.0)
    assert rate_theoretical("se_lower", 1.0, 0.1, d=1) == pytest.approx(
        L ** -0.5)
    assert rate_theoretical("se_upper", 1.0, 0.1, d=2) == pytest.approx(L ** 2)
    assert rate_theoretical("matern_upper", 1.0, 0.1, d=1, nu=2.5) == \
        pytest.approx(10.0 ** 0.4)
    assert rate_theoretical("matern_lower", 1.0, 0.1, d=1, nu=2.5) == \
        pytest.approx(10.0 ** (1.0 / 3.0) / L)
    with pytest.raises(OutOfRegime):
        rate_theoretical("se_lower", 1.0, 2.0, d=1)
    with pytest.raises(ValueError):
        rate_theoretical("matern_lower", 1.0, 0.1, d=1)
    with pytest.raises(ValueError):
        rate_theoretical("nope", 1.0, 0.1, d=1)


def test_entropy_report_integration():
    kernel = KernelSpec.matern(2.5, 1.0, 1.0)
    dom = BoxDomain((0.0,), (1.0,))
    eps_list = [0.2, 0.1, 0.05]
    rep = entropy_report(kernel, dom, R=1.0, eps_list=eps_list, seed=0,
                         count=60)
    assert [r[0] for r in rep.rows] == eps_list
    counts = [r[1] for r in rep.rows]
    assert counts == sorted(counts)  # packing at 8*eps grows as eps shrinks
    for eps, count, log_packing, t_star in rep.rows:
        assert log_packing == pytest.approx(math.log(count))
        assert t_star == lower_bound_steps(log_packing, 1.0, eps)
    header, rows = rep.to_csv_rows()
    assert header == ["eps", "packing_count", "log_packing",
                      "lower_bound_steps"]
    assert "lower estimate" in rep.to_json()


def test_entropy_report_regime_guard():
    kernel = KernelSpec.matern(2.5, 1.0, 1.0)
    dom = BoxDomain((0.0,), (1.0,))
    with pytest.raises(OutOfRegime):
        entropy_report(kernel, dom, R=1.0, eps_list=[0.3], seed=0, count=10)
