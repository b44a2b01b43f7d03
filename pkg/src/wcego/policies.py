"""Deterministic optimization policies and the regret-trace runner.

Every policy is a pure function of its history: identical histories yield
identical next points bit-for-bit, which is what makes zero sequences and
adversarial constructions reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr

from .errors import PolicyViolation, SizeOverflow
from .interpolate import Design, empty_posterior, fit, grid
from .kernels import BoxDomain, KernelSpec
from .search import SearchConfig, minimize

STD_FLOOR = 1e-12  # below this, EI degenerates to max(0, y* - m)


def history_design(history) -> Design:
    if not history:
        return Design(points=np.zeros((0, 1)), values=np.zeros(0))
    pts = np.asarray([h[0] for h in history], dtype=float)
    vals = np.asarray([h[1] for h in history], dtype=float)
    return Design(points=pts, values=vals)


def _fit_history(kernel, history, dim, R=None):
    if not history:
        return empty_posterior(kernel, dim)
    return fit(kernel, history_design(history), R=R)


class Policy:
    """Behavioral contract: next(history) -> point, report(history) -> point."""

    policy_id: str = "abstract"
    params: dict = {}

    def next(self, history) -> np.ndarray:
        raise NotImplementedError

    def report(self, history) -> np.ndarray:
        raise NotImplementedError


def _best_observed(history) -> np.ndarray:
    idx = int(np.argmin([h[1] for h in history]))
    return np.asarray(history[idx][0], dtype=float)


@dataclass(frozen=True, eq=False)
class LcbPolicy(Policy):
    """Lower confidence bound: minimize m_t - beta*sigma_t (plain) or the
    certified lower envelope m_t - sigma_t*sqrt(R^2 - norm_sq) (certified)."""

    kernel: KernelSpec
    domain: BoxDomain
    beta: float = 1.0
    variant: str = "plain"  # or "certified"
    R: float | None = None
    search: SearchConfig = field(default_factory=SearchConfig)
    x1: np.ndarray | None = None

    @property
    def policy_id(self):
        return f"lcb-{self.variant}"

    @property
    def params(self):
        return {"beta": self.beta, "variant": self.variant, "R": self.R}

    def _acquisition(self, post):
        if self.variant == "certified":
            def acq(P):
                lo, _ = post.envelope_many(self.R, P)
                return lo
        else:
            def acq(P):
                return post.mean_many(P) - self.beta * post.std_many(P)
        return acq

    def next(self, history):
        if not history and self.x1 is not None:
            return np.asarray(self.x1, dtype=float)
        R = self.R if self.variant == "certified" else None
        post = _fit_history(self.kernel, history, self.domain.dim, R=R)
        x, _ = minimize(self._acquisition(post), self.domain, self.search)
        return x

    def report(self, history):
        return _best_observed(history)


@dataclass(frozen=True, eq=False)
class EiPolicy(Policy):
    """Expected improvement for noiseless minimization."""

    kernel: KernelSpec
    domain: BoxDomain
    search: SearchConfig = field(default_factory=SearchConfig)
    x1: np.ndarray | None = None

    policy_id = "ei"

    @property
    def params(self):
        return {}

    def acquisition(self, post, y_best):
        def neg_ei(P):
            return -expected_improvement(post, y_best, P)
        return neg_ei

    def next(self, history):
        if not history:
            if self.x1 is not None:
                return np.asarray(self.x1, dtype=float)
            return self.domain.center
        post = _fit_history(self.kernel, history, self.domain.dim)
        y_best = min(h[1] for h in history)
        x, _ = minimize(self.acquisition(post, y_best), self.domain, self.search)
        return x

    def report(self, history):
        return _best_observed(history)


def expected_improvement(post, y_best, P) -> np.ndarray:
    """EI(x) = (y* - m)Phi(z) + sigma*phi(z), z = (y* - m)/sigma, with the
    degenerate sigma -> 0 limit max(0, y* - m)."""
    m = post.mean_many(P)
    s = post.std_many(P)
    gap = y_best - m
    out = np.maximum(gap, 0.0)
    live = s > STD_FLOOR
    if np.any(live):
        z = gap[live] / s[live]
        pdf = np.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
        out[live] = gap[live] * ndtr(z) + s[live] * pdf
    return out


@dataclass(frozen=True, eq=False)
class GridPolicy(Policy):
    """Non-adaptive uniform lattice sweep with a certified reporting rule:
    the recommendation minimizes the lower envelope after the sweep."""

    kernel: KernelSpec
    domain: BoxDomain
    N: int
    R: float
    search: SearchConfig = field(default_factory=SearchConfig)

    policy_id = "grid"

    @property
    def params(self):
        return {"N": self.N, "R": self.R}

    @property
    def lattice(self):
        return grid(self.domain, self.N)

    def next(self, history):
        t = len(history)
        if t >= self.N ** self.domain.dim:
            raise SizeOverflow(
                f"lattice of {self.N}^{self.domain.dim} points exhausted")
        return self.lattice[t].copy()

    def report(self, history):
        post = _fit_history(self.kernel, history, self.domain.dim, R=self.R)

        def lower_env(P):
            lo, _ = post.envelope_many(self.R, P)
            return lo

        x, _ = minimize(lower_env, self.domain, self.search)
        return x


@dataclass(frozen=True, eq=False)
class TwoPhasePolicy(Policy):
    """Cumulative-regret strategy: sweep a lattice sized for the horizon,
    then repeat the certified recommendation for the remaining budget."""

    kernel: KernelSpec
    domain: BoxDomain
    R: float
    horizon: int
    search: SearchConfig = field(default_factory=SearchConfig)

    policy_id = "two_phase"

    @property
    def params(self):
        return {"R": self.R, "horizon": self.horizon, "N": self.lattice_size}

    @property
    def lattice_size(self) -> int:
        d = self.domain.dim
        if self.kernel.name == "matern":
            N = math.ceil(self.horizon ** (1.0 / (d + self.kernel.nu)))
        else:
            N = math.ceil(math.log(self.horizon))
        return max(N, 1)

    def _phase1(self):
        return GridPolicy(kernel=self.kernel, domain=self.domain,
                          N=self.lattice_size, R=self.R, search=self.search)

    def next(self, history):
        t = len(history)
        n_sweep = min(self.lattice_size ** self.domain.dim, self.horizon)
        if t < n_sweep:
            return self._phase1().next(history)
        # phase 2: recommendation frozen from the sweep prefix
        return self._phase1().report(history[:n_sweep])

    def report(self, history):
        n_sweep = min(self.lattice_size ** self.domain.dim, self.horizon)
        return self._phase1().report(history[:min(len(history), n_sweep)])


@dataclass(frozen=True)
class GroundTruth:
    min_value: float
    argmin: np.ndarray


def batch_eval(f, pts, chunk=200_000) -> np.ndarray:
    out = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], chunk):
        out[start:start + chunk] = f(pts[start:start + chunk])
    return out


def ground_truth(f, domain: BoxDomain,
                 search: SearchConfig | None = None) -> GroundTruth:
    """Brute-force minimum of a cheap closed-form function: dense grid at
    4x the acquisition resolution (capped at 10^6 points) plus polish."""
    if search is None:
        search = SearchConfig()
    d = domain.dim
    res = min(4 * search.resolution(d), int(10**(6.0 / d)))
    dense = SearchConfig(points_per_dim=res,
                         polish_iters=max(search.polish_iters, 40),
                         polish_rounds=max(search.polish_rounds, 3))
    x, v = minimize(lambda P: batch_eval(f, P), domain, dense)
    return GroundTruth(min_value=v, argmin=x)


@dataclass
class RegretTrace:
    """Per-step record of a single policy run (simple-regret metric)."""

    policy_id: str
    truth_min: float
    steps: list = field(default_factory=list)  # (t, x, value, simple_regret)
    reported_point: np.ndarray | None = None
    reported_value: float | None = None

    @property
    def simple_regret(self) -> np.ndarray:
        return np.asarray([row[3] for row in self.steps])

    def to_csv_rows(self):
        header = ["t"] + [f"x{i+1}" for i in
                          range(len(np.atleast_1d(self.steps[0][1])))] + \
                 ["value", "simple_regret"]
        rows = [[t, *np.atleast_1d(x).tolist(), v, r]
                for (t, x, v, r) in self.steps]
        return header, rows


@dataclass
class CumulativeTrace:
    policy_id: str
    truth_min: float
    steps: list = field(default_factory=list)  # (t, x, value, cumulative_regret)

    @property
    def cumulative_regret(self) -> np.ndarray:
        return np.asarray([row[3] for row in self.steps])

    def to_csv_rows(self):
        header = ["t"] + [f"x{i+1}" for i in
                          range(len(np.atleast_1d(self.steps[0][1])))] + \
                 ["value", "cumulative_regret"]
        rows = [[t, *np.atleast_1d(x).tolist(), v, r]
                for (t, x, v, r) in self.steps]
        return header, rows


def _checked(policy, x, domain):
    if not domain.contains(x):
        raise PolicyViolation(
            f"{policy.policy_id} emitted {x} outside the box")
    return x


def run_policy(policy: Policy, f, budget: int, domain: BoxDomain,
               truth: GroundTruth) -> RegretTrace:
    """Run a policy on f for `budget` noiseless evaluations, then evaluate
    the reported point as one extra step."""
    trace = RegretTrace(policy_id=policy.policy_id, truth_min=truth.min_value)
    history = []
    best = math.inf
    for t in range(1, budget + 1):
        x = _checked(policy, policy.next(history), domain)
        y = float(f(x))
        history.append((x, y))
        best = min(best, y)
        trace.steps.append((t, x, y, best - truth.min_value))
    x_rep = _checked(policy, policy.report(history), domain)
    y_rep = float(f(x_rep))
    best = min(best, y_rep)
    trace.steps.append((budget + 1, x_rep, y_rep, best - truth.min_value))
    trace.reported_point = x_rep
    trace.reported_value = y_rep
    return trace


def two_phase(kernel: KernelSpec, domain: BoxDomain, R: float, T: int,
              f, truth: GroundTruth,
              search: SearchConfig | None = None) -> CumulativeTrace:
    """Run the two-phase strategy to horizon T and record cumulative regret."""
    if T < 2:
        raise SizeOverflow("two-phase strategy needs T >= 2")
    policy = TwoPhasePolicy(kernel=kernel, domain=domain, R=R, horizon=T,
                            search=search or SearchConfig())
    trace = CumulativeTrace(policy_id=policy.policy_id,
                            truth_min=truth.min_value)
    history = []
    cum = 0.0
    for t in range(1, T + 1):
        x = _checked(policy, policy.next(history), domain)
        y = float(f(x))
        history.append((x, y))
        cum += y - truth.min_value
        trace.steps.append((t, x, y, cum))
    return trace
