"""Adversarial worst-case machinery: zero sequences, optimal-recovery
worst values, explicit adversarial witnesses, regret curves, and the
metric-entropy step-threshold certificate.

Against a deterministic policy fed only zeros, the worst value achievable
at x by any ball function vanishing on the queried points is
-R * sigma_t(x), and an explicit witness attaining it exists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve

from .errors import OutOfRegime, PolicyViolation, TargetDegenerate
from .interpolate import Design, Posterior, RkhsFunction, empty_posterior, fit
from .kernels import BoxDomain, KernelSpec, cross
from .policies import Policy
from .search import SearchConfig, maximize

TARGET_STD_FLOOR = 1e-8


@dataclass(frozen=True)
class ZeroSequence:
    """Query trajectory of a policy that observes 0 at every step."""

    policy_id: str
    points: np.ndarray  # (T, d)


def zero_sequence(policy: Policy, budget: int, domain: BoxDomain) -> ZeroSequence:
    if budget < 1:
        raise ValueError("budget must be >= 1")
    history = []
    pts = []
    for _ in range(budget):
        x = policy.next(history)
        if not domain.contains(x):
            raise PolicyViolation(
                f"{policy.policy_id} left the box at {x}")
        pts.append(np.asarray(x, dtype=float))
        history.append((x, 0.0))
    return ZeroSequence(policy_id=policy.policy_id,
                        points=np.asarray(pts))


def zero_posterior(kernel: KernelSpec, points) -> Posterior:
    """Posterior conditioned on value 0 at every given point."""
    points = np.asarray(points, dtype=float)
    if points.size == 0:
        return empty_posterior(kernel, points.shape[-1] if points.ndim else 1)
    points = np.atleast_2d(points)
    return fit(kernel, Design(points=points, values=np.zeros(points.shape[0])))


def adversarial_value(post_zero: Posterior, R: float, x) -> float:
    """Minimum of f(x) over ball functions vanishing on the design."""
    return -R * post_zero.std(x)


def adversarial_witness(post_zero: Posterior, R: float, x_target) -> RkhsFunction:
    """Ball function of norm exactly R that is 0 on every queried point and
    attains -R*sigma_t at the target:

        s*(.) = -(R/sigma) * (k(x*, .) - K_{.X} K^{-1} K_{X x*})
    """
    x_target = np.atleast_1d(np.asarray(x_target, dtype=float))
    sigma = post_zero.std(x_target)
    if sigma <= TARGET_STD_FLOOR:
        raise TargetDegenerate(
            f"sigma_t({x_target}) = {sigma:.3e} is numerically zero")
    t = post_zero.size
    if t == 0:
        centers = x_target[None, :]
        weights = np.array([-R / sigma])
    else:
        kvec = cross(post_zero.kernel, post_zero.design.points, x_target)
        beta = cho_solve((post_zero.chol, True), kvec)
        centers = np.vstack([post_zero.design.points, x_target[None, :]])
        weights = np.concatenate([(R / sigma) * beta, [-R / sigma]])
    return RkhsFunction(kernel=post_zero.kernel, centers=centers,
                        weights=weights)


@dataclass
class AdversarialCurve:
    """Worst-case simple regret R*max_x sigma_t(x) per step, t = 0..T."""

    policy_id: str
    R: float
    steps: list = field(default_factory=list)
    # rows: (t, adversarial_regret, argmax point, jitter_used)

    @property
    def regret(self) -> np.ndarray:
        return np.asarray([row[1] for row in self.steps])

    def regret_at(self, t: int) -> float:
        for row in self.steps:
            if row[0] == t:
                return row[1]
        raise KeyError(f"no step {t} in curve")

    def to_csv_rows(self):
        d = len(np.atleast_1d(self.steps[0][2]))
        header = ["t", "adversarial_regret"] + \
                 [f"argmax_x{i+1}" for i in range(d)] + ["jitter_used"]
        rows = [[t, r, *np.atleast_1d(x).tolist(), j]
                for (t, r, x, j) in self.steps]
        return header, rows


def adversarial_regret_curve(policy: Policy, budget: int, kernel: KernelSpec,
                             domain: BoxDomain, R: float,
                             search: SearchConfig | None = None,
                             zs: ZeroSequence | None = None) -> AdversarialCurve:
    """Worst-case (adversarial) simple regret of a policy at every step.

    All observations along the zero sequence are 0, so the policy's simple
    regret against the worst consistent ball function is R*max_x sigma_t(x).
    Includes the prior step t=0.
    """
    search = search or SearchConfig()
    if zs is None and budget >= 1:
        zs = zero_sequence(policy, budget, domain)
    curve = AdversarialCurve(policy_id=policy.policy_id, R=R)
    for t in range(0, budget + 1):
        pts = zs.points[:t] if t else np.zeros((0, domain.dim))
        post = zero_posterior(kernel, pts) if t else \
            empty_posterior(kernel, domain.dim)
        x_star, sig = maximize(post.std_many, domain, search)
        curve.steps.append((t, R * sig, x_star, post.jitter_used))
    return curve


def lower_bound_steps(log_covering: float, R: float, eps: float) -> int:
    """Step threshold floor(log N / (4 log(R/eps))) below which the
    adversarial construction forces regret >= 3*eps/2."""
    if eps >= R / 4.0:
        raise OutOfRegime(f"need eps < R/4, got eps={eps}, R={R}")
    if log_covering < 0:
        raise ValueError("log_covering must be >= 0")
    return int(math.floor(log_covering / (4.0 * math.log(R / eps))))


@dataclass(frozen=True)
class CertificateReport:
    policy_id: str
    eps: float
    packing_count: int
    t_star: int
    threshold: float           # (3/2) * eps
    regret_at_t_star: float
    passed: bool


def certify_theorem1(policy: Policy, kernel: KernelSpec, domain: BoxDomain,
                     R: float, eps: float, packing_count_at_8eps: int,
                     search: SearchConfig | None = None) -> CertificateReport:
    """Check the lower-bound guarantee: at the step threshold implied by the
    packing count, the policy's adversarial regret must still exceed
    (3/2)*eps. A FAIL signals an implementation bug, not a theory gap."""
    if packing_count_at_8eps < 1:
        raise ValueError("packing count must be >= 1")
    t_star = lower_bound_steps(math.log(packing_count_at_8eps), R, eps)
    if t_star == 0:
        post = empty_posterior(kernel, domain.dim)
        _, sig = maximize(post.std_many, domain, search or SearchConfig())
        regret = R * sig
    else:
        curve = adversarial_regret_curve(policy, t_star, kernel, domain, R,
                                         search=search)
        regret = curve.regret_at(t_star)
    threshold = 1.5 * eps
    return CertificateReport(policy_id=policy.policy_id, eps=eps,
                             packing_count=packing_count_at_8eps,
                             t_star=t_star, threshold=threshold,
                             regret_at_t_star=regret,
                             passed=regret >= threshold - 1e-6)
