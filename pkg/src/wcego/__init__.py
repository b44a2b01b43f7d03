"""Worst-case analysis toolkit for noiseless kernel-based global
optimization: interpolation with certified envelopes, adversarial function
synthesis, deterministic policies, and metric-entropy step thresholds."""

from .backend import BACKEND_NAME
from .kernels import BoxDomain, KernelSpec, cross, gram, kernel_eval
from .interpolate import (Design, Posterior, RkhsFunction, fit, grid,
                          min_norm_interpolant, sample_rkhs)
from .adversary import (adversarial_regret_curve, adversarial_value,
                        adversarial_witness, certify_theorem1,
                        lower_bound_steps, zero_posterior, zero_sequence)
from .policies import (EiPolicy, GridPolicy, LcbPolicy, TwoPhasePolicy,
                       ground_truth, run_policy, two_phase)
from .entropy import (candidate_ball_functions, entropy_report,
                      greedy_packing, rate_theoretical)
from .search import SearchConfig

__version__ = "0.1.0"
