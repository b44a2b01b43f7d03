"""Experiment runners behind the CLI subcommands.

Each command takes a Config and an output directory, writes CSV/JSON/SVG
files, and returns (paths, timings). Defaults are desk-scale and every
default actually used is echoed into the config for the manifest.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .adversary import (adversarial_regret_curve, adversarial_witness,
                        certify_theorem1, zero_posterior, zero_sequence)
from .config import (Config, domain_from_config, kernel_from_config,
                     search_from_config)
from .entropy import entropy_report
from .errors import ConfigError, IllConditioned
from .interpolate import fit, grid, min_norm_interpolant, sample_rkhs
from .kernels import BoxDomain, KernelSpec
from .policies import (EiPolicy, GridPolicy, LcbPolicy, TwoPhasePolicy,
                       batch_eval, ground_truth, run_policy)
from .search import SearchConfig, maximize, minimize
from .svgplot import svg_plot
from .tabular import write_table


def build_policy(name: str, kernel: KernelSpec, domain: BoxDomain, R: float,
                 search: SearchConfig, cfg: Config, budget: int):
    x1_raw = cfg.data.get("policy.x1")
    x1 = np.asarray([float(v) for v in x1_raw.split(",")]) \
        if x1_raw is not None else None
    cfg.used["policy.x1"] = None if x1 is None else x1.tolist()
    if name == "lcb":
        return LcbPolicy(kernel=kernel, domain=domain,
                         beta=cfg.get_float("policy.beta", 1.0),
                         variant=cfg.get_str("policy.variant", "plain"),
                         R=R, search=search, x1=x1)
    if name == "ei":
        return EiPolicy(kernel=kernel, domain=domain, search=search, x1=x1)
    if name == "grid":
        default_n = max(2, math.ceil(budget ** (1.0 / domain.dim)))
        return GridPolicy(kernel=kernel, domain=domain,
                          N=cfg.get_int("policy.n", default_n),
                          R=R, search=search)
    if name == "two_phase":
        return TwoPhasePolicy(kernel=kernel, domain=domain, R=R,
                              horizon=budget, search=search)
    raise ConfigError(f"unknown policy {name!r}")


# -- demo-adversarial --------------------------------------------------------

def cmd_demo_adversarial(cfg: Config, out_dir):
    t0 = time.perf_counter()
    kernel = kernel_from_config(cfg, default_name="matern", default_rho=1.0,
                                default_variance=1.0)
    domain = domain_from_config(cfg, [-10.0], [10.0])
    if domain.dim != 1:
        raise ConfigError("demo-adversarial is one-dimensional")
    R = cfg.get_float("r", 1.0)
    search = search_from_config(cfg)
    snapshots = cfg.get_ints("snapshots", [1, 3, 6, 10])
    policy_name = cfg.get_str("policy.name", "lcb")
    cfg.data.setdefault("policy.x1", "0")
    fmt = cfg.get_str("format", "csv")
    policy = build_policy(policy_name, kernel, domain, R, search, cfg,
                          max(snapshots))

    zs = zero_sequence(policy, max(snapshots), domain)
    xs = np.linspace(domain.lower[0], domain.upper[0], 1001)
    Xq = xs[:, None]

    paths = []
    header, rows = ["t", "x1"], [[i + 1, p[0]] for i, p in
                                 enumerate(zs.points)]
    paths += write_table(os.path.join(out_dir,
                                      f"zero_sequence_{policy_name}"),
                         header, rows, fmt)

    curves = []
    for t in snapshots:
        post = zero_posterior(kernel, zs.points[:t])
        lo, hi = post.envelope_many(R, Xq)
        x_star, _ = maximize(post.std_many, domain, search)
        witness = adversarial_witness(post, R, x_star)
        wvals = witness(Xq)
        header = ["x", "envelope_lower", "envelope_upper", "witness"]
        rows = [[x, l, h, w] for x, l, h, w in zip(xs, lo, hi, wvals)]
        paths += write_table(
            os.path.join(out_dir, f"demo_{policy_name}_t{t}"),
            header, rows, fmt)
        curves.append((xs, lo, f"lower t={t}"))
        curves.append((xs, hi, f"upper t={t}"))
    svg = os.path.join(out_dir, f"demo_{policy_name}.svg")
    svg_plot(svg, curves, title=f"Adversarial envelopes ({policy_name})",
             xlabel="x", ylabel="f(x)")
    paths.append(svg)
    return paths, {"total": time.perf_counter() - t0}


# -- regret-compare ----------------------------------------------------------

def _regret_instance(args):
    (policy, kernel, domain, R, budget, n_knots, mode, seed_i, search) = args
    f = sample_rkhs(kernel, domain, n_knots, R, seed_i, mode=mode)
    truth = ground_truth(f, domain, search)
    trace = run_policy(policy, f, budget, domain, truth)
    return trace.simple_regret


def cmd_regret_compare(cfg: Config, out_dir):
    t0 = time.perf_counter()
    kernel = kernel_from_config(cfg, default_name="matern", default_rho=0.5,
                                default_variance=1.0, default_lengthscale=0.5)
    domain = domain_from_config(cfg, [0.0, 0.0, 0.0], [1.0, 1.0, 1.0])
    R = cfg.get_float("r", 1.0)
    budget = cfg.get_int("budget", 40)
    instances = cfg.get_int("sampling.instances", 20)
    if instances < 2:
        raise ConfigError("need at least 2 instances")
    n_knots = cfg.get_int("sampling.n_knots", 30)
    mode = cfg.get_str("sampling.mode", "rescale")
    seed = cfg.get_int("seed", 0)
    jobs = cfg.get_int("jobs", 1)
    fmt = cfg.get_str("format", "csv")
    search = search_from_config(cfg)
    policy_name = cfg.get_str("policy.name", "lcb")
    policy = build_policy(policy_name, kernel, domain, R, search, cfg, budget)

    args = [(policy, kernel, domain, R, budget, n_knots, mode, seed + i,
             search) for i in range(instances)]
    t_sample = time.perf_counter()
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            regrets = list(pool.map(_regret_instance, args))
    else:
        regrets = [_regret_instance(a) for a in args]
    t_runs = time.perf_counter()
    # column t of the stack is step t+1; keep the first `budget` steps
    stack = np.vstack([r[:budget] for r in regrets])
    mean = stack.mean(axis=0)
    std = stack.std(axis=0)

    curve = adversarial_regret_curve(policy, budget, kernel, domain, R,
                                     search=search)
    t_adv = time.perf_counter()

    ts = np.arange(1, budget + 1)
    adv = curve.regret[1:]  # skip the prior step t=0
    header = ["t", "mean_regret", "std_regret", "adversarial_regret"]
    rows = [[t, m, s, a] for t, m, s, a in zip(ts, mean, std, adv)]
    paths = write_table(os.path.join(out_dir,
                                     f"regret_compare_{kernel.name}"),
                        header, rows, fmt)
    svg = os.path.join(out_dir, f"regret_compare_{kernel.name}.svg")
    svg_plot(svg,
             [(ts, mean, "mean simple regret"),
              (ts, adv, "adversarial regret")],
             band=(ts, np.maximum(mean - std, 0.0), mean + std, "±std"),
             title=f"Average vs adversarial regret ({kernel.name}, "
                   f"{policy_name})",
             xlabel="t", ylabel="simple regret")
    paths.append(svg)
    return paths, {"instance_runs": t_runs - t_sample,
                   "adversarial_curve": t_adv - t_runs,
                   "total": time.perf_counter() - t0}


# -- rate-fit ----------------------------------------------------------------

def cmd_rate_fit(cfg: Config, out_dir):
    t0 = time.perf_counter()
    kernel = kernel_from_config(cfg, default_name="matern", default_rho=1.0,
                                default_variance=1.0)
    domain = domain_from_config(cfg, [0.0], [1.0])
    if domain.dim not in (1, 2):
        raise ConfigError("rate-fit supports d in {1, 2}")
    R = cfg.get_float("r", 1.0)
    fmt = cfg.get_str("format", "csv")
    search = search_from_config(cfg)
    default_sizes = [8, 16, 32, 64] if kernel.name == "matern" else \
        [4, 6, 8, 12, 16]
    sizes = cfg.get_ints("grid_sizes", default_sizes)
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ConfigError("grid_sizes must be strictly increasing")

    rows = []
    records = []  # (N, max_sigma, jitter) for the fit, ok rows only
    for N in sizes:
        X = grid(domain, N)
        try:
            post = zero_posterior(kernel, X)
            _, sig = maximize(post.std_many, domain, search)
            rows.append([N, N ** domain.dim, sig, 2.0 * R * sig,
                         post.jitter_used, "ok"])
            records.append((N, sig, post.jitter_used))
        except IllConditioned:
            rows.append([N, N ** domain.dim, float("nan"), float("nan"),
                         float("nan"), "ill-conditioned"])

    header = ["N", "t", "max_sigma", "bound", "jitter_used", "status"]
    paths = write_table(os.path.join(out_dir, "rate_fit"), header, rows, fmt)

    summary_rows = []
    if kernel.name == "matern" and len(records) >= 2:
        logN = np.log([r[0] for r in records])
        logS = np.log([r[1] for r in records])
        slope = float(np.polyfit(logN, logS, 1)[0])
        summary_rows.append(["loglog_slope", slope])
        summary_rows.append(["theory_slope", -kernel.nu / domain.dim])
    else:
        # SE: successive semilog decrements of log(max_sigma)
        floor_declared = [10.0 * math.sqrt(j) for (_, _, j) in records]
        for i in range(len(records) - 1):
            dec = math.log(records[i][1]) - math.log(records[i + 1][1])
            summary_rows.append([f"decrement_{records[i][0]}_"
                                 f"{records[i+1][0]}", dec])
        for (N, sig, _), fl in zip(records, floor_declared):
            summary_rows.append([f"floor_N{N}", fl])
    paths += write_table(os.path.join(out_dir, "rate_summary"),
                         ["quantity", "value"], summary_rows, fmt)

    ns = np.asarray([r[0] for r in records], dtype=float)
    sigs = np.asarray([r[1] for r in records])
    svg = os.path.join(out_dir, "rate_fit.svg")
    svg_plot(svg, [(np.log10(ns), sigs, "max sigma")],
             title=f"Worst-case deviation vs grid size ({kernel.name})",
             xlabel="log10 N", ylabel="max sigma", logy=True)
    paths.append(svg)
    return paths, {"total": time.perf_counter() - t0}


# -- lower-bound-check -------------------------------------------------------

def cmd_lower_bound_check(cfg: Config, out_dir):
    t0 = time.perf_counter()
    kernel = kernel_from_config(cfg, default_name="matern", default_rho=1.0,
                                default_variance=1.0)
    domain = domain_from_config(cfg, [0.0], [1.0])
    R = cfg.get_float("r", 1.0)
    eps_list = cfg.get_floats("eps_list", [0.2, 0.1, 0.05])
    seed = cfg.get_int("seed", 0)
    fmt = cfg.get_str("format", "csv")
    search = search_from_config(cfg)
    policy_names = cfg.get_str("policies", "grid,lcb,ei").split(",")
    strategy = cfg.get_str("entropy.strategy", "mixed")
    count = cfg.get_int("entropy.count", 200)
    n_knots = cfg.get_int("entropy.n_knots", 8)

    report = entropy_report(kernel, domain, R, eps_list, seed=seed,
                            strategy=strategy, count=count, n_knots=n_knots)
    header, rows = report.to_csv_rows()
    paths = write_table(os.path.join(out_dir, "entropy_report"),
                        header, rows, fmt)
    with open(os.path.join(out_dir, "entropy_report_full.json"), "w",
              encoding="utf-8", newline="\n") as fh:
        fh.write(report.to_json() + "\n")
    paths.append(os.path.join(out_dir, "entropy_report_full.json"))

    max_t = max(row[3] for row in report.rows)
    budget_for_grid = max(max_t, 1)
    verdict_rows = []
    for name in policy_names:
        name = name.strip()
        policy = build_policy(name, kernel, domain, R, search, cfg,
                              budget_for_grid)
        for (eps, count_at_8eps, _, _) in report.rows:
            cert = certify_theorem1(policy, kernel, domain, R, eps,
                                    count_at_8eps, search=search)
            verdict_rows.append([cert.policy_id, eps, cert.packing_count,
                                 cert.t_star, cert.threshold,
                                 cert.regret_at_t_star,
                                 "PASS" if cert.passed else "FAIL"])
    header = ["policy", "eps", "packing_count", "t_star", "threshold",
              "adversarial_regret_at_t_star", "verdict"]
    paths += write_table(os.path.join(out_dir, "lower_bound_check"),
                         header, verdict_rows, fmt)
    return paths, {"total": time.perf_counter() - t0}


# -- quadratic-recovery ------------------------------------------------------

def _default_quadratic_samples(d: int, seed: int):
    if d == 2:
        return np.array([[1.0, 0.0], [0.0, 1.0], [1.0, 1.0]])
    n = d * (d + 1) // 2
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(n, d))


def cmd_quadratic_recovery(cfg: Config, out_dir):
    t0 = time.perf_counter()
    d = cfg.get_int("dimension", 2)
    domain = domain_from_config(cfg, [-1.0] * d, [1.0] * d)
    seed = cfg.get_int("seed", 0)
    fmt = cfg.get_str("format", "csv")
    kernel = KernelSpec.quadratic()
    cfg.used["kernel.name"] = "quadratic"

    a_raw = cfg.data.get("quadratic.a")
    if a_raw is not None:
        A = np.asarray([float(v) for v in a_raw.split(",")]).reshape(d, d)
        A = 0.5 * (A + A.T)
    else:
        A = np.eye(d)
    cfg.used["quadratic.a"] = A.ravel().tolist()

    s_raw = cfg.data.get("quadratic.samples")
    if s_raw is not None:
        samples = np.asarray([float(v) for v in
                              s_raw.split(",")]).reshape(-1, d)
    else:
        samples = _default_quadratic_samples(d, seed)
    cfg.used["quadratic.samples"] = samples.ravel().tolist()
    if samples.shape[0] < d * (d + 1) // 2:
        cfg.used["quadratic.underdetermined"] = True

    def f_true(P):
        P = np.atleast_2d(P)
        return np.einsum("ij,jk,ik->i", P, A, P)

    values = f_true(samples)
    interp = min_norm_interpolant(kernel, samples, values)

    fine = SearchConfig(points_per_dim={1: 801, 2: 201}.get(d, 41),
                        polish_iters=60, polish_rounds=4)
    x_rec, v_rec = minimize(lambda P: batch_eval(interp, P), domain, fine)
    x_true, v_true = minimize(f_true, domain, fine)
    error = abs(v_rec - v_true)

    header = ["quantity", "value"]
    rows = [["true_min", v_true],
            *[[f"true_argmin_x{i+1}", x_true[i]] for i in range(d)],
            ["recovered_min", v_rec],
            *[[f"recovered_argmin_x{i+1}", x_rec[i]] for i in range(d)],
            ["abs_error", error],
            ["kernel_bounded_by_one",
             kernel.bounded_by_one(domain)],
            ["n_samples", samples.shape[0]],
            ["n_required", d * (d + 1) // 2]]
    paths = write_table(os.path.join(out_dir, "quadratic_recovery"),
                        header, rows, fmt)
    return paths, {"total": time.perf_counter() - t0}


# -- entropy-estimate --------------------------------------------------------

def cmd_entropy_estimate(cfg: Config, out_dir):
    t0 = time.perf_counter()
    kernel = kernel_from_config(cfg, default_name="matern", default_rho=1.0,
                                default_variance=1.0)
    domain = domain_from_config(cfg, [0.0], [1.0])
    R = cfg.get_float("r", 1.0)
    eps_list = cfg.get_floats("eps_list", [0.2, 0.1, 0.05])
    seed = cfg.get_int("seed", 0)
    fmt = cfg.get_str("format", "csv")
    strategy = cfg.get_str("entropy.strategy", "mixed")
    count = cfg.get_int("entropy.count", 200)
    n_knots = cfg.get_int("entropy.n_knots", 8)

    report = entropy_report(kernel, domain, R, eps_list, seed=seed,
                            strategy=strategy, count=count, n_knots=n_knots)
    header, rows = report.to_csv_rows()
    paths = write_table(os.path.join(out_dir, "entropy_report"),
                        header, rows, fmt)
    full = os.path.join(out_dir, "entropy_report_full.json")
    with open(full, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(report.to_json() + "\n")
    paths.append(full)
    return paths, {"total": time.perf_counter() - t0}


COMMANDS = {
    "demo-adversarial": cmd_demo_adversarial,
    "regret-compare": cmd_regret_compare,
    "rate-fit": cmd_rate_fit,
    "lower-bound-check": cmd_lower_bound_check,
    "quadratic-recovery": cmd_quadratic_recovery,
    "entropy-estimate": cmd_entropy_estimate,
}
