"""Experiment configuration: flat key-value files plus typed accessors.

Every value actually used (including defaults) is recorded in ``used`` so
the run manifest can echo a fully materialized configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ConfigError
from .kernels import BoxDomain, KernelSpec
from .search import SearchConfig


def parse_config_file(path) -> dict:
    """Read 'key = value' lines; '#' starts a comment; blank lines skipped."""
    data = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
            key, value = line.split("=", 1)
            data[key.strip()] = value.strip()
    return data


def _floats(raw: str):
    return [float(v) for v in raw.split(",") if v.strip() != ""]


def _ints(raw: str):
    return [int(v) for v in raw.split(",") if v.strip() != ""]


@dataclass
class Config:
    data: dict = field(default_factory=dict)
    used: dict = field(default_factory=dict)

    def _get(self, key, default, cast):
        raw = self.data.get(key)
        try:
            val = default if raw is None else cast(raw)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"bad value for {key!r}: {raw!r}") from exc
        self.used[key] = val
        return val

    def get_str(self, key, default):
        return self._get(key, default, str)

    def get_int(self, key, default):
        return self._get(key, default, int)

    def get_float(self, key, default):
        return self._get(key, default, float)

    def get_floats(self, key, default):
        return self._get(key, list(default), _floats)

    def get_ints(self, key, default):
        return self._get(key, list(default), _ints)

    def override(self, key, value):
        if value is not None:
            self.data[key] = str(value)


def kernel_from_config(cfg: Config, default_name="matern",
                       default_lengthscale=1.0, default_rho=1.0,
                       default_variance=1.0, default_nu=2.5) -> KernelSpec:
    name = cfg.get_str("kernel.name", default_name)
    if name == "se":
        return KernelSpec.se(cfg.get_float("kernel.lengthscale",
                                           default_lengthscale))
    if name == "matern":
        return KernelSpec.matern(nu=cfg.get_float("kernel.nu", default_nu),
                                 rho=cfg.get_float("kernel.rho", default_rho),
                                 variance=cfg.get_float("kernel.variance",
                                                        default_variance))
    if name == "quadratic":
        return KernelSpec.quadratic()
    raise ConfigError(f"kernel.name must be se|matern|quadratic, got {name!r}")


def domain_from_config(cfg: Config, default_lower, default_upper) -> BoxDomain:
    lower = cfg.get_floats("domain.lower", default_lower)
    upper = cfg.get_floats("domain.upper", default_upper)
    try:
        return BoxDomain(lower=tuple(lower), upper=tuple(upper))
    except Exception as exc:
        raise ConfigError(str(exc)) from exc


def search_from_config(cfg: Config) -> SearchConfig:
    ppd = cfg.get_int("search.points_per_dim", 0)
    return SearchConfig(
        points_per_dim=ppd if ppd > 0 else None,
        polish_iters=cfg.get_int("search.polish_iters", 20),
        polish_rounds=cfg.get_int("search.polish_rounds", 2),
    )
