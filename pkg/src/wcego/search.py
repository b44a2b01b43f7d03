"""Deterministic surrogate-objective optimization: dense lattice sweep
followed by coordinate-wise golden-section polish.

Everything here is deterministic: ties on the lattice break to the lowest
lexicographic index, and the polish only accepts strict improvement, so
repeated calls return identical points bit-for-bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .interpolate import grid
from .kernels import BoxDomain

DEFAULT_RESOLUTION = {1: 401, 2: 101, 3: 41}
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SearchConfig:
    points_per_dim: int | None = None  # None -> dimension-based default
    polish_iters: int = 20
    polish_rounds: int = 2

    def resolution(self, dim: int) -> int:
        if self.points_per_dim is not None:
            return int(self.points_per_dim)
        return DEFAULT_RESOLUTION.get(dim, 21)


def _golden_section(f, a: float, b: float, iters: int):
    """Golden-section minimization of a 1-d slice; returns (x, f(x))."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    return (c, fc) if fc < fd else (d, fd)


def minimize(batch_objective, domain: BoxDomain,
             config: SearchConfig = SearchConfig()):
    """Minimize a batched objective over the box.

    batch_objective maps an (m, d) array to an (m,) array of values.
    Returns (argmin point as a d-vector, minimal value found).
    """
    pts = grid(domain, config.resolution(domain.dim))
    vals = np.asarray(batch_objective(pts))
    best_idx = int(np.argmin(vals))  # first occurrence = lexicographic tie-break
    best_x = pts[best_idx].copy()
    best_v = float(vals[best_idx])

    lo = np.asarray(domain.lower)
    hi = np.asarray(domain.upper)
    spacing = (hi - lo) / config.resolution(domain.dim)

    def value_at(x):
        return float(batch_objective(x[None, :])[0])

    for _ in range(config.polish_rounds):
        for i in range(domain.dim):
            a = max(lo[i], best_x[i] - spacing[i])
            b = min(hi[i], best_x[i] + spacing[i])

            def slice_obj(xi, _i=i):
                x = best_x.copy()
                x[_i] = xi
                return value_at(x)

            xi, vi = _golden_section(slice_obj, a, b, config.polish_iters)
            if vi < best_v:
                best_x[i] = xi
                best_v = vi
    return best_x, best_v


def maximize(batch_objective, domain: BoxDomain,
             config: SearchConfig = SearchConfig()):
    x, v = minimize(lambda P: -np.asarray(batch_objective(P)), domain, config)
    return x, -v
