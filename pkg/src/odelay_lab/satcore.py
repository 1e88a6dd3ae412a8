"""Clamped (saturating) quadrature engine.

A saturating partial sum is an ordinary Riemann sum whose running state is
clamped at zero from below after every cell.  The engine provides the raw
recursion, its grid-refined limit, and forward integration of the clamped
state up to a threshold crossing.

The clamped recursion ``s[n+1] = max(0, s[n] + c[n+1])`` is evaluated in
vectorized form through the reflection identity

    s[n] = C[n] - min(0, min_{k<=n} C[k]),   C = cumulative sum of c,

which gives the whole clamped prefix in O(n) numpy operations.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, NonConvergenceError, ThresholdUnreachableError

__all__ = [
    "GridFunction",
    "QuadratureConfig",
    "clamped_prefix",
    "saturating_partial_sum",
    "saturating_integral",
    "integrate_to_threshold",
]

_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class GridFunction:
    """A real function together with the interval on which it is usable.

    ``sampler`` must be finite on [domain_lo, domain_hi].  It may be scalar
    or vectorized; scalar callables are broadcast automatically.
    """

    sampler: Callable[..., object]
    domain_lo: float
    domain_hi: float

    def __post_init__(self):
        if not (self.domain_lo < self.domain_hi):
            raise ConfigError(
                f"GridFunction.domain_lo must be < domain_hi "
                f"(got {self.domain_lo} >= {self.domain_hi})"
            )

    def sample(self, xs: np.ndarray) -> np.ndarray:
        out = np.asarray(self.sampler(xs), dtype=float)
        if out.shape != np.shape(xs):
            out = np.array([float(self.sampler(x)) for x in np.ravel(xs)])
            out = out.reshape(np.shape(xs))
        if not np.all(np.isfinite(out)):
            bad = int(np.flatnonzero(~np.isfinite(out))[0])
            raise ConfigError(
                f"GridFunction sampler returned non-finite value at "
                f"x={np.ravel(xs)[bad]!r}"
            )
        return out


@dataclass(frozen=True)
class QuadratureConfig:
    """Grid width, refinement budget and stopping tolerance."""

    step: float = 1e-2
    refine_limit: int = 30
    rel_tol: float = 1e-8

    def __post_init__(self):
        if not (self.step > 0 and math.isfinite(self.step)):
            raise ConfigError(f"QuadratureConfig.step must be > 0 (got {self.step})")
        if self.refine_limit < 1:
            raise ConfigError(
                f"QuadratureConfig.refine_limit must be >= 1 (got {self.refine_limit})"
            )
        if not (self.rel_tol > 0):
            raise ConfigError(
                f"QuadratureConfig.rel_tol must be > 0 (got {self.rel_tol})"
            )
        if self.step * 2.0 ** (-self.refine_limit) <= 5e-324:
            raise ConfigError(
                "QuadratureConfig: step * 2**(-refine_limit) underflows"
            )


def clamped_prefix(contribs: np.ndarray) -> np.ndarray:
    """Clamped running sums of per-cell contributions (reflection identity)."""
    c = np.cumsum(contribs)
    return c - np.minimum(np.minimum.accumulate(c), 0.0)


def saturating_partial_sum(samples, step: float) -> float:
    """Final state of the clamped recursion over ``samples`` at grid width ``step``."""
    if step <= 0 or not math.isfinite(step):
        raise ConfigError(f"step must be positive and finite (got {step})")
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ConfigError("samples must be a nonempty 1-d sequence")
    if not np.all(np.isfinite(arr)):
        bad = int(np.flatnonzero(~np.isfinite(arr))[0])
        raise ConfigError(f"non-finite sample at index {bad}")
    return float(clamped_prefix(arr * step)[-1])


def _midpoints(a: float, b: float, n: int) -> np.ndarray:
    h = (b - a) / n
    return a + (np.arange(n) + 0.5) * h


def _clamped_sum(f: GridFunction, a: float, b: float, n: int) -> tuple[float, float]:
    """Clamped midpoint sum on n cells; returns (value, max |f| seen)."""
    h = (b - a) / n
    ys = f.sample(_midpoints(a, b, n))
    return float(clamped_prefix(ys * h)[-1]), float(np.max(np.abs(ys), initial=0.0))


def saturating_integral(
    f: GridFunction, a: float, b: float, cfg: QuadratureConfig | None = None
) -> float:
    """Grid-refined limit of the saturating partial sum of f over [a, b].

    Cells use midpoint sampling; the grid is halved until the relative
    change between successive estimates drops below ``cfg.rel_tol``.
    """
    cfg = cfg or QuadratureConfig()
    if not (a < b):
        raise ConfigError(f"require a < b (got a={a}, b={b})")
    n0 = max(1, math.ceil((b - a) / cfg.step))
    prev = None
    est = 0.0
    for level in range(cfg.refine_limit + 1):
        est, fmax = _clamped_sum(f, a, b, n0 << level)
        if prev is not None:
            floor = 64.0 * _EPS * fmax * (b - a)
            if abs(est - prev) <= cfg.rel_tol * max(abs(est), abs(prev)) + floor:
                return est
        prev = est
    raise NonConvergenceError(
        f"saturating_integral did not converge within {cfg.refine_limit} halvings "
        f"(last two estimates {prev!r}, {est!r})",
        last_estimate=est,
        prev_estimate=prev,
    )


def _threshold_on_grid(
    f: GridFunction, start: float, k: float, n: int, rel_tol: float
) -> tuple[float | None, float]:
    """One grid level: first crossing of the clamped state through k.

    Returns (theta, attained max state).  theta is located by bisection on
    the within-cell linear model of the crossing cell.
    """
    hi = f.domain_hi
    h = (hi - start) / n
    ys = f.sample(_midpoints(start, hi, n))
    states = clamped_prefix(ys * h)
    hits = np.flatnonzero(states >= k)
    if hits.size == 0:
        return None, float(np.max(states, initial=0.0))
    i = int(hits[0])
    s_prev = float(states[i - 1]) if i > 0 else 0.0
    rate = float(ys[i])
    x_lo = start + i * h
    # bisection on s_prev + rate*(t - x_lo) - k over the crossing cell
    lo, hi_cell = x_lo, x_lo + h
    for _ in range(200):
        mid = 0.5 * (lo + hi_cell)
        if s_prev + rate * (mid - x_lo) >= k:
            hi_cell = mid
        else:
            lo = mid
        if hi_cell - lo <= rel_tol * max(abs(lo), 1e-30) * 1e-3 or hi_cell == lo:
            break
    return 0.5 * (lo + hi_cell), float(np.max(states, initial=0.0))


def integrate_to_threshold(
    f: GridFunction, start: float, k: float, cfg: QuadratureConfig | None = None
) -> float:
    """Smallest theta >= start at which the clamped accumulation reaches k.

    The caller must pick ``start`` so the clamped state over (-inf, start]
    is provably zero; integration then begins from state 0 at ``start``.
    """
    cfg = cfg or QuadratureConfig()
    if not (k > 0):
        raise ConfigError(f"threshold k must be > 0 (got {k})")
    hi = f.domain_hi
    if not (start < hi):
        raise ConfigError(f"start must lie below domain_hi (got {start} >= {hi})")
    n0 = max(1, math.ceil((hi - start) / cfg.step))
    prev = None
    theta = None
    for level in range(cfg.refine_limit + 1):
        theta, attained = _threshold_on_grid(f, start, k, n0 << level, cfg.rel_tol)
        if theta is None:
            raise ThresholdUnreachableError(
                f"clamped accumulation peaked at {attained!r} < k={k!r} "
                f"before domain_hi={hi!r}",
                attained=attained,
            )
        if prev is not None:
            floor = 64.0 * _EPS * max(abs(start), abs(hi), 1.0)
            if abs(theta - prev) <= cfg.rel_tol * max(abs(theta), abs(prev)) + floor:
                return theta
        prev = theta
    raise NonConvergenceError(
        f"integrate_to_threshold did not converge within {cfg.refine_limit} "
        f"halvings (last two estimates {prev!r}, {theta!r})",
        last_estimate=theta,
        prev_estimate=prev,
    )
