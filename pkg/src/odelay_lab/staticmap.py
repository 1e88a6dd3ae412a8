"""Static current mapping, K-functionals, and the continuity condition.

The central objects: the implicit map theta = M(b) defined by driving a
clamped integrator of x + w(x) - b up to area k; the worst-case clamped
area K between the lowest and largest crossings of x + w(x) - b (the K
functional); and the continuity threshold V_trig * tau >= m1 * K3.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from . import satcore
from .crossing import RampDrive, clamped_value, first_threshold_crossing, scan_roots
from .errors import ConfigError, OptimizerBudgetError, PreconditionError
from .interference import TWO_PI, InterferenceSpec, amplitude_bound, eval_w

__all__ = [
    "KEvalResult",
    "ContinuityReport",
    "roots_psi",
    "eval_K",
    "shift_transform",
    "compute_K3",
    "static_map",
    "continuity_condition",
    "lipschitz_probe",
]

ROOT_TOL = 1e-12


@dataclass(frozen=True)
class KEvalResult:
    """K value with the crossing pair and the argument that produced it."""

    value: float
    psi_l: float
    psi_h: float
    offset: float
    phases: tuple[float, ...]


@dataclass(frozen=True)
class ContinuityReport:
    """Theorem-style continuity verdict with its deciding margin."""

    k3: float
    threshold_rhs: float  # m1 * K3 of the slope-normalized spectrum
    lhs: float  # V_trig * tau
    satisfied: bool
    margin: float


def roots_psi(spec: InterferenceSpec, b: float) -> tuple[float, float]:
    """Smallest and largest roots of x + w(x) - b = 0.

    All roots lie in [b - A_ub, b + A_ub]; located by a sign scan resolving
    the fastest line, refined by Brent to ~1e-12.
    """
    if not spec.lines:
        return b, b
    a_ub = amplitude_bound(spec)
    drive = RampDrive(spec=spec, m1=1.0, t0=0.0, c=b)
    roots = scan_roots(drive, b - a_ub, b + a_ub)
    if not roots:
        # tangency corner case: bracket where the signs are strict
        lo, hi = b - a_ub - 1.0, b + a_ub + 1.0
        r = float(brentq(drive.g_scalar, lo, hi, xtol=ROOT_TOL))
        return r, r
    return roots[0], roots[-1]


def _k_value(spec: InterferenceSpec, offset: float) -> tuple[float, float, float]:
    """(value, psi_l, psi_h) of the clamped area up to the largest crossing."""
    psi_l, psi_h = roots_psi(spec, offset)
    a_ub = amplitude_bound(spec)
    start = offset - a_ub - 1.0
    drive = RampDrive(spec=spec, m1=1.0, t0=0.0, c=offset)
    return clamped_value(drive, start, psi_h), psi_l, psi_h


def eval_K(spec: InterferenceSpec, offset: float, phases=None) -> KEvalResult:
    """Clamped area of x + w(x) - offset from a provably clamped start to psi_h."""
    spec2 = spec.with_phases(phases) if phases is not None else spec
    value, psi_l, psi_h = _k_value(spec2, offset)
    return KEvalResult(
        value=value,
        psi_l=psi_l,
        psi_h=psi_h,
        offset=offset,
        phases=tuple(float(p) for p in spec2.phases),
    )


def shift_transform(
    offset: float, phases, spec: InterferenceSpec
) -> tuple[float, tuple[float, ...]]:
    """Time-shift substitution mapping any (offset, phases) to psi_l' = 0.

    Returns (offset - psi_l, phases + omega*psi_l mod 2*pi); the K value is
    invariant under this transform.
    """
    spec2 = spec.with_phases(phases) if phases is not None else spec
    psi_l, _ = roots_psi(spec2, offset)
    new_phases = tuple(
        float((p + w * psi_l) % TWO_PI) for p, w in zip(spec2.phases, spec2.omegas)
    )
    return offset - psi_l, new_phases


def compute_K3(
    spec: InterferenceSpec,
    n_offset: int = 17,
    n_phase: int = 8,
    budget_dim: int = 6,
    refine_frac: float = 1e-4,
) -> KEvalResult:
    """Worst-case K over offset in [-A_ub, A_ub] and the phase hypercube.

    Deterministic multi-start grid followed by coordinate descent; ties are
    resolved by the fixed lexicographic iteration order (lowest offset,
    then lexicographically smallest phase vector, wins).
    """
    n_lines = len(spec.lines)
    if n_lines == 0:
        return KEvalResult(0.0, 0.0, 0.0, 0.0, ())
    if n_lines > budget_dim:
        raise OptimizerBudgetError(
            f"spectrum has {n_lines} lines; optimizer budget allows at most "
            f"{budget_dim} phase dimensions"
        )
    a_ub = amplitude_bound(spec)
    offsets = np.linspace(-a_ub, a_ub, n_offset)
    phase_grid = np.linspace(0.0, TWO_PI, n_phase, endpoint=False)

    best_val = -math.inf
    best_x: list[float] = []
    for off in offsets:
        for phases in itertools.product(phase_grid, repeat=n_lines):
            val, _, _ = _k_value(spec.with_phases(phases), float(off))
            if val > best_val:
                best_val = val
                best_x = [float(off), *map(float, phases)]

    # coordinate descent with shrinking steps
    steps = [2.0 * a_ub / (n_offset - 1)] + [TWO_PI / n_phase] * n_lines
    floors = [refine_frac * 2.0 * a_ub] + [refine_frac * TWO_PI] * n_lines
    x = list(best_x)
    while any(s >= f for s, f in zip(steps, floors)):
        improved = False
        for j in range(len(x)):
            if steps[j] < floors[j]:
                continue
            for sgn in (1.0, -1.0):
                while True:
                    cand = list(x)
                    cand[j] += sgn * steps[j]
                    if j == 0:
                        cand[0] = min(a_ub, max(-a_ub, cand[0]))
                    else:
                        cand[j] %= TWO_PI
                    val, _, _ = _k_value(spec.with_phases(cand[1:]), cand[0])
                    if val > best_val:
                        best_val = val
                        x = cand
                        improved = True
                    else:
                        break
        if not improved:
            steps = [0.5 * s for s in steps]
    return eval_K(spec, x[0], x[1:])


def static_map(
    b: float,
    k: float,
    spec: InterferenceSpec,
    method: str = "analytic",
    cfg: satcore.QuadratureConfig | None = None,
) -> float:
    """theta = M(b): first point where the clamped area of x + w(x) - b hits k.

    ``method="analytic"`` walks the closed-form antiderivative (default);
    ``method="grid"`` runs the satcore grid engine for cross-checking.
    """
    if not (k > 0):
        raise ConfigError(f"threshold parameter k must be > 0 (got {k})")
    a_ub = amplitude_bound(spec)
    start = b - a_ub - 1.0
    hi = b + a_ub + math.sqrt(2.0 * k) + 1.0
    if method == "analytic":
        drive = RampDrive(spec=spec, m1=1.0, t0=0.0, c=b)
        theta, _ = first_threshold_crossing(drive, start, k, hi)
        return theta
    if method == "grid":
        f = satcore.GridFunction(
            sampler=lambda xs: np.asarray(xs, dtype=float) + eval_w(spec, xs) - b,
            domain_lo=start,
            domain_hi=hi,
        )
        return satcore.integrate_to_threshold(f, start, k, cfg)
    raise ConfigError(f"unknown static_map method {method!r}")


def continuity_condition(
    spec: InterferenceSpec, m1: float, V_trig: float, tau: float
) -> ContinuityReport:
    """Check V_trig * tau >= m1 * K3 of the slope-normalized spectrum.

    Normalization divides the comparator input by m1: amplitudes scale by
    1/m1, frequencies are unchanged, and the inequality is restored by the
    outer factor m1.
    """
    if not (m1 > 0 and V_trig > 0 and tau > 0):
        raise ConfigError(
            f"m1, V_trig, tau must all be > 0 (got {m1}, {V_trig}, {tau})"
        )
    norm = spec.scaled(1.0 / m1) if spec.lines else spec
    k3 = compute_K3(norm)
    rhs = m1 * k3.value
    lhs = V_trig * tau
    margin = lhs - rhs
    return ContinuityReport(
        k3=k3.value, threshold_rhs=rhs, lhs=lhs, satisfied=margin >= 0.0, margin=margin
    )


def _interval_min(spec: InterferenceSpec, b: float, lo: float, hi: float) -> float:
    """min of x + w(x) - b over [lo, hi] (dense scan + local refinement)."""
    drive = RampDrive(spec=spec, m1=1.0, t0=0.0, c=b)
    if hi <= lo:
        return float(drive.g_scalar(lo))
    if spec.lines:
        wmax = float(np.max(spec.omegas))
        n = max(16, math.ceil((hi - lo) * wmax * 100.0 / TWO_PI))
    else:
        n = 16
    xs = np.linspace(lo, hi, n + 1)
    gs = drive.g(xs)
    i = int(np.argmin(gs))
    a = xs[max(0, i - 1)]
    c = xs[min(n, i + 1)]
    if c > a:
        res = minimize_scalar(drive.g_scalar, bounds=(a, c), method="bounded",
                              options={"xatol": 1e-12})
        return min(float(gs[i]), float(res.fun))
    return float(gs[i])


def lipschitz_probe(
    spec: InterferenceSpec, k: float, b0: float, delta_b: float, n_grid: int = 101
) -> tuple[float, float, float]:
    """Observed |d theta / d b| quotient together with the bounding constants.

    mu1 is the minimum of x + w(x) - b over the traversed theta interval;
    mu2 the maximum of theta0 - psi_l(b) over the traversed b interval.
    The quotient is bounded by mu2/mu1 whenever k exceeds K3.
    """
    if not (delta_b > 0):
        raise ConfigError(f"delta_b must be > 0 (got {delta_b})")
    b1 = b0 + delta_b
    theta0 = static_map(b0, k, spec)
    theta1 = static_map(b1, k, spec)
    ratio = abs(theta1 - theta0) / delta_b
    mu1 = _interval_min(spec, b1, min(theta0, theta1), max(theta0, theta1))
    if mu1 <= 0:
        raise PreconditionError(
            f"continuity precondition violated: min of x + w(x) - b over the "
            f"theta interval is {mu1!r} <= 0 (k is not above the K3 threshold "
            f"at this operating point)"
        )
    bs = np.linspace(b0, b1, n_grid)
    mu2 = max(theta0 - roots_psi(spec, float(b))[0] for b in bs)
    return ratio, mu1, float(mu2)
