"""Analytic clamped-state evaluation for ramp-plus-line-spectrum drives.

For a drive g(t) = m1*(t - t0) - c + w(t) with w a finite line spectrum,
the antiderivative Phi is available in closed form and the clamped
integrator state obeys the reflection identity

    state(t) = Phi(t) - min of Phi over [start, t]     (state(start) = 0).

Everything here reduces to scanning the sign changes of g, refining them
with Brent's method, and walking the monotone segments of Phi.  This gives
near machine-precision crossing times, which the grid engine in satcore
cannot reach at acceptable cost; the two paths are cross-checked in tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import ThresholdUnreachableError
from .interference import InterferenceSpec, eval_w, eval_w_antiderivative

__all__ = ["RampDrive", "scan_roots", "first_threshold_crossing", "clamped_value"]


@dataclass(frozen=True)
class RampDrive:
    """g(t) = m1*(t - t0) - c + w(t)."""

    spec: InterferenceSpec
    m1: float = 1.0
    t0: float = 0.0
    c: float = 0.0

    def g(self, t):
        return self.m1 * (np.asarray(t, dtype=float) - self.t0) - self.c + eval_w(
            self.spec, t
        )

    def g_scalar(self, t: float) -> float:
        return self.m1 * (t - self.t0) - self.c + eval_w(self.spec, float(t))

    def phi(self, t, ref: float):
        """Integral of g from ref to t, in closed form."""
        dt = np.asarray(t, dtype=float) - self.t0
        dr = ref - self.t0
        return (
            0.5 * self.m1 * (dt * dt - dr * dr)
            - self.c * (dt - dr)
            + eval_w_antiderivative(self.spec, t)
            - eval_w_antiderivative(self.spec, ref)
        )

    def scan_step(self, lo: float, hi: float) -> float:
        if self.spec.lines:
            wmax = float(np.max(self.spec.omegas))
            return min(math.pi / (20.0 * wmax), (hi - lo) / 8.0)
        return (hi - lo) / 8.0


def scan_roots(drive: RampDrive, lo: float, hi: float) -> list[float]:
    """All sign-change roots of g on [lo, hi], refined by Brent, ascending."""
    if not (lo < hi):
        return []
    step = drive.scan_step(lo, hi)
    n = max(2, math.ceil((hi - lo) / step) + 1)
    xs = np.linspace(lo, hi, n)
    gs = drive.g(xs)
    roots: list[float] = []
    xtol = 1e-13 * max(1.0, abs(lo), abs(hi))
    for i in range(n - 1):
        a, b = float(gs[i]), float(gs[i + 1])
        if a == 0.0:
            roots.append(float(xs[i]))
        elif a * b < 0.0:
            roots.append(float(brentq(drive.g_scalar, xs[i], xs[i + 1], xtol=xtol)))
    if float(gs[-1]) == 0.0:
        roots.append(float(xs[-1]))
    return sorted(set(roots))


def first_threshold_crossing(
    drive: RampDrive, start: float, k: float, hi: float
) -> tuple[float, float]:
    """Smallest t with clamped state = k, and the last zero of the state.

    The state starts at 0 at ``start``.  Returns (t_on, t_c) where t_c is
    the last instant before t_on at which the state equals 0 (the last
    running-minimum attainment of Phi).
    """
    points = [start] + [r for r in scan_roots(drive, start, hi) if start < r < hi]
    points.append(hi)
    running_min = 0.0
    t_c = start
    attained = 0.0
    xtol = 1e-13 * max(1.0, abs(start), abs(hi))
    for p, q in zip(points, points[1:]):
        if q <= p:
            continue
        increasing = drive.g_scalar(0.5 * (p + q)) > 0.0
        phi_q = float(drive.phi(q, ref=start))
        if increasing:
            state_q = phi_q - running_min
            attained = max(attained, state_q)
            if state_q >= k:
                target = running_min + k
                t_on = float(
                    brentq(lambda t: float(drive.phi(t, ref=start)) - target, p, q,
                           xtol=xtol)
                )
                return t_on, t_c
        else:
            if phi_q < running_min:
                running_min = phi_q
                t_c = q
    raise ThresholdUnreachableError(
        f"clamped state peaked at {attained!r} < k={k!r} before t={hi!r}",
        attained=attained,
    )


def clamped_value(drive: RampDrive, start: float, end: float) -> float:
    """Clamped state at ``end`` given state 0 at ``start`` (exact limit).

    Equals Phi(end) - min of Phi over [start, end]; the minimum is attained
    at a stationary point of Phi (a root of g) or at an endpoint.
    """
    if end <= start:
        return 0.0
    candidates = [start, end] + [r for r in scan_roots(drive, start, end) if start < r < end]
    phis = drive.phi(np.array(candidates), ref=start)
    return max(0.0, float(drive.phi(end, ref=start)) - float(np.min(phis)))
