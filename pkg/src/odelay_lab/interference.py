"""Finite line spectra standing in for the interference waveform w(t).

A spectrum is a canonical, immutable list of (omega, amplitude, phase)
lines; w(t) = sum a_i * cos(omega_i * t + phi_i).  Canonical form sorts by
omega, merges duplicate omegas by complex phasor addition, and drops lines
whose merged amplitude vanishes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

__all__ = [
    "SpectrumLine",
    "InterferenceSpec",
    "make_spec",
    "eval_w",
    "eval_w_antiderivative",
    "amplitude_bound",
    "integral_bound_B",
    "random_phase_draw",
]

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpectrumLine:
    omega: float
    amplitude: float
    phase: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise ConfigError(f"SpectrumLine.omega must be > 0 (got {self.omega})")
        if not (math.isfinite(self.amplitude) and self.amplitude >= 0):
            raise ConfigError(
                f"SpectrumLine.amplitude must be >= 0 (got {self.amplitude})"
            )
        if not math.isfinite(self.phase):
            raise ConfigError(f"SpectrumLine.phase must be finite (got {self.phase})")
        object.__setattr__(self, "phase", self.phase % TWO_PI)


@dataclass(frozen=True)
class InterferenceSpec:
    """Canonical interference spectrum (strictly increasing omegas)."""

    lines: tuple[SpectrumLine, ...] = ()
    merged_count: int = 0  # lines absorbed by phasor merging at canonicalization

    @property
    def omegas(self) -> np.ndarray:
        return np.array([ln.omega for ln in self.lines], dtype=float)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([ln.amplitude for ln in self.lines], dtype=float)

    @property
    def phases(self) -> np.ndarray:
        return np.array([ln.phase for ln in self.lines], dtype=float)

    def with_phases(self, phases) -> "InterferenceSpec":
        phases = list(phases)
        if len(phases) != len(self.lines):
            raise ConfigError(
                f"phase vector length {len(phases)} != line count {len(self.lines)}"
            )
        return InterferenceSpec(
            lines=tuple(
                SpectrumLine(ln.omega, ln.amplitude, float(p))
                for ln, p in zip(self.lines, phases)
            ),
            merged_count=self.merged_count,
        )

    def scaled(self, factor: float) -> "InterferenceSpec":
        """Every amplitude multiplied by ``factor`` (frequencies unchanged)."""
        if not (math.isfinite(factor) and factor > 0):
            raise ConfigError(f"scale factor must be > 0 (got {factor})")
        return InterferenceSpec(
            lines=tuple(
                SpectrumLine(ln.omega, ln.amplitude * factor, ln.phase)
                for ln in self.lines
            ),
            merged_count=self.merged_count,
        )


def make_spec(lines) -> InterferenceSpec:
    """Canonicalize raw lines: merge duplicate omegas, sort, drop nulls."""
    by_omega: dict[float, complex] = {}
    n_in = 0
    for ln in lines:
        if not isinstance(ln, SpectrumLine):
            ln = SpectrumLine(*ln)
        n_in += 1
        by_omega[ln.omega] = by_omega.get(ln.omega, 0j) + ln.amplitude * complex(
            math.cos(ln.phase), math.sin(ln.phase)
        )
    out = []
    for omega in sorted(by_omega):
        z = by_omega[omega]
        amp = abs(z)
        if amp > 0.0:
            out.append(SpectrumLine(omega, amp, math.atan2(z.imag, z.real) % TWO_PI))
    return InterferenceSpec(lines=tuple(out), merged_count=n_in - len(out))


def eval_w(spec: InterferenceSpec, t):
    """w(t) = sum a_i cos(omega_i t + phi_i); scalar in -> float out."""
    scalar = np.isscalar(t) or np.ndim(t) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if not spec.lines:
        out = np.zeros_like(ts)
    else:
        out = np.cos(np.outer(ts, spec.omegas) + spec.phases) @ spec.amplitudes
    return float(out[0]) if scalar else out


def eval_w_antiderivative(spec: InterferenceSpec, t):
    """An antiderivative of w: sum (a_i/omega_i) sin(omega_i t + phi_i)."""
    scalar = np.isscalar(t) or np.ndim(t) == 0
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    if not spec.lines:
        out = np.zeros_like(ts)
    else:
        out = np.sin(np.outer(ts, spec.omegas) + spec.phases) @ (
            spec.amplitudes / spec.omegas
        )
    return float(out[0]) if scalar else out


def amplitude_bound(spec: InterferenceSpec) -> float:
    """A_ub = sum of line amplitudes; |w(t)| never exceeds it."""
    return float(np.sum(spec.amplitudes)) if spec.lines else 0.0


def integral_bound_B(spec: InterferenceSpec, conservative: bool = False) -> float:
    """Bound on |integral of w over any interval starting at -inf|.

    The tight value for a line spectrum is sum a_i/omega_i (the sup of the
    antiderivative's magnitude).  ``conservative=True`` returns the 2*pi
    inflated variant obtained by reading the spectral-density bound with
    delta-line weights.
    """
    if not spec.lines:
        return 0.0
    b = float(np.sum(spec.amplitudes / spec.omegas))
    return TWO_PI * b if conservative else b


def random_phase_draw(spec: InterferenceSpec, seed: int) -> InterferenceSpec:
    """Same lines with phases drawn i.i.d. uniform on [0, 2*pi); seeded."""
    if not spec.lines:
        return spec
    rng = np.random.default_rng(seed)
    return spec.with_phases(rng.uniform(0.0, TWO_PI, size=len(spec.lines)))
