"""Cycle-level simulation of constant off-time control with overdrive delay.

The comparator is modeled as the saturating integrator itself: its state
integrates the overdrive (ramp + interference - command), clamps at zero
from below, and trips when the state reaches V_th * tau_c.  The crossing
time t_c is the last instant the state is zero before the trip, and the
variable delay is t_od = t_on - t_c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .crossing import RampDrive, first_threshold_crossing
from .errors import ConfigError, DegeneratePerturbationError, PreconditionError, ToolError
from .interference import InterferenceSpec, amplitude_bound, eval_w

__all__ = [
    "ComparatorParams",
    "RampCycleInput",
    "CycleResult",
    "LoopParams",
    "CycleRecord",
    "Trajectory",
    "solve_cycle",
    "delay_bounds",
    "max_overdrive_delay",
    "min_overdrive_delay",
    "sector_estimate",
    "sector_bound_check",
    "stability_condition",
    "stability_design_mu",
    "meets_mu8_condition",
    "iterate_loop",
    "aux_function_y",
]


@dataclass(frozen=True)
class ComparatorParams:
    """Worst-case comparator: transconductance bound G charging C_eff to V_th."""

    G: float
    C_eff: float
    V_th: float

    def __post_init__(self):
        for name in ("G", "C_eff", "V_th"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ConfigError(f"ComparatorParams.{name} must be > 0 (got {v})")

    @property
    def tau_c(self) -> float:
        return self.C_eff / self.G

    @property
    def threshold_area(self) -> float:
        """V_th * tau_c, the overdrive area needed to trip."""
        return self.V_th * self.tau_c


@dataclass(frozen=True)
class RampCycleInput:
    """Comparator-input ramp: value 0 at t_start, slope m1, trip level command."""

    m1: float
    command: float
    t_start: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.m1) and self.m1 > 0):
            raise ConfigError(f"RampCycleInput.m1 must be > 0 (got {self.m1})")
        if not math.isfinite(self.command) or not math.isfinite(self.t_start):
            raise ConfigError("RampCycleInput.command/t_start must be finite")


@dataclass(frozen=True)
class CycleResult:
    t_c: float
    t_on: float
    t_od: float
    peak: float  # ramp + interference at t_on
    i_e: float  # command - peak


@dataclass(frozen=True)
class LoopParams:
    t_off: float
    m2: float
    n_cycles: int
    valley0: float = 0.0

    def __post_init__(self):
        if not (self.t_off > 0 and self.m2 > 0):
            raise ConfigError(
                f"LoopParams.t_off and m2 must be > 0 (got {self.t_off}, {self.m2})"
            )
        if self.n_cycles < 1:
            raise ConfigError(f"LoopParams.n_cycles must be >= 1 (got {self.n_cycles})")


@dataclass(frozen=True)
class CycleRecord:
    cycle: int
    valley: float
    peak: float
    t_od: float
    i_e: float
    t_c: float
    t_on: float


@dataclass(frozen=True)
class Trajectory:
    records: tuple[CycleRecord, ...]
    error: str | None = None


def _default_horizon(
    inp: RampCycleInput, spec: InterferenceSpec, cmp: ComparatorParams
) -> float:
    a_ub = amplitude_bound(spec)
    k = cmp.threshold_area
    b = 0.0
    if spec.lines:
        b = float(sum(ln.amplitude / ln.omega for ln in spec.lines))
    t_u_max = a_ub / inp.m1 + math.sqrt(
        (a_ub / inp.m1) ** 2 + 2.0 * (k + b) / inp.m1
    )
    return inp.t_start + max(0.0, (inp.command + a_ub) / inp.m1) + t_u_max + 1.0


def solve_cycle(
    inp: RampCycleInput,
    spec: InterferenceSpec,
    cmp: ComparatorParams,
    horizon: float | None = None,
) -> CycleResult:
    """Run the saturating-integrator comparator over one on-phase.

    The clamped state of the overdrive m1*(t - t_start) + w(t) - command
    starts at zero; t_on is the first time it reaches V_th * tau_c and t_c
    the last zero before that.
    """
    if horizon is None:
        horizon = _default_horizon(inp, spec, cmp)
    if not (horizon > inp.t_start):
        raise ConfigError(f"horizon must exceed t_start (got {horizon})")
    drive = RampDrive(spec=spec, m1=inp.m1, t0=inp.t_start, c=inp.command)
    t_on, t_c = first_threshold_crossing(
        drive, inp.t_start, cmp.threshold_area, horizon
    )
    peak = inp.m1 * (t_on - inp.t_start) + eval_w(spec, t_on)
    return CycleResult(
        t_c=t_c, t_on=t_on, t_od=t_on - t_c, peak=peak, i_e=inp.command - peak
    )


def _check_design(cmp: ComparatorParams, B: float) -> None:
    if not cmp.threshold_area > B:
        raise PreconditionError(
            f"V_th*tau_c > B required (got V_th*tau_c={cmp.threshold_area!r} "
            f"<= B={B!r}); the two delay roots cannot be disambiguated"
        )


def delay_bounds(
    w_at_tc: float, m1: float, cmp: ComparatorParams, B: float
) -> tuple[float, float]:
    """Closed-form lower/upper bounds (t_l, t_u) on the variable delay."""
    _check_design(cmp, B)
    k = cmp.threshold_area
    x = w_at_tc / m1
    t_u = x + math.sqrt(x * x + 2.0 * (k + B) / m1)
    t_l = x + math.sqrt(x * x + 2.0 * (k - B) / m1)
    return t_l, t_u


def max_overdrive_delay(
    a_ub: float, m1: float, cmp: ComparatorParams, B: float
) -> float:
    """Worst-case delay: t_u evaluated at the adversarial w(t_c) = +A_ub."""
    _check_design(cmp, B)
    x = a_ub / m1
    return x + math.sqrt(x * x + 2.0 * (cmp.threshold_area + B) / m1)


def min_overdrive_delay(
    a_ub: float, m1: float, cmp: ComparatorParams, B: float
) -> float:
    """Best-case delay: t_l evaluated at the adversarial w(t_c) = -A_ub."""
    _check_design(cmp, B)
    x = a_ub / m1
    return -x + math.sqrt(x * x + 2.0 * (cmp.threshold_area - B) / m1)


def sector_estimate(
    inp: RampCycleInput,
    spec: InterferenceSpec,
    cmp: ComparatorParams,
    delta: float | None = None,
) -> tuple[float, float]:
    """One-sided difference quotients d i_e / d t_on at an operating point.

    Perturbs the command by +/-delta, re-solves the cycle, and returns
    (q_right, q_left).
    """
    if delta is None:
        delta = 1e-6 * max(1.0, abs(inp.command))
    if not (delta > 0):
        raise ConfigError(f"delta must be > 0 (got {delta})")
    base = solve_cycle(inp, spec, cmp)
    quotients = []
    for sgn in (1.0, -1.0):
        pert = RampCycleInput(inp.m1, inp.command + sgn * delta, inp.t_start)
        res = solve_cycle(pert, spec, cmp)
        dt_on = res.t_on - base.t_on
        if abs(dt_on) < 1e-13 * max(1.0, abs(base.t_on)):
            raise DegeneratePerturbationError(
                f"t_on moved by only {dt_on!r} under delta={delta!r}; "
                f"retry with a larger delta"
            )
        quotients.append((res.i_e - base.i_e) / dt_on)
    return quotients[0], quotients[1]


def sector_bound_check(samples, a_ub: float, t_od_min: float) -> bool:
    """Strict sector inequality (psi + (A_ub/t_od_min) x) x > 0 on all samples."""
    if not (t_od_min > 0):
        raise ConfigError(f"t_od_min must be > 0 (got {t_od_min})")
    slope = a_ub / t_od_min
    for x, psi in samples:
        if x != 0.0 and (psi + slope * x) * x <= 0.0:
            return False
    return True


def stability_condition(q_right: float, q_left: float, m1: float) -> bool:
    """Slope condition min(q_right, q_left) > -m1/2 (strict)."""
    return min(q_right, q_left) > -m1 / 2.0


def stability_design_mu(a_ub: float, m1: float, cmp: ComparatorParams, B: float) -> float:
    """The radicand margin 2*m1*(V_th*tau_c - B)/A_ub^2 (infinite when A_ub=0)."""
    if a_ub == 0.0:
        return math.inf
    return 2.0 * m1 * (cmp.threshold_area - B) / (a_ub * a_ub)


def meets_mu8_condition(a_ub: float, m1: float, cmp: ComparatorParams, B: float) -> bool:
    """Named design predicate: mu >= 8 guarantees the stability slope condition."""
    return stability_design_mu(a_ub, m1, cmp, B) >= 8.0


def iterate_loop(
    loop: LoopParams,
    inp: RampCycleInput,
    spec: InterferenceSpec,
    cmp: ComparatorParams,
) -> Trajectory:
    """Propagate the valley current through n_cycles of constant off-time.

    Each cycle the sensed ramp rises from the valley at slope m1 until the
    comparator trips; the next valley is peak - m2*t_off and the next ramp
    starts after the fixed off time.  Interference phase advances with
    absolute time.  An unsolvable cycle truncates the trajectory with an
    error annotation.
    """
    records: list[CycleRecord] = []
    valley = loop.valley0
    t = inp.t_start
    for n in range(loop.n_cycles):
        eff = RampCycleInput(m1=inp.m1, command=inp.command - valley, t_start=t)
        try:
            res = solve_cycle(eff, spec, cmp)
        except ToolError as exc:
            return Trajectory(
                records=tuple(records), error=f"cycle {n}: {exc}"
            )
        peak = valley + res.peak
        records.append(
            CycleRecord(
                cycle=n,
                valley=valley,
                peak=peak,
                t_od=res.t_od,
                i_e=inp.command - peak,
                t_c=res.t_c,
                t_on=res.t_on,
            )
        )
        valley = peak - loop.m2 * loop.t_off
        t = res.t_on + loop.t_off
    return Trajectory(records=tuple(records), error=None)


def aux_function_y(x: float, mu: float) -> float:
    """y = (-1 - x) / (x + sqrt(x^2 + mu)); decreasing on [-1, 1] for mu >= 8."""
    if not (mu > 0):
        raise ConfigError(f"mu must be > 0 (got {mu})")
    return (-1.0 - x) / (x + math.sqrt(x * x + mu))
