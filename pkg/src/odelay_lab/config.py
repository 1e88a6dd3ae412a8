"""Configuration schema and file ingestion.

One JSON document per experiment, with sections
{comparator, ramp, spectrum, loop, solver, seed}.  All units are SI:
volts, seconds, rad/s, siemens, farads.
"""

from __future__ import annotations

import json
from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import ConfigError
from .interference import InterferenceSpec, make_spec
from .loopsim import ComparatorParams, LoopParams, RampCycleInput
from .satcore import QuadratureConfig

__all__ = ["AnalysisConfig", "parse_config", "config_from_dict"]


class _Model(BaseModel):
    model_config = ConfigDict(extra="forbid")


class SpectrumLineModel(_Model):
    omega: float = Field(gt=0, description="angular frequency, rad/s")
    amplitude: float = Field(ge=0, description="line amplitude at the comparator input, V")
    phase: float = Field(default=0.0, description="phase, rad")


class ComparatorModel(_Model):
    G: float = Field(gt=0, description="transconductance bound, S")
    C_eff: float = Field(gt=0, description="effective capacitance, F")
    V_th: float = Field(gt=0, description="trip threshold, V")


class RampModel(_Model):
    m1: float = Field(gt=0, description="on-slope at the comparator input, V/s")
    command: float = Field(description="trip command level, V")
    t_start: float = Field(default=0.0, description="ramp origin, s")


class LoopModel(_Model):
    t_off: float = Field(gt=0, description="fixed off time, s")
    m2: float = Field(gt=0, description="off-slope, V/s")
    n_cycles: int = Field(ge=1, description="cycles to simulate")
    valley0: float = Field(default=0.0, description="initial valley, V")


class SolverModel(_Model):
    step: float = Field(default=1e-2, gt=0, description="initial grid width")
    refine_limit: int = Field(default=30, ge=1, description="max grid halvings")
    rel_tol: float = Field(default=1e-8, gt=0, description="relative stop tolerance")


class AnalysisConfig(_Model):
    comparator: ComparatorModel
    ramp: RampModel
    spectrum: list[SpectrumLineModel] = Field(default_factory=list)
    loop: LoopModel | None = None
    solver: SolverModel = Field(default_factory=SolverModel)
    seed: int = 0

    def interference_spec(self) -> InterferenceSpec:
        return make_spec((ln.omega, ln.amplitude, ln.phase) for ln in self.spectrum)

    def comparator_params(self) -> ComparatorParams:
        return ComparatorParams(
            G=self.comparator.G, C_eff=self.comparator.C_eff, V_th=self.comparator.V_th
        )

    def ramp_input(self) -> RampCycleInput:
        return RampCycleInput(
            m1=self.ramp.m1, command=self.ramp.command, t_start=self.ramp.t_start
        )

    def loop_params(self) -> LoopParams:
        if self.loop is None:
            raise ConfigError("config section 'loop' is required for this analysis")
        return LoopParams(
            t_off=self.loop.t_off,
            m2=self.loop.m2,
            n_cycles=self.loop.n_cycles,
            valley0=self.loop.valley0,
        )

    def quadrature(self) -> QuadratureConfig:
        return QuadratureConfig(
            step=self.solver.step,
            refine_limit=self.solver.refine_limit,
            rel_tol=self.solver.rel_tol,
        )


def _path_of(err: dict) -> str:
    parts = []
    for p in err["loc"]:
        if isinstance(p, int):
            parts[-1:] = [f"{parts[-1]}[{p}]"] if parts else [f"[{p}]"]
        else:
            parts.append(str(p))
    return ".".join(parts)


def config_from_dict(data: dict) -> AnalysisConfig:
    try:
        return AnalysisConfig.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(f"{_path_of(first)}: {first['msg']}") from exc


def parse_config(path: str | Path) -> AnalysisConfig:
    """Load and validate a JSON config; raises ConfigError with a field path."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        data = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    return config_from_dict(data)
