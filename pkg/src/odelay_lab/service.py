"""HTTP service exposing every analysis over JSON.

Domain errors carry a stable ``code`` field so clients can map them to
exit codes without parsing messages: config_error -> 400,
solver_error -> 500, precondition_error -> 409.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import analyses
from .config import AnalysisConfig
from .errors import ConfigError, PreconditionError, SolverError, ToolError

__all__ = ["app"]

app = FastAPI(title="odelay-lab", version="1.0")

_STATUS = {ConfigError: 400, SolverError: 500, PreconditionError: 409}


@app.exception_handler(ToolError)
async def _tool_error_handler(request: Request, exc: ToolError):
    status = 500
    for cls, code in _STATUS.items():
        if isinstance(exc, cls):
            status = code
            break
    return JSONResponse(
        status_code=status, content={"code": exc.code, "message": str(exc)}
    )


class AnalysisResponse(BaseModel):
    analysis: str
    columns: list[str]
    rows: list[dict]


class ConfigRequest(BaseModel):
    config: AnalysisConfig


class BoundsRequest(ConfigRequest):
    w_at_tc: float = 0.0


class SectorRequest(ConfigRequest):
    delta: float | None = Field(default=None, gt=0)


class SweepRequest(ConfigRequest):
    draws: int = Field(default=1000, ge=1)
    seed: int | None = None
    workers: int = Field(default=1, ge=1)


class AuxRequest(BaseModel):
    x: float
    mu: float = Field(gt=0)


def _respond(name: str, cols: list[str], rows: list[dict]) -> AnalysisResponse:
    return AnalysisResponse(analysis=name, columns=cols, rows=rows)


@app.get("/v1/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/v1/analyses/simulate", response_model=AnalysisResponse)
def simulate(req: ConfigRequest):
    return _respond("simulate", *analyses.run_simulate(req.config))


@app.post("/v1/analyses/bounds", response_model=AnalysisResponse)
def bounds(req: BoundsRequest):
    return _respond("bounds", *analyses.run_bounds(req.config, req.w_at_tc))


@app.post("/v1/analyses/k3", response_model=AnalysisResponse)
def k3(req: ConfigRequest):
    return _respond("k3", *analyses.run_k3(req.config))


@app.post("/v1/analyses/continuity", response_model=AnalysisResponse)
def continuity(req: ConfigRequest):
    return _respond("continuity", *analyses.run_continuity(req.config))


@app.post("/v1/analyses/sector", response_model=AnalysisResponse)
def sector(req: SectorRequest):
    return _respond("sector", *analyses.run_sector(req.config, req.delta))


@app.post("/v1/analyses/loop", response_model=AnalysisResponse)
def loop(req: ConfigRequest):
    return _respond("loop", *analyses.run_loop(req.config))


@app.post("/v1/analyses/aux", response_model=AnalysisResponse)
def aux(req: AuxRequest):
    return _respond("aux", *analyses.run_aux(req.x, req.mu))


@app.post("/v1/analyses/sweep", response_model=AnalysisResponse)
def sweep(req: SweepRequest):
    cfg = req.config
    if req.seed is not None:
        cfg = cfg.model_copy(update={"seed": req.seed})
    return _respond("sweep", *analyses.run_sweep(cfg, req.draws, req.workers))
