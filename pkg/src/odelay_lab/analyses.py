"""Analysis dispatch: turn a validated config into report rows.

Each analysis returns (columns, rows) with a fixed, versioned column order
so CSV output is golden-file stable.  Rows echo the inputs that determined
them, so any row can be reproduced standalone.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from . import loopsim, staticmap
from .config import AnalysisConfig
from .errors import ConfigError
from .interference import (
    amplitude_bound,
    eval_w,
    integral_bound_B,
    random_phase_draw,
)

__all__ = [
    "run_simulate",
    "run_bounds",
    "run_k3",
    "run_continuity",
    "run_sector",
    "run_loop",
    "run_aux",
    "run_sweep",
    "ANALYSES",
]

_CONTAIN_SLACK = 1e-9  # numerical slack on the strict theorem inequalities


def _echo(cfg: AnalysisConfig) -> dict:
    spec = cfg.interference_spec()
    cmp = cfg.comparator_params()
    return {
        "m1": cfg.ramp.m1,
        "command": cfg.ramp.command,
        "t_start": cfg.ramp.t_start,
        "G": cfg.comparator.G,
        "C_eff": cfg.comparator.C_eff,
        "V_th": cfg.comparator.V_th,
        "tau_c": cmp.tau_c,
        "a_ub": amplitude_bound(spec),
        "b_bound": integral_bound_B(spec),
        "n_lines": len(spec.lines),
        "merged_lines": spec.merged_count,
        "seed": cfg.seed,
    }

_ECHO_COLS = [
    "m1", "command", "t_start", "G", "C_eff", "V_th", "tau_c",
    "a_ub", "b_bound", "n_lines", "merged_lines", "seed",
]


def run_simulate(cfg: AnalysisConfig) -> tuple[list[str], list[dict]]:
    spec = cfg.interference_spec()
    res = loopsim.solve_cycle(cfg.ramp_input(), spec, cfg.comparator_params())
    row = {"analysis": "simulate", **_echo(cfg),
           "t_c": res.t_c, "t_on": res.t_on, "t_od": res.t_od,
           "peak": res.peak, "i_e": res.i_e}
    cols = ["analysis", *_ECHO_COLS, "t_c", "t_on", "t_od", "peak", "i_e"]
    return cols, [row]


def run_bounds(cfg: AnalysisConfig, w_at_tc: float = 0.0) -> tuple[list[str], list[dict]]:
    spec = cfg.interference_spec()
    cmp = cfg.comparator_params()
    a_ub = amplitude_bound(spec)
    b = integral_bound_B(spec)
    t_l, t_u = loopsim.delay_bounds(w_at_tc, cfg.ramp.m1, cmp, b)
    row = {"analysis": "bounds", **_echo(cfg), "w_at_tc": w_at_tc,
           "t_l": t_l, "t_u": t_u,
           "t_od_min": loopsim.min_overdrive_delay(a_ub, cfg.ramp.m1, cmp, b),
           "t_od_max": loopsim.max_overdrive_delay(a_ub, cfg.ramp.m1, cmp, b),
           "mu": loopsim.stability_design_mu(a_ub, cfg.ramp.m1, cmp, b),
           "mu8_ok": loopsim.meets_mu8_condition(a_ub, cfg.ramp.m1, cmp, b)}
    cols = ["analysis", *_ECHO_COLS, "w_at_tc", "t_l", "t_u",
            "t_od_min", "t_od_max", "mu", "mu8_ok"]
    return cols, [row]


def run_k3(cfg: AnalysisConfig) -> tuple[list[str], list[dict]]:
    spec = cfg.interference_spec()
    res = staticmap.compute_K3(spec)
    row = {"analysis": "k3", **_echo(cfg), "k3": res.value,
           "psi_l": res.psi_l, "psi_h": res.psi_h,
           "offset_argmax": res.offset,
           "phases_argmax": ";".join(repr(p) for p in res.phases)}
    cols = ["analysis", *_ECHO_COLS, "k3", "psi_l", "psi_h",
            "offset_argmax", "phases_argmax"]
    return cols, [row]


def run_continuity(cfg: AnalysisConfig) -> tuple[list[str], list[dict]]:
    spec = cfg.interference_spec()
    cmp = cfg.comparator_params()
    rep = staticmap.continuity_condition(spec, cfg.ramp.m1, cmp.V_th, cmp.tau_c)
    row = {"analysis": "continuity", **_echo(cfg),
           "k3_normalized": rep.k3, "lhs": rep.lhs, "rhs": rep.threshold_rhs,
           "satisfied": rep.satisfied, "margin": rep.margin}
    cols = ["analysis", *_ECHO_COLS, "k3_normalized", "lhs", "rhs",
            "satisfied", "margin"]
    return cols, [row]


def run_sector(cfg: AnalysisConfig, delta: float | None = None) -> tuple[list[str], list[dict]]:
    spec = cfg.interference_spec()
    cmp = cfg.comparator_params()
    a_ub = amplitude_bound(spec)
    b = integral_bound_B(spec)
    q_right, q_left = loopsim.sector_estimate(cfg.ramp_input(), spec, cmp, delta)
    sector_hi = 0.0
    if a_ub > 0.0:
        sector_hi = 2.0 * a_ub / loopsim.min_overdrive_delay(a_ub, cfg.ramp.m1, cmp, b)
    row = {"analysis": "sector", **_echo(cfg),
           "delta": delta if delta is not None else 1e-6 * max(1.0, abs(cfg.ramp.command)),
           "q_right": q_right, "q_left": q_left, "sector_hi": sector_hi,
           "stable": loopsim.stability_condition(q_right, q_left, cfg.ramp.m1),
           "mu": loopsim.stability_design_mu(a_ub, cfg.ramp.m1, cmp, b),
           "mu8_ok": loopsim.meets_mu8_condition(a_ub, cfg.ramp.m1, cmp, b)}
    cols = ["analysis", *_ECHO_COLS, "delta", "q_right", "q_left",
            "sector_hi", "stable", "mu", "mu8_ok"]
    return cols, [row]


def run_loop(cfg: AnalysisConfig) -> tuple[list[str], list[dict]]:
    spec = cfg.interference_spec()
    traj = loopsim.iterate_loop(
        cfg.loop_params(), cfg.ramp_input(), spec, cfg.comparator_params()
    )
    echo = _echo(cfg)
    rows = [{"analysis": "loop", **echo, "cycle": r.cycle, "valley": r.valley,
             "peak": r.peak, "t_od": r.t_od, "i_e": r.i_e,
             "t_c": r.t_c, "t_on": r.t_on, "error": ""}
            for r in traj.records]
    if traj.error is not None:
        rows.append({"analysis": "loop", **echo, "cycle": len(traj.records),
                     "valley": "", "peak": "", "t_od": "", "i_e": "",
                     "t_c": "", "t_on": "", "error": traj.error})
    cols = ["analysis", *_ECHO_COLS, "cycle", "valley", "peak", "t_od",
            "i_e", "t_c", "t_on", "error"]
    return cols, rows


def run_aux(x: float, mu: float) -> tuple[list[str], list[dict]]:
    row = {"analysis": "aux", "x": x, "mu": mu, "y": loopsim.aux_function_y(x, mu)}
    return ["analysis", "x", "mu", "y"], [row]


def run_sweep(
    cfg: AnalysisConfig, draws: int = 1000, workers: int = 1
) -> tuple[list[str], list[dict]]:
    """Monte Carlo phase draws: per-draw delay vs the closed-form bounds.

    Draw i uses seed (cfg.seed + i); rows are emitted sorted by draw index,
    so the worker-pool and sequential paths produce identical bytes.
    """
    if draws < 1:
        raise ConfigError(f"draws must be >= 1 (got {draws})")
    if workers < 1:
        raise ConfigError(f"workers must be >= 1 (got {workers})")
    spec = cfg.interference_spec()
    cmp = cfg.comparator_params()
    inp = cfg.ramp_input()
    a_ub = amplitude_bound(spec)
    b = integral_bound_B(spec)
    t_min = loopsim.min_overdrive_delay(a_ub, cfg.ramp.m1, cmp, b)
    t_max = loopsim.max_overdrive_delay(a_ub, cfg.ramp.m1, cmp, b)

    def one(i: int) -> dict:
        spec_i = random_phase_draw(spec, cfg.seed + i)
        res = loopsim.solve_cycle(inp, spec_i, cmp)
        w_tc = eval_w(spec_i, res.t_c)
        t_l, t_u = loopsim.delay_bounds(w_tc, cfg.ramp.m1, cmp, b)
        slack = _CONTAIN_SLACK * max(1.0, res.t_od)
        pointwise = (t_l - slack) <= res.t_od <= (t_u + slack)
        global_ok = (t_min - slack) <= res.t_od <= (t_max + slack)
        return {"analysis": "sweep", "row_type": "draw", "draw": i,
                "draw_seed": cfg.seed + i, "t_od": res.t_od, "w_at_tc": w_tc,
                "t_l": t_l, "t_u": t_u, "t_od_min": t_min, "t_od_max": t_max,
                "contained_pointwise": pointwise, "contained_global": global_ok,
                "n_draws": "", "n_contained_pointwise": "", "n_contained_global": ""}

    echo = _echo(cfg)
    if workers == 1:
        rows = [one(i) for i in range(draws)]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(one, range(draws)))
    rows.sort(key=lambda r: r["draw"])
    rows = [{**r, **echo} for r in rows]
    summary = {"analysis": "sweep", "row_type": "summary", **echo,
               "draw": "", "draw_seed": "", "t_od": "", "w_at_tc": "",
               "t_l": "", "t_u": "", "t_od_min": t_min, "t_od_max": t_max,
               "contained_pointwise": "", "contained_global": "",
               "n_draws": draws,
               "n_contained_pointwise": sum(1 for r in rows if r["contained_pointwise"] is True),
               "n_contained_global": sum(1 for r in rows if r["contained_global"] is True)}
    rows.append(summary)
    cols = ["analysis", "row_type", *_ECHO_COLS, "draw", "draw_seed", "t_od",
            "w_at_tc", "t_l", "t_u", "t_od_min", "t_od_max",
            "contained_pointwise", "contained_global",
            "n_draws", "n_contained_pointwise", "n_contained_global"]
    return cols, rows


ANALYSES = ("simulate", "bounds", "k3", "continuity", "sector", "loop", "aux", "sweep")
