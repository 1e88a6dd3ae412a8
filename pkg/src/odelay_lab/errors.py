"""Error taxonomy shared by the numerics, the service, and the CLI.

Every error carries a stable ``code`` so the HTTP layer and the CLI can map
it to a status / exit code without string matching.
"""

from __future__ import annotations


class ToolError(Exception):
    """Base class for all domain errors."""

    code = "tool_error"
    exit_code = 1


class ConfigError(ToolError):
    """Invalid configuration or input value; names the offending field."""

    code = "config_error"
    exit_code = 2


class OptimizerBudgetError(ConfigError):
    """Spectrum dimension exceeds the optimizer budget."""

    code = "config_error"
    exit_code = 2


class SolverError(ToolError):
    """Numerical solver failed to produce a converged answer."""

    code = "solver_error"
    exit_code = 3


class NonConvergenceError(SolverError):
    """Grid refinement exhausted without meeting the relative tolerance."""

    def __init__(self, message: str, last_estimate: float, prev_estimate: float):
        super().__init__(message)
        self.last_estimate = last_estimate
        self.prev_estimate = prev_estimate


class ThresholdUnreachableError(SolverError):
    """Clamped accumulation never reached the threshold before domain_hi."""

    def __init__(self, message: str, attained: float):
        super().__init__(message)
        self.attained = attained


class DegeneratePerturbationError(SolverError):
    """Perturbed trip times too close to form a difference quotient."""


class PreconditionError(ToolError):
    """A theorem precondition (e.g. V_th*tau_c > B) does not hold."""

    code = "precondition_error"
    exit_code = 4
