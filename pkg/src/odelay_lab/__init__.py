"""Comparator overdrive-delay analysis toolkit.

Saturating-integral quadrature, the static current mapping and its
continuity threshold, closed-form delay bounds, sector estimates of the
loop nonlinearity, and a constant off-time cycle simulator, exposed as a
library, an HTTP service (``odelay_lab.service``) and a CLI
(``odelay-lab``).
"""

from .interference import InterferenceSpec, SpectrumLine, make_spec
from .loopsim import ComparatorParams, CycleResult, LoopParams, RampCycleInput
from .satcore import GridFunction, QuadratureConfig
from .staticmap import ContinuityReport, KEvalResult

__version__ = "1.0.0"

__all__ = [
    "InterferenceSpec",
    "SpectrumLine",
    "make_spec",
    "ComparatorParams",
    "CycleResult",
    "LoopParams",
    "RampCycleInput",
    "GridFunction",
    "QuadratureConfig",
    "ContinuityReport",
    "KEvalResult",
    "__version__",
]
