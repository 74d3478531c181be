"""Partial blockage of highly directional (Gaussian-beam) wireless links.

Exact and closed-form shadow integrals, the resulting geometric spread,
outage probability under a uniformly distributed shadow offset, and Monte
Carlo oracles that check each closed form.
"""

from .approx import (
    Theorem2Coefficients,
    UniformSupport,
    hb_theorem1,
    hb_theorem2,
    shadow_integral_theorem1,
    shadow_integral_theorem2,
    support_bounds,
    theorem2_coefficients,
)
from .errors import BlockageError, ClampError, ConvergenceError, DomainError, ScenarioFileError
from .exact import QuadratureConfig, collected_fraction_unblocked, hb_exact, shadow_integral_exact
from .geometry import BlockageResult, LinkScenario, Method, validate_scenario
from .oracles import ErrorReport, McConfig, McEstimate, RGrid, approximation_error_sweep, mc_outage, mc_shadow_integral
from .outage import (
    Branch,
    OutageParams,
    OutageResult,
    ThresholdCase,
    ThresholdRadius,
    UniformOffsetModel,
    capacity,
    outage_probability,
    outage_threshold_radius,
    uniform_cdf,
    uniform_pdf,
)

__version__ = "0.1.0"
