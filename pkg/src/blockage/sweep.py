"""Parameter sweeps over one scenario variable.

Geometry sweeps (``r``, ``alpha_b``) tabulate the geometric spread ``h_b``
per method. Link sweeps (``snr_db``, ``r_th``) tabulate the outage
probability: ``theorem-2`` is the closed form, ``monte-carlo`` samples the
offset with the theorem-2 spread, and ``exact`` / ``theorem-1`` sample the
offset with that spread (no closed form exists for them).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .approx import hb_theorem1, hb_theorem2, support_bounds
from .errors import DomainError, ScenarioFileError
from .exact import collected_fraction_unblocked, floor_spread, hb_exact
from .geometry import LinkScenario, Method, validate_scenario
from .oracles import mc_outage, mc_shadow_integral
from .outage import OutageParams, UniformOffsetModel, outage_probability
from .scenario_io import ScenarioFile

GEOMETRY_VARIABLES = ("r", "alpha_b")
LINK_VARIABLES = ("snr_db", "r_th")


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    steps: int
    methods: tuple[Method, ...] = (Method.EXACT, Method.THEOREM1, Method.THEOREM2)

    def __post_init__(self) -> None:
        if self.variable not in GEOMETRY_VARIABLES + LINK_VARIABLES:
            raise DomainError(
                f"sweep variable must be one of {', '.join(GEOMETRY_VARIABLES + LINK_VARIABLES)}, got {self.variable!r}",
                field="variable",
            )
        if not self.start < self.stop:
            raise DomainError(f"sweep needs start < stop, got {self.start!r} >= {self.stop!r}", field="start")
        if self.steps < 2:
            raise DomainError(f"sweep needs at least 2 steps, got {self.steps!r}", field="steps")
        if not self.methods:
            raise DomainError("sweep needs at least one method", field="method")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


def spread_value(sf: ScenarioFile, s: LinkScenario, method: Method) -> float:
    """Geometric spread of ``s`` under ``method`` using the file's numeric settings."""
    if method is Method.EXACT:
        return hb_exact(s, sf.quadrature).value
    if method is Method.THEOREM1:
        return hb_theorem1(s).value
    if method is Method.THEOREM2:
        return hb_theorem2(s).value
    unblocked = collected_fraction_unblocked(s)
    if s.alpha_b == 0.0:
        return unblocked
    return floor_spread(unblocked - mc_shadow_integral(s, sf.mc).value)[0]


def _outage_value(sf: ScenarioFile, s: LinkScenario, p: OutageParams, method: Method) -> float:
    model = UniformOffsetModel(support_bounds(s, sf.a2))
    if method is Method.THEOREM2:
        return outage_probability(s, p, model).probability
    hb_method = Method.THEOREM2 if method is Method.MONTE_CARLO else method
    return mc_outage(s, p, model, sf.mc, hb_method, sf.quadrature).value


def run_sweep(sf: ScenarioFile, spec: SweepSpec) -> tuple[list[str], list[list[float]]]:
    header = [spec.variable] + [m.value for m in spec.methods]
    rows: list[list[float]] = []
    base = validate_scenario(sf.scenario)
    for x in spec.values():
        x = float(x)
        if spec.variable in GEOMETRY_VARIABLES:
            s = validate_scenario(base.replace(**{spec.variable: x}))
            rows.append([x] + [spread_value(sf, s, m) for m in spec.methods])
            continue
        if sf.outage is None:
            raise ScenarioFileError(f"sweeping {spec.variable} needs an [outage] section in the scenario file")
        if spec.variable == "snr_db":
            p = OutageParams(p_s=sf.outage.n_o * 10.0 ** (x / 10.0), n_o=sf.outage.n_o, r_th=sf.outage.r_th)
        else:
            p = dataclasses.replace(sf.outage, r_th=x)
        rows.append([x] + [_outage_value(sf, base, p, m) for m in spec.methods])
    return header, rows
