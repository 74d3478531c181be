"""Link geometry at the receiver plane and the result container for blockage values.

All lengths are in meters. A scenario fixes the Gaussian beam waist at the
RX plane, the radius of the circular detection aperture, the radius of the
blocker's (disk-shaped) shadow and the distance between beam center and
shadow center.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from enum import Enum

from .errors import ClampError, DomainError

#: Largest excursion outside [0, 1] that is treated as rounding noise.
CLAMP_LIMIT = 1e-9


class Method(str, Enum):
    """How a blockage value was obtained."""

    EXACT = "exact-quadrature"
    THEOREM1 = "theorem-1"
    THEOREM2 = "theorem-2"
    MONTE_CARLO = "monte-carlo"

    @classmethod
    def parse(cls, name: str | Method) -> Method:
        if isinstance(name, Method):
            return name
        key = name.strip().lower()
        aliases = {"exact": cls.EXACT, "mc": cls.MONTE_CARLO, "t1": cls.THEOREM1, "t2": cls.THEOREM2}
        if key in aliases:
            return aliases[key]
        try:
            return cls(key)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise DomainError(f"unknown method {name!r} (choose from {choices})", field="method") from None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class LinkScenario:
    """One instant of a TX-RX link with a single blocker.

    Attributes
    ----------
    w_d : float
        Beam waist at the RX plane [m].
    alpha : float
        Radius of the RX detection aperture [m].
    alpha_b : float
        Radius of the blocker shadow at the RX plane [m].
    r : float
        Distance from the beam center to the shadow center [m].
    """

    w_d: float
    alpha: float
    alpha_b: float
    r: float = 0.0

    @property
    def blocker_relevant(self) -> bool:
        """True when the shadow can overlap the aperture, i.e. ``r - alpha_b < alpha``."""
        return self.r - self.alpha_b < self.alpha

    def replace(self, **changes: float) -> LinkScenario:
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True)
class BlockageResult:
    """A shadow integral or geometric-spread value with its provenance.

    ``error_estimate`` is the quadrature error bound or the Monte Carlo
    standard error (zero for closed forms). ``clamp`` records how far the
    raw value was moved to land in [0, 1].
    """

    value: float
    method: Method
    error_estimate: float = 0.0
    clamp: float = 0.0

    def __float__(self) -> float:
        return self.value


def validate_scenario(s: LinkScenario) -> LinkScenario:
    """Check field domains and return the scenario unchanged.

    Raises
    ------
    DomainError
        Naming the first offending field.
    """
    for name in ("w_d", "alpha", "alpha_b", "r"):
        value = getattr(s, name)
        if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
            raise DomainError(f"{name} must be a finite number, got {value!r}", field=name)
    if s.w_d <= 0:
        raise DomainError(f"w_d must be positive, got {s.w_d!r}", field="w_d")
    if s.alpha <= 0:
        raise DomainError(f"alpha must be positive, got {s.alpha!r}", field="alpha")
    if s.alpha_b < 0:
        raise DomainError(f"alpha_b must be nonnegative, got {s.alpha_b!r}", field="alpha_b")
    if s.r < 0:
        raise DomainError(f"r must be nonnegative, got {s.r!r}", field="r")
    return s


def clamp_unit(value: float, what: str = "value") -> tuple[float, float]:
    """Clip ``value`` to [0, 1], refusing excursions larger than ``CLAMP_LIMIT``.

    Returns the clipped value and the magnitude of the adjustment.
    """
    if value < 0.0:
        moved = -value
        clipped = 0.0
    elif value > 1.0:
        moved = value - 1.0
        clipped = 1.0
    else:
        return float(value), 0.0
    if moved > CLAMP_LIMIT:
        raise ClampError(f"{what} = {value!r} is outside [0, 1] by {moved:.3e}")
    return clipped, moved
