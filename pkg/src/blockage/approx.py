"""Closed-form approximations of the shadow integral and the offset support.

Two approximations are provided:

* ``theorem1``: the shadow disk is replaced by a square of equal area
  (side ``sqrt(pi) * alpha_b``) centred on the shadow, which makes the
  Gaussian separable and yields a product of error functions.
* ``theorem2``: a single Gaussian in ``r`` whose value and curvature at
  ``r = 0`` match the square approximation,
  ``C0 * exp(-(2 / w_d**2) * (|C2| / C0) * r**2)``.

The scalar entry points take a :class:`LinkScenario`; the ``*_ib`` helpers
are vectorised over ``r`` for sweeps and Monte Carlo use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import erf, erfc

from .errors import DomainError
from .exact import collected_fraction_unblocked, floor_spread
from .geometry import BlockageResult, LinkScenario, Method, clamp_unit, validate_scenario

SQRT2 = math.sqrt(2.0)
SQRT_HALF_PI = math.sqrt(math.pi / 2.0)


def _erf_pair_sum(u: np.ndarray, v: np.ndarray) -> np.ndarray:
    """``erf(u + v) + erf(u - v)`` for ``u, v >= 0`` without cancellation at large ``v``."""
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    near = erf(u + v) + erf(u - v)
    far = erfc(v - u) - erfc(v + u)
    return np.where(v <= u, near, far)


def theorem1_ib(w_d: float, alpha_b: float, r: ArrayLike) -> np.ndarray:
    """Square-equal-area shadow integral, elementwise in ``r``."""
    r = np.abs(np.asarray(r, dtype=float))
    # same argument and erf as theorem2_coefficients, so r = 0 reproduces C0 bit for bit
    u = SQRT_HALF_PI * (alpha_b / w_d)
    v = SQRT2 * r / w_d
    return 0.5 * erf(u) * _erf_pair_sum(u, v)


@dataclass(frozen=True)
class Theorem2Coefficients:
    """Matching coefficients of the Gaussian approximation.

    ``c0`` is the shadow integral at zero offset and ``c2`` (negative) the
    curvature term; ``decay_rate = (2 / w_d**2) * |c2| / c0`` in 1/m^2.
    """

    c0: float
    c2: float
    decay_rate: float


def theorem2_coefficients(s: LinkScenario) -> Theorem2Coefficients:
    s = validate_scenario(s)
    if s.alpha_b == 0.0:
        raise DomainError("alpha_b must be positive for the Gaussian approximation", field="alpha_b")
    ratio = s.alpha_b / s.w_d
    z = SQRT_HALF_PI * ratio
    e = float(erf(z))
    c0 = e * e
    c2 = -SQRT2 * ratio * e * math.exp(-z * z)
    # |c2| / c0 evaluated without forming c0, stable as alpha_b / w_d -> 0
    decay_rate = (2.0 / s.w_d**2) * SQRT2 * ratio * math.exp(-z * z) / e
    return Theorem2Coefficients(c0=c0, c2=c2, decay_rate=decay_rate)


def theorem2_ib(coeffs: Theorem2Coefficients, r: ArrayLike) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    return coeffs.c0 * np.exp(-coeffs.decay_rate * r * r)


def shadow_integral_theorem1(s: LinkScenario) -> BlockageResult:
    s = validate_scenario(s)
    value, moved = clamp_unit(float(theorem1_ib(s.w_d, s.alpha_b, s.r)), "theorem-1 shadow integral")
    return BlockageResult(value, Method.THEOREM1, 0.0, moved)


def shadow_integral_theorem2(s: LinkScenario) -> BlockageResult:
    s = validate_scenario(s)
    if s.alpha_b == 0.0:
        return BlockageResult(0.0, Method.THEOREM2)
    raw = float(theorem2_ib(theorem2_coefficients(s), s.r))
    value, moved = clamp_unit(raw, "theorem-2 shadow integral")
    return BlockageResult(value, Method.THEOREM2, 0.0, moved)


def hb_theorem1(s: LinkScenario) -> BlockageResult:
    """Geometric spread with the square-equal-area shadow integral.

    Negative differences (shadow wider than the aperture) floor at zero;
    the shift is reported in ``clamp``.
    """
    ib = shadow_integral_theorem1(s)
    value, moved = floor_spread(collected_fraction_unblocked(s) - ib.value)
    return BlockageResult(value, Method.THEOREM1, 0.0, moved)


def hb_theorem2(s: LinkScenario) -> BlockageResult:
    ib = shadow_integral_theorem2(s)
    value, moved = floor_spread(collected_fraction_unblocked(s) - ib.value)
    return BlockageResult(value, Method.THEOREM2, 0.0, moved)


def gaussian_crossing_radius(w_d: float, coeffs: Theorem2Coefficients, level: float) -> float:
    """Offset at which ``exp(-decay_rate r^2)`` falls to ``level`` (0 < level <= 1).

    Equal to ``(w_d / sqrt 2) sqrt(C0 / |C2|) sqrt(ln(1 / level))``; computed
    from the decay rate so a flat Gaussian (``C2`` underflowed to zero, shadow
    much wider than the beam) gives ``inf`` instead of dividing by zero.
    """
    if coeffs.decay_rate == 0.0:
        return math.inf
    return math.sqrt(math.log(1.0 / level) / coeffs.decay_rate)


class SupportSource(str, Enum):
    PAPER_FORMULA = "paper-formula"
    RELEVANCE_BOUND = "relevance-bound"
    USER = "user"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class UniformSupport:
    """Interval ``[a1_eff, a2_eff]`` of shadow offsets, with provenance of each end."""

    a1_eff: float
    a2_eff: float
    a1_clamped: bool
    a2_source: SupportSource

    def __post_init__(self) -> None:
        if not (0.0 <= self.a1_eff < self.a2_eff):
            raise DomainError(
                f"support requires 0 <= a1 < a2, got [{self.a1_eff!r}, {self.a2_eff!r}]", field="a2"
            )

    @property
    def width(self) -> float:
        return self.a2_eff - self.a1_eff


def support_bounds(s: LinkScenario, user_a2: float | None = None) -> UniformSupport:
    """Offset range on which the Gaussian-approximated spread is a valid fraction.

    The lower end is the offset where ``I - C0 exp(-k r^2)`` crosses zero; it
    only exists when ``C0 > I`` and is otherwise clamped to 0. The upper end is
    the relevance bound ``alpha + alpha_b`` unless the caller supplies one.
    """
    s = validate_scenario(s)
    coeffs = theorem2_coefficients(s)
    unblocked = collected_fraction_unblocked(s)
    if coeffs.c0 > unblocked:
        a1 = gaussian_crossing_radius(s.w_d, coeffs, unblocked / coeffs.c0)
        a1_clamped = False
    else:
        a1 = 0.0
        a1_clamped = True
    if user_a2 is not None:
        if not (math.isfinite(user_a2) and user_a2 > 0):
            raise DomainError(f"a2 must be a positive number, got {user_a2!r}", field="a2")
        a2, source = float(user_a2), SupportSource.USER
    else:
        a2, source = float(s.alpha + s.alpha_b), SupportSource.RELEVANCE_BOUND
    if a2 <= a1:
        raise DomainError(f"upper support bound {a2!r} does not exceed lower bound {a1!r}", field="a2")
    return UniformSupport(a1_eff=a1, a2_eff=a2, a1_clamped=a1_clamped, a2_source=source)
