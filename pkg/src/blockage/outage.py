"""Capacity and outage probability under a uniformly distributed shadow offset.

The link is in outage when ``log2(1 + h_b * P_s / N_o) <= r_th``, i.e. when
``h_b <= (gamma_th - 1) * N_o / P_s`` with ``gamma_th = 2**r_th``. Using the
Gaussian approximation ``h_b = I - C0 exp(-k r^2)`` this becomes
``r <= r*`` with::

    Y  = (I - (gamma_th - 1) * N_o / P_s) / C0
    r* = (w_d / sqrt 2) * sqrt(C0 / |C2|) * sqrt(ln(1 / Y))

so the outage probability is the offset CDF evaluated at ``r*``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .approx import (
    UniformSupport,
    gaussian_crossing_radius,
    hb_theorem1,
    hb_theorem2,
    theorem2_coefficients,
)
from .errors import DomainError
from .exact import DEFAULT_QUADRATURE, QuadratureConfig, collected_fraction_unblocked, hb_exact
from .geometry import BlockageResult, LinkScenario, Method, validate_scenario


@dataclass(frozen=True)
class OutageParams:
    """Transmit power ``p_s`` [W], noise power ``n_o`` [W], rate threshold ``r_th`` [bit/s/Hz]."""

    p_s: float
    n_o: float
    r_th: float

    def __post_init__(self) -> None:
        for name in ("p_s", "n_o"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive, got {value!r}", field=name)
        if not (math.isfinite(self.r_th) and self.r_th >= 0):
            raise DomainError(f"r_th must be nonnegative, got {self.r_th!r}", field="r_th")

    @classmethod
    def from_snr_db(cls, snr_db: float, r_th: float, n_o: float = 1.0) -> OutageParams:
        return cls(p_s=n_o * 10.0 ** (snr_db / 10.0), n_o=n_o, r_th=r_th)

    @property
    def gamma_th(self) -> float:
        return 2.0**self.r_th

    @property
    def snr(self) -> float:
        return self.p_s / self.n_o

    @property
    def spread_threshold(self) -> float:
        """Smallest geometric spread that still supports ``r_th``: ``(gamma_th - 1) N_o / P_s``."""
        return (self.gamma_th - 1.0) * self.n_o / self.p_s


@dataclass(frozen=True)
class UniformOffsetModel:
    support: UniformSupport


def capacity(
    s: LinkScenario,
    p: OutageParams,
    method: Method | str = Method.THEOREM2,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
) -> float:
    """``log2(1 + h_b P_s / N_o)`` with ``h_b`` from the chosen method."""
    return math.log2(1.0 + spread(s, method, q).value * p.snr)


def spread(s: LinkScenario, method: Method | str, q: QuadratureConfig = DEFAULT_QUADRATURE) -> BlockageResult:
    method = Method.parse(method)
    if method is Method.EXACT:
        return hb_exact(s, q)
    if method is Method.THEOREM1:
        return hb_theorem1(s)
    if method is Method.THEOREM2:
        return hb_theorem2(s)
    raise DomainError(f"no deterministic geometric spread for method {method}", field="method")


def uniform_pdf(x: float, m: UniformOffsetModel) -> float:
    sup = m.support
    if sup.a1_eff <= x <= sup.a2_eff:
        return 1.0 / sup.width
    return 0.0


def uniform_cdf(x: float, m: UniformOffsetModel) -> float:
    sup = m.support
    if x <= sup.a1_eff:
        return 0.0
    if x >= sup.a2_eff:
        return 1.0
    return (x - sup.a1_eff) / sup.width


class ThresholdCase(str, Enum):
    ALWAYS_SERVED = "always-served"
    ALWAYS_OUT = "always-out"
    FINITE = "finite"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class ThresholdRadius:
    """Largest offset still in outage.

    ``radius`` is 0 for ``ALWAYS_SERVED`` and ``inf`` for ``ALWAYS_OUT``;
    ``level`` is the ratio ``Y`` whose logarithm sets the radius.
    """

    case: ThresholdCase
    radius: float
    level: float


def outage_threshold_radius(s: LinkScenario, p: OutageParams) -> ThresholdRadius:
    s = validate_scenario(s)
    coeffs = theorem2_coefficients(s)
    level = (collected_fraction_unblocked(s) - p.spread_threshold) / coeffs.c0
    if level >= 1.0:
        return ThresholdRadius(ThresholdCase.ALWAYS_SERVED, 0.0, level)
    if level <= 0.0:
        return ThresholdRadius(ThresholdCase.ALWAYS_OUT, math.inf, level)
    return ThresholdRadius(ThresholdCase.FINITE, gaussian_crossing_radius(s.w_d, coeffs, level), level)


class Branch(str, Enum):
    C1 = "C1"  # never in outage on the support
    C2 = "C2"  # threshold radius inside the support
    C3 = "C3"  # always in outage on the support

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class OutageResult:
    probability: float
    branch: Branch
    threshold: ThresholdRadius


def outage_probability(s: LinkScenario, p: OutageParams, m: UniformOffsetModel) -> OutageResult:
    """Closed-form outage probability with the Gaussian spread approximation."""
    threshold = outage_threshold_radius(s, p)
    if threshold.case is ThresholdCase.ALWAYS_SERVED:
        return OutageResult(0.0, Branch.C1, threshold)
    if threshold.case is ThresholdCase.ALWAYS_OUT:
        return OutageResult(1.0, Branch.C3, threshold)
    sup = m.support
    if threshold.radius < sup.a1_eff:
        branch = Branch.C1
    elif threshold.radius > sup.a2_eff:
        branch = Branch.C3
    else:
        branch = Branch.C2
    return OutageResult(uniform_cdf(threshold.radius, m), branch, threshold)
