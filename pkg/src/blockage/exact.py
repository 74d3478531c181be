"""Exact power fractions: unblocked collection and the shadow integral.

The shadow integral is reduced to one dimension by integrating the Gaussian
analytically across each vertical chord of the shadow disk. The remaining
integral over the chord position is evaluated by adaptive Gauss-Kronrod
quadrature (QUADPACK through ``scipy.integrate.quad``) after the change of
variable ``x = alpha_b * sin(theta)``, which removes the square-root
behaviour of the chord length at the disk edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike
from scipy.integrate import quad
from scipy.special import erf

from .errors import ConvergenceError, DomainError
from .geometry import BlockageResult, LinkScenario, Method, clamp_unit, validate_scenario

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class QuadratureConfig:
    abs_tol: float = 1e-10
    rel_tol: float = 1e-10
    max_subdivisions: int = 200

    def __post_init__(self) -> None:
        if not (math.isfinite(self.abs_tol) and self.abs_tol > 0):
            raise DomainError(f"abs_tol must be positive, got {self.abs_tol!r}", field="abs_tol")
        if not (math.isfinite(self.rel_tol) and self.rel_tol > 0):
            raise DomainError(f"rel_tol must be positive, got {self.rel_tol!r}", field="rel_tol")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 1:
            raise DomainError(
                f"max_subdivisions must be a positive integer, got {self.max_subdivisions!r}",
                field="max_subdivisions",
            )


DEFAULT_QUADRATURE = QuadratureConfig()


def unblocked_fraction(w_d: ArrayLike, alpha: ArrayLike) -> np.ndarray | float:
    """Power fraction collected by the aperture with no blocker, ``erf(sqrt(2) alpha / w_d)**2``.

    Works elementwise on arrays; ``alpha = 0`` gives 0.
    """
    out = erf(SQRT2 * np.asarray(alpha, dtype=float) / np.asarray(w_d, dtype=float)) ** 2
    return float(out) if np.ndim(out) == 0 else out


def collected_fraction_unblocked(s: LinkScenario) -> float:
    s = validate_scenario(s)
    value, _ = clamp_unit(unblocked_fraction(s.w_d, s.alpha), "unblocked fraction")
    return value


def _chord_integrand(theta: float, w_d: float, alpha_b: float, r: float) -> float:
    # x = alpha_b sin(theta); chord half-length alpha_b cos(theta); dx = alpha_b cos(theta) dtheta
    c = math.cos(theta)
    x = alpha_b * math.sin(theta)
    return math.exp(-2.0 * ((x - r) / w_d) ** 2) * math.erf(SQRT2 * alpha_b * c / w_d) * alpha_b * c


def shadow_integral_exact(s: LinkScenario, q: QuadratureConfig = DEFAULT_QUADRATURE) -> BlockageResult:
    """Fraction of beam power falling inside the shadow disk, by adaptive quadrature.

    Raises
    ------
    ConvergenceError
        If ``q.max_subdivisions`` is exhausted before the tolerances are met.
    """
    s = validate_scenario(s)
    if s.alpha_b == 0.0:
        return BlockageResult(0.0, Method.EXACT, 0.0)

    scale = math.sqrt(2.0 / math.pi) / s.w_d
    points = None
    if s.r < s.alpha_b and q.max_subdivisions > 1:
        # beam center lies over the shadow; flag the Gaussian peak for the subdivision
        points = [math.asin(s.r / s.alpha_b)]
    out = quad(
        lambda t: scale * _chord_integrand(t, s.w_d, s.alpha_b, s.r),
        -math.pi / 2,
        math.pi / 2,
        epsabs=q.abs_tol,
        epsrel=q.rel_tol,
        limit=int(q.max_subdivisions),
        points=points,
        full_output=1,
    )
    value, abserr = float(out[0]), float(out[1])
    target = max(q.abs_tol, q.rel_tol * abs(value))
    if len(out) > 3 or abserr > target:
        raise ConvergenceError(
            f"shadow integral did not converge within {q.max_subdivisions} subdivisions "
            f"(achieved error {abserr:.3e}, requested {target:.3e})",
            value=value,
            achieved_error=abserr,
        )
    clipped, moved = clamp_unit(value, "exact shadow integral")
    return BlockageResult(clipped, Method.EXACT, abserr, moved)


def shadow_integral_table(
    w_d: float, alpha_b: float, radii: ArrayLike, q: QuadratureConfig = DEFAULT_QUADRATURE
) -> np.ndarray:
    """Exact shadow integral at each offset in ``radii`` (alpha, unused, set to 1)."""
    radii = np.asarray(radii, dtype=float)
    flat = [
        shadow_integral_exact(LinkScenario(w_d=w_d, alpha=1.0, alpha_b=alpha_b, r=float(r)), q).value
        for r in radii.ravel()
    ]
    return np.asarray(flat).reshape(radii.shape)


def hb_exact(s: LinkScenario, q: QuadratureConfig = DEFAULT_QUADRATURE) -> BlockageResult:
    """Geometric spread ``I - I_b`` with the exact shadow integral.

    A negative difference (shadow wider than the aperture, so the subtractive
    model over-counts) is floored at zero and recorded in ``clamp``.
    """
    ib = shadow_integral_exact(s, q)
    value, moved = floor_spread(collected_fraction_unblocked(s) - ib.value)
    return BlockageResult(value, Method.EXACT, ib.error_estimate, moved)


def floor_spread(raw: float) -> tuple[float, float]:
    """Clip a geometric spread to [0, 1]; return the clipped value and the shift applied."""
    clipped = min(max(raw, 0.0), 1.0)
    return clipped, abs(raw - clipped)
