"""Independent checks: Monte Carlo estimators and approximation-error metrics.

Monte Carlo runs are split into fixed-size blocks. Block ``i`` draws from a
PCG64 generator seeded with the ``i``-th child of
``numpy.random.SeedSequence(seed)``, so the sample set depends only on
``(samples, seed)`` and not on how many worker threads process the blocks.
Block statistics are reduced in block order with ``math.fsum``.
"""

from __future__ import annotations

import math
from collections.abc import Callable
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .approx import UniformSupport, theorem1_ib, theorem2_coefficients, theorem2_ib
from .errors import DomainError
from .exact import DEFAULT_QUADRATURE, QuadratureConfig, shadow_integral_exact, shadow_integral_table, unblocked_fraction
from .geometry import BlockageResult, LinkScenario, Method, clamp_unit, validate_scenario
from .outage import OutageParams, UniformOffsetModel

BLOCK_SIZE = 1 << 18
EXACT_TABLE_POINTS = 2049

#: Published (MSE, NMSE) of the Gaussian approximation, keyed by w_d / alpha_b.
TABLE1 = {
    2: (5.81e-6, 5.99e-5),
    3: (3.29e-7, 1.52e-5),
    4: (3.73e-8, 5.25e-6),
    5: (6.59e-9, 2.25e-6),
    6: (1.59e-9, 1.11e-6),
    7: (4.65e-10, 6.07e-7),
    8: (1.59e-10, 3.59e-7),
    9: (6.3e-11, 2.25e-7),
    10: (2.69e-11, 1.49e-7),
}


@dataclass(frozen=True)
class McConfig:
    samples: int = 1_000_000
    seed: int = 42
    workers: int = 1

    def __post_init__(self) -> None:
        if int(self.samples) != self.samples or self.samples < 1:
            raise DomainError(f"samples must be a positive integer, got {self.samples!r}", field="samples")
        if int(self.seed) != self.seed or not (0 <= self.seed < 2**64):
            raise DomainError(f"seed must be an unsigned 64-bit integer, got {self.seed!r}", field="seed")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers!r}", field="workers")


@dataclass(frozen=True)
class McEstimate:
    value: float
    std_error: float
    samples: int


@dataclass(frozen=True)
class _BlockStats:
    n: int
    mean: float
    m2: float  # sum of squared deviations from the block mean


def _run_blocks(c: McConfig, kernel: Callable[[np.random.Generator, int], np.ndarray]) -> tuple[float, float]:
    """Evaluate ``kernel`` over all blocks; return the overall mean and sample variance."""
    sizes = [BLOCK_SIZE] * (c.samples // BLOCK_SIZE)
    if c.samples % BLOCK_SIZE:
        sizes.append(c.samples % BLOCK_SIZE)
    children = np.random.SeedSequence(int(c.seed)).spawn(len(sizes))

    def one(i: int) -> _BlockStats:
        values = kernel(np.random.Generator(np.random.PCG64(children[i])), sizes[i])
        mean = float(np.mean(values))
        return _BlockStats(sizes[i], mean, float(np.sum((values - mean) ** 2)))

    if c.workers > 1 and len(sizes) > 1:
        with ThreadPoolExecutor(max_workers=c.workers) as pool:
            stats = list(pool.map(one, range(len(sizes))))
    else:
        stats = [one(i) for i in range(len(sizes))]

    n = c.samples
    mean = math.fsum(b.n * b.mean for b in stats) / n
    m2 = math.fsum(b.m2 for b in stats) + math.fsum(b.n * (b.mean - mean) ** 2 for b in stats)
    variance = m2 / (n - 1) if n > 1 else 0.0
    return mean, variance


def mc_shadow_integral(s: LinkScenario, c: McConfig = McConfig()) -> BlockageResult:
    """Shadow integral by uniform sampling of the shadow disk.

    Points are drawn with radius ``alpha_b * sqrt(u)`` and a uniform angle
    around the shadow centre ``(r, 0)``; the estimate is the disk area times
    the sample mean of the beam intensity.
    """
    s = validate_scenario(s)
    if s.alpha_b == 0.0:
        raise DomainError("alpha_b must be positive for Monte Carlo integration", field="alpha_b")
    w2 = s.w_d * s.w_d
    peak = 2.0 / (math.pi * w2)
    area = math.pi * s.alpha_b**2

    def kernel(gen: np.random.Generator, n: int) -> np.ndarray:
        rho = s.alpha_b * np.sqrt(gen.random(n))
        theta = 2.0 * math.pi * gen.random(n)
        x = s.r + rho * np.cos(theta)
        y = rho * np.sin(theta)
        return peak * np.exp(-2.0 * (x * x + y * y) / w2)

    mean, variance = _run_blocks(c, kernel)
    value, moved = clamp_unit(area * mean, "Monte Carlo shadow integral")
    return BlockageResult(value, Method.MONTE_CARLO, area * math.sqrt(variance / c.samples), moved)


def mc_outage(
    s: LinkScenario,
    p: OutageParams,
    m: UniformOffsetModel,
    c: McConfig = McConfig(),
    hb_method: Method | str = Method.THEOREM2,
    q: QuadratureConfig = DEFAULT_QUADRATURE,
) -> McEstimate:
    """Empirical ``Pr(capacity <= r_th)`` with the offset drawn uniformly on the support.

    With ``hb_method = exact`` the exact shadow integral is tabulated on
    ``EXACT_TABLE_POINTS`` offsets across the support and linearly
    interpolated (interpolation error is far below the sampling error).
    """
    s = validate_scenario(s)
    hb_method = Method.parse(hb_method)
    sup: UniformSupport = m.support
    unblocked = float(unblocked_fraction(s.w_d, s.alpha))

    if s.alpha_b == 0.0:
        def shadow(r: np.ndarray) -> np.ndarray:
            return np.zeros_like(r)
    elif hb_method is Method.THEOREM2:
        coeffs = theorem2_coefficients(s)

        def shadow(r: np.ndarray) -> np.ndarray:
            return theorem2_ib(coeffs, r)
    elif hb_method is Method.THEOREM1:
        def shadow(r: np.ndarray) -> np.ndarray:
            return theorem1_ib(s.w_d, s.alpha_b, r)
    elif hb_method is Method.EXACT:
        grid = np.linspace(sup.a1_eff, sup.a2_eff, EXACT_TABLE_POINTS)
        table = shadow_integral_table(s.w_d, s.alpha_b, grid, q)

        def shadow(r: np.ndarray) -> np.ndarray:
            return np.interp(r, grid, table)
    else:
        raise DomainError(f"unsupported spread method for outage sampling: {hb_method}", field="hb_method")

    def kernel(gen: np.random.Generator, n: int) -> np.ndarray:
        r = sup.a1_eff + sup.width * gen.random(n)
        hb = np.clip(unblocked - shadow(r), 0.0, 1.0)
        cap = np.log2(1.0 + hb * p.snr)
        return (cap <= p.r_th).astype(float)

    mean, _ = _run_blocks(c, kernel)
    return McEstimate(mean, math.sqrt(mean * (1.0 - mean) / c.samples), c.samples)


@dataclass(frozen=True)
class RGrid:
    """Uniform grid of offsets in units of ``alpha_b``."""

    start: float = 0.0
    stop: float = 6.0
    points: int = 121

    def __post_init__(self) -> None:
        if self.points < 2 or not self.start < self.stop:
            raise DomainError("grid needs start < stop and at least 2 points", field="grid")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.points)

    def describe(self) -> str:
        return f"r/alpha_b uniform on [{self.start:g}, {self.stop:g}], {self.points} points"


@dataclass(frozen=True)
class ErrorReport:
    mse: float
    nmse: float
    max_abs_error: float
    grid: str
    method: Method
    wd_over_ab: float


def error_metrics(reference: np.ndarray, approx: np.ndarray) -> tuple[float, float, float]:
    """MSE, MSE normalised by ``mean(reference**2)``, and max absolute error."""
    reference = np.asarray(reference, dtype=float)
    diff = np.asarray(approx, dtype=float) - reference
    mse = float(np.mean(diff * diff))
    power = float(np.mean(reference * reference))
    nmse = mse / power if power > 0 else math.inf
    return mse, nmse, float(np.max(np.abs(diff)))


def approximation_error_sweep(
    wd_over_ab: float,
    method: Method | str = Method.THEOREM2,
    grid: RGrid = RGrid(),
    q: QuadratureConfig = DEFAULT_QUADRATURE,
) -> ErrorReport:
    """Compare an approximation against exact quadrature with ``alpha_b = 1``."""
    if not (math.isfinite(wd_over_ab) and wd_over_ab > 0):
        raise DomainError(f"wd_over_ab must be positive, got {wd_over_ab!r}", field="wd_over_ab")
    method = Method.parse(method)
    radii = grid.values()
    exact = np.array([
        shadow_integral_exact(LinkScenario(w_d=wd_over_ab, alpha=1.0, alpha_b=1.0, r=float(r)), q).value
        for r in radii
    ])
    if method is Method.THEOREM1:
        approx = theorem1_ib(wd_over_ab, 1.0, radii)
    elif method is Method.THEOREM2:
        coeffs = theorem2_coefficients(LinkScenario(w_d=wd_over_ab, alpha=1.0, alpha_b=1.0))
        approx = theorem2_ib(coeffs, radii)
    elif method is Method.EXACT:
        approx = exact.copy()
    else:
        raise DomainError(f"cannot sweep method {method}", field="method")
    mse, nmse, worst = error_metrics(exact, approx)
    return ErrorReport(mse, nmse, worst, grid.describe(), method, float(wd_over_ab))
