import math

import numpy as np
import pytest

from blockage import (
    DomainError,
    LinkScenario,
    OutageParams,
    UniformOffsetModel,
    outage_probability,
    shadow_integral_exact,
    support_bounds,
)
from blockage.geometry import Method
from blockage.oracles import (
    BLOCK_SIZE,
    TABLE1,
    McConfig,
    RGrid,
    approximation_error_sweep,
    error_metrics,
    mc_outage,
    mc_shadow_integral,
)

UNIT = LinkScenario(w_d=1.0, alpha=1.0, alpha_b=1.0)


def test_same_seed_bitwise_identical():
    s = LinkScenario(2.0, 2.0, 1.0, 0.4)
    a = mc_shadow_integral(s, McConfig(samples=300_000, seed=5))
    b = mc_shadow_integral(s, McConfig(samples=300_000, seed=5))
    assert a == b


def test_seed_changes_estimate():
    s = LinkScenario(2.0, 2.0, 1.0, 0.4)
    assert mc_shadow_integral(s, McConfig(10_000, seed=1)).value != mc_shadow_integral(s, McConfig(10_000, seed=2)).value


def test_worker_count_does_not_change_result():
    s = LinkScenario(2.0, 2.0, 1.0, 0.4)
    n = 3 * BLOCK_SIZE + 17
    serial = mc_shadow_integral(s, McConfig(n, seed=9, workers=1))
    threaded = mc_shadow_integral(s, McConfig(n, seed=9, workers=4))
    assert serial.value == threaded.value
    assert serial.error_estimate == threaded.error_estimate


def test_standard_error_scaling():
    s = LinkScenario(2.0, 2.0, 1.0, 0.4)
    base = mc_shadow_integral(s, McConfig(200_000, seed=3)).error_estimate
    doubled = mc_shadow_integral(s, McConfig(400_000, seed=3)).error_estimate
    quadrupled = mc_shadow_integral(s, McConfig(800_000, seed=3)).error_estimate
    assert doubled / base == pytest.approx(1 / math.sqrt(2), rel=0.02)
    assert quadrupled / base == pytest.approx(0.5, rel=0.02)


def test_flat_limit():
    s = LinkScenario(w_d=1e6, alpha=1.0, alpha_b=1.0)
    res = mc_shadow_integral(s, McConfig(100_000, seed=11))
    flat = 2 * s.alpha_b**2 / s.w_d**2
    # the integrand varies by ~1e-12 relative, so allow a rounding floor next to 3 sigma
    assert abs(res.value - flat) <= 3 * res.error_estimate + 1e-10 * flat


def test_agrees_with_quadrature_reference():
    s = LinkScenario(2.0, 2.0, 1.0, 0.0)
    res = mc_shadow_integral(s, McConfig(2_000_000, seed=42))
    assert abs(res.value - shadow_integral_exact(s).value) <= 3 * res.error_estimate


def test_needs_shadow():
    with pytest.raises(DomainError):
        mc_shadow_integral(LinkScenario(1.0, 1.0, 0.0))


@pytest.mark.parametrize("kwargs", [dict(samples=0), dict(seed=-1), dict(workers=0), dict(samples=1.5)])
def test_config_validated(kwargs):
    with pytest.raises(DomainError):
        McConfig(**kwargs)


def test_outage_always_served_exact_zero():
    p = OutageParams(1.0, 1.0, 0.0)
    assert mc_outage(UNIT, p, UniformOffsetModel(support_bounds(UNIT)), McConfig(50_000)).value == 0.0


def test_outage_always_out_exact_one():
    p = OutageParams(1.0, 1.0, 5.0)
    est = mc_outage(UNIT, p, UniformOffsetModel(support_bounds(UNIT)), McConfig(50_000))
    assert est.value == 1.0 and est.std_error == 0.0


def test_outage_c2_cross_oracle():
    p = OutageParams.from_snr_db(10.0, 1.0)
    m = UniformOffsetModel(support_bounds(UNIT))
    closed = outage_probability(UNIT, p, m)
    est = mc_outage(UNIT, p, m, McConfig(1_000_000, seed=42))
    assert abs(closed.probability - est.value) <= 3 * est.std_error


def test_reference_outage_example():
    s = LinkScenario(2.0, 2.0, 1.0)
    m = UniformOffsetModel(support_bounds(s))
    p = OutageParams(10.0, 1.0, 2.0)
    est = mc_outage(s, p, m, McConfig(1_000_000, seed=42))
    assert est.value == outage_probability(s, p, m).probability == 0.0


@pytest.mark.parametrize("method", ["exact", "theorem-1"])
def test_outage_other_spreads_close_to_theorem2(method):
    p = OutageParams.from_snr_db(10.0, 1.0)
    m = UniformOffsetModel(support_bounds(UNIT))
    t2 = mc_outage(UNIT, p, m, McConfig(200_000, seed=1)).value
    other = mc_outage(UNIT, p, m, McConfig(200_000, seed=1), hb_method=method).value
    assert abs(other - t2) < 0.05


def test_error_metrics_by_hand():
    mse, nmse, worst = error_metrics(np.array([1.0, 2.0]), np.array([1.5, 2.0]))
    assert (mse, nmse, worst) == (0.125, 0.125 / 2.5, 0.5)


def test_self_comparison_is_zero():
    report = approximation_error_sweep(3.0, Method.EXACT, RGrid(points=11))
    assert report.mse == 0.0 and report.nmse == 0.0


@pytest.mark.parametrize("ratio", [2, 10])
def test_table1_endpoints(ratio):
    report = approximation_error_sweep(ratio, "theorem-2")
    assert abs(math.log10(report.nmse / TABLE1[ratio][1])) <= 1
    assert report.grid == "r/alpha_b uniform on [0, 6], 121 points"


def test_sweep_rejects_monte_carlo():
    with pytest.raises(DomainError):
        approximation_error_sweep(2.0, "monte-carlo")
