import math

import pytest
from hypothesis import given, settings, strategies as st

from blockage import (
    DomainError,
    LinkScenario,
    OutageParams,
    UniformOffsetModel,
    collected_fraction_unblocked,
    hb_theorem2,
    outage_probability,
    support_bounds,
    theorem2_coefficients,
)
from blockage.oracles import McConfig, mc_outage
from blockage.outage import Branch, ThresholdCase, capacity, outage_threshold_radius, uniform_cdf, uniform_pdf
from reference import bisect_increasing

UNIT = LinkScenario(w_d=1.0, alpha=1.0, alpha_b=1.0)


def model(s, a2=None):
    return UniformOffsetModel(support_bounds(s, a2))


def test_gamma_th_is_power_of_two():
    p = OutageParams.from_snr_db(10.0, 2.0)
    assert p.gamma_th == 4.0
    assert p.snr == pytest.approx(10.0)
    assert p.spread_threshold == pytest.approx(0.3)


@pytest.mark.parametrize("kwargs", [dict(p_s=0, n_o=1, r_th=1), dict(p_s=1, n_o=-1, r_th=1), dict(p_s=1, n_o=1, r_th=-1)])
def test_params_validated(kwargs):
    with pytest.raises(DomainError):
        OutageParams(**kwargs)


def test_uniform_distribution():
    m = model(UNIT)
    sup = m.support
    assert uniform_cdf(sup.a1_eff - 1, m) == 0.0
    assert uniform_cdf(sup.a2_eff + 1, m) == 1.0
    assert uniform_pdf(0.5 * (sup.a1_eff + sup.a2_eff), m) == pytest.approx(1 / sup.width)
    assert uniform_pdf(sup.a2_eff + 1, m) == 0.0


def test_spec_example_is_always_served():
    # spread threshold 0.3 sits below I - C0, so every offset supports the rate
    s = LinkScenario(w_d=2.0, alpha=2.0, alpha_b=1.0)
    p = OutageParams.from_snr_db(10.0, 2.0)
    res = outage_probability(s, p, model(s))
    assert collected_fraction_unblocked(s) - theorem2_coefficients(s).c0 > p.spread_threshold
    assert res.threshold.case is ThresholdCase.ALWAYS_SERVED
    assert res.probability == 0.0 and res.branch is Branch.C1


@pytest.mark.parametrize(
    "snr_db, r_th, branch",
    [
        (0.0, 0.5, Branch.C2),
        (0.0, 1.0, Branch.C3),
        (0.0, 2.0, Branch.C3),
        (10.0, 0.5, Branch.C1),
        (10.0, 1.0, Branch.C2),
        (10.0, 2.0, Branch.C2),
        (20.0, 0.5, Branch.C1),
        (20.0, 1.0, Branch.C1),
        (20.0, 2.0, Branch.C1),
    ],
)
def test_branch_lattice(snr_db, r_th, branch):
    res = outage_probability(UNIT, OutageParams.from_snr_db(snr_db, r_th), model(UNIT))
    assert res.branch is branch
    if branch is Branch.C1:
        assert res.probability == 0.0
    elif branch is Branch.C3:
        assert res.probability == 1.0
    else:
        assert 0.0 < res.probability < 1.0


@pytest.mark.parametrize("snr_db, r_th", [(10.0, 1.0), (10.0, 2.0), (0.0, 0.5)])
def test_c2_matches_bisection(snr_db, r_th):
    p = OutageParams.from_snr_db(snr_db, r_th)
    m = model(UNIT)
    sup = m.support
    # the spread rises with offset; bisect where it reaches the threshold
    root = bisect_increasing(
        lambda r: hb_theorem2(UNIT.replace(r=r)).value, sup.a1_eff, sup.a2_eff, p.spread_threshold, 1e-13
    )
    res = outage_probability(UNIT, p, m)
    assert res.threshold.radius == pytest.approx(root, abs=1e-10)
    assert res.probability == pytest.approx((root - sup.a1_eff) / sup.width, abs=1e-10)


def test_minus_sign_not_plus():
    # with the plus sign the threshold level leaves (0, 1) and the branch collapses
    p = OutageParams.from_snr_db(10.0, 1.0)
    coeffs = theorem2_coefficients(UNIT)
    unblocked = collected_fraction_unblocked(UNIT)
    plus = (unblocked + p.spread_threshold) / coeffs.c0
    assert plus >= 1.0
    res = outage_probability(UNIT, p, model(UNIT))
    assert res.threshold.level == pytest.approx((unblocked - p.spread_threshold) / coeffs.c0)
    mc = mc_outage(UNIT, p, model(UNIT), McConfig(samples=200_000, seed=7))
    assert abs(res.probability - mc.value) <= 4 * mc.std_error
    assert mc.value > 0.05


def test_capacity_with_exact_spread():
    p = OutageParams.from_snr_db(10.0, 1.0)
    s = UNIT.replace(r=0.5)
    assert capacity(s, p, "exact") > 0
    assert capacity(s, p, "theorem-2") == pytest.approx(math.log2(1 + 10 * hb_theorem2(s).value))


@settings(max_examples=150)
@given(
    st.floats(0.2, 5.0),
    st.floats(0.2, 5.0),
    st.floats(0.05, 1.0),
    st.floats(-10.0, 30.0),
    st.floats(0.0, 4.0),
)
def test_probability_valid_and_branch_consistent(w_d, alpha, ab_frac, snr_db, r_th):
    s = LinkScenario(w_d, alpha, ab_frac * alpha)
    p = OutageParams.from_snr_db(snr_db, r_th)
    res = outage_probability(s, p, model(s))
    assert 0.0 <= res.probability <= 1.0
    expected = {Branch.C1: 0.0, Branch.C3: 1.0}
    if res.branch in expected:
        assert res.probability == expected[res.branch]


@settings(max_examples=100)
@given(st.floats(-10.0, 30.0), st.floats(0.0, 4.0), st.floats(0.0, 1.0))
def test_monotone_in_rate_and_snr(snr_db, r_th, bump):
    m = model(UNIT)
    base = outage_probability(UNIT, OutageParams.from_snr_db(snr_db, r_th), m).probability
    harder = outage_probability(UNIT, OutageParams.from_snr_db(snr_db, r_th + bump), m).probability
    stronger = outage_probability(UNIT, OutageParams.from_snr_db(snr_db + bump, r_th), m).probability
    assert harder >= base - 1e-12
    assert stronger <= base + 1e-12


def test_capacity_regimes():
    dark = LinkScenario(w_d=1.0, alpha=0.5, alpha_b=50.0)
    assert capacity(dark, OutageParams(1.0, 1.0, 1.0), "exact") == pytest.approx(0.0, abs=1e-12)
    bright = LinkScenario(w_d=1.0, alpha=100.0, alpha_b=0.0)
    assert capacity(bright, OutageParams(1.0, 1.0, 1.0), "theorem-1") == pytest.approx(1.0, abs=1e-12)


def test_capacity_reference_point():
    s = LinkScenario(w_d=2.0, alpha=2.0, alpha_b=1.0, r=1.0)
    hb = collected_fraction_unblocked(s) - 0.2671201962031798  # polar-oracle shadow integral
    assert capacity(s, OutageParams(100.0, 1.0, 1.0), "exact") == pytest.approx(math.log2(1 + 100 * hb), abs=1e-9)


def test_uniform_reference_support():
    s = LinkScenario(w_d=2.0, alpha=2.0, alpha_b=1.0)
    m = model(s)
    assert (m.support.a1_eff, m.support.a2_eff) == (0.0, 3.0)
    assert uniform_pdf(1.2, m) == pytest.approx(1 / 3)
    assert uniform_pdf(-0.1, m) == 0.0
    assert uniform_cdf(0.0, m) == 0.0
    assert uniform_cdf(1.5, m) == 0.5
    assert uniform_cdf(3.0, m) == 1.0


def test_pdf_normalised():
    from scipy.integrate import quad

    m = model(LinkScenario(w_d=2.0, alpha=2.0, alpha_b=1.0))
    total, _ = quad(lambda x: uniform_pdf(x, m), -1.0, 4.0, points=[0.0, 3.0])
    assert total == pytest.approx(1.0, abs=1e-10)


def test_zero_rate_always_served():
    t = outage_threshold_radius(UNIT, OutageParams(1.0, 1.0, 0.0))
    assert t.case is ThresholdCase.ALWAYS_SERVED and t.level > 1
    res = outage_probability(UNIT, OutageParams(1.0, 1.0, 0.0), model(UNIT))
    assert res.probability == 0.0 and res.branch is Branch.C1


def test_saturating_threshold_always_out():
    unblocked = collected_fraction_unblocked(UNIT)
    p = OutageParams(p_s=1.0, n_o=1.0, r_th=math.log2(1 + unblocked) + 0.1)
    assert outage_threshold_radius(UNIT, p).case is ThresholdCase.ALWAYS_OUT
    res = outage_probability(UNIT, p, model(UNIT))
    assert res.probability == 1.0 and res.branch is Branch.C3
