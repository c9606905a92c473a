import math
import time

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from arof.errors import InvalidMaturity, InvalidPricingInput, InvalidVol, NonFinite
from arof.models import PricingInputs
from arof.money import display_round
from arof.pricing import call_price, compute_d1_d2, intrinsic_value, price_option, put_price, std_normal_cdf
from tests.oracle import expected_payoff_price

SWEEP = 10_000


def inputs(spot=100.0, strike=110.0, maturity=3.0, rate=0.03, vol=0.18) -> PricingInputs:
    return PricingInputs(spot=spot, strike=strike, maturity=maturity, rate=rate, vol=vol)


def oracle_grid(n: int = 100) -> list[PricingInputs]:
    rng = np.random.default_rng(7)
    return [
        inputs(
            spot=float(rng.uniform(50, 200)),
            strike=float(rng.uniform(50, 200)),
            maturity=float(rng.uniform(0.25, 5)),
            rate=float(rng.uniform(0.0, 0.08)),
            vol=float(rng.uniform(0.05, 0.6)),
        )
        for _ in range(n)
    ]


# --- normal CDF ---


def test_std_normal_cdf_reference_values():
    assert std_normal_cdf(0.0) == 0.5
    assert std_normal_cdf(1.959963984540054) == pytest.approx(0.975, abs=1e-12)
    assert std_normal_cdf(-1.0) == pytest.approx(0.15865525393145707, abs=1e-12)
    assert std_normal_cdf(-40.0) == pytest.approx(0.0, abs=1e-300)


def test_std_normal_cdf_symmetry_and_monotonicity():
    grid = np.linspace(-8, 8, 20_001)
    values = [std_normal_cdf(float(x)) for x in grid]
    assert all(b >= a for a, b in zip(values, values[1:]))
    for x in grid[::97]:
        assert std_normal_cdf(float(-x)) == pytest.approx(1 - std_normal_cdf(float(x)), abs=1e-12)


def test_std_normal_cdf_rejects_nan():
    with pytest.raises(NonFinite):
        std_normal_cdf(math.nan)


# --- d1, d2 ---


def test_d1_d2_worked_example(worked_example):
    d1, d2 = compute_d1_d2(worked_example)
    assert d1 == pytest.approx(0.1389, abs=5e-4)
    assert d2 == pytest.approx(-0.1729, abs=5e-4)
    assert d2 == pytest.approx(d1 - 0.18 * math.sqrt(3), abs=1e-12)


def test_d1_d2_at_the_money_zero_rate():
    d1, d2 = compute_d1_d2(inputs(spot=100, strike=100, maturity=1, rate=0, vol=0.2))
    assert d1 == pytest.approx(0.1, abs=1e-12)
    assert d2 == pytest.approx(-0.1, abs=1e-12)


def test_d1_d2_in_the_money():
    d1, d2 = compute_d1_d2(inputs(spot=110, strike=100, maturity=1, rate=0.05, vol=0.25))
    assert d1 == pytest.approx(0.70624, abs=1e-5)
    assert d2 == pytest.approx(0.45624, abs=1e-5)


@pytest.mark.parametrize(
    "kwargs, error",
    [
        ({"vol": 0.0}, InvalidVol),
        ({"vol": -0.1}, InvalidVol),
        ({"maturity": 0.0}, InvalidMaturity),
        ({"spot": 0.0}, InvalidPricingInput),
        ({"strike": -1.0}, InvalidPricingInput),
    ],
)
def test_invalid_inputs(kwargs, error):
    with pytest.raises(error):
        call_price(inputs(**kwargs))


def test_pricing_inputs_reject_non_finite():
    with pytest.raises(ValueError):
        inputs(vol=math.inf)


# --- prices ---


def test_worked_example_call(worked_example):
    out = call_price(worked_example)
    assert 12.13 <= out.price <= 12.17
    assert out.price == pytest.approx(12.157, abs=1e-3)
    assert display_round(out.price) == display_round(12.16)


def test_worked_example_put(worked_example):
    out = put_price(worked_example)
    assert 12.66 <= out.price <= 12.71
    assert out.price == pytest.approx(12.689, abs=1e-3)


def test_worked_example_with_four_place_tables(worked_example):
    call = call_price(worked_example, table_digits=4)
    put = put_price(worked_example, table_digits=4)
    assert call.nd1 == 0.5552
    assert call.nd2 == 0.4314
    assert str(display_round(call.price)) == "12.15"
    assert str(display_round(put.price)) == "12.68"


def test_price_option_dispatch(worked_example):
    assert price_option(worked_example, "call") == call_price(worked_example)
    assert price_option(worked_example, "put") == put_price(worked_example)
    with pytest.raises(InvalidPricingInput):
        price_option(worked_example, "straddle")


def test_far_out_of_the_money():
    assert call_price(inputs(strike=1e9)).price < 1e-3
    assert put_price(inputs(spot=1e9)).price < 1e-3


@pytest.mark.parametrize("p", oracle_grid(), ids=lambda p: f"S{p.spot:.0f}-K{p.strike:.0f}")
def test_matches_expected_payoff_oracle(p):
    assert call_price(p).price == pytest.approx(expected_payoff_price(**p.model_dump(), kind="call"), abs=1e-4)
    assert put_price(p).price == pytest.approx(expected_payoff_price(**p.model_dump(), kind="put"), abs=1e-4)


def test_worked_example_matches_oracle(worked_example):
    expected = expected_payoff_price(100, 110, 3, 0.03, 0.18, "call")
    assert call_price(worked_example).price == pytest.approx(expected, abs=1e-4)


@pytest.mark.parametrize("p", oracle_grid(), ids=lambda p: f"S{p.spot:.0f}-K{p.strike:.0f}")
def test_vanishing_vol_limit(p):
    near_zero = p.model_copy(update={"vol": 1e-8})
    floor = max(p.spot - p.strike * math.exp(-p.rate * p.maturity), 0.0)
    assert call_price(near_zero).price == pytest.approx(floor, abs=1e-6)


def test_put_call_parity_sweep():
    rng = np.random.default_rng(12345)
    cases = [
        inputs(
            spot=float(rng.uniform(10, 500)),
            strike=float(rng.uniform(10, 500)),
            maturity=float(rng.uniform(0.1, 10)),
            rate=float(rng.uniform(-0.02, 0.10)),
            vol=float(rng.uniform(0.01, 1.0)),
        )
        for _ in range(SWEEP)
    ]
    started = time.perf_counter()
    for p in cases:
        c, q = call_price(p).price, put_price(p).price
        assert abs(c - q - p.spot + p.strike * math.exp(-p.rate * p.maturity)) < 1e-9
    assert time.perf_counter() - started < 5.0


def test_worked_example_prices_within_a_millisecond(worked_example):
    call_price(worked_example)
    timings = []
    for _ in range(50):
        started = time.perf_counter()
        call_price(worked_example)
        timings.append(time.perf_counter() - started)
    # best of 50
    assert min(timings) < 1e-3


# --- monotonicity ---

level = st.floats(min_value=20, max_value=300)
vol = st.floats(min_value=0.05, max_value=0.8)
maturity = st.floats(min_value=0.1, max_value=5)
rate = st.floats(min_value=0.0, max_value=0.08)


@settings(max_examples=300)
@given(level, level, level, maturity, rate, vol)
def test_call_monotone_in_spot_and_strike(s1, s2, k, t, r, v):
    assume(s1 < s2)
    lo, hi = call_price(inputs(s1, k, t, r, v)).price, call_price(inputs(s2, k, t, r, v)).price
    assert hi >= lo - 1e-9
    c_k1 = call_price(inputs(k, s1, t, r, v)).price
    c_k2 = call_price(inputs(k, s2, t, r, v)).price
    assert c_k2 <= c_k1 + 1e-9
    p_lo, p_hi = put_price(inputs(s1, k, t, r, v)).price, put_price(inputs(s2, k, t, r, v)).price
    assert p_hi <= p_lo + 1e-9


@settings(max_examples=300)
@given(level, level, level, maturity, rate, vol)
def test_put_non_decreasing_in_strike(s, k1, k2, t, r, v):
    assume(k1 < k2)
    assert put_price(inputs(s, k2, t, r, v)).price >= put_price(inputs(s, k1, t, r, v)).price - 1e-9


@settings(max_examples=300)
@given(level, level, maturity, rate, vol, vol)
def test_call_monotone_in_vol(s, k, t, r, v1, v2):
    assume(v1 < v2)
    assert call_price(inputs(s, k, t, r, v2)).price >= call_price(inputs(s, k, t, r, v1)).price - 1e-9


@settings(max_examples=300)
@given(level, level, maturity, maturity, rate, vol)
def test_call_monotone_in_maturity(s, k, t1, t2, r, v):
    assume(t1 < t2)
    assert call_price(inputs(s, k, t2, r, v)).price >= call_price(inputs(s, k, t1, r, v)).price - 1e-9


@given(level, level, maturity, st.floats(min_value=-0.02, max_value=0.1), vol)
def test_no_arbitrage_bounds(s, k, t, r, v):
    c = call_price(inputs(s, k, t, r, v)).price
    p = put_price(inputs(s, k, t, r, v)).price
    pv_k = k * math.exp(-r * t)
    assert max(0.0, s - pv_k) - 1e-9 <= c <= s + 1e-9
    assert max(0.0, pv_k - s) - 1e-9 <= p <= pv_k + 1e-9


# --- intrinsic value ---


@pytest.mark.parametrize(
    "spot, strike, kind, expected",
    [(125, 110, "call", 15.0), (108, 110, "call", 0.0), (92, 100, "put", 8.0), (100, 100, "put", 0.0)],
)
def test_intrinsic_value(spot, strike, kind, expected):
    assert intrinsic_value(spot, strike, kind) == expected


def test_intrinsic_value_rejects_bad_levels():
    with pytest.raises(InvalidPricingInput):
        intrinsic_value(0, 100, "call")
