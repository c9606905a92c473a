"""
Black-Scholes pricing of European options on the ROI index.

    d1 = [ln(S0/K) + (r + sigma^2/2) T] / (sigma sqrt(T))
    d2 = d1 - sigma sqrt(T)
    C  = S0 N(d1) - K e^(-rT) N(d2)
    P  = K e^(-rT) N(-d2) - S0 N(-d1)

The ROI index pays no carry, so there is no dividend-yield term. Discounting
is continuous.
"""

import logging
import math
from decimal import ROUND_HALF_UP, Decimal

from scipy.special import erfc

from arof.errors import InvalidMaturity, InvalidPricingInput, InvalidVol, NonFinite
from arof.models import OptionKind, PricingInputs, PricingOutputs

logger = logging.getLogger(__name__)

_SQRT2 = math.sqrt(2.0)


def std_normal_cdf(x: float) -> float:
    """Phi(x) = erfc(-x / sqrt(2)) / 2."""
    if not math.isfinite(x):
        raise NonFinite(f"normal CDF argument must be finite (got {x!r})")
    return float(0.5 * erfc(-x / _SQRT2))


def _table_lookup(x: float, table_digits: int | None) -> float:
    """Phi(x), optionally rounded half-up the way a printed normal table is."""
    p = std_normal_cdf(x)
    if table_digits is None:
        return p
    return float(Decimal(repr(p)).quantize(Decimal(10) ** -table_digits, rounding=ROUND_HALF_UP))


def check_inputs(inp: PricingInputs) -> None:
    if inp.vol <= 0:
        raise InvalidVol(f"volatility must be > 0 (got {inp.vol!r}); use intrinsic_value at expiry")
    if inp.maturity <= 0:
        raise InvalidMaturity(f"maturity must be > 0 years (got {inp.maturity!r}); use intrinsic_value at expiry")
    if inp.spot <= 0:
        raise InvalidPricingInput(f"spot must be > 0 (got {inp.spot!r})")
    if inp.strike <= 0:
        raise InvalidPricingInput(f"strike must be > 0 (got {inp.strike!r})")


def compute_d1_d2(inp: PricingInputs) -> tuple[float, float]:
    check_inputs(inp)
    vol_sqrt_t = inp.vol * math.sqrt(inp.maturity)
    d1 = (math.log(inp.spot / inp.strike) + (inp.rate + 0.5 * inp.vol ** 2) * inp.maturity) / vol_sqrt_t
    return d1, d1 - vol_sqrt_t


def _price(inp: PricingInputs, kind: OptionKind, table_digits: int | None) -> PricingOutputs:
    d1, d2 = compute_d1_d2(inp)
    discount = math.exp(-inp.rate * inp.maturity)
    pv_strike = inp.strike * discount
    if kind == "call":
        price = inp.spot * _table_lookup(d1, table_digits) - pv_strike * _table_lookup(d2, table_digits)
        lower, upper = max(0.0, inp.spot - pv_strike), inp.spot
    else:
        price = pv_strike * _table_lookup(-d2, table_digits) - inp.spot * _table_lookup(-d1, table_digits)
        lower, upper = max(0.0, pv_strike - inp.spot), pv_strike
    if table_digits is None:
        # only rounding noise can leave the no-arbitrage band
        price = min(max(price, lower), upper)
    logger.debug("%s d1=%r d2=%r price=%r", kind, d1, d2, price)
    return PricingOutputs(
        kind=kind,
        d1=d1,
        d2=d2,
        nd1=_table_lookup(d1, table_digits),
        nd2=_table_lookup(d2, table_digits),
        discount_factor=discount,
        price=price,
    )


def call_price(inp: PricingInputs, table_digits: int | None = None) -> PricingOutputs:
    """European call. ``table_digits`` rounds every N(.) lookup, e.g. 4 for a printed table."""
    return _price(inp, "call", table_digits)


def put_price(inp: PricingInputs, table_digits: int | None = None) -> PricingOutputs:
    """European put; mirrors call_price."""
    return _price(inp, "put", table_digits)


def price_option(inp: PricingInputs, kind: OptionKind, table_digits: int | None = None) -> PricingOutputs:
    if kind not in ("call", "put"):
        raise InvalidPricingInput(f"kind must be 'call' or 'put' (got {kind!r})")
    return _price(inp, kind, table_digits)


def intrinsic_value(spot: float, strike: float, kind: OptionKind) -> float:
    """Payoff at expiry: max(S - K, 0) for calls, max(K - S, 0) for puts."""
    if spot <= 0 or strike <= 0:
        raise InvalidPricingInput(f"spot and strike must be > 0 (got {spot!r}, {strike!r})")
    if kind == "call":
        return max(spot - strike, 0.0)
    if kind == "put":
        return max(strike - spot, 0.0)
    raise InvalidPricingInput(f"kind must be 'call' or 'put' (got {kind!r})")
