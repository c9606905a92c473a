"""
Cash settlement of AROF futures and AROO options, with structural risk controls.

All cash is integer minor units. A cap clamps the effective settlement ROI
at ``cap_ratio`` times the contract's own reference level (entry ROI for
futures, strike for options); an optional collar floor clamps it from below
at ``floor_ratio`` times the same reference. The aggregate annual liability
ceiling is applied across an issuer's settlements, pro rata.
"""

import logging
import math
from decimal import Decimal

from arof.errors import NonFinite, NonPositiveRoi
from arof.models import (
    FuturesContract,
    IssuerLiability,
    OptionContract,
    OptionKind,
    OptionSettlement,
    PricingOutputs,
    RiskControls,
    SettlementResult,
)
from arof.money import allocate_pro_rata, to_decimal, to_minor
from arof.pricing import intrinsic_value

logger = logging.getLogger(__name__)

NO_CONTROLS = RiskControls()


def _check_final(final_roi: float) -> None:
    if not math.isfinite(final_roi):
        raise NonFinite(f"final ROI must be finite (got {final_roi!r})")
    if final_roi <= 0:
        raise NonPositiveRoi(f"final ROI must be > 0 (got {final_roi!r})")


def _effective_roi(final_roi: float, reference: float, controls: RiskControls) -> tuple[Decimal, bool, bool]:
    """Clamp final ROI into [floor * reference, cap * reference]; returns (roi, capped, floored)."""
    final = to_decimal(final_roi)
    effective = final
    cap_applied = floor_applied = False
    if controls.cap_ratio is not None:
        cap_level = to_decimal(controls.cap_ratio) * to_decimal(reference)
        if final > cap_level:
            effective, cap_applied = cap_level, True
    if controls.floor_ratio is not None:
        floor_level = to_decimal(controls.floor_ratio) * to_decimal(reference)
        if final < floor_level:
            effective, floor_applied = floor_level, True
    return effective, cap_applied, floor_applied


def _futures_cash(c: FuturesContract, settle_roi: Decimal) -> int:
    points = settle_roi - to_decimal(c.entry_roi)
    return to_minor(points * c.quantity * c.notional_per_point)


def settle_futures(c: FuturesContract, final_roi: float, controls: RiskControls = NO_CONTROLS) -> SettlementResult:
    """(final - entry) x quantity x notional, from the long side; controls applied to the settlement ROI."""
    _check_final(final_roi)
    effective, cap_applied, floor_applied = _effective_roi(final_roi, c.entry_roi, controls)
    result = SettlementResult(
        gross=_futures_cash(c, to_decimal(final_roi)),
        capped=_futures_cash(c, effective),
        cap_applied=cap_applied,
        floor_applied=floor_applied,
        final_roi=final_roi,
        effective_final_roi=float(effective),
    )
    if cap_applied or floor_applied:
        logger.warning(
            "Risk controls clamped %s settlement ROI %r -> %r", c.institution_id, final_roi, effective,
        )
    return result


def _intrinsic_points(settle_roi: Decimal, strike: float, kind: OptionKind) -> Decimal:
    """intrinsic_value, carried out in Decimal so the cash figure is exact."""
    if intrinsic_value(float(settle_roi), strike, kind) == 0:
        return Decimal(0)
    diff = settle_roi - to_decimal(strike)
    return diff if kind == "call" else -diff


def settle_option(c: OptionContract, final_roi: float, controls: RiskControls = NO_CONTROLS) -> OptionSettlement:
    """Gross payoff = intrinsic value x units x multiplier; net = gross - premium."""
    _check_final(final_roi)
    effective, cap_applied, floor_applied = _effective_roi(final_roi, c.strike, controls)
    gross = to_minor(_intrinsic_points(effective, c.strike, c.kind) * c.units * c.unit_multiplier)
    premium = to_minor(c.premium_paid)
    return OptionSettlement(
        gross_payoff=gross,
        net_pnl=gross - premium,
        premium_paid=premium,
        final_roi=final_roi,
        effective_final_roi=float(effective),
        cap_applied=cap_applied,
        floor_applied=floor_applied,
    )


def premium_for(units: int, unit_multiplier: Decimal, priced: PricingOutputs) -> int:
    """Total premium in minor units for ``units`` options at the model price per unit."""
    return to_minor(to_decimal(priced.price) * units * unit_multiplier)


def aggregate_issuer_liability(settlements: list[SettlementResult], controls: RiskControls = NO_CONTROLS) -> IssuerLiability:
    """
    Total the issuer-pays (positive) settlements of one issuer and year and
    clip them to the liability ceiling. Positive settlements are scaled pro
    rata so the allocations sum to the clipped total exactly; issuer-receives
    flows pass through unscaled.
    """
    owed = [max(s.capped, 0) for s in settlements]
    total = sum(owed)
    ceiling = to_minor(controls.liability_ceiling) if controls.liability_ceiling is not None else None
    if ceiling is None or total <= ceiling:
        return IssuerLiability(
            total=total,
            clipped=total,
            ceiling_applied=False,
            allocations=tuple(s.capped for s in settlements),
            settlements=tuple(settlements),
        )

    logger.warning("Liability ceiling clips issuer total %d -> %d (minor units)", total, ceiling)
    scaled = allocate_pro_rata(owed, ceiling)
    allocations = tuple(scaled[i] if s.capped > 0 else s.capped for i, s in enumerate(settlements))
    stamped = tuple(
        s.model_copy(update={"capped": allocations[i], "ceiling_applied": True}) if s.capped > 0 else s
        for i, s in enumerate(settlements)
    )
    return IssuerLiability(
        total=total,
        clipped=ceiling,
        ceiling_applied=True,
        allocations=allocations,
        settlements=stamped,
    )
