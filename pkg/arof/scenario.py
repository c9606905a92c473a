"""
Scenario orchestration: issuance, momentum, hedging and reserve projection.

Each run composes the index, pricing and contracts modules into a ledger of
transfers between named parties and returns a ScenarioReport. Every transfer
is booked twice (payer and payee), so per-party cash always nets to zero
across the scenario.
"""

import datetime as dt
import logging
from collections import defaultdict
from decimal import Decimal

from arof.contracts import aggregate_issuer_liability, premium_for, settle_futures, settle_option
from arof.errors import InvalidScenario
from arof.models import (
    CashFlow,
    ControlsAudit,
    FuturesContract,
    HedgeConfig,
    IssuanceConfig,
    OptionContract,
    PricingInputs,
    ReserveConfig,
    ReserveRow,
    ScenarioConfig,
    ScenarioReport,
)
from arof.money import format_minor, from_minor, to_decimal, to_minor
from arof.pricing import price_option
from arof.vol_estimator import annualized_vol

logger = logging.getLogger(__name__)

INSTITUTION = "institution"
INVESTOR = "investor"
UNDERWRITER = "underwriter"
OPTION_WRITER = "option_writer"
TREASURY = "treasury"

DAYS_PER_YEAR = 365.25


class Ledger:
    """Double-entry list of cash flows in minor units."""

    def __init__(self) -> None:
        self.flows: list[CashFlow] = []

    def transfer(self, date: dt.date, payer: str, payee: str, label: str, amount: int) -> None:
        if amount == 0:
            return
        if amount < 0:
            payer, payee, amount = payee, payer, -amount
        self.flows.append(CashFlow(date=date, party=payee, counterparty=payer, label=label, amount=amount))
        self.flows.append(CashFlow(date=date, party=payer, counterparty=payee, label=label, amount=-amount))

    def net_positions(self) -> dict[str, int]:
        sums: dict[str, int] = defaultdict(int)
        for flow in self.flows:
            sums[flow.party] += flow.amount
        return dict(sorted(sums.items()))

    def net(self, party: str) -> int:
        return self.net_positions().get(party, 0)


def _money(minor: int) -> str:
    return str(from_minor(minor))


def _roi(value: float) -> str:
    return f"{value:.4f}"


def _require_kind(cfg: ScenarioConfig, *kinds: str) -> None:
    if cfg.kind not in kinds:
        raise InvalidScenario(f"expected a {' or '.join(kinds)} scenario, got {cfg.kind!r}")


def _require_path(cfg: ScenarioConfig, points: int) -> None:
    if len(cfg.roi_path) < points:
        raise InvalidScenario(f"{cfg.kind} needs at least {points} ROI path points, got {len(cfg.roi_path)}")


def add_years(date: dt.date, years: int) -> dt.date:
    try:
        return date.replace(year=date.year + years)
    except ValueError:  # 29 February
        return date.replace(year=date.year + years, day=28)


# --- Issuance (exchange-traded, private placement, research momentum) ---


def run_issuance(cfg: IssuanceConfig) -> ScenarioReport:
    """
    Institution sells ``quantity`` AROFs at the first path point and settles
    them at the last. Proceeds = quantity x notional x entry ROI x issue price
    factor; for ``momentum`` configs the factor is back-solved from
    ``target_proceeds``.
    """
    _require_kind(cfg, "issuance", "momentum")
    _require_path(cfg, 2)
    issue, settle = cfg.roi_path[0], cfg.roi_path[-1]
    logger.info("Running %s scenario for %s", cfg.kind, cfg.institution_id)

    base = cfg.quantity * cfg.notional_per_point * to_decimal(issue.roi)
    factor = cfg.target_proceeds / base if cfg.target_proceeds is not None else cfg.issue_price_factor
    proceeds = to_minor(base * factor)
    premium = to_minor(cfg.underwriting_premium)

    contract = FuturesContract(
        institution_id=cfg.institution_id,
        entry_roi=issue.roi,
        notional_per_point=cfg.notional_per_point,
        quantity=cfg.quantity,
        settlement_date=settle.date,
        holder=INVESTOR,
    )
    settlement = settle_futures(contract, settle.roi, cfg.controls)
    liability = aggregate_issuer_liability([settlement], cfg.controls)
    issuer_pays = liability.allocations[0]

    ledger = Ledger()
    ledger.transfer(issue.date, INVESTOR, INSTITUTION, "AROF issuance proceeds", proceeds)
    ledger.transfer(issue.date, INSTITUTION, UNDERWRITER, "underwriting premium", premium)
    ledger.transfer(settle.date, INSTITUTION, INVESTOR, "AROF cash settlement", issuer_pays)

    reserve = to_minor(from_minor(proceeds) * to_decimal(cfg.reserve_fraction))
    institution_net = ledger.net(INSTITUTION)
    notes = []
    if settlement.cap_applied:
        notes.append(f"cap {cfg.controls.cap_ratio} x entry limits settlement ROI to {_roi(settlement.effective_final_roi)}")
    if settlement.floor_applied:
        notes.append(f"floor {cfg.controls.floor_ratio} x entry lifts settlement ROI to {_roi(settlement.effective_final_roi)}")
    if liability.ceiling_applied:
        notes.append(f"annual liability ceiling clips {_money(liability.total)} to {_money(liability.clipped)}")

    return ScenarioReport(
        kind=cfg.kind,
        institution_id=cfg.institution_id,
        cash_flows=tuple(ledger.flows),
        net_positions=ledger.net_positions(),
        controls=ControlsAudit(
            cap_applied=settlement.cap_applied,
            floor_applied=settlement.floor_applied,
            ceiling_applied=liability.ceiling_applied,
            effective_final_roi=settlement.effective_final_roi,
            notes=tuple(notes),
        ),
        figures={
            "entry_roi": _roi(issue.roi),
            "final_roi": _roi(settle.roi),
            "effective_final_roi": _roi(settlement.effective_final_roi),
            "quantity": str(cfg.quantity),
            "notional_per_point": str(cfg.notional_per_point),
            "issue_price_factor": str(factor),
            "proceeds": _money(proceeds),
            "underwriting_premium": _money(premium),
            "gross_settlement": _money(settlement.gross),
            "issuer_pays": _money(issuer_pays),
            "reserve_allocation": _money(reserve),
            "institution_net": _money(institution_net),
        },
        summary=(
            f"{cfg.institution_id} issues {cfg.quantity:,} AROFs at ROI {_roi(issue.roi)}, raising {format_minor(proceeds)}",
            f"ROI settles at {_roi(settle.roi)} (effective {_roi(settlement.effective_final_roi)}): "
            f"issuer pays {format_minor(issuer_pays)}",
            f"institution net {format_minor(institution_net, signed=True)}",
        ),
    )


# --- Hedging with options on the institution's own ROI ---


def _hedge_vol(cfg: HedgeConfig) -> float:
    if cfg.vol is not None:
        return cfg.vol
    if not cfg.roi_history:
        raise InvalidScenario("hedge scenarios need vol or an roi_history to estimate it from")
    return annualized_vol(list(cfg.roi_history), cfg.periods_per_year)


def _run_hedge(cfg: HedgeConfig) -> ScenarioReport:
    _require_path(cfg, 2)
    start, expiry = cfg.roi_path[0], cfg.roi_path[-1]
    kind = "put" if cfg.kind == "hedge_put" else "call"
    maturity = cfg.maturity_years or (expiry.date - start.date).days / DAYS_PER_YEAR
    logger.info("Running %s scenario for %s", cfg.kind, cfg.institution_id)

    inputs = PricingInputs(spot=start.roi, strike=cfg.strike, maturity=maturity, rate=cfg.rate, vol=_hedge_vol(cfg))
    priced = price_option(inputs, kind)
    premium = premium_for(cfg.units, cfg.unit_multiplier, priced)
    contract = OptionContract(
        institution_id=cfg.institution_id,
        kind=kind,
        strike=cfg.strike,
        units=cfg.units,
        unit_multiplier=cfg.unit_multiplier,
        premium_paid=from_minor(premium),
        expiry=expiry.date,
    )
    settlement = settle_option(contract, expiry.roi, cfg.controls)

    ledger = Ledger()
    ledger.transfer(start.date, INSTITUTION, OPTION_WRITER, f"AROO {kind} premium", premium)
    ledger.transfer(expiry.date, OPTION_WRITER, INSTITUTION, f"AROO {kind} payout", settlement.gross_payoff)

    figures = {
        "spot_roi": _roi(start.roi),
        "strike": _roi(cfg.strike),
        "final_roi": _roi(expiry.roi),
        "maturity_years": f"{maturity:.4f}",
        "vol": f"{inputs.vol:.6f}",
        "d1": f"{priced.d1:.4f}",
        "d2": f"{priced.d2:.4f}",
        "unit_price": f"{priced.price:.6f}",
        "premium": _money(premium),
        "payout": _money(settlement.gross_payoff),
        "net_pnl": _money(settlement.net_pnl),
    }
    summary = [
        f"{cfg.institution_id} buys {cfg.units:,} {kind}s struck at {_roi(cfg.strike)} for {format_minor(premium)}",
        f"ROI ends at {_roi(expiry.roi)}: payout {format_minor(settlement.gross_payoff)}, "
        f"net {format_minor(settlement.net_pnl, signed=True)}",
    ]

    if kind == "put":
        decline = max(to_decimal(start.roi) - to_decimal(expiry.roi), Decimal(0))
        shortfall = to_minor(decline * cfg.shortfall_per_point)
        figures["budget_shortfall"] = _money(shortfall)
        figures["residual_shortfall"] = _money(shortfall - settlement.gross_payoff)
        if shortfall > 0:
            coverage = (Decimal(settlement.gross_payoff) / Decimal(shortfall)).quantize(Decimal("0.0001"))
            figures["coverage_ratio"] = str(coverage)
            summary.append(f"payout covers {coverage:.2%} of a {format_minor(shortfall)} budget shortfall")
            if cfg.min_coverage is not None:
                met = coverage >= to_decimal(cfg.min_coverage)
                figures["coverage_met"] = str(met).lower()
                if not met:
                    summary.append(f"coverage below the {cfg.min_coverage:.0%} target")
    else:
        figures["funding_raised"] = _money(settlement.gross_payoff)

    notes = []
    if settlement.cap_applied:
        notes.append(f"cap {cfg.controls.cap_ratio} x strike limits settlement ROI to {_roi(settlement.effective_final_roi)}")
    if settlement.floor_applied:
        notes.append(f"floor {cfg.controls.floor_ratio} x strike lifts settlement ROI to {_roi(settlement.effective_final_roi)}")

    return ScenarioReport(
        kind=cfg.kind,
        institution_id=cfg.institution_id,
        cash_flows=tuple(ledger.flows),
        net_positions=ledger.net_positions(),
        controls=ControlsAudit(
            cap_applied=settlement.cap_applied,
            floor_applied=settlement.floor_applied,
            effective_final_roi=settlement.effective_final_roi,
            notes=tuple(notes),
        ),
        figures=figures,
        summary=tuple(summary),
    )


def run_hedge_put(cfg: HedgeConfig) -> ScenarioReport:
    """Institution insures against an ROI decline with puts; reports premium, payout and shortfall coverage."""
    _require_kind(cfg, "hedge_put")
    return _run_hedge(cfg)


def run_hedge_call(cfg: HedgeConfig) -> ScenarioReport:
    """Institution buys calls on its own ROI to monetize an expected rise."""
    _require_kind(cfg, "hedge_call")
    return _run_hedge(cfg)


# --- Reserve fund ---


def _growth(rate: Decimal, years: int, compounding: str) -> Decimal:
    if compounding == "continuous":
        return (rate * years).exp()
    return (1 + rate) ** years


def project_reserve(cfg: ReserveConfig) -> ScenarioReport:
    """
    Reserve balance B_t = fraction x proceeds x growth(t) for t = 0..horizon,
    against the worst-case settlement at ``max_roi`` after risk controls.
    """
    _require_kind(cfg, "reserve_projection")
    rate = to_decimal(cfg.rate)
    if cfg.compounding == "annual" and rate <= -1:
        raise InvalidScenario(f"annual rate must be > -1 (got {cfg.rate})")
    start = cfg.roi_path[0]
    logger.info("Running reserve projection for %s over %d years", cfg.institution_id, cfg.horizon_years)

    proceeds = to_minor(cfg.proceeds)
    initial = cfg.proceeds * to_decimal(cfg.reserve_fraction)

    ledger = Ledger()
    ledger.transfer(start.date, INVESTOR, INSTITUTION, "AROF issuance proceeds", proceeds)
    rows: list[ReserveRow] = []
    previous = None
    for year in range(cfg.horizon_years + 1):
        balance = to_minor(initial * _growth(rate, year, cfg.compounding))
        interest = 0 if previous is None else balance - previous
        date = add_years(start.date, year)
        ledger.transfer(date, TREASURY, INSTITUTION, f"reserve interest year {year}", interest)
        rows.append(ReserveRow(year=year, date=date, balance=balance, interest=interest))
        previous = balance

    contract = FuturesContract(
        institution_id=cfg.institution_id,
        entry_roi=start.roi,
        notional_per_point=cfg.notional_per_point,
        quantity=cfg.quantity,
        settlement_date=add_years(start.date, cfg.horizon_years),
        holder=INVESTOR,
    )
    worst = settle_futures(contract, cfg.max_roi, cfg.controls)
    liability = aggregate_issuer_liability([worst], cfg.controls)
    worst_case = max(liability.allocations[0], 0)
    final_balance = rows[-1].balance
    uncovered = final_balance < worst_case

    summary = [
        f"reserve of {format_minor(rows[0].balance)} grows to {format_minor(final_balance)} "
        f"over {cfg.horizon_years} years ({cfg.compounding} compounding at {cfg.rate:.2%})",
        f"worst-case liability at ROI {_roi(cfg.max_roi)}: {format_minor(worst_case)}",
    ]
    if uncovered:
        summary.append(f"UNCOVERED: reserve short by {format_minor(worst_case - final_balance)}")

    return ScenarioReport(
        kind=cfg.kind,
        institution_id=cfg.institution_id,
        cash_flows=tuple(ledger.flows),
        net_positions=ledger.net_positions(),
        controls=ControlsAudit(
            cap_applied=worst.cap_applied,
            floor_applied=worst.floor_applied,
            ceiling_applied=liability.ceiling_applied,
            effective_final_roi=worst.effective_final_roi,
        ),
        figures={
            "proceeds": _money(proceeds),
            "reserve_fraction": str(cfg.reserve_fraction),
            "initial_reserve": _money(rows[0].balance),
            "final_reserve": _money(final_balance),
            "worst_case_liability": _money(worst_case),
            "uncovered": str(uncovered).lower(),
        },
        reserve_table=tuple(rows),
        summary=tuple(summary),
    )


def run_scenario(cfg: ScenarioConfig) -> ScenarioReport:
    """Dispatch on the scenario kind."""
    if isinstance(cfg, IssuanceConfig):
        return run_issuance(cfg)
    if isinstance(cfg, HedgeConfig):
        return run_hedge_put(cfg) if cfg.kind == "hedge_put" else run_hedge_call(cfg)
    if isinstance(cfg, ReserveConfig):
        return project_reserve(cfg)
    raise InvalidScenario(f"unknown scenario kind {getattr(cfg, 'kind', None)!r}")
