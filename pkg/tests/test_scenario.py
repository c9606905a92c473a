import datetime as dt
from decimal import Decimal

import pytest

from arof.contracts import premium_for, settle_option
from arof.errors import InvalidScenario
from arof.models import IssuanceConfig, OptionContract, PricingInputs
from arof.money import from_minor
from arof.pricing import price_option
from arof.report import report_json
from arof.scenario import Ledger, add_years, project_reserve, run_hedge_call, run_hedge_put, run_issuance, run_scenario
from arof.store import load_scenario
from arof.vol_estimator import annualized_vol


@pytest.fixture
def scenario(fixtures_dir):
    def load(name: str):
        return load_scenario(fixtures_dir / "scenarios" / f"{name}.json")

    return load


def assert_conserved(report):
    assert sum(report.net_positions.values()) == 0
    for party, net in report.net_positions.items():
        assert net == sum(f.amount for f in report.cash_flows if f.party == party)


# --- ledger ---


def test_ledger_books_both_sides():
    ledger = Ledger()
    ledger.transfer(dt.date(2025, 1, 2), "a", "b", "x", 500)
    ledger.transfer(dt.date(2025, 1, 3), "a", "b", "y", -200)
    ledger.transfer(dt.date(2025, 1, 3), "a", "b", "z", 0)
    assert len(ledger.flows) == 4
    assert ledger.net_positions() == {"a": -300, "b": 300}


def test_add_years_leap_day():
    assert add_years(dt.date(2024, 2, 29), 1) == dt.date(2025, 2, 28)
    assert add_years(dt.date(2024, 2, 29), 4) == dt.date(2028, 2, 29)


# --- issuance ---


def test_flat_benchmark_issuance(scenario):
    report = run_issuance(scenario("issuance_benchmark"))
    assert report.figures["gross_settlement"] == "0.00"
    assert report.figures["issuer_pays"] == "0.00"
    assert report.figures["proceeds"] == "100000000.00"
    assert report.net_positions["institution"] == 10_000_000_000
    assert_conserved(report)


def test_momentum_reproduces_target_and_settlement(scenario):
    report = run_issuance(scenario("momentum"))
    assert report.kind == "momentum"
    assert report.figures["proceeds"] == "10000000.00"
    assert report.figures["issuer_pays"] == "2500000.00"
    assert report.figures["institution_net"] == "7500000.00"
    assert report.net_positions["investor"] == -750_000_000
    assert_conserved(report)


def test_momentum_requires_target(scenario):
    cfg = scenario("momentum").model_dump()
    cfg["target_proceeds"] = None
    with pytest.raises(ValueError, match="target_proceeds"):
        IssuanceConfig.model_validate(cfg)


def test_capped_issuance(scenario):
    report = run_issuance(scenario("issuance_capped"))
    assert report.controls.cap_applied
    assert report.controls.effective_final_roi == 120.0
    assert report.figures["gross_settlement"] == "300000.00"
    assert report.figures["issuer_pays"] == "200000.00"
    assert report.figures["underwriting_premium"] == "5000.00"
    assert report.figures["reserve_allocation"] == "250000.00"
    assert report.net_positions == {"institution": 79_500_000, "investor": -80_000_000, "underwriter": 500_000}
    assert_conserved(report)


def test_issuance_rejects_single_point_path(scenario):
    cfg = scenario("issuance_benchmark")
    short = cfg.model_copy(update={"roi_path": cfg.roi_path[:1]})
    with pytest.raises(InvalidScenario):
        run_issuance(short)


# --- hedging ---


def test_put_hedge_pays_eight_points(scenario):
    cfg = scenario("hedge_put")
    report = run_hedge_put(cfg)
    assert report.figures["payout"] == "800000.00"

    priced = price_option(PricingInputs(spot=100, strike=100, maturity=1, rate=0.03, vol=0.18), "put")
    premium = premium_for(100, Decimal(1000), priced)
    assert report.figures["premium"] == str(from_minor(premium))
    assert report.net_positions["institution"] == 80_000_000 - premium
    assert_conserved(report)


def test_put_payout_matches_settle_option(scenario):
    cfg = scenario("hedge_put")
    report = run_hedge_put(cfg)
    contract = OptionContract(
        institution_id=cfg.institution_id, kind="put", strike=cfg.strike, units=cfg.units,
        unit_multiplier=cfg.unit_multiplier, expiry=cfg.roi_path[-1].date,
    )
    assert report.figures["payout"] == str(from_minor(settle_option(contract, 92.0).gross_payoff))


def test_put_hedge_expires_worthless(scenario):
    cfg = scenario("hedge_put")
    path = (cfg.roi_path[0], cfg.roi_path[1].model_copy(update={"roi": 104.0}))
    report = run_hedge_put(cfg.model_copy(update={"roi_path": path}))
    assert report.figures["payout"] == "0.00"
    assert report.net_positions["institution"] == -report.net_positions["option_writer"]
    assert Decimal(report.figures["net_pnl"]) == -Decimal(report.figures["premium"])


def test_put_coverage_ratio(scenario):
    report = run_hedge_put(scenario("hedge_put_coverage"))
    assert report.figures["budget_shortfall"] == "500000.00"
    assert report.figures["payout"] == "400000.00"
    assert report.figures["residual_shortfall"] == "100000.00"
    assert report.figures["coverage_ratio"] == "0.8000"
    assert report.figures["coverage_met"] == "true"


def test_call_hedge_estimates_vol_from_history(scenario):
    cfg = scenario("hedge_call")
    report = run_hedge_call(cfg)
    sigma = annualized_vol(list(cfg.roi_history), 1)
    assert report.figures["vol"] == f"{sigma:.6f}"
    priced = price_option(PricingInputs(spot=100, strike=110, maturity=3, rate=0.03, vol=sigma), "call")
    assert report.figures["premium"] == str(from_minor(premium_for(1000, Decimal(1), priced)))
    assert report.figures["payout"] == "15000.00"
    assert_conserved(report)


def test_hedge_needs_vol_source(scenario):
    cfg = scenario("hedge_put").model_copy(update={"vol": None})
    with pytest.raises(InvalidScenario):
        run_hedge_put(cfg)


def test_hedge_kind_mismatch(scenario):
    with pytest.raises(InvalidScenario):
        run_hedge_call(scenario("hedge_put"))


# --- reserve ---


def test_flat_reserve(scenario):
    report = project_reserve(scenario("reserve_flat"))
    assert [row.balance for row in report.reserve_table] == [500_000_000] * 4
    assert all(row.interest == 0 for row in report.reserve_table)
    assert report.figures["worst_case_liability"] == "2000000.00"
    assert report.figures["uncovered"] == "false"
    assert_conserved(report)


def test_compounded_reserve(scenario):
    report = project_reserve(scenario("reserve_compound"))
    assert report.figures["final_reserve"] == "10927270.00"
    assert [row.interest for row in report.reserve_table] == [0, 30_000_000, 30_900_000, 31_827_000]
    assert report.controls.cap_applied and report.controls.ceiling_applied
    assert report.figures["worst_case_liability"] == "1500000.00"
    assert report.net_positions["treasury"] == -92_727_000
    assert_conserved(report)


def test_empty_reserve_is_uncovered(scenario):
    report = project_reserve(scenario("reserve_uncovered"))
    assert all(row.balance == 0 for row in report.reserve_table)
    assert report.figures["uncovered"] == "true"
    assert report.summary[-1].startswith("UNCOVERED")


def test_continuous_compounding_beats_annual(scenario):
    cfg = scenario("reserve_compound")
    annual = project_reserve(cfg).reserve_table[-1].balance
    continuous = project_reserve(cfg.model_copy(update={"compounding": "continuous"})).reserve_table[-1].balance
    assert continuous > annual


@pytest.mark.parametrize(
    "field, low, high",
    [("rate", 0.01, 0.05), ("reserve_fraction", 0.25, 0.75), ("proceeds", Decimal("5000000"), Decimal("20000000"))],
)
def test_reserve_monotone(scenario, field, low, high):
    cfg = scenario("reserve_compound")
    lo = project_reserve(cfg.model_copy(update={field: low})).reserve_table
    hi = project_reserve(cfg.model_copy(update={field: high})).reserve_table
    assert all(a.balance <= b.balance for a, b in zip(lo, hi))


# --- dispatch and determinism ---


@pytest.mark.parametrize(
    "name",
    [
        "issuance_benchmark", "momentum", "issuance_capped", "hedge_put", "hedge_put_coverage",
        "hedge_call", "reserve_flat", "reserve_compound", "reserve_uncovered",
    ],
)
def test_every_fixture_runs_and_is_deterministic(scenario, name):
    first = report_json(run_scenario(scenario(name)))
    second = report_json(run_scenario(scenario(name)))
    assert first == second
