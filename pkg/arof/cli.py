"""Command-line surface: roi, price, settle, vol and scenario commands."""

import functools
import logging
import sys
from collections.abc import Callable
from decimal import Decimal
from pathlib import Path
from typing import ParamSpec, TypeVar

import click
from pydantic import ValidationError

from arof.config import LOG_LEVEL, PERIODS_PER_YEAR, STORE_DIR
from arof.contracts import aggregate_issuer_liability, settle_futures, settle_option
from arof.errors import ArofError, DocumentValidationError, describe
from arof.models import FuturesContract, OptionContract, PricingInputs, RiskControls
from arof.money import to_decimal
from arof.pricing import price_option
from arof.report import (
    pricing_json,
    render_futures_settlement,
    render_index,
    render_option_settlement,
    render_pricing,
    render_table,
    report_json,
    settlement_json,
    write_ledger_csv,
)
from arof.roi_index import index_metrics
from arof.scenario import run_scenario
from arof.store import (
    Store,
    append_rois,
    load_contract,
    load_metrics,
    load_scenario,
    load_series,
    load_series_file,
    load_weights,
    open_store,
)
from arof.vol_estimator import annualized_vol

logger = logging.getLogger(__name__)

P = ParamSpec("P")
T = TypeVar("T")

PAPER_TABLE_DIGITS = 4

_existing_file = click.Path(exists=True, dir_okay=False, path_type=Path)


def _domain_errors(fn: Callable[P, T]) -> Callable[P, T]:
    """Turn domain and validation errors into a one-line diagnostic and exit 1."""

    @functools.wraps(fn)
    def wrapper(*args: P.args, **kwargs: P.kwargs) -> T:
        try:
            return fn(*args, **kwargs)
        except (ArofError, ValidationError) as e:
            logger.debug("Command failed", exc_info=True)
            raise click.ClickException(describe(e)) from e

    return wrapper


@click.group()
@click.option("--log-level", default=LOG_LEVEL, show_default=True, help="Log level for stderr diagnostics.")
def cli(log_level: str) -> None:
    """Research Output Index derivatives: index, pricing, settlement and scenarios."""
    logging.basicConfig(
        level=log_level.upper(),
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        stream=sys.stderr,
        force=True,
    )


# --- roi ---


@cli.group()
def roi() -> None:
    """Research Output Index construction."""


@roi.command("compute")
@click.argument("metrics_path", type=_existing_file)
@click.argument("weights_path", type=_existing_file)
@click.option("--store", "store_dir", type=click.Path(file_okay=False, path_type=Path), help="Also append each ROI to this store.")
@_domain_errors
def roi_compute(metrics_path: Path, weights_path: Path, store_dir: Path | None) -> None:
    """Print the ROI of every institution in METRICS_PATH under WEIGHTS_PATH."""
    records = index_metrics(load_metrics(metrics_path), load_weights(weights_path))
    if store_dir is not None:
        append_rois(open_store(store_dir), [(r.institution_id, r.period, to_decimal(r.roi)) for r in records])
    click.echo(render_index(records))


# --- price ---


@cli.command("price")
@click.argument("kind", type=click.Choice(["call", "put"]))
@click.option("--spot", type=float, required=True, help="S0, current ROI level.")
@click.option("--strike", type=float, required=True, help="K, strike ROI level.")
@click.option("--maturity", type=float, required=True, help="T in years.")
@click.option("--rate", type=float, required=True, help="r, continuously compounded.")
@click.option("--vol", type=float, required=True, help="sigma, annualized.")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of the walkthrough.")
@click.option("--paper-tables", is_flag=True, help="Round N(.) to 4 places like a printed normal table.")
@_domain_errors
def price(kind: str, spot: float, strike: float, maturity: float, rate: float, vol: float, as_json: bool, paper_tables: bool) -> None:
    """Price a European AROO call or put with Black-Scholes."""
    inputs = PricingInputs(spot=spot, strike=strike, maturity=maturity, rate=rate, vol=vol)
    digits = PAPER_TABLE_DIGITS if paper_tables else None
    out = price_option(inputs, kind, table_digits=digits)
    click.echo(pricing_json(inputs, out) if as_json else render_pricing(inputs, out, digits))


# --- settle ---


def _controls(cap_ratio: float | None, floor_ratio: float | None, ceiling: Decimal | None) -> RiskControls:
    return RiskControls(cap_ratio=cap_ratio, floor_ratio=floor_ratio, liability_ceiling=ceiling)


@cli.command("settle")
@click.argument("kind", type=click.Choice(["futures", "option"]))
@click.argument("contract_path", type=_existing_file)
@click.option("--final-roi", type=float, required=True, help="Final, independently verified ROI.")
@click.option("--cap-ratio", type=float, help="Cap settlement ROI at this multiple of the reference level.")
@click.option("--floor-ratio", type=float, help="Collar floor as a multiple of the reference level.")
@click.option("--ceiling", type=Decimal, help="Aggregate liability ceiling (currency, futures only).")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON.")
@_domain_errors
def settle(kind: str, contract_path: Path, final_roi: float, cap_ratio: float | None, floor_ratio: float | None, ceiling: Decimal | None, as_json: bool) -> None:
    """Cash-settle a futures or option contract document at FINAL_ROI."""
    if kind == "option" and ceiling is not None:
        raise click.UsageError("--ceiling applies to futures settlement only")
    contract = load_contract(contract_path)
    controls = _controls(cap_ratio, floor_ratio, ceiling)
    if kind == "futures":
        if not isinstance(contract, FuturesContract):
            raise DocumentValidationError(f"{contract_path}: not a futures contract", field="type")
        result = settle_futures(contract, final_roi, controls)
        result = aggregate_issuer_liability([result], controls).settlements[0]
        text = render_futures_settlement(contract.institution_id, contract.entry_roi, result)
    else:
        if not isinstance(contract, OptionContract):
            raise DocumentValidationError(f"{contract_path}: not an option contract", field="type")
        result = settle_option(contract, final_roi, controls)
        text = render_option_settlement(contract.institution_id, contract.kind, contract.strike, result)
    click.echo(settlement_json(result) if as_json else text)


# --- vol ---


@cli.group()
def vol() -> None:
    """Historical ROI volatility."""


@vol.command("estimate")
@click.option("--institution", help="Institution id to read from the store.")
@click.option("--store", "store_dir", type=click.Path(file_okay=False, path_type=Path), default=STORE_DIR, show_default=True)
@click.option("--series-file", type=_existing_file, help="Read the series from a JSON document instead.")
@click.option("--periods-per-year", type=float, default=PERIODS_PER_YEAR, show_default=True)
@_domain_errors
def vol_estimate(institution: str | None, store_dir: Path, series_file: Path | None, periods_per_year: float) -> None:
    """Print annualized sigma of an ROI series to 6 decimals."""
    if (institution is None) == (series_file is None):
        raise click.UsageError("give exactly one of --institution or --series-file")
    series = load_series_file(series_file) if series_file is not None else load_series(Store(store_dir), institution)
    click.echo(f"{annualized_vol(series, periods_per_year):.6f}")


# --- scenario ---


@cli.command("scenario")
@click.argument("config_path", type=_existing_file)
@click.option("--emit-csv", type=click.Path(dir_okay=False, path_type=Path), help="Write the cash-flow ledger as CSV.")
@click.option("--json", "as_json", is_flag=True, help="Emit the report as JSON.")
@_domain_errors
def scenario(config_path: Path, emit_csv: Path | None, as_json: bool) -> None:
    """Run a scenario document and print its report."""
    report = run_scenario(load_scenario(config_path))
    click.echo(report_json(report) if as_json else render_table(report))
    if emit_csv is not None:
        write_ledger_csv(report, emit_csv)


def main() -> None:
    cli(prog_name="arof")
