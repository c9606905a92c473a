"""Human-readable and machine-readable rendering of results."""

import json
import logging
from pathlib import Path
from typing import Any

import pandas as pd

from arof.errors import StorageFailure
from arof.models import (
    IndexedRecord,
    OptionSettlement,
    PricingInputs,
    PricingOutputs,
    ScenarioReport,
    SettlementResult,
)
from arof.money import display_round, format_minor, from_minor

logger = logging.getLogger(__name__)

LEDGER_COLUMNS = ["date", "party", "counterparty", "label", "amount", "amount_minor"]


def _flag(value: bool) -> str:
    return str(value).lower()


def _rows(pairs: list[tuple[str, Any]], width: int = 21) -> list[str]:
    return [f"  {label:<{width}}{value}" for label, value in pairs]


# --- Index ---


def render_index(records: list[IndexedRecord]) -> str:
    lines = []
    for r in records:
        s = r.scores
        lines.append(
            f"{r.institution_id}  {r.period}  "
            f"P={s.publications:.4f} C={s.citations:.4f} G={s.grants:.4f} "
            f"I={s.innovation:.4f} S={s.societal:.4f}  ROI={r.roi:.4f}"
        )
    return "\n".join(lines)


# --- Pricing ---


def render_pricing(inputs: PricingInputs, out: PricingOutputs, table_digits: int | None = None) -> str:
    """The worked-example walkthrough: inputs, d1, d2, N(d1), N(d2), price."""
    lines = [f"{out.kind} option on the ROI index"]
    lines += [
        f"  {label:<6} = {value}"
        for label, value in [
            ("S0", f"{inputs.spot:.4f}"),
            ("K", f"{inputs.strike:.4f}"),
            ("T", f"{inputs.maturity:.4f}"),
            ("r", f"{inputs.rate:.4f}"),
            ("sigma", f"{inputs.vol:.4f}"),
            ("d1", f"{out.d1:.4f}"),
            ("d2", f"{out.d2:.4f}"),
            ("N(d1)", f"{out.nd1:.4f}"),
            ("N(d2)", f"{out.nd2:.4f}"),
            ("price", f"{display_round(out.price)}"),
        ]
    ]
    if table_digits is not None:
        lines.append(f"  (N values rounded to {table_digits} places, as read from a printed table)")
    return "\n".join(lines)


def pricing_json(inputs: PricingInputs, out: PricingOutputs) -> str:
    payload = {
        "format_version": 1,
        "inputs": inputs.model_dump(),
        **out.model_dump(),
        "price_display": str(display_round(out.price)),
    }
    return json.dumps(payload, indent=2)


# --- Settlement ---


def render_futures_settlement(institution_id: str, entry_roi: float, result: SettlementResult) -> str:
    lines = [f"futures settlement for {institution_id}"]
    lines += _rows([
        ("entry ROI", f"{entry_roi:.4f}"),
        ("final ROI", f"{result.final_roi:.4f}"),
        ("effective final ROI", f"{result.effective_final_roi:.4f}"),
        ("gross", format_minor(result.gross, signed=True)),
        ("capped", format_minor(result.capped, signed=True)),
        ("cap_applied", _flag(result.cap_applied)),
        ("floor_applied", _flag(result.floor_applied)),
        ("ceiling_applied", _flag(result.ceiling_applied)),
    ])
    return "\n".join(lines)


def render_option_settlement(institution_id: str, kind: str, strike: float, result: OptionSettlement) -> str:
    lines = [f"{kind} option settlement for {institution_id}"]
    lines += _rows([
        ("strike", f"{strike:.4f}"),
        ("final ROI", f"{result.final_roi:.4f}"),
        ("effective final ROI", f"{result.effective_final_roi:.4f}"),
        ("gross", format_minor(result.gross_payoff)),
        ("premium", format_minor(result.premium_paid)),
        ("net", format_minor(result.net_pnl, signed=True)),
        ("cap_applied", _flag(result.cap_applied)),
        ("floor_applied", _flag(result.floor_applied)),
    ])
    return "\n".join(lines)


def settlement_json(result: SettlementResult | OptionSettlement) -> str:
    return result.model_dump_json(indent=2)


# --- Scenario reports ---


def ledger_frame(report: ScenarioReport) -> pd.DataFrame:
    """Cash-flow ledger, one row per booked flow, in booking order."""
    rows = [
        {
            "date": flow.date.isoformat(),
            "party": flow.party,
            "counterparty": flow.counterparty,
            "label": flow.label,
            "amount": str(from_minor(flow.amount)),
            "amount_minor": flow.amount,
        }
        for flow in report.cash_flows
    ]
    return pd.DataFrame(rows, columns=LEDGER_COLUMNS)


def write_ledger_csv(report: ScenarioReport, path: str | Path) -> Path:
    path = Path(path)
    try:
        ledger_frame(report).to_csv(path, index=False, lineterminator="\n")
    except OSError as e:
        raise StorageFailure(f"cannot write {path}: {e}") from e
    logger.info("Wrote %d ledger rows to %s", len(report.cash_flows), path)
    return path


def report_json(report: ScenarioReport) -> str:
    return report.model_dump_json(indent=2)


def render_table(report: ScenarioReport) -> str:
    lines = [f"scenario {report.kind} for {report.institution_id}", "", "figures"]
    lines += _rows(list(report.figures.items()), width=24)

    lines += ["", "cash flows"]
    if report.cash_flows:
        frame = ledger_frame(report)
        frame["amount"] = [format_minor(f.amount, signed=True) for f in report.cash_flows]
        table = frame.drop(columns=["amount_minor"]).to_string(index=False)
        lines += [f"  {line}" for line in table.splitlines()]
    else:
        lines.append("  (none)")

    lines += ["", "net positions"]
    lines += _rows([(party, format_minor(amount, signed=True)) for party, amount in report.net_positions.items()], width=24)

    if report.reserve_table:
        lines += ["", "reserve"]
        lines.append(f"  {'year':<6}{'date':<12}{'balance':>20}{'interest':>18}")
        for row in report.reserve_table:
            lines.append(
                f"  {row.year:<6}{row.date.isoformat():<12}{format_minor(row.balance):>20}{format_minor(row.interest):>18}"
            )

    c = report.controls
    lines += ["", "controls"]
    lines += _rows(
        [
            ("cap_applied", _flag(c.cap_applied)),
            ("floor_applied", _flag(c.floor_applied)),
            ("ceiling_applied", _flag(c.ceiling_applied)),
        ]
        + [("note", note) for note in c.notes],
        width=24,
    )

    lines += ["", "summary"]
    lines += [f"  {line}" for line in report.summary]
    return "\n".join(lines)
