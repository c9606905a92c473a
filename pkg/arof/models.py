"""Pydantic models for index inputs, pricing, contracts, documents and reports."""

import datetime as dt
import math
from collections import defaultdict
from decimal import Decimal
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from arof.config import NOTIONAL_PER_POINT

COMPONENTS: tuple[str, ...] = ("publications", "citations", "grants", "innovation", "societal")

FiniteFloat = Annotated[float, Field(allow_inf_nan=False)]
NonNegFloat = Annotated[float, Field(ge=0, allow_inf_nan=False)]
PosFloat = Annotated[float, Field(gt=0, allow_inf_nan=False)]
UnitFloat = Annotated[float, Field(ge=0, le=1, allow_inf_nan=False)]
PosMoney = Annotated[Decimal, Field(gt=0, allow_inf_nan=False)]
NonNegMoney = Annotated[Decimal, Field(ge=0, allow_inf_nan=False)]
InstitutionId = Annotated[str, Field(min_length=1)]
Period = int | dt.date
OptionKind = Literal["call", "put"]

WEIGHT_SUM_TOLERANCE = 1e-12


class Frozen(BaseModel):
    """Immutable value; unknown fields are rejected."""

    model_config = ConfigDict(frozen=True, extra="forbid", str_strip_whitespace=True)


def _strictly_increasing(periods: list[Period], what: str) -> None:
    if len({type(p) for p in periods}) > 1:
        raise ValueError(f"{what} mixes calendar years and dates")
    for earlier, later in zip(periods, periods[1:]):
        if not earlier < later:
            raise ValueError(f"{what} must be strictly increasing in time ({earlier} !< {later})")


# --- ROI index ---


class ComponentScores(Frozen):
    """Normalized P, C, G, I, S scores in index points."""

    publications: NonNegFloat
    citations: NonNegFloat
    grants: NonNegFloat
    innovation: NonNegFloat
    societal: NonNegFloat

    @classmethod
    def from_sequence(cls, values: "list[float] | tuple[float, ...]") -> "ComponentScores":
        if len(values) != len(COMPONENTS):
            raise ValueError(f"expected {len(COMPONENTS)} component scores, got {len(values)}")
        return cls(**dict(zip(COMPONENTS, values)))

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, name) for name in COMPONENTS)


class WeightVector(Frozen):
    """w1..w5 in component order, each in [0, 1], summing to 1."""

    w: tuple[UnitFloat, UnitFloat, UnitFloat, UnitFloat, UnitFloat]

    @field_validator("w")
    @classmethod
    def _sums_to_one(cls, w: tuple[float, ...]) -> tuple[float, ...]:
        total = math.fsum(w)
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"weights must sum to 1 (got {total!r})")
        return w

    def as_dict(self) -> dict[str, float]:
        return dict(zip(COMPONENTS, self.w))


class RawComponent(Frozen):
    value: NonNegFloat
    baseline: PosFloat


class RawMetrics(Frozen):
    """One institution's un-normalized submission for one calendar year."""

    institution_id: InstitutionId
    period: Annotated[int, Field(ge=1, le=9999)]
    publications: RawComponent
    citations: RawComponent
    grants: RawComponent
    innovation: RawComponent
    societal: RawComponent


class AuditBlock(Frozen):
    source: str
    submission_date: dt.date
    auditor_id: str


class MetricsFile(Frozen):
    """Uniqueness of (institution_id, period) is enforced by the loader."""

    format_version: int
    audit: AuditBlock
    records: tuple[RawMetrics, ...]


class RawWeights(Frozen):
    """Weights as written in a weights document, before normalization."""

    publications: NonNegFloat
    citations: NonNegFloat
    grants: NonNegFloat
    innovation: NonNegFloat
    societal: NonNegFloat


class WeightsDocument(Frozen):
    format_version: int
    weights: RawWeights
    board: str = ""


class IndexedRecord(Frozen):
    institution_id: str
    period: int
    scores: ComponentScores
    roi: float


# --- Volatility ---


class RoiObservation(Frozen):
    period: Period
    roi: PosFloat


class RoiSeries(Frozen):
    institution_id: InstitutionId
    observations: tuple[RoiObservation, ...]

    @model_validator(mode="after")
    def _ordered(self) -> "RoiSeries":
        _strictly_increasing([o.period for o in self.observations], "observations")
        return self

    @property
    def rois(self) -> tuple[float, ...]:
        return tuple(o.roi for o in self.observations)


class SeriesDocument(RoiSeries):
    format_version: int = 1


class HistoryRecord(Frozen):
    """One line of a store history file; ROI exactly as stored."""

    institution_id: InstitutionId
    period: Period
    roi: PosMoney


# --- Pricing ---


class PricingInputs(Frozen):
    """
    S0, K, T, r, sigma. Construction only checks finiteness; positivity is
    checked by the pricing functions so they can raise InvalidVol etc.
    """

    spot: FiniteFloat
    strike: FiniteFloat
    maturity: FiniteFloat
    rate: FiniteFloat
    vol: FiniteFloat


class PricingOutputs(Frozen):
    kind: OptionKind
    d1: float
    d2: float
    nd1: float
    nd2: float
    discount_factor: float
    price: float


# --- Contracts ---


class FuturesContract(Frozen):
    """AROF position. Positive quantity is long; cash sign is from the long side."""

    institution_id: InstitutionId
    entry_roi: PosFloat
    notional_per_point: PosMoney = Decimal(NOTIONAL_PER_POINT)
    quantity: int
    settlement_date: dt.date
    holder: str | None = None

    @field_validator("quantity")
    @classmethod
    def _nonzero(cls, quantity: int) -> int:
        if quantity == 0:
            raise ValueError("quantity must be non-zero")
        return quantity


class OptionContract(Frozen):
    """European AROO position (always held long)."""

    institution_id: InstitutionId
    kind: OptionKind
    strike: PosFloat
    units: Annotated[int, Field(ge=1)]
    unit_multiplier: PosMoney = Decimal(1)
    premium_paid: NonNegMoney = Decimal(0)
    expiry: dt.date
    style: Literal["european"] = "european"


class RiskControls(Frozen):
    """Cap / collar floor on the settlement ROI, and an aggregate annual ceiling."""

    cap_ratio: Annotated[float, Field(gt=1, allow_inf_nan=False)] | None = None
    floor_ratio: Annotated[float, Field(gt=0, lt=1, allow_inf_nan=False)] | None = None
    liability_ceiling: PosMoney | None = None


class SettlementResult(Frozen):
    """Cash amounts are integer minor units; positive = cash to the long side."""

    gross: int
    capped: int
    cap_applied: bool = False
    floor_applied: bool = False
    ceiling_applied: bool = False
    final_roi: float
    effective_final_roi: float


class OptionSettlement(Frozen):
    gross_payoff: int
    net_pnl: int
    premium_paid: int
    final_roi: float
    effective_final_roi: float
    cap_applied: bool = False
    floor_applied: bool = False


class IssuerLiability(Frozen):
    total: int
    clipped: int
    ceiling_applied: bool
    allocations: tuple[int, ...]
    settlements: tuple[SettlementResult, ...]


class FuturesDocument(Frozen):
    format_version: int
    type: Literal["futures"]
    contract: FuturesContract


class OptionDocument(Frozen):
    format_version: int
    type: Literal["option"]
    contract: OptionContract


ContractDocument = Annotated[FuturesDocument | OptionDocument, Field(discriminator="type")]


# --- Scenarios ---


class RoiPoint(Frozen):
    date: dt.date
    roi: PosFloat


class ScenarioBase(Frozen):
    format_version: int = 1
    institution_id: InstitutionId
    description: str = ""
    roi_path: Annotated[tuple[RoiPoint, ...], Field(min_length=1)]
    rate: FiniteFloat = 0.0
    controls: RiskControls = RiskControls()

    @field_validator("roi_path")
    @classmethod
    def _path_ordered(cls, path: tuple[RoiPoint, ...]) -> tuple[RoiPoint, ...]:
        _strictly_increasing([p.date for p in path], "roi_path")
        return path


class IssuanceConfig(ScenarioBase):
    """Institution sells AROFs; ``momentum`` back-solves the issue price from target proceeds."""

    kind: Literal["issuance", "momentum"]
    quantity: Annotated[int, Field(gt=0)]
    notional_per_point: PosMoney = Decimal(NOTIONAL_PER_POINT)
    issue_price_factor: PosMoney = Decimal(1)
    target_proceeds: PosMoney | None = None
    underwriting_premium: NonNegMoney = Decimal(0)
    reserve_fraction: UnitFloat = 0.0

    @model_validator(mode="after")
    def _momentum_needs_target(self) -> "IssuanceConfig":
        if self.kind == "momentum" and self.target_proceeds is None:
            raise ValueError("momentum scenarios require target_proceeds")
        return self


class HedgeConfig(ScenarioBase):
    """Institution buys AROOs on its own ROI (puts insure, calls monetize expected gains)."""

    kind: Literal["hedge_put", "hedge_call"]
    strike: PosFloat
    units: Annotated[int, Field(ge=1)]
    unit_multiplier: PosMoney = Decimal(1)
    maturity_years: PosFloat | None = None
    vol: PosFloat | None = None
    roi_history: tuple[PosFloat, ...] = ()
    periods_per_year: PosFloat = 1.0
    shortfall_per_point: NonNegMoney = Decimal(0)
    min_coverage: UnitFloat | None = None


class ReserveConfig(ScenarioBase):
    """Reserve fund fed from issuance proceeds, projected against a worst-case settlement."""

    kind: Literal["reserve_projection"]
    proceeds: PosMoney
    reserve_fraction: UnitFloat
    horizon_years: Annotated[int, Field(ge=1)]
    compounding: Literal["annual", "continuous"] = "annual"
    max_roi: PosFloat
    quantity: Annotated[int, Field(gt=0)]
    notional_per_point: PosMoney = Decimal(NOTIONAL_PER_POINT)


ScenarioConfig = Annotated[IssuanceConfig | HedgeConfig | ReserveConfig, Field(discriminator="kind")]


class CashFlow(Frozen):
    """One side of a transfer; ``amount`` is minor units received by ``party`` (negative = paid)."""

    date: dt.date
    party: str
    counterparty: str
    label: str
    amount: int


class ReserveRow(Frozen):
    year: int
    date: dt.date
    balance: int
    interest: int


class ControlsAudit(Frozen):
    cap_applied: bool = False
    floor_applied: bool = False
    ceiling_applied: bool = False
    effective_final_roi: float | None = None
    notes: tuple[str, ...] = ()


class ScenarioReport(Frozen):
    format_version: int = 1
    kind: str
    institution_id: str
    cash_flows: tuple[CashFlow, ...]
    net_positions: dict[str, int]
    controls: ControlsAudit
    figures: dict[str, str] = Field(default_factory=dict)
    reserve_table: tuple[ReserveRow, ...] = ()
    summary: tuple[str, ...] = ()

    @model_validator(mode="after")
    def _conserved(self) -> "ScenarioReport":
        sums: dict[str, int] = defaultdict(int)
        for flow in self.cash_flows:
            sums[flow.party] += flow.amount
        if dict(sums) != self.net_positions:
            raise ValueError("net positions do not equal the per-party cash-flow sums")
        if sum(sums.values()) != 0:
            raise ValueError("cash flows are not conserved across parties")
        return self
