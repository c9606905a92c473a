"""
File-backed ingest store: metrics/weights/contract/scenario documents and
append-only ROI histories.

Layout under the store root::

    history/<institution_id>.jsonl   one {"institution_id", "period", "roi"} per line
    contracts/<name>.json            contract documents
    .lock                            held by the single writer

ROI values are written as decimal strings so a reload is bit-exact.
"""

import json
import logging
import os
import re
from collections.abc import Iterable, Iterator, Sequence
from contextlib import contextmanager
from dataclasses import dataclass
from decimal import Decimal
from pathlib import Path
from typing import Any, TypeVar

from pydantic import BaseModel, TypeAdapter, ValidationError

from arof.config import (
    CONTRACTS_DIR_NAME,
    FORMAT_VERSION,
    HISTORY_DIR_NAME,
    LOCK_BASE_DELAY,
    LOCK_FILE_NAME,
    LOCK_RETRIES,
)
from arof.errors import (
    CorruptStore,
    DocumentParseError,
    DocumentValidationError,
    DuplicatePeriod,
    DuplicateRecord,
    InvalidInstitutionId,
    NonPositiveRoi,
    StorageFailure,
    StoreBusy,
    UnknownInstitution,
    UnsupportedFormatVersion,
    field_path,
)
from arof.models import (
    ContractDocument,
    FuturesContract,
    FuturesDocument,
    HistoryRecord,
    MetricsFile,
    OptionContract,
    OptionDocument,
    Period,
    RoiObservation,
    RoiSeries,
    ScenarioConfig,
    SeriesDocument,
    WeightsDocument,
    WeightVector,
)
from arof.money import to_decimal
from arof.roi_index import normalize_weights
from arof.utils import retry_sync, utc_now_iso8601

logger = logging.getLogger(__name__)

M = TypeVar("M", bound=BaseModel)

_INSTITUTION_ID = re.compile(r"^[A-Za-z0-9._-]+$")
_contract_adapter: TypeAdapter[FuturesDocument | OptionDocument] = TypeAdapter(ContractDocument)
_scenario_adapter = TypeAdapter(ScenarioConfig)


@dataclass(frozen=True)
class Store:
    root: Path

    @property
    def history_dir(self) -> Path:
        return self.root / HISTORY_DIR_NAME

    @property
    def contracts_dir(self) -> Path:
        return self.root / CONTRACTS_DIR_NAME

    @property
    def lock_path(self) -> Path:
        return self.root / LOCK_FILE_NAME

    def history_path(self, institution_id: str) -> Path:
        return self.history_dir / f"{check_institution_id(institution_id)}.jsonl"


def open_store(root: str | Path) -> Store:
    """Return a Store rooted at ``root``, creating its directories."""
    store = Store(Path(root))
    try:
        store.history_dir.mkdir(parents=True, exist_ok=True)
        store.contracts_dir.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise StorageFailure(f"cannot create store at {store.root}: {e}") from e
    return store


def check_institution_id(institution_id: str) -> str:
    if not _INSTITUTION_ID.match(institution_id):
        raise InvalidInstitutionId(f"institution id must match [A-Za-z0-9._-]+ (got {institution_id!r})")
    return institution_id


# --- Locking ---


def _try_lock(store: Store) -> int:
    try:
        fd = os.open(store.lock_path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError as e:
        raise StoreBusy(f"store {store.root} is locked by another writer") from e
    except OSError as e:
        raise StorageFailure(f"cannot create lock {store.lock_path}: {e}") from e
    try:
        os.write(fd, f"{os.getpid()} {utc_now_iso8601()}\n".encode())
    except OSError as e:
        os.close(fd)
        store.lock_path.unlink(missing_ok=True)
        raise StorageFailure(f"cannot write lock {store.lock_path}: {e}") from e
    return fd


@contextmanager
def write_lock(store: Store) -> Iterator[None]:
    """Exclusive advisory lock for writers; readers never take it."""
    fd = retry_sync(_try_lock, store, max_retries=LOCK_RETRIES, base_delay=LOCK_BASE_DELAY)
    logger.info("Acquired lock on %s", store.root)
    try:
        yield
    finally:
        os.close(fd)
        store.lock_path.unlink(missing_ok=True)


# --- Document loading ---


def _read_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise StorageFailure(f"cannot read {path}: {e}") from e
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentParseError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}") from e


def _validated(adapter_or_model: type[M] | TypeAdapter, data: Any, path: str | Path) -> Any:
    try:
        if isinstance(adapter_or_model, TypeAdapter):
            return adapter_or_model.validate_python(data)
        return adapter_or_model.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        where = field_path(tuple(first["loc"]))
        raise DocumentValidationError(f"{path}: {where}: {first['msg']}", field=where) from e


def _check_version(data: Any, path: str | Path) -> None:
    if isinstance(data, dict) and data.get("format_version") != FORMAT_VERSION:
        raise UnsupportedFormatVersion(
            f"{path}: format_version {data.get('format_version')!r} is not {FORMAT_VERSION}",
            field="format_version",
        )


def load_metrics(path: str | Path) -> MetricsFile:
    """Parse and fully validate a metrics file; any bad record aborts the load."""
    data = _read_json(path)
    _check_version(data, path)
    metrics: MetricsFile = _validated(MetricsFile, data, path)
    seen: dict[tuple[str, int], int] = {}
    for i, record in enumerate(metrics.records):
        key = (record.institution_id, record.period)
        if key in seen:
            raise DuplicateRecord(
                f"{path}: records[{i}] repeats ({record.institution_id}, {record.period}) from records[{seen[key]}]",
                field=f"records[{i}]",
            )
        seen[key] = i
    logger.info("Loaded %d metrics records from %s", len(metrics.records), path)
    return metrics


def load_weights(path: str | Path) -> WeightVector:
    """Load a weights document and normalize it to sum to 1."""
    data = _read_json(path)
    _check_version(data, path)
    doc: WeightsDocument = _validated(WeightsDocument, data, path)
    return normalize_weights(list(doc.weights.model_dump().values()))


def load_contract(path: str | Path) -> FuturesContract | OptionContract:
    data = _read_json(path)
    _check_version(data, path)
    return _validated(_contract_adapter, data, path).contract


def save_contract(store: Store, name: str, contract: FuturesContract | OptionContract) -> Path:
    """Write a contract document into the store; returns its path."""
    doc: FuturesDocument | OptionDocument
    if isinstance(contract, FuturesContract):
        doc = FuturesDocument(format_version=FORMAT_VERSION, type="futures", contract=contract)
    else:
        doc = OptionDocument(format_version=FORMAT_VERSION, type="option", contract=contract)
    path = store.contracts_dir / f"{check_institution_id(name)}.json"
    with write_lock(store):
        try:
            path.write_text(doc.model_dump_json(indent=2) + "\n", encoding="utf-8")
        except OSError as e:
            raise StorageFailure(f"cannot write {path}: {e}") from e
    return path


def load_series_file(path: str | Path) -> RoiSeries:
    data = _read_json(path)
    _check_version(data, path)
    doc: SeriesDocument = _validated(SeriesDocument, data, path)
    return RoiSeries(institution_id=doc.institution_id, observations=doc.observations)


def load_scenario(path: str | Path) -> ScenarioConfig:
    data = _read_json(path)
    _check_version(data, path)
    return _validated(_scenario_adapter, data, path)


# --- ROI history ---


def _period_json(period: Period) -> int | str:
    return period if isinstance(period, int) else period.isoformat()


def load_history(store: Store, institution_id: str) -> list[HistoryRecord]:
    """Every stored record for an institution, in file (append) order."""
    path = store.history_path(institution_id)
    if not path.exists():
        raise UnknownInstitution(f"no ROI history for {institution_id!r} in {store.root}")
    records: list[HistoryRecord] = []
    try:
        lines = path.read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise StorageFailure(f"cannot read {path}: {e}") from e
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            raw = json.loads(line)
            if not isinstance(raw.get("roi"), str):
                raise CorruptStore(f"{path}:{lineno}: roi must be a decimal string")
            record = HistoryRecord.model_validate(raw)
        except (json.JSONDecodeError, AttributeError, ValidationError) as e:
            raise CorruptStore(f"{path}:{lineno}: unreadable history record: {e}") from e
        if record.institution_id != institution_id:
            raise CorruptStore(f"{path}:{lineno}: record belongs to {record.institution_id!r}")
        records.append(record)
    periods = [r.period for r in records]
    if len({type(p) for p in periods}) > 1:
        raise CorruptStore(f"{path}: history mixes calendar years and dates")
    if len(set(periods)) != len(periods):
        raise CorruptStore(f"{path}: duplicate periods in history")
    return records


def _checked_record(institution_id: str, period: Period, roi: str | int | float | Decimal) -> HistoryRecord:
    value = to_decimal(roi)
    if not value.is_finite() or value <= 0:
        raise NonPositiveRoi(f"ROI must be > 0 (got {roi!r})")
    return HistoryRecord(institution_id=check_institution_id(institution_id), period=period, roi=value)


def _check_periods(institution_id: str, existing: Sequence[Period], incoming: Sequence[Period]) -> None:
    periods = [*existing, *incoming]
    if len({type(p) for p in periods}) > 1:
        raise DuplicatePeriod(f"{institution_id}: cannot mix calendar years and dates in one history")
    seen: set[Period] = set()
    for p in periods:
        if p in seen:
            raise DuplicatePeriod(f"{institution_id} already has an ROI for period {p}")
        seen.add(p)


def append_rois(
    store: Store, entries: Iterable[tuple[str, Period, str | int | float | Decimal]]
) -> list[HistoryRecord]:
    """Append a batch of (institution, period, roi) records, all or none.

    Every record is checked against the batch and the stored history before
    the first line is written.
    """
    records = [_checked_record(*entry) for entry in entries]
    by_institution: dict[str, list[HistoryRecord]] = {}
    for record in records:
        by_institution.setdefault(record.institution_id, []).append(record)
    with write_lock(store):
        for institution_id, batch in by_institution.items():
            path = store.history_path(institution_id)
            existing = [r.period for r in load_history(store, institution_id)] if path.exists() else []
            _check_periods(institution_id, existing, [r.period for r in batch])
        for record in records:
            path = store.history_path(record.institution_id)
            line = json.dumps(
                {"institution_id": record.institution_id, "period": _period_json(record.period), "roi": str(record.roi)},
                separators=(",", ":"),
            )
            try:
                with path.open("a", encoding="utf-8") as f:
                    f.write(line + "\n")
                    f.flush()
                    os.fsync(f.fileno())
            except OSError as e:
                raise StorageFailure(f"cannot append to {path}: {e}") from e
            logger.info("Appended ROI %s for %s period %s", record.roi, record.institution_id, record.period)
    return records


def append_roi(store: Store, institution_id: str, period: Period, roi: str | int | float | Decimal) -> HistoryRecord:
    """Durably append one (institution, period, roi) record; never rewrites earlier lines."""
    (record,) = append_rois(store, [(institution_id, period, roi)])
    return record


def load_series(store: Store, institution_id: str) -> RoiSeries:
    """Stored history as an RoiSeries sorted ascending by period."""
    records = sorted(load_history(store, institution_id), key=lambda r: r.period)
    return RoiSeries(
        institution_id=institution_id,
        observations=tuple(RoiObservation(period=r.period, roi=float(r.roi)) for r in records),
    )
