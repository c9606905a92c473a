"""Exception hierarchy shared by every arof module."""

from pydantic import ValidationError


class ArofError(Exception):
    """Base class for all domain errors."""


# --- ROI index ---


class InvalidWeights(ArofError, ValueError):
    """Weight vector has the wrong length or a negative entry."""


class AllZeroWeights(InvalidWeights):
    pass


class NonFinite(ArofError, ValueError):
    """A numeric input is NaN or infinite."""


class ZeroBaseline(ArofError, ValueError):
    pass


class NegativeMetric(ArofError, ValueError):
    pass


# --- Volatility ---


class TooShort(ArofError, ValueError):
    """Series has too few observations for the requested statistic."""


class NonPositiveRoi(ArofError, ValueError):
    pass


class InvalidFrequency(ArofError, ValueError):
    pass


# --- Pricing ---


class InvalidPricingInput(ArofError, ValueError):
    pass


class InvalidVol(InvalidPricingInput):
    pass


class InvalidMaturity(InvalidPricingInput):
    pass


# --- Documents ---


class DocumentParseError(ArofError, ValueError):
    """Malformed JSON; message carries the source path, line and column."""


class DocumentValidationError(ArofError, ValueError):
    """Well-formed JSON that breaks a field invariant."""

    def __init__(self, message: str, field: str | None = None) -> None:
        super().__init__(message)
        self.field = field


class DuplicateRecord(DocumentValidationError):
    pass


class UnsupportedFormatVersion(DocumentValidationError):
    pass


# --- Store ---


class StorageFailure(ArofError, OSError):
    pass


class CorruptStore(StorageFailure):
    pass


class StoreBusy(StorageFailure):
    """Another writer holds the store lock. Transient."""


class DuplicatePeriod(ArofError, ValueError):
    pass


class UnknownInstitution(ArofError, LookupError):
    pass


class InvalidInstitutionId(ArofError, ValueError):
    pass


# --- Scenario ---


class InvalidScenario(ArofError, ValueError):
    pass


def field_path(loc: tuple[int | str, ...]) -> str:
    """Render a pydantic error location as ``records[1].grants.value``."""
    out = ""
    for part in loc:
        if isinstance(part, int):
            out += f"[{part}]"
        else:
            out += f".{part}" if out else str(part)
    return out


def describe(exc: BaseException) -> str:
    """One-line ``Name: message`` rendering for stderr diagnostics."""
    if isinstance(exc, ValidationError):
        first = exc.errors()[0]
        where = field_path(tuple(first["loc"])) or exc.title
        return f"ValidationError: {where}: {first['msg']}"
    message = " ".join(str(exc).split())
    return f"{type(exc).__name__}: {message}"
