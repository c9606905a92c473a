"""
Exact cash arithmetic.

Cash is carried as integer minor units (cents). Index points stay binary
floats elsewhere; they enter cash arithmetic through ``to_decimal`` so that
``115.0 - 100.0`` is computed as ``Decimal("115") - Decimal("100")``.
"""

from decimal import ROUND_HALF_UP, Decimal, getcontext

getcontext().prec = 28

MINOR_PER_MAJOR = 100
_CENT = Decimal("0.01")


def to_decimal(value: str | int | float | Decimal) -> Decimal:
    """Convert a number to Decimal; floats go through their shortest repr."""
    if isinstance(value, Decimal):
        return value
    if isinstance(value, bool):
        raise TypeError("bool is not a monetary value")
    if isinstance(value, float):
        return Decimal(repr(value))
    if isinstance(value, (int, str)):
        return Decimal(value)
    raise TypeError(f"Cannot convert {type(value).__name__} to Decimal")


def to_minor(amount: Decimal) -> int:
    """Major-unit Decimal -> integer minor units, rounding half-up."""
    return int(amount.quantize(_CENT, rounding=ROUND_HALF_UP) * MINOR_PER_MAJOR)


def from_minor(minor: int) -> Decimal:
    return (Decimal(minor) / MINOR_PER_MAJOR).quantize(_CENT)


def format_minor(minor: int, signed: bool = False) -> str:
    """Render minor units as ``750,000.00`` (``+750,000.00`` when signed)."""
    major = from_minor(abs(minor))
    text = f"{major:,.2f}"
    if minor < 0:
        return f"-{text}"
    return f"+{text}" if signed and minor > 0 else text


def display_round(value: float | Decimal, places: int = 2) -> Decimal:
    """Half-up rounding for display/report boundaries only."""
    quantizer = Decimal(10) ** -places
    return to_decimal(value).quantize(quantizer, rounding=ROUND_HALF_UP)


def allocate_pro_rata(amounts: list[int], target: int) -> list[int]:
    """
    Scale non-negative ``amounts`` so they sum to exactly ``target``.

    Largest-remainder allocation: floor every share, then hand the leftover
    minor units to the largest fractional remainders (ties by position).
    """
    total = sum(amounts)
    if total == 0:
        return [0] * len(amounts)
    shares = [a * target // total for a in amounts]
    remainders = [a * target % total for a in amounts]
    leftover = target - sum(shares)
    order = sorted(range(len(amounts)), key=lambda i: (-remainders[i], i))
    for i in order[:leftover]:
        shares[i] += 1
    return shares
