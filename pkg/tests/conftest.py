from pathlib import Path

import pytest

from arof.models import FuturesContract, OptionContract, PricingInputs
from arof.store import Store, open_store

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def store(tmp_path: Path) -> Store:
    return open_store(tmp_path / "store")


@pytest.fixture
def worked_example() -> PricingInputs:
    """S0=100, K=110, T=3, r=3%, sigma=18%."""
    return PricingInputs(spot=100.0, strike=110.0, maturity=3.0, rate=0.03, vol=0.18)


@pytest.fixture
def long_futures() -> FuturesContract:
    return FuturesContract(
        institution_id="univ-a",
        entry_roi=100.0,
        notional_per_point="1000",
        quantity=50,
        settlement_date="2025-12-31",
    )


@pytest.fixture
def call_110() -> OptionContract:
    return OptionContract(
        institution_id="univ-a",
        kind="call",
        strike=110.0,
        units=1000,
        unit_multiplier="1",
        premium_paid="12150",
        expiry="2028-12-31",
    )
