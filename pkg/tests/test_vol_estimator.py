import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arof.errors import InvalidFrequency, NonPositiveRoi, TooShort
from arof.models import RoiObservation, RoiSeries
from arof.vol_estimator import annualized_vol, log_returns

roi_level = st.floats(min_value=1.0, max_value=1e4, allow_nan=False, allow_infinity=False)


def series(*rois: float) -> RoiSeries:
    return RoiSeries(
        institution_id="univ-a",
        observations=tuple(RoiObservation(period=2000 + i, roi=r) for i, r in enumerate(rois)),
    )


def test_log_returns_constant():
    assert log_returns(series(100, 100, 100)) == [0.0, 0.0]


def test_log_returns_exponential():
    assert log_returns(series(100, 100 * math.exp(0.1), 100 * math.exp(0.2))) == pytest.approx([0.1, 0.1], abs=1e-12)


def test_log_returns_up_down():
    assert log_returns([100, 110, 99]) == pytest.approx([math.log(1.1), math.log(0.9)], abs=1e-12)


def test_log_returns_errors():
    with pytest.raises(TooShort):
        log_returns(series(100))
    with pytest.raises(NonPositiveRoi):
        log_returns([100, 0, 100])


def test_series_rejects_unordered_periods():
    with pytest.raises(ValueError):
        RoiSeries(
            institution_id="univ-a",
            observations=(RoiObservation(period=2024, roi=100), RoiObservation(period=2023, roi=100)),
        )


@pytest.mark.parametrize("ppy", [1, 4, 12, 252])
def test_constant_series_has_zero_vol(ppy):
    assert annualized_vol(series(100, 100, 100, 100), ppy) == 0.0


def test_identical_returns_have_exactly_zero_vol():
    rois = [100 * math.exp(0.05 * i) for i in range(4)]
    assert annualized_vol(series(*rois), 1) == 0.0


def test_returns_within_float_noise_count_as_equal():
    assert len(set(log_returns([100, 110, 121.00000000000003, 133.1]))) > 1
    assert annualized_vol(series(100, 110, 121.00000000000003, 133.1), 1) == 0.0


def test_returns_beyond_tolerance_give_positive_vol():
    assert annualized_vol(series(100, 110, 121.001, 133.1), 1) > 0.0


def test_up_down_series():
    assert annualized_vol(series(100, 110, 100), 1) == pytest.approx(math.log(1.1) * math.sqrt(2), abs=1e-9)


def test_vol_errors():
    with pytest.raises(TooShort):
        annualized_vol(series(100, 104), 1)
    with pytest.raises(InvalidFrequency):
        annualized_vol(series(100, 110, 100), 0)
    with pytest.raises(InvalidFrequency):
        annualized_vol(series(100, 110, 100), math.nan)


@given(st.lists(roi_level, min_size=3, max_size=30), st.floats(min_value=1e-3, max_value=1e3))
def test_scale_invariance(rois, c):
    base = annualized_vol(rois, 1)
    scaled = annualized_vol([c * r for r in rois], 1)
    assert base >= 0
    assert scaled == pytest.approx(base, abs=1e-12)


@given(st.lists(roi_level, min_size=3, max_size=30), st.sampled_from([1, 2, 4, 12, 52, 252]))
def test_frequency_scaling(rois, k):
    assert annualized_vol(rois, k) == pytest.approx(annualized_vol(rois, 1) * math.sqrt(k), rel=1e-12, abs=1e-12)
