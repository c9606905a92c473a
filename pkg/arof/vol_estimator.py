"""
Close-to-close volatility of an ROI series.

    r_i   = ln(ROI_{i+1} / ROI_i)
    sigma = stdev(r, ddof=1) * sqrt(periods_per_year)

ROI is reported annually, so a realistic series yields only a handful of
returns; the estimate is as noisy as that sample is small.

sigma is exactly 0.0 when all log returns agree to within float noise
(see EQUAL_RETURNS_RTOL), not only when they are bit-identical.
"""

import logging
import math
from collections.abc import Sequence

import numpy as np

from arof.config import PERIODS_PER_YEAR
from arof.errors import InvalidFrequency, NonFinite, NonPositiveRoi, TooShort
from arof.models import RoiSeries

logger = logging.getLogger(__name__)

# Returns this close to each other count as equal (logs of exact
# exponential growth differ in the last ulp). sigma is 0.0 when every return
# matches the first within these bounds, so returns that differ by no more
# than float noise, e.g. 100, 110, 121.00000000000003, 133.1, give exactly 0.0
# where the unforced sample std would be about 3e-16.
EQUAL_RETURNS_RTOL = 1e-12
EQUAL_RETURNS_ATOL = 1e-15


def _values(series: RoiSeries | Sequence[float]) -> np.ndarray:
    if isinstance(series, RoiSeries):
        return np.asarray(series.rois, dtype=float)
    return np.asarray(series, dtype=float)


def log_returns(series: RoiSeries | Sequence[float]) -> list[float]:
    """Consecutive log returns; length n - 1."""
    values = _values(series)
    if values.size < 2:
        raise TooShort(f"need at least 2 observations for returns, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise NonFinite("ROI observations must be finite")
    if np.any(values <= 0):
        raise NonPositiveRoi("ROI observations must be > 0 for log returns")
    return np.log(values[1:] / values[:-1]).tolist()


def annualized_vol(series: RoiSeries | Sequence[float], periods_per_year: float = PERIODS_PER_YEAR) -> float:
    """Sample standard deviation (n - 1) of log returns, scaled by sqrt(periods_per_year)."""
    if not (math.isfinite(periods_per_year) and periods_per_year > 0):
        raise InvalidFrequency(f"periods_per_year must be > 0 (got {periods_per_year!r})")
    n = _values(series).size
    if n < 3:
        raise TooShort(f"need at least 3 observations for a sample standard deviation, got {n}")
    returns = np.asarray(log_returns(series))
    if np.allclose(returns, returns[0], rtol=EQUAL_RETURNS_RTOL, atol=EQUAL_RETURNS_ATOL):
        return 0.0
    sigma = float(np.std(returns, ddof=1) * math.sqrt(periods_per_year))
    logger.debug("sigma=%r from %d returns at %g periods/year", sigma, returns.size, periods_per_year)
    return sigma
