"""Composite Research Output Index: ROI = w1*P + w2*C + w3*G + w4*I + w5*S."""

import logging
import math
from collections.abc import Sequence

import numpy as np

from arof.errors import AllZeroWeights, InvalidWeights, NegativeMetric, NonFinite, ZeroBaseline
from arof.models import COMPONENTS, ComponentScores, IndexedRecord, MetricsFile, RawMetrics, WeightVector

logger = logging.getLogger(__name__)

INDEX_BASE = 100.0


def normalize_weights(raw: Sequence[float]) -> WeightVector:
    """Scale non-negative raw weights so they sum to 1, preserving proportions."""
    values = np.asarray(raw, dtype=float)
    if values.shape != (len(COMPONENTS),):
        raise InvalidWeights(f"expected {len(COMPONENTS)} weights, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise NonFinite(f"weights must be finite: {list(raw)}")
    if np.any(values < 0):
        raise InvalidWeights(f"weights must be non-negative: {list(raw)}")
    peak = values.max()
    if peak == 0:
        raise AllZeroWeights("at least one weight must be positive")
    # relative to the largest weight so the sum stays finite near float max
    scaled = values / peak
    return WeightVector(w=tuple(float(v) for v in scaled / math.fsum(scaled)))


def normalize_component(raw: float, baseline: float) -> float:
    """Benchmark a raw metric: 100 * raw / baseline, so at-baseline performance is 100."""
    if not (math.isfinite(raw) and math.isfinite(baseline)):
        raise NonFinite(f"raw={raw!r} baseline={baseline!r}")
    if baseline <= 0:
        raise ZeroBaseline(f"baseline must be > 0 (got {baseline!r})")
    if raw < 0:
        raise NegativeMetric(f"raw metric must be >= 0 (got {raw!r})")
    return INDEX_BASE * raw / baseline


def component_scores(raw: RawMetrics) -> ComponentScores:
    """Normalize all five components of a submission against their own baselines."""
    return ComponentScores(**{
        name: normalize_component(getattr(raw, name).value, getattr(raw, name).baseline)
        for name in COMPONENTS
    })


def compute_roi(scores: ComponentScores, weights: WeightVector) -> float:
    """Weighted sum of the five component scores."""
    return float(np.dot(weights.w, scores.as_tuple()))


def index_metrics(metrics: MetricsFile, weights: WeightVector) -> list[IndexedRecord]:
    """ROI for every record in a metrics file, ordered by institution then period."""
    out = []
    for record in sorted(metrics.records, key=lambda r: (r.institution_id, r.period)):
        scores = component_scores(record)
        roi = compute_roi(scores, weights)
        logger.debug("ROI %s %d = %r", record.institution_id, record.period, roi)
        out.append(IndexedRecord(institution_id=record.institution_id, period=record.period, scores=scores, roi=roi))
    return out
