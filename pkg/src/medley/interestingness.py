"""Statistical interestingness scoring for candidate views.

Scores feed the display-set selection: for each candidate attribute set a
collection could show, every view gets a raw metric, raw scores are min-max
normalized per view slot across candidate sets, and the set with the best
mean wins.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

from . import errors
from .dataset import (AggregateQuery, AttributeMeta, AttrType, Dataset,
                      raw_pairs, years_present, year_over_year_change, aggregate)
from .specs import ChartKind, ViewSpec

# Defaults for the rolling z-score peak detector; overridable via engine config.
ZSCORE_LAG = 5
ZSCORE_THRESHOLD = 3.0
ZSCORE_INFLUENCE = 0.5

# Categorical cardinality above which non-explicit attributes are penalized.
CARDINALITY_PENALTY_THRESHOLD = 12

HISTOGRAM_BINS = 10


class Metric(str, Enum):
    STD_DEV = "stdDev"
    PEARSON = "pearson"
    PEAK_DROP = "peakDrop"
    NONE = "none"


@dataclass(frozen=True)
class InterestingnessScore:
    raw: float
    metric: Metric
    normalized: Optional[float] = None

    def with_normalized(self, value: float) -> "InterestingnessScore":
        return InterestingnessScore(raw=self.raw, metric=self.metric, normalized=value)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Product-moment correlation; 0 when either variance is 0."""
    if len(xs) != len(ys):
        raise errors.LengthMismatch(f"{len(xs)} vs {len(ys)}")
    n = len(xs)
    if n < 2:
        return 0.0
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0.0 or syy == 0.0:
        return 0.0
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    # sqrt each factor separately: sxx * syy can under/overflow even when
    # both factors are representable
    r = sxy / (math.sqrt(sxx) * math.sqrt(syy))
    return max(-1.0, min(1.0, r))


def population_std(values: Sequence[float]) -> float:
    n = len(values)
    if n == 0:
        return 0.0
    # accumulate in sorted order so equal multisets score bit-identically
    # regardless of how the groups were enumerated
    ordered = sorted(values)
    mean = sum(ordered) / n
    return math.sqrt(sum((v - mean) ** 2 for v in ordered) / n)


def smoothed_zscore_peaks(
    series: Sequence[float],
    lag: int = ZSCORE_LAG,
    threshold: float = ZSCORE_THRESHOLD,
    influence: float = ZSCORE_INFLUENCE,
) -> int:
    """Count maximal runs of rolling-z-score deviations (peaks + drops).

    A point deviating more than ``threshold`` standard deviations from the
    trailing window is flagged; flagged points enter the window damped by
    ``influence``. Each contiguous flagged run counts once.
    """
    if lag < 2:
        raise errors.SeriesTooShort("lag must be >= 2")
    if len(series) <= lag:
        raise errors.SeriesTooShort(f"need more than {lag} points, got {len(series)}")
    filtered = list(series[:lag])
    signals = [0] * len(series)
    for i in range(lag, len(series)):
        window = filtered[i - lag:i]
        mean = sum(window) / lag
        std = population_std(window)
        x = series[i]
        if std > 0 and abs(x - mean) > threshold * std:
            signals[i] = 1 if x > mean else -1
            filtered.append(influence * x + (1 - influence) * filtered[i - 1])
        else:
            signals[i] = 0
            filtered.append(x)
    runs = 0
    prev = 0
    for s in signals:
        if s != 0 and s != prev:
            runs += 1
        prev = s
    return runs


def cardinality_penalty(attr: AttributeMeta, explicit: bool) -> float:
    """Readability damping for high-cardinality dimensions (1.0 when explicit)."""
    if explicit or attr.cardinality <= CARDINALITY_PENALTY_THRESHOLD:
        return 1.0
    if attr.cardinality == 0:
        return 1.0
    return CARDINALITY_PENALTY_THRESHOLD / attr.cardinality


def normalize_across_sets(raw_scores: Sequence[float]) -> list[float]:
    """Min-max rescale a view slot's raw scores; degenerate range maps to 0.5."""
    if not raw_scores:
        return []
    lo, hi = min(raw_scores), max(raw_scores)
    if hi == lo:
        return [0.5] * len(raw_scores)
    return [(s - lo) / (hi - lo) for s in raw_scores]


_STD_DEV_KINDS = frozenset({
    ChartKind.BAR, ChartKind.GROUPED_BAR, ChartKind.STACKED_BAR, ChartKind.DONUT,
    ChartKind.MAP, ChartKind.HISTOGRAM, ChartKind.HEATMAP, ChartKind.DIFFERENCE_BAR,
})


def _group_values(view: ViewSpec, dataset: Dataset) -> list[float]:
    """Aggregated values the view's primary mark encodes."""
    if view.chart_kind is ChartKind.HISTOGRAM:
        measure = view.role("measure")
        values = [float(v) for v in dataset.column(measure) if v is not None]
        if not values:
            return []
        lo, hi = min(values), max(values)
        if hi == lo:
            return [float(len(values))]
        width = (hi - lo) / HISTOGRAM_BINS
        counts = [0.0] * HISTOGRAM_BINS
        for v in values:
            idx = min(int((v - lo) / width), HISTOGRAM_BINS - 1)
            counts[idx] += 1
        return counts

    dims: list[str] = []
    for role in ("dimension", "dimension2", "color", "geo", "temporal"):
        attr = view.role(role)
        if attr is not None and attr not in dims:
            dims.append(attr)
            # heatmaps/stacked bars aggregate over two dims; others over one
            if view.chart_kind not in (ChartKind.HEATMAP, ChartKind.STACKED_BAR):
                break
    measure = view.role("measure")

    if view.agg_fn == "yoy":
        temporal = view.role("temporal")
        group_by = [d for d in dims if d != temporal]
        yrs = years_present(dataset, temporal)
        with_prev = [y for y in yrs if y - 1 in yrs]
        if not with_prev or measure is None:
            return []
        rows = year_over_year_change(dataset, measure, temporal, group_by, with_prev[-1])
        return [change for _, _, _, change in rows]

    if not dims:
        return []
    agg_fn = view.agg_fn if measure is not None else "count"
    q = AggregateQuery(group_by=tuple(dims), agg_fn=agg_fn, measure=measure)
    return [v for _, v in aggregate(dataset, q)]


def raw_interestingness(
    view: ViewSpec,
    dataset: Dataset,
    explicit_attrs: Sequence[str] = (),
    zscore_lag: int = ZSCORE_LAG,
    zscore_threshold: float = ZSCORE_THRESHOLD,
    zscore_influence: float = ZSCORE_INFLUENCE,
) -> InterestingnessScore:
    """Metric dispatch by chart kind, damped by cardinality penalties.

    Fewer than 2 groups/points is degenerate data: raw 0, metric retained.
    """
    explicit = set(explicit_attrs)
    if view.chart_kind in _STD_DEV_KINDS:
        values = _group_values(view, dataset)
        raw = population_std(values) if len(values) >= 2 else 0.0
        metric = Metric.STD_DEV
    elif view.chart_kind is ChartKind.SCATTER:
        xs, ys = raw_pairs(dataset, view.role("x"), view.role("y"))
        raw = abs(pearson(xs, ys)) if len(xs) >= 2 else 0.0
        metric = Metric.PEARSON
    elif view.chart_kind is ChartKind.LINE:
        measure = view.role("measure")
        temporal = view.role("temporal")
        q = AggregateQuery(group_by=(temporal,), agg_fn="sum", measure=measure,
                           temporal_bin="month")
        series = [v for _, v in aggregate(dataset, q)]
        if len(series) > zscore_lag:
            raw = float(smoothed_zscore_peaks(series, zscore_lag, zscore_threshold,
                                              zscore_influence))
        else:
            raw = 0.0
        metric = Metric.PEAK_DROP
    else:
        return InterestingnessScore(raw=0.0, metric=Metric.NONE, normalized=0.5)

    # apply penalties in sorted attribute order so role-swapped views that
    # aggregate the same groups damp to bit-identical scores
    for attr in sorted(view.attr_names):
        meta = dataset.attribute(attr)
        if meta.attr_type in (AttrType.CATEGORICAL, AttrType.GEOGRAPHIC):
            raw *= cardinality_penalty(meta, attr in explicit)
    return InterestingnessScore(raw=raw, metric=metric)
