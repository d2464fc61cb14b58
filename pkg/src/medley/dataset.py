"""Tabular dataset ingestion, column typing, and aggregation primitives.

A loaded :class:`Dataset` is immutable; every downstream computation
(aggregation, interestingness, year-over-year change) is a pure read.
"""

from __future__ import annotations

import collections
import csv
import datetime as dt
import io
import itertools
import math
import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import errors

Value = Union[float, str, dt.date, None]


class AttrType(str, Enum):
    QUANTITATIVE = "quantitative"
    CATEGORICAL = "categorical"
    GEOGRAPHIC = "geographic"
    TEMPORAL = "temporal"

    @property
    def code(self) -> str:
        return {"quantitative": "Q", "categorical": "C",
                "geographic": "G", "temporal": "T"}[self.value]

    @classmethod
    def from_code(cls, code: str) -> "AttrType":
        return {"Q": cls.QUANTITATIVE, "C": cls.CATEGORICAL,
                "G": cls.GEOGRAPHIC, "T": cls.TEMPORAL}[code]


# Dimensions = attributes usable as group-by keys.
DIMENSION_TYPES = (AttrType.CATEGORICAL, AttrType.GEOGRAPHIC, AttrType.TEMPORAL)


@dataclass(frozen=True)
class AttributeMeta:
    name: str
    attr_type: AttrType
    cardinality: int
    column_index: int
    missing_count: int = 0
    numeric_range: Optional[tuple[float, float]] = None
    temporal_range: Optional[tuple[dt.date, dt.date]] = None

    def __post_init__(self):
        if self.attr_type is AttrType.QUANTITATIVE:
            if self.numeric_range is None or self.numeric_range[0] > self.numeric_range[1]:
                raise errors.ValidationError(f"bad numeric range for {self.name}")
        if self.attr_type is AttrType.TEMPORAL:
            if self.temporal_range is None or self.temporal_range[0] > self.temporal_range[1]:
                raise errors.ValidationError(f"bad temporal range for {self.name}")

    def to_json(self) -> dict:
        out = {
            "name": self.name,
            "attrType": self.attr_type.value,
            "cardinality": self.cardinality,
            "columnIndex": self.column_index,
            "missingCount": self.missing_count,
        }
        if self.numeric_range is not None:
            out["numericRange"] = list(self.numeric_range)
        if self.temporal_range is not None:
            out["temporalRange"] = [d.isoformat() for d in self.temporal_range]
        return out


@dataclass
class Dataset:
    id: str
    attributes: list[AttributeMeta]
    columns: dict[str, list[Value]]
    row_count: int
    # lazy caches (group codes, etc.); not part of the logical value
    _memo: dict = field(default_factory=dict, repr=False, compare=False)

    def attribute(self, name: str) -> AttributeMeta:
        for a in self.attributes:
            if a.name == name:
                return a
        raise errors.UnknownAttribute(name)

    def has_attribute(self, name: str) -> bool:
        return any(a.name == name for a in self.attributes)

    def attrs_of_type(self, attr_type: AttrType) -> list[str]:
        return [a.name for a in self.attributes if a.attr_type is attr_type]

    def column(self, name: str) -> list[Value]:
        if name not in self.columns:
            raise errors.UnknownAttribute(name)
        return self.columns[name]


@dataclass(frozen=True)
class Predicate:
    """Row filter: ``=`` (single value), ``in`` (value set), ``range`` (lo, hi)."""

    attribute: str
    op: str  # "=", "in", "range"
    value: object

    def matches(self, v: Value) -> bool:
        if v is None:
            return False
        if self.op == "=":
            return v == self.value
        if self.op == "in":
            return v in self.value  # type: ignore[operator]
        if self.op == "range":
            lo, hi = self.value  # type: ignore[misc]
            return lo <= v <= hi
        raise errors.ValidationError(f"unknown predicate op {self.op!r}")


@dataclass(frozen=True)
class AggregateQuery:
    group_by: tuple[str, ...]
    agg_fn: str  # "sum" | "mean" | "count"
    measure: Optional[str] = None
    filters: tuple[Predicate, ...] = ()
    temporal_bin: str = "year"  # binning applied to temporal group-by attrs

    def __post_init__(self):
        if self.agg_fn not in ("sum", "mean", "count"):
            raise errors.ValidationError(f"unknown aggFn {self.agg_fn!r}")
        if self.agg_fn != "count" and self.measure is None:
            raise errors.ValidationError("measure required unless aggFn=count")


_DATE_PATTERNS = (
    # ISO and common US styles; intentionally no bare-number years so that
    # plain integer columns stay quantitative.
    (re.compile(r"^\d{4}-\d{2}-\d{2}"), ("%Y-%m-%d",)),
    (re.compile(r"^\d{1,2}/\d{1,2}/\d{4}$"), ("%m/%d/%Y",)),
    (re.compile(r"^\d{4}/\d{1,2}/\d{1,2}$"), ("%Y/%m/%d",)),
    (re.compile(r"^\d{4}-\d{1,2}$"), ("%Y-%m",)),
)


def parse_date(raw: str) -> Optional[dt.date]:
    s = raw.strip()
    for pattern, formats in _DATE_PATTERNS:
        if pattern.match(s):
            for fmt in formats:
                try:
                    return dt.datetime.strptime(s[:10] if "T" in s else s, fmt).date()
                except ValueError:
                    continue
    return None


def parse_number(raw: str) -> Optional[float]:
    s = raw.strip().replace(",", "")
    if not s:
        return None
    if s.startswith("$"):
        s = s[1:]
    try:
        v = float(s)
    except ValueError:
        return None
    return v if math.isfinite(v) else None


def _load_gazetteer() -> frozenset[str]:
    text = resources.files("medley.resources").joinpath("gazetteer.txt").read_text("utf-8")
    names = {line.strip().lower() for line in text.splitlines()
             if line.strip() and not line.startswith("#")}
    return frozenset(names)


_GAZETTEER = _load_gazetteer()

# Fraction of non-missing cells that must parse for a type to win.
PARSE_RATE_THRESHOLD = 0.9


def infer_attribute_type(column_name: str, values: Sequence[str]) -> AttrType:
    """Classify a raw text column as temporal, geographic, quantitative, or categorical.

    Deterministic majority rule: the first type whose parse rate over
    non-missing cells reaches 90% wins, checked in T, G, Q order.
    """
    present = [v for v in values if v is not None and v.strip() != ""]
    if not present:
        return AttrType.CATEGORICAL
    n = len(present)
    threshold = PARSE_RATE_THRESHOLD * n
    if sum(parse_date(v) is not None for v in present) >= threshold:
        return AttrType.TEMPORAL
    if sum(v.strip().lower() in _GAZETTEER for v in present) >= threshold:
        return AttrType.GEOGRAPHIC
    if sum(parse_number(v) is not None for v in present) >= threshold:
        return AttrType.QUANTITATIVE
    return AttrType.CATEGORICAL


def _parse_column(values: Sequence[str], attr_type: AttrType) -> list[Value]:
    out: list[Value] = []
    for raw in values:
        if raw is None or raw.strip() == "":
            out.append(None)
        elif attr_type is AttrType.QUANTITATIVE:
            out.append(parse_number(raw))
        elif attr_type is AttrType.TEMPORAL:
            out.append(parse_date(raw))
        else:
            out.append(raw.strip())
    return out


def _build_meta(name: str, index: int, parsed: list[Value], attr_type: AttrType) -> AttributeMeta:
    present = [v for v in parsed if v is not None]
    missing = len(parsed) - len(present)
    numeric_range = None
    temporal_range = None
    if attr_type is AttrType.QUANTITATIVE:
        nums = present or [0.0]
        numeric_range = (float(min(nums)), float(max(nums)))  # type: ignore[type-var]
    if attr_type is AttrType.TEMPORAL:
        dates = present or [dt.date(1970, 1, 1)]
        temporal_range = (min(dates), max(dates))  # type: ignore[type-var]
    return AttributeMeta(
        name=name,
        attr_type=attr_type,
        cardinality=len(set(present)),
        column_index=index,
        missing_count=missing,
        numeric_range=numeric_range,
        temporal_range=temporal_range,
    )


def load_csv(data: bytes, delimiter: str = ",", dataset_id: str = "dataset") -> Dataset:
    """Parse a UTF-8, header-first CSV into a typed Dataset.

    Unparseable cells for the inferred type are recorded as missing.
    """
    text = data.decode("utf-8-sig")
    reader = csv.reader(io.StringIO(text), delimiter=delimiter)
    rows = [r for r in reader if r]
    if not rows:
        raise errors.EmptyInput("no rows in CSV input")
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        dupes = sorted({h for h in header if header.count(h) > 1})
        raise errors.DuplicateColumnName(", ".join(dupes))
    body = rows[1:]
    if not body:
        raise errors.EmptyInput("CSV has a header but no data rows")
    for i, row in enumerate(body):
        if len(row) != len(header):
            raise errors.RaggedRows(f"row {i + 2} has {len(row)} cells, expected {len(header)}")

    columns: dict[str, list[Value]] = {}
    attributes: list[AttributeMeta] = []
    for idx, name in enumerate(header):
        raw = [row[idx] for row in body]
        attr_type = infer_attribute_type(name, raw)
        parsed = _parse_column(raw, attr_type)
        columns[name] = parsed
        attributes.append(_build_meta(name, idx, parsed, attr_type))
    return Dataset(id=dataset_id, attributes=attributes, columns=columns, row_count=len(body))


def _group_key_part(value: Value, attr_type: AttrType, temporal_bin: str) -> Value:
    if value is None:
        return None
    if attr_type is AttrType.TEMPORAL and isinstance(value, dt.date):
        if temporal_bin == "year":
            return value.year
        if temporal_bin == "month":
            return f"{value.year:04d}-{value.month:02d}"
        return value.isoformat()
    return value


def _predicate_mask(dataset: Dataset, pred: Predicate) -> list[bool]:
    try:
        cache = dataset._memo.setdefault("pred_masks", {})
        hit = cache.get(pred)
        if hit is not None:
            return hit
    except TypeError:  # unhashable predicate value; compute without caching
        cache = None
    col = dataset.column(pred.attribute)
    mask = [pred.matches(v) for v in col]
    if cache is not None:
        cache[pred] = mask
    return mask


def _filter_mask(dataset: Dataset, filters: Sequence[Predicate]) -> Optional[list[bool]]:
    if not filters:
        return None
    mask = _predicate_mask(dataset, filters[0])
    for pred in filters[1:]:
        extra = _predicate_mask(dataset, pred)
        mask = [a and b for a, b in zip(mask, extra)]
    return mask


def _key_parts(dataset: Dataset, name: str, temporal_bin: str) -> list[Value]:
    """Per-row group-key parts for one attribute, cached on the dataset."""
    attr_type = dataset.attribute(name).attr_type
    if attr_type is not AttrType.TEMPORAL:
        return dataset.column(name)  # identity mapping; None stays None
    cache = dataset._memo.setdefault("key_parts", {})
    key = (name, temporal_bin)
    if key not in cache:
        col = dataset.column(name)
        cache[key] = [_group_key_part(v, attr_type, temporal_bin) for v in col]
    return cache[key]


# group-count product above which the flat-bin vectorized path is skipped
_MAX_FLAT_BINS = 4_000_000


def _factorized(dataset: Dataset, name: str, temporal_bin: str):
    """(per-row int codes, unique values) for one group-by attribute, cached.

    Missing values get code -1; codes index into the uniques list, which
    preserves first-appearance row order.
    """
    cache = dataset._memo.setdefault("factorized", {})
    key = (name, temporal_bin)
    if key not in cache:
        parts = _key_parts(dataset, name, temporal_bin)
        mapping: dict = {}
        uniques: list[Value] = []
        codes = np.empty(len(parts), dtype=np.int64)
        for i, p in enumerate(parts):
            if p is None:
                codes[i] = -1
            else:
                c = mapping.get(p)
                if c is None:
                    c = len(uniques)
                    mapping[p] = c
                    uniques.append(p)
                codes[i] = c
        cache[key] = (codes, uniques)
    return cache[key]


def _measure_array(dataset: Dataset, name: str):
    """float64 copy of a quantitative column with NaN for missing, cached."""
    cache = dataset._memo.setdefault("measure_arrays", {})
    if name not in cache:
        col = dataset.column(name)
        cache[name] = np.array(
            [np.nan if v is None else float(v) for v in col], dtype=np.float64
        )
    return cache[name]


def _accumulate_vectorized(
    dataset: Dataset, q: AggregateQuery, mask: Optional[list[bool]]
) -> Optional[tuple[dict[tuple, float], dict[tuple, int]]]:
    """Group accumulation via bincount over flattened group codes.

    np.bincount adds weights sequentially in row order, so per-group float
    sums are bit-identical to the scalar row loop in _accumulate_rows.
    Returns None when the flat bin space would be too large.
    """
    factorized = [_factorized(dataset, name, q.temporal_bin) for name in q.group_by]
    size = 1
    for _, uniques in factorized:
        size *= max(len(uniques), 1)
        if size > _MAX_FLAT_BINS:
            return None

    n = dataset.row_count
    valid = np.ones(n, dtype=bool) if mask is None else np.asarray(mask, dtype=bool)
    combined = np.zeros(n, dtype=np.int64)
    for codes, uniques in factorized:
        valid &= codes >= 0
        combined = combined * max(len(uniques), 1) + codes

    if q.agg_fn == "count":
        flat_counts = np.bincount(combined[valid], minlength=size)
        flat_sums = None
    else:
        values = _measure_array(dataset, q.measure)  # type: ignore[arg-type]
        valid = valid & ~np.isnan(values)
        rows = combined[valid]
        flat_sums = np.bincount(rows, weights=values[valid], minlength=size)
        flat_counts = np.bincount(rows, minlength=size)

    sums: dict[tuple, float] = {}
    counts: dict[tuple, int] = {}
    for flat in np.nonzero(flat_counts)[0].tolist():
        rem = flat
        key_parts = []
        for _, uniques in reversed(factorized):
            k = max(len(uniques), 1)
            key_parts.append(uniques[rem % k])
            rem //= k
        key = tuple(reversed(key_parts))
        counts[key] = int(flat_counts[flat])
        if flat_sums is not None:
            sums[key] = float(flat_sums[flat])
    return sums, counts


def _accumulate_rows(
    dataset: Dataset,
    q: AggregateQuery,
    mask: Optional[list[bool]],
    measure_col: Optional[list[Value]],
) -> tuple[dict[tuple, float], dict[tuple, int]]:
    """Scalar fallback: one pass over rows with dict accumulation."""
    part_cols = [_key_parts(dataset, name, q.temporal_bin) for name in q.group_by]
    sums: dict[tuple, float] = {}
    counts: dict[tuple, int] = {}
    # rows iterate in dataset order so per-group float accumulation is stable
    if mask is not None:
        sget, cget = sums.get, counts.get
        if q.agg_fn == "count":
            for row in zip(mask, *part_cols):
                if not row[0]:
                    continue
                key = row[1:]
                if None in key:
                    continue
                counts[key] = cget(key, 0) + 1
        else:
            for row in zip(mask, *part_cols, measure_col):  # type: ignore[arg-type]
                v = row[-1]
                key = row[1:-1]
                if not row[0] or v is None or None in key:
                    continue
                sums[key] = sget(key, 0.0) + float(v)
                counts[key] = cget(key, 0) + 1
    elif q.agg_fn == "count":
        if not part_cols:
            counts[()] = dataset.row_count
        elif len(part_cols) == 1:
            flat = collections.Counter(part_cols[0])
            flat.pop(None, None)
            counts = {(k,): n for k, n in flat.items()}
        else:
            get = counts.get
            for key in zip(*part_cols):
                if None in key:
                    continue
                counts[key] = get(key, 0) + 1
    else:
        sget, cget = sums.get, counts.get
        for row in zip(*part_cols, measure_col):  # type: ignore[arg-type]
            v = row[-1]
            key = row[:-1]
            if v is None or None in key:
                continue
            sums[key] = sget(key, 0.0) + float(v)
            counts[key] = cget(key, 0) + 1
    return sums, counts


def aggregate(dataset: Dataset, q: AggregateQuery) -> list[tuple[tuple, float]]:
    """Group-and-aggregate. Returns (group key tuple, value) rows ordered by key.

    Rows with a missing group key or missing measure are excluded; groups
    whose every measure cell is missing are omitted entirely.
    """
    for name in q.group_by:
        if dataset.attribute(name).attr_type not in DIMENSION_TYPES:
            raise errors.TypeMismatch(f"cannot group by quantitative attribute {name!r}")
    measure_col = None
    if q.agg_fn != "count":
        assert q.measure is not None
        if dataset.attribute(q.measure).attr_type is not AttrType.QUANTITATIVE:
            raise errors.TypeMismatch(f"{q.agg_fn} over non-quantitative {q.measure!r}")
        measure_col = dataset.column(q.measure)

    results = dataset._memo.setdefault("aggregates", {})
    cache_key: Optional[tuple]
    try:
        cache_key = (q.group_by, q.agg_fn, q.measure, q.temporal_bin, q.filters)
        hit = results.get(cache_key)
        if hit is not None:
            return hit
    except TypeError:  # unhashable filter value; compute without caching
        cache_key = None

    mask = _filter_mask(dataset, q.filters)
    accumulated = _accumulate_vectorized(dataset, q, mask)
    if accumulated is not None:
        sums, counts = accumulated
    else:
        sums, counts = _accumulate_rows(dataset, q, mask, measure_col)

    result: list[tuple[tuple, float]] = []
    if q.agg_fn == "count":
        for key in counts:
            result.append((key, float(counts[key])))
    elif q.agg_fn == "sum":
        for key in sums:
            result.append((key, sums[key]))
    else:
        for key in sums:
            result.append((key, sums[key] / counts[key]))
    result.sort(key=lambda kv: tuple(_sortable(part) for part in kv[0]))
    if cache_key is not None:
        results[cache_key] = result
    return result


def _sortable(v: Value) -> tuple:
    # mixed-type keys (int years vs strings) need a stable total order
    if isinstance(v, bool):
        return (0, int(v))
    if isinstance(v, (int, float)):
        return (0, float(v))
    if isinstance(v, dt.date):
        return (1, v.isoformat())
    return (2, str(v))


def raw_pairs(dataset: Dataset, x: str, y: str) -> tuple[list[float], list[float]]:
    """Row-paired values of two quantitative columns, missing rows dropped."""
    cx, cy = dataset.column(x), dataset.column(y)
    xs, ys = [], []
    for a, b in zip(cx, cy):
        if a is not None and b is not None:
            xs.append(float(a))  # type: ignore[arg-type]
            ys.append(float(b))  # type: ignore[arg-type]
    return xs, ys


def years_present(dataset: Dataset, temporal: str) -> list[int]:
    cache = dataset._memo.setdefault("years_present", {})
    if temporal not in cache:
        col = dataset.column(temporal)
        cache[temporal] = sorted({v.year for v in col if isinstance(v, dt.date)})
    return cache[temporal]


def year_over_year_change(
    dataset: Dataset,
    measure: str,
    temporal: str,
    group_by: Sequence[str],
    year: int,
) -> list[tuple[tuple, float, float, float]]:
    """Per-group (value in ``year``, value in ``year-1``, absolute change).

    A group absent in one of the two years contributes 0 for that year.
    """
    yrs = years_present(dataset, temporal)
    if len(yrs) < 2:
        raise errors.SingleYearDataset(temporal)
    if year not in yrs or (year - 1) not in yrs:
        raise errors.YearOutOfRange(f"need both {year} and {year - 1} in {temporal}")

    def sums_for(y: int) -> dict[tuple, float]:
        q = AggregateQuery(
            group_by=tuple(group_by),
            agg_fn="sum",
            measure=measure,
            filters=(Predicate(temporal, "range", (dt.date(y, 1, 1), dt.date(y, 12, 31))),),
        )
        return dict(aggregate(dataset, q))

    cur, prev = sums_for(year), sums_for(year - 1)
    keys = sorted(set(cur) | set(prev), key=lambda k: tuple(_sortable(p) for p in k))
    return [(k, cur.get(k, 0.0), prev.get(k, 0.0), cur.get(k, 0.0) - prev.get(k, 0.0))
            for k in keys]
