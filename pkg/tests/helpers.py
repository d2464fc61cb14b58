"""Shared fixtures builders and independent oracles used across the suite.

Oracle functions here deliberately avoid the engine's aggregation and
scoring paths: they re-derive expected values with plain row scans and the
stdlib statistics module.
"""

from __future__ import annotations

import datetime as dt
import math
import random
import statistics
from typing import Optional, Sequence

from medley.dataset import Dataset
from medley.specs import ChartKind, ViewSpec

STATES = ["California", "Texas", "Ohio", "New York", "Florida",
          "Washington", "Georgia", "Illinois"]
CATEGORIES = ["Furniture", "Office Supplies", "Technology"]
SUBCATEGORIES = ["Chairs", "Desks", "Paper", "Binders", "Phones", "Laptops"]
SEGMENTS = ["Consumer", "Corporate", "Home Office"]
SHIP_MODES = ["First Class", "Second Class", "Standard Class"]
REGIONS = ["Central", "East", "South", "West"]


def superstore_csv(rows: int = 400, seed: int = 7) -> bytes:
    """12-column Superstore-shaped CSV: 4 Q, 6 C, 1 G, 1 T, spanning 2020-2021."""
    rng = random.Random(seed)
    lines = ["Sales,Profit,Quantity,Discount,Category,SubCategory,Segment,"
             "ShipMode,Region,Customer,State,Date"]
    for _ in range(rows):
        year = rng.choice([2020, 2021])
        month = rng.randint(1, 12)
        day = rng.randint(1, 28)
        lines.append(",".join([
            f"{rng.uniform(10, 1000):.2f}",
            f"{rng.uniform(-200, 400):.2f}",
            str(rng.randint(1, 10)),
            f"{rng.choice([0, 0.1, 0.2, 0.4]):.1f}",
            rng.choice(CATEGORIES),
            rng.choice(SUBCATEGORIES),
            rng.choice(SEGMENTS),
            rng.choice(SHIP_MODES),
            rng.choice(REGIONS),
            f"Customer {rng.randint(1, 120):03d}",
            rng.choice(STATES),
            f"{year:04d}-{month:02d}-{day:02d}",
        ]))
    return ("\n".join(lines) + "\n").encode("utf-8")


def random_csv(seed: int, max_attrs: int = 8, max_rows: int = 200) -> bytes:
    """Small randomized typed table for oracle-equivalence fixtures."""
    rng = random.Random(seed)
    n_rows = rng.randint(30, max_rows)
    specs: list[tuple[str, str]] = [("q0", "Q"), ("c0", "C")]
    extra = rng.randint(0, max_attrs - 3)
    for i in range(extra):
        specs.append((f"a{i}", rng.choice(["Q", "C", "C", "G", "T"])))
    if rng.random() < 0.7 and all(t != "T" for _, t in specs):
        specs.append(("t0", "T"))
    specs = specs[:max_attrs]

    header = [name for name, _ in specs]
    lines = [",".join(header)]
    for _ in range(n_rows):
        cells = []
        for name, t in specs:
            if t == "Q":
                cells.append(f"{rng.uniform(-50, 50):.3f}")
            elif t == "C":
                cells.append(f"{name}_v{rng.randint(1, rng.choice([3, 5, 18]))}")
            elif t == "G":
                cells.append(rng.choice(STATES))
            else:
                y = rng.choice([2020, 2021])
                cells.append(f"{y:04d}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}")
        lines.append(",".join(cells))
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# independent oracles


def scan_aggregate(dataset: Dataset, group_by: Sequence[str], agg_fn: str,
                   measure: Optional[str] = None,
                   row_filter=None, temporal_bin: str = "year") -> dict[tuple, float]:
    """Naive full row scan replicating the aggregation contract."""
    groups: dict[tuple, list[float]] = {}
    for i in range(dataset.row_count):
        if row_filter is not None and not row_filter(i):
            continue
        key = []
        skip = False
        for name in group_by:
            v = dataset.columns[name][i]
            if v is None:
                skip = True
                break
            if isinstance(v, dt.date):
                v = v.year if temporal_bin == "year" else f"{v.year:04d}-{v.month:02d}"
            key.append(v)
        if skip:
            continue
        key = tuple(key)
        if agg_fn == "count":
            groups.setdefault(key, []).append(1.0)
        else:
            m = dataset.columns[measure][i]
            if m is None:
                continue
            groups.setdefault(key, []).append(float(m))
    out = {}
    for key, values in groups.items():
        if agg_fn == "count":
            out[key] = float(len(values))
        elif agg_fn == "sum":
            out[key] = sum(values)
        else:
            out[key] = sum(values) / len(values)
    return out


def oracle_pearson(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    mx, my = sum(xs) / n, sum(ys) / n
    sx = math.sqrt(sum((x - mx) ** 2 for x in xs))
    sy = math.sqrt(sum((y - my) ** 2 for y in ys))
    if sx == 0 or sy == 0:
        return 0.0
    cov = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return cov / (sx * sy)


def oracle_zscore_runs(series: Sequence[float], lag: int, threshold: float,
                       influence: float) -> int:
    """Literal re-run of the rolling-window detector, kept independent."""
    filt = list(series[:lag])
    flags = []
    for i in range(lag, len(series)):
        window = filt[i - lag:i]
        mean = statistics.fmean(window)
        std = statistics.pstdev(window)
        x = series[i]
        if std > 0 and abs(x - mean) > threshold * std:
            flags.append(1 if x > mean else -1)
            filt.append(influence * x + (1 - influence) * filt[i - 1])
        else:
            flags.append(0)
            filt.append(x)
    runs, prev = 0, 0
    for f in flags:
        if f != 0 and f != prev:
            runs += 1
        prev = f
    return runs


def _oracle_yoy_changes(dataset: Dataset, measure: str, temporal: str,
                        dims: Sequence[str]) -> list[float]:
    years = sorted({v.year for v in dataset.columns[temporal] if isinstance(v, dt.date)})
    pairs = [y for y in years if y - 1 in years]
    if not pairs:
        return []
    year = pairs[-1]

    def year_filter(y):
        col = dataset.columns[temporal]
        return lambda i: isinstance(col[i], dt.date) and col[i].year == y

    cur = scan_aggregate(dataset, dims, "sum", measure, year_filter(year))
    prev = scan_aggregate(dataset, dims, "sum", measure, year_filter(year - 1))
    keys = set(cur) | set(prev)
    return [cur.get(k, 0.0) - prev.get(k, 0.0) for k in keys]


def oracle_raw_score(view: ViewSpec, dataset: Dataset,
                     explicit: Sequence[str] = ()) -> Optional[float]:
    """Recompute a view's raw interestingness from first principles.

    Returns None for metric-free views (data summaries).
    """
    from medley.dataset import AttrType

    kind = view.chart_kind
    roles = dict(view.attrs)

    def penalized(raw: float) -> float:
        for attr in sorted(view.attr_names):
            meta = dataset.attribute(attr)
            if meta.attr_type in (AttrType.CATEGORICAL, AttrType.GEOGRAPHIC):
                if attr not in explicit and meta.cardinality > 12:
                    raw *= 12 / meta.cardinality
        return raw

    if kind is ChartKind.SCATTER:
        xs, ys = [], []
        for a, b in zip(dataset.columns[roles["x"]], dataset.columns[roles["y"]]):
            if a is not None and b is not None:
                xs.append(float(a))
                ys.append(float(b))
        raw = abs(oracle_pearson(xs, ys)) if len(xs) >= 2 else 0.0
        return penalized(raw)

    if kind is ChartKind.LINE:
        sums = scan_aggregate(dataset, [roles["temporal"]], "sum", roles["measure"],
                              temporal_bin="month")
        series = [sums[k] for k in sorted(sums)]
        raw = float(oracle_zscore_runs(series, 5, 3.0, 0.5)) if len(series) > 5 else 0.0
        return penalized(raw)

    if kind is ChartKind.DATA_SUMMARY:
        return None

    if kind is ChartKind.HISTOGRAM:
        values = [float(v) for v in dataset.columns[roles["measure"]] if v is not None]
        if not values:
            return 0.0
        lo, hi = min(values), max(values)
        if hi == lo:
            return 0.0
        width = (hi - lo) / 10
        counts = [0.0] * 10
        for v in values:
            counts[min(int((v - lo) / width), 9)] += 1
        return penalized(statistics.pstdev(counts))

    # all remaining kinds score the spread of aggregated group values
    dims = []
    for role in ("dimension", "dimension2", "color", "geo", "temporal"):
        if role in roles and roles[role] not in dims:
            dims.append(roles[role])
            if kind not in (ChartKind.HEATMAP, ChartKind.STACKED_BAR):
                break
    measure = roles.get("measure")
    if view.agg_fn == "yoy":
        temporal = roles["temporal"]
        values = _oracle_yoy_changes(dataset, measure, temporal,
                                     [d for d in dims if d != temporal])
    else:
        agg = view.agg_fn if measure is not None else "count"
        values = list(scan_aggregate(dataset, dims, agg, measure).values())
    raw = statistics.pstdev(values) if len(values) >= 2 else 0.0
    return penalized(raw)


def oracle_select_display_set(template, candidates, dataset, explicit=(), memo=None):
    """Exhaustive recomputation of the display-set choice (argmax of mean
    min-max-normalized per-slot scores, earliest candidate on ties)."""
    from medley.catalog import populate_collection

    memo = {} if memo is None else memo

    def scored(view):
        key = (view.identity(), tuple(explicit))
        if key not in memo:
            memo[key] = oracle_raw_score(view, dataset, explicit)
        return memo[key]

    populated = [populate_collection(template, a, dataset) for a in candidates]
    n_slots = max(len(c.views) for c in populated)
    raws = [[scored(v) for v in c.views] +
            [math.nan] * (n_slots - len(c.views)) for c in populated]

    norm = [[None] * n_slots for _ in populated]
    for s in range(n_slots):
        idxs = [i for i in range(len(populated))
                if s < len(populated[i].views)]
        col = [raws[i][s] for i in idxs]
        numeric = [0.0 if v is None else v for v in col]
        lo, hi = min(numeric), max(numeric)
        for i, v in zip(idxs, col):
            if v is None:
                norm[i][s] = 0.5
            elif hi == lo:
                norm[i][s] = 0.5
            else:
                norm[i][s] = (v - lo) / (hi - lo)
    means = []
    for i in range(len(populated)):
        vals = [v for v in norm[i] if v is not None]
        means.append(sum(vals) / len(vals) if vals else 0.0)
    best = 0
    for i in range(1, len(means)):
        if means[i] > means[best]:
            best = i
    return candidates[best], means[best]
