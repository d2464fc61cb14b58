import math
import random

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from helpers import oracle_pearson, oracle_zscore_runs

from medley.dataset import AttributeMeta, AttrType, load_csv
from medley.errors import LengthMismatch, SeriesTooShort
from medley.interestingness import (
    Metric,
    cardinality_penalty,
    normalize_across_sets,
    pearson,
    population_std,
    raw_interestingness,
    smoothed_zscore_peaks,
)
from medley.specs import ChartKind, ViewSpec


def meta(cardinality, attr_type=AttrType.CATEGORICAL):
    return AttributeMeta(name="a", attr_type=attr_type, cardinality=cardinality,
                         column_index=0, missing_count=0)


def test_population_std_known_values():
    # two groups {0, 10}: mean 5, deviations 5 -> population std exactly 5.0
    assert population_std([0.0, 10.0]) == 5.0
    assert population_std([5.0, 5.0, 5.0]) == 0.0
    assert population_std([1.0]) == 0.0


def test_pearson_known_values():
    assert pearson([1, 2, 3], [2, 4, 6]) == pytest.approx(1.0)
    assert pearson([1, 2, 3], [6, 4, 2]) == pytest.approx(-1.0)
    assert pearson([1, 2, 3], [5, 5, 5]) == 0.0  # zero variance -> 0 by convention


def test_pearson_matches_direct_formula():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.randint(3, 50)
        xs = [rng.uniform(-100, 100) for _ in range(n)]
        ys = [rng.uniform(-100, 100) for _ in range(n)]
        assert pearson(xs, ys) == pytest.approx(oracle_pearson(xs, ys), abs=1e-12)


def test_pearson_length_mismatch():
    with pytest.raises(LengthMismatch):
        pearson([1, 2], [1, 2, 3])


def test_zscore_flat_and_ramp_have_no_peaks():
    assert smoothed_zscore_peaks([5.0] * 20) == 0
    assert smoothed_zscore_peaks([float(i) for i in range(20)]) == 0


SPIKY = [1.0, 1.1, 0.9, 1.05, 0.95, 1.0, 1.02, 10.0, 0.98, 1.01, 1.0, 0.97]


def test_zscore_single_spike_counts_once():
    assert smoothed_zscore_peaks(SPIKY) == 1
    assert smoothed_zscore_peaks(SPIKY) == oracle_zscore_runs(SPIKY, 5, 3.0, 0.5)


def test_zscore_peak_and_drop_count_separately():
    series = [1.0, 1.1, 0.9, 1.05, 0.95, 1.0, 9.0, 1.0, 1.05, -8.0, 1.0, 0.95, 1.0]
    got = smoothed_zscore_peaks(series)
    assert got == oracle_zscore_runs(series, 5, 3.0, 0.5)
    assert got == 2


def test_zscore_contiguous_run_is_one_signal():
    series = [1.0, 1.1, 0.9, 1.05, 0.95, 1.0, 9.0, 9.5, 9.2, 1.0, 1.05, 0.95]
    assert smoothed_zscore_peaks(series) == oracle_zscore_runs(series, 5, 3.0, 0.5)


def test_zscore_series_too_short():
    with pytest.raises(SeriesTooShort):
        smoothed_zscore_peaks([1.0, 2.0, 3.0])  # len <= lag


def test_cardinality_penalty():
    assert cardinality_penalty(meta(12), explicit=False) == 1.0
    assert cardinality_penalty(meta(13), explicit=False) == pytest.approx(12 / 13)
    assert cardinality_penalty(meta(500), explicit=False) == pytest.approx(0.024)
    assert cardinality_penalty(meta(500), explicit=True) == 1.0


def test_normalize_across_sets():
    assert normalize_across_sets([2.0, 4.0, 6.0]) == [0.0, 0.5, 1.0]
    assert normalize_across_sets([3.0, 3.0]) == [0.5, 0.5]
    assert normalize_across_sets([]) == []


def test_raw_interestingness_bar(superstore):
    two_group = load_csv(b"g,v\na,0\nb,10\n")
    view = ViewSpec(chart_kind=ChartKind.BAR,
                    attrs=(("dimension", "g"), ("measure", "v")))
    score = raw_interestingness(view, two_group)
    assert score.raw == 5.0
    assert score.metric is Metric.STD_DEV


def test_raw_interestingness_scatter_perfect_line():
    ds = load_csv(b"x,y\n1,2\n2,4\n3,6\n4,8\n")
    view = ViewSpec(chart_kind=ChartKind.SCATTER, attrs=(("x", "x"), ("y", "y")))
    assert raw_interestingness(view, ds).raw == pytest.approx(1.0)


def test_raw_interestingness_data_summary_is_metric_free(superstore):
    view = ViewSpec(chart_kind=ChartKind.DATA_SUMMARY, attrs=(("measure", "Sales"),))
    score = raw_interestingness(view, superstore)
    assert score.metric is Metric.NONE
    assert score.normalized == 0.5


def test_high_cardinality_dimension_is_damped(superstore):
    customers = superstore.attribute("Customer").cardinality
    assert customers > 12
    view = ViewSpec(chart_kind=ChartKind.BAR,
                    attrs=(("dimension", "Customer"), ("measure", "Sales")))
    damped = raw_interestingness(view, superstore).raw
    undamped = raw_interestingness(view, superstore, explicit_attrs=("Customer",)).raw
    assert damped == pytest.approx(undamped * 12 / customers)


# ---------------------------------------------------------------------------
# properties

# exclude tiny magnitudes: squared deviations of subnormal-scale values
# underflow and make correlation numerically meaningless, not just inexact
floats = st.floats(-1e6, 1e6, allow_nan=False).filter(
    lambda v: v == 0.0 or abs(v) >= 1e-6)


@given(st.lists(st.tuples(floats, floats), min_size=2, max_size=100))
@settings(max_examples=100, deadline=None)
def test_pearson_symmetry_and_bounds(pairs):
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    r = pearson(xs, ys)
    assert -1.0 <= r <= 1.0
    assert r == pytest.approx(pearson(ys, xs), abs=1e-12)


@given(st.lists(st.tuples(st.floats(-100, 100).filter(lambda v: v == 0.0 or abs(v) >= 1e-6),
                          st.floats(-100, 100)),
                min_size=3, max_size=60),
       st.floats(0.01, 50), st.floats(-100, 100))
@settings(max_examples=100, deadline=None)
def test_pearson_affine_invariance(pairs, scale, shift):
    xs = [p[0] for p in pairs]
    ys = [p[1] for p in pairs]
    # only meaningful when the transform is float-reversible; an absorbing
    # shift (e.g. tiny x, large shift) legitimately erases correlation
    assume(all(((scale * x + shift) - shift) / scale == x for x in xs))
    # near-constant columns correlate on rounding noise alone (the mean of
    # n equal floats need not equal them exactly); require real spread
    for vs in (xs, ys):
        scale_ref = max(1.0, *(abs(v) for v in vs))
        assume(max(vs) - min(vs) >= 1e-6 * scale_ref)
    r1 = pearson(xs, ys)
    r2 = pearson([scale * x + shift for x in xs], ys)
    assert r1 == pytest.approx(r2, abs=1e-6)


@given(st.lists(st.floats(-1e4, 1e4), min_size=7, max_size=80),
       st.floats(-1e3, 1e3))
@settings(max_examples=100, deadline=None)
def test_zscore_shift_invariance(series, shift):
    shifted = [v + shift for v in series]
    # only meaningful when the shift is float-reversible; otherwise adding the
    # shift absorbs tiny spikes and legitimately changes the detector's input
    assume(all((v + shift) - shift == v for v in series))
    assert smoothed_zscore_peaks(series) == smoothed_zscore_peaks(shifted)


@given(st.integers(1, 2000), st.integers(0, 2000))
def test_penalty_monotone_in_cardinality(a, b):
    lo, hi = sorted((a, b))
    assert cardinality_penalty(meta(hi), False) <= cardinality_penalty(meta(lo), False)
    assert 0 < cardinality_penalty(meta(hi), False) <= 1.0


@given(st.lists(st.floats(-1e9, 1e9), min_size=1, max_size=50))
@settings(max_examples=100, deadline=None)
def test_normalize_preserves_argmax_and_range(raws):
    normed = normalize_across_sets(raws)
    assert all(0.0 <= v <= 1.0 for v in normed)
    if max(raws) > min(raws):
        # the raw argmax must land on a maximal normalized score (ties allowed)
        assert normed[raws.index(max(raws))] == max(normed)
        assert math.isclose(max(normed), 1.0) and math.isclose(min(normed), 0.0)
