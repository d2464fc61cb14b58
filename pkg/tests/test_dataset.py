import datetime as dt

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import scan_aggregate, superstore_csv

from medley.dataset import (
    AttrType,
    Predicate,
    AggregateQuery,
    aggregate,
    infer_attribute_type,
    load_csv,
    parse_date,
    parse_number,
    year_over_year_change,
    years_present,
)
from medley.errors import (
    DuplicateColumnName,
    EmptyInput,
    RaggedRows,
    SingleYearDataset,
    YearOutOfRange,
)


def test_superstore_type_inference(superstore):
    by_type = {t: superstore.attrs_of_type(t) for t in AttrType}
    assert by_type[AttrType.QUANTITATIVE] == ["Sales", "Profit", "Quantity", "Discount"]
    assert by_type[AttrType.CATEGORICAL] == [
        "Category", "SubCategory", "Segment", "ShipMode", "Region", "Customer"]
    assert by_type[AttrType.GEOGRAPHIC] == ["State"]
    assert by_type[AttrType.TEMPORAL] == ["Date"]


def test_load_csv_errors():
    with pytest.raises(EmptyInput):
        load_csv(b"")
    with pytest.raises(EmptyInput):
        load_csv(b"a,b\n")
    with pytest.raises(DuplicateColumnName):
        load_csv(b"a,a\n1,2\n")
    with pytest.raises(RaggedRows):
        load_csv(b"a,b\n1\n")


def test_parse_date_formats():
    assert parse_date("2021-03-05") == dt.date(2021, 3, 5)
    assert parse_date("03/05/2021") == dt.date(2021, 3, 5)
    assert parse_date("2021/03/05") == dt.date(2021, 3, 5)
    assert parse_date("2021-03") == dt.date(2021, 3, 1)
    # bare numbers never parse as dates
    assert parse_date("2021") is None
    assert parse_date("37") is None


def test_parse_number():
    assert parse_number("$1,234.50") == 1234.5
    assert parse_number("-3") == -3.0
    assert parse_number("abc") is None
    assert parse_number("") is None


def test_inference_threshold_is_90_percent():
    # 9 of 10 parse as dates -> temporal; 8 of 10 -> categorical
    nine = ["2020-01-01"] * 9 + ["oops"]
    eight = ["2020-01-01"] * 8 + ["oops", "nope"]
    assert infer_attribute_type("d", nine) is AttrType.TEMPORAL
    assert infer_attribute_type("d", eight) is AttrType.CATEGORICAL


def test_inference_precedence():
    assert infer_attribute_type("a", ["2020-01-01", "2020-02-01"]) is AttrType.TEMPORAL
    assert infer_attribute_type("a", ["Texas", "Ohio", "texas"]) is AttrType.GEOGRAPHIC
    assert infer_attribute_type("a", ["1", "2.5", "-3"]) is AttrType.QUANTITATIVE
    assert infer_attribute_type("a", ["x", "y"]) is AttrType.CATEGORICAL


def test_aggregate_matches_row_scan(superstore):
    q = AggregateQuery(group_by=("Category",), agg_fn="sum", measure="Sales")
    got = dict(aggregate(superstore, q))
    want = scan_aggregate(superstore, ["Category"], "sum", "Sales")
    assert got.keys() == want.keys()
    for k in got:
        assert got[k] == pytest.approx(want[k], abs=1e-9)


def test_aggregate_count_and_mean(superstore):
    count = dict(aggregate(superstore, AggregateQuery(
        group_by=("Region",), agg_fn="count")))
    assert sum(count.values()) == superstore.row_count
    mean = dict(aggregate(superstore, AggregateQuery(
        group_by=("Region",), agg_fn="mean", measure="Profit")))
    total = dict(aggregate(superstore, AggregateQuery(
        group_by=("Region",), agg_fn="sum", measure="Profit")))
    for k in mean:
        assert mean[k] == pytest.approx(total[k] / count[k], rel=1e-12)


def test_aggregate_filters_and_temporal_bin(superstore):
    pred = Predicate("Region", "=", "West")
    q = AggregateQuery(group_by=("Date",), agg_fn="sum", measure="Sales",
                       filters=(pred,), temporal_bin="month")
    rows = aggregate(superstore, q)
    want = scan_aggregate(
        superstore, ["Date"], "sum", "Sales",
        row_filter=lambda i: superstore.columns["Region"][i] == "West",
        temporal_bin="month")
    assert dict(rows) == {k: pytest.approx(v) for k, v in want.items()}
    keys = [k for k, _ in rows]
    assert keys == sorted(keys)


def test_yoy_change(superstore):
    assert years_present(superstore, "Date") == [2020, 2021]
    rows = year_over_year_change(superstore, "Sales", "Date", ("Category",), 2021)
    col = superstore.columns["Date"]
    cur = scan_aggregate(superstore, ["Category"], "sum", "Sales",
                         row_filter=lambda i: col[i].year == 2021)
    prev = scan_aggregate(superstore, ["Category"], "sum", "Sales",
                          row_filter=lambda i: col[i].year == 2020)
    assert {k for k, *_ in rows} == set(cur) | set(prev)
    for key, cur_v, prev_v, change in rows:
        assert cur_v == pytest.approx(cur.get(key, 0.0))
        assert prev_v == pytest.approx(prev.get(key, 0.0))
        assert change == pytest.approx(cur_v - prev_v)


def test_yoy_errors(superstore):
    single = load_csv(b"v,d\n1,2020-01-01\n2,2020-05-01\n")
    with pytest.raises(SingleYearDataset):
        year_over_year_change(single, "v", "d", (), 2020)
    with pytest.raises(YearOutOfRange):
        year_over_year_change(superstore, "Sales", "Date", (), 1999)


def test_predicate_ops():
    assert Predicate("a", "=", "x").matches("x")
    assert not Predicate("a", "=", "x").matches("y")
    assert Predicate("a", "in", ("x", "y")).matches("y")
    assert Predicate("a", "range", (1, 5)).matches(3)
    assert not Predicate("a", "range", (1, 5)).matches(9)


# ---------------------------------------------------------------------------
# properties

simple_cell = st.one_of(
    st.integers(-100, 100).map(str),
    st.sampled_from(["x", "y", "z", "Texas", "2020-01-02"]),
)


@given(st.lists(st.lists(simple_cell, min_size=3, max_size=3),
                min_size=2, max_size=40), st.randoms())
@settings(max_examples=50, deadline=None)
def test_inference_row_order_invariant(rows, rnd):
    header = "a,b,c"
    csv1 = "\n".join([header] + [",".join(r) for r in rows]) + "\n"
    shuffled = list(rows)
    rnd.shuffle(shuffled)
    csv2 = "\n".join([header] + [",".join(r) for r in shuffled]) + "\n"
    d1 = load_csv(csv1.encode())
    d2 = load_csv(csv2.encode())
    assert [a.attr_type for a in d1.attributes] == [a.attr_type for a in d2.attributes]


@given(st.lists(st.tuples(st.sampled_from("pqr"),
                          st.floats(-1e6, 1e6)),
                min_size=1, max_size=200))
@settings(max_examples=60, deadline=None)
def test_group_sums_conserve_total(pairs):
    lines = ["g,v"] + [f"{g},{v!r}" for g, v in pairs]
    ds = load_csv(("\n".join(lines) + "\n").encode())
    if ds.attribute("v").attr_type is not AttrType.QUANTITATIVE:
        return
    rows = aggregate(ds, AggregateQuery(group_by=("g",), agg_fn="sum", measure="v"))
    assert sum(v for _, v in rows) == pytest.approx(sum(v for _, v in pairs), rel=1e-9)


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_yoy_plus_previous_equals_current(seed):
    ds = load_csv(superstore_csv(rows=80, seed=seed))
    years = years_present(ds, "Date")
    if 2020 not in years or 2021 not in years:
        return
    rows = year_over_year_change(ds, "Sales", "Date", (), 2021)
    (_, cur_v, prev_v, change), = rows
    col = ds.columns["Date"]
    cur = sum(v for v, d in zip(ds.columns["Sales"], col) if d.year == 2021)
    prev = sum(v for v, d in zip(ds.columns["Sales"], col) if d.year == 2020)
    assert cur_v == pytest.approx(cur, rel=1e-9)
    assert change == pytest.approx(cur - prev, rel=1e-9)
