import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import oracle_select_display_set, random_csv

from medley.canvas import CanvasElement, CanvasState
from medley.catalog import Intent, default_catalog, enumerate_attribute_sets, populate_collection
from medley.dataset import load_csv
from medley.engine import (
    AttrsOfInterest,
    EngineConfig,
    UserInput,
    attr_match,
    attrs_of_interest,
    coverage,
    implicit_attributes,
    rank_collections,
    recommend_collections,
    select_display_set,
    unsatisfiable_templates,
)
from medley.specs import ChartKind, ViewSpec, WidgetSpec

CATALOG = default_catalog()


def view(kind, *attrs, agg="sum"):
    return ViewSpec(chart_kind=kind, attrs=tuple(attrs), agg_fn=agg)


def canvas_with(*specs):
    state = CanvasState()
    for i, spec in enumerate(specs):
        state.add(CanvasElement(id=f"e{i}", spec=spec))
    return state


SALES_SUMMARY = view(ChartKind.DATA_SUMMARY, ("measure", "Sales"))
SALES_MAP = view(ChartKind.MAP, ("measure", "Sales"), ("geo", "State"))


def test_implicit_attributes_skip_widgets(superstore):
    canvas = canvas_with(SALES_MAP, WidgetSpec(widget_kind="yearPicker", attr="Date"))
    assert implicit_attributes(canvas) == ("Sales", "State")


def test_attrs_of_interest_dedupes(superstore):
    canvas = canvas_with(SALES_SUMMARY, SALES_MAP)
    interest = attrs_of_interest(UserInput(explicit_attrs=("Sales",)), canvas)
    assert interest.explicit == ("Sales",)
    assert interest.implicit == ("State",)
    assert interest.union == ("Sales", "State")


def test_attr_match_excludes_temporal_primaries(superstore):
    ch1 = next(t for t in CATALOG if t.code == "CH1")
    coll = populate_collection(ch1, {"Q": "Profit", "T": "Date", "C1": None,
                                     "C2": None, "C3": None, "C4": None,
                                     "G": None}, superstore)
    interest = AttrsOfInterest(explicit=("Profit",), implicit=())
    match, explicit_match = attr_match(coll, interest)
    assert match == 1.0 and explicit_match == 1.0


def test_attr_match_partial(superstore):
    ch2 = next(t for t in CATALOG if t.code == "CH2")
    coll = populate_collection(ch2, {"Q1": "Profit", "Q2": "Sales", "T": "Date",
                                     "C1": None, "C2": None}, superstore)
    interest = AttrsOfInterest(explicit=("Profit",), implicit=("Sales",))
    match, explicit_match = attr_match(coll, interest)
    assert match == 1.0
    assert explicit_match == 0.5


def test_type_jaccard_draft_flag(superstore):
    # earlier formulation: multiset Jaccard over primary slot types
    ch1 = next(t for t in CATALOG if t.code == "CH1")
    ch2 = next(t for t in CATALOG if t.code == "CH2")
    c1 = populate_collection(ch1, {"Q": "Profit", "T": "Date", "C1": None,
                                   "C2": None, "C3": None, "C4": None,
                                   "G": None}, superstore)
    c2 = populate_collection(ch2, {"Q1": "Profit", "Q2": "Sales", "T": "Date",
                                   "C1": None, "C2": None}, superstore)
    interest = AttrsOfInterest(explicit=("Profit",), implicit=())
    cfg = EngineConfig(draft_type_jaccard=True)
    m1, _ = attr_match(c1, interest, cfg, superstore)
    m2, _ = attr_match(c2, interest, cfg, superstore)
    assert m1 == pytest.approx(0.5)     # {Q} vs {Q,T}
    assert m2 == pytest.approx(1 / 3)   # {Q} vs {Q,Q,T}


def test_coverage_counts_structural_matches(superstore):
    m1 = next(t for t in CATALOG if t.code == "M1")
    coll = populate_collection(m1, {"Q": "Sales", "C1": "Category", "C2": None,
                                    "C3": None, "G": "State", "T": None},
                               superstore)
    assert len(coll.views) == 3  # summary, bar, map
    empty = CanvasState()
    assert coverage(coll, empty) == 0.0
    partial = canvas_with(SALES_SUMMARY)
    assert coverage(coll, partial) == pytest.approx(1 / 3)
    # attribute order inside the spec must not matter
    reordered = canvas_with(view(ChartKind.MAP, ("geo", "State"), ("measure", "Sales")))
    assert coverage(coll, reordered) == pytest.approx(1 / 3)


def test_coverage_zero_when_fully_contained(superstore):
    m1 = next(t for t in CATALOG if t.code == "M1")
    coll = populate_collection(m1, {"Q": "Sales", "C1": None, "C2": None,
                                    "C3": None, "G": "State", "T": None},
                               superstore)
    full = canvas_with(*coll.views)
    assert coverage(coll, full) == 0.0


def test_select_display_set_matches_oracle(superstore):
    template = next(t for t in CATALOG if t.code == "M3")
    attrs = [a.name for a in superstore.attributes]
    candidates = enumerate_attribute_sets(template, [], attrs, superstore)
    got, got_mean = select_display_set(template, candidates, superstore)
    want, want_mean = oracle_select_display_set(template, candidates, superstore)
    assert got == want
    assert got_mean == pytest.approx(want_mean, abs=1e-9)


def test_select_display_set_tie_keeps_first(superstore):
    # identical candidates tie exactly; earliest must win
    template = next(t for t in CATALOG if t.code == "M3")
    cand = {"Q": "Sales", "C1": "Category", "C2": "Segment"}
    got, _ = select_display_set(template, [dict(cand), dict(cand)], superstore)
    assert got == cand


def test_rank_collections_orders_by_relevance(superstore):
    recs = recommend_collections(
        superstore, CATALOG,
        UserInput(explicit_attrs=("Profit",),
                  selected_intents=(Intent.CHANGE_ANALYSIS,)),
        canvas_with(SALES_SUMMARY, SALES_MAP))
    assert [r.collection.template_code for r in recs] == ["CH1", "CH2"]
    assert recs[0].relevance >= recs[1].relevance
    for r in recs:
        assert r.relevance == pytest.approx(r.attr_match + r.coverage)


def test_round_robin_cold_start(superstore):
    recs = recommend_collections(superstore, CATALOG, UserInput(), CanvasState())
    assert len(recs) == 10
    first_intents = [r.collection.intent for r in recs[:4]]
    assert first_intents == [Intent.DISTRIBUTION_ANALYSIS, Intent.MEASURE_ANALYSIS,
                             Intent.CATEGORY_ANALYSIS, Intent.CHANGE_ANALYSIS]
    tail = [r.mean_interestingness for r in recs[4:]]
    assert tail == sorted(tail, reverse=True)


def test_intent_filter(superstore):
    recs = recommend_collections(
        superstore, CATALOG,
        UserInput(selected_intents=(Intent.DISTRIBUTION_ANALYSIS,)),
        canvas_with(SALES_SUMMARY))
    assert [r.collection.intent for r in recs] == [Intent.DISTRIBUTION_ANALYSIS]


def test_rank_views_puts_canvas_duplicates_last(superstore):
    recs = recommend_collections(
        superstore, CATALOG,
        UserInput(explicit_attrs=("Sales",),
                  selected_intents=(Intent.MEASURE_ANALYSIS,)),
        canvas_with(SALES_SUMMARY))
    for r in recs:
        dup_flags = [v.identity() in {SALES_SUMMARY.identity()}
                     for v in r.ranked_views]
        # once a duplicate appears, everything after is also a duplicate
        if True in dup_flags:
            assert all(dup_flags[dup_flags.index(True):])


def test_unsatisfiable_templates_diagnostics():
    ds = load_csv(b"g,v\na,1\nb,2\n")
    missing = unsatisfiable_templates(ds, CATALOG, UserInput())
    codes = {m.split(":")[0] for m in missing}
    # every change template needs a temporal attribute this dataset lacks
    assert {"CH1", "CH2"} <= codes


def test_recommend_is_pure(superstore):
    user = UserInput(explicit_attrs=("Profit",))
    canvas = canvas_with(SALES_SUMMARY)
    before = canvas.to_json()
    r1 = recommend_collections(superstore, CATALOG, user, canvas)
    r2 = recommend_collections(superstore, CATALOG, user, canvas)
    assert [a.to_json() for a in r1] == [a.to_json() for a in r2]
    assert canvas.to_json() == before


# ---------------------------------------------------------------------------
# properties

@given(st.integers(0, 10_000))
@settings(max_examples=25, deadline=None)
def test_relevance_decomposition_property(seed):
    ds = load_csv(random_csv(seed, max_attrs=6, max_rows=60))
    explicit = (ds.attributes[0].name,)
    recs = recommend_collections(ds, CATALOG, UserInput(explicit_attrs=explicit),
                                 CanvasState())
    for r in recs:
        assert 0.0 <= r.attr_match <= 1.0
        assert 0.0 <= r.coverage <= 1.0
        assert r.relevance == pytest.approx(r.attr_match + r.coverage)
    rels = [r.relevance for r in recs]
    assert rels == sorted(rels, reverse=True)
