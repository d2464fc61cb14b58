import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from medley.canvas import CanvasElement, CanvasState
from medley.errors import ModeNotAllowed, SelfLink, UnknownSource
from medley.interactions import (
    InteractionLink,
    InteractionMode,
    SelectionEvent,
    apply_event,
    classify_pair,
    infer_links,
    set_link_mode,
)
from medley.specs import ChartKind, ViewSpec, WidgetSpec


def el(eid, kind, *attrs):
    return CanvasElement(id=eid, spec=ViewSpec(chart_kind=kind, attrs=tuple(attrs)))


def widget(eid, attr="Date", kind="yearPicker"):
    return CanvasElement(id=eid, spec=WidgetSpec(widget_kind=kind, attr=attr))


BAR_CAT = el("bar", ChartKind.BAR, ("dimension", "Category"), ("measure", "Sales"))
BAR_CAT2 = el("bar2", ChartKind.BAR, ("dimension", "Category"), ("measure", "Profit"))
BAR_SEG = el("barSeg", ChartKind.BAR, ("dimension", "Segment"), ("measure", "Sales"))
SUMMARY = el("sum", ChartKind.DATA_SUMMARY, ("measure", "Sales"))
SCATTER = el("sc", ChartKind.SCATTER, ("x", "Sales"), ("y", "Profit"))
YEAR_WIDGET = widget("yw")


def test_summary_source_is_invalid():
    link = classify_pair(SUMMARY, BAR_CAT)
    assert not link.valid
    assert link.allowed_modes == ()
    assert link.active_mode is None


def test_widget_target_is_invalid():
    assert not classify_pair(BAR_CAT, YEAR_WIDGET).valid


def test_shared_dimension_defaults_to_highlight():
    link = classify_pair(BAR_CAT, BAR_CAT2)
    assert set(link.allowed_modes) == {InteractionMode.HIGHLIGHT, InteractionMode.FILTER}
    assert link.active_mode is InteractionMode.HIGHLIGHT


def test_scatter_target_defaults_to_highlight():
    link = classify_pair(BAR_SEG, SCATTER)
    assert link.active_mode is InteractionMode.HIGHLIGHT


def test_no_shared_dimension_is_filter_only():
    link = classify_pair(BAR_CAT, BAR_SEG)
    assert link.allowed_modes == (InteractionMode.FILTER,)
    assert link.active_mode is InteractionMode.FILTER


def test_widget_attr_acts_as_dimension():
    date_line = el("line", ChartKind.LINE, ("measure", "Sales"), ("temporal", "Date"))
    link = classify_pair(widget("w", attr="Date"), date_line)
    assert link.active_mode is InteractionMode.HIGHLIGHT
    other = classify_pair(widget("w", attr="Date"), BAR_CAT)
    assert other.allowed_modes == (InteractionMode.FILTER,)


def test_self_link_rejected():
    with pytest.raises(SelfLink):
        classify_pair(BAR_CAT, BAR_CAT)


def test_set_link_mode():
    link = classify_pair(BAR_CAT, BAR_SEG)
    with pytest.raises(ModeNotAllowed):
        set_link_mode(link, InteractionMode.HIGHLIGHT)
    both = classify_pair(BAR_CAT, BAR_CAT2)
    assert set_link_mode(both, InteractionMode.FILTER).active_mode is InteractionMode.FILTER


def test_infer_links_covers_all_ordered_pairs():
    canvas = CanvasState()
    for e in (BAR_CAT, BAR_CAT2, SUMMARY, YEAR_WIDGET):
        canvas.add(e)
    links = infer_links(canvas)
    n = len(canvas.elements)
    assert len(links) == n * (n - 1)
    pairs = {(l.source_id, l.target_id) for l in links}
    assert len(pairs) == n * (n - 1)


def test_infer_links_idempotent_and_respects_overrides():
    canvas = CanvasState()
    canvas.add(BAR_CAT)
    canvas.add(BAR_CAT2)
    canvas.link_overrides[("bar", "bar2")] = "filter"
    first = infer_links(canvas)
    second = infer_links(canvas)
    assert [l.to_json() for l in first] == [l.to_json() for l in second]
    link = next(l for l in first if (l.source_id, l.target_id) == ("bar", "bar2"))
    assert link.active_mode is InteractionMode.FILTER


def test_invalid_override_is_ignored():
    canvas = CanvasState()
    canvas.add(BAR_CAT)
    canvas.add(BAR_SEG)
    canvas.link_overrides[("bar", "barSeg")] = "highlight"  # not allowed
    link = next(l for l in infer_links(canvas)
                if (l.source_id, l.target_id) == ("bar", "barSeg"))
    assert link.active_mode is InteractionMode.FILTER


def test_apply_event_effects():
    canvas = CanvasState()
    for e in (BAR_CAT, BAR_CAT2, BAR_SEG, SUMMARY):
        canvas.add(e)
    links = infer_links(canvas)
    event = SelectionEvent(source_id="bar", selected=(("Category", "Furniture"),))
    effects = {e.target_id: e for e in apply_event(event, links, canvas)}
    assert effects["bar2"].effect == "highlight"   # shared dimension
    assert effects["barSeg"].effect == "filter"    # no shared dimension
    pred = effects["bar2"].predicates[0]
    assert (pred.attribute, pred.op, pred.value) == ("Category", "=", "Furniture")


def test_apply_event_multi_value_uses_in():
    canvas = CanvasState()
    canvas.add(BAR_CAT)
    canvas.add(BAR_CAT2)
    links = infer_links(canvas)
    event = SelectionEvent(source_id="bar",
                           selected=(("Category", "A"), ("Category", "B")))
    (effect,) = apply_event(event, links, canvas)
    assert effect.predicates[0].op == "in"
    assert effect.predicates[0].value == ("A", "B")


def test_apply_event_empty_selection_is_noop():
    canvas = CanvasState()
    canvas.add(BAR_CAT)
    canvas.add(BAR_CAT2)
    links = infer_links(canvas)
    effects = apply_event(SelectionEvent(source_id="bar"), links, canvas)
    assert [e.effect for e in effects] == ["noop"]


def test_apply_event_unknown_source():
    canvas = CanvasState()
    canvas.add(BAR_CAT)
    with pytest.raises(UnknownSource):
        apply_event(SelectionEvent(source_id="ghost"), [], canvas)


# ---------------------------------------------------------------------------
# properties

_KINDS = [ChartKind.DATA_SUMMARY, ChartKind.BAR, ChartKind.GROUPED_BAR,
          ChartKind.STACKED_BAR, ChartKind.DONUT, ChartKind.LINE, ChartKind.MAP,
          ChartKind.SCATTER, ChartKind.HISTOGRAM, ChartKind.HEATMAP]


def _element(eid, kind, shared):
    dim = "D" if shared else f"D_{eid}"
    attrs_by_kind = {
        ChartKind.DATA_SUMMARY: (("measure", "M"),),
        ChartKind.BAR: (("dimension", dim), ("measure", "M")),
        ChartKind.GROUPED_BAR: (("dimension", dim), ("measure", "M")),
        ChartKind.STACKED_BAR: (("dimension", dim), ("color", f"K_{eid}")),
        ChartKind.DONUT: (("color", dim),),
        ChartKind.LINE: (("measure", "M"), ("temporal", dim)),
        ChartKind.MAP: (("measure", "M"), ("geo", dim)),
        ChartKind.SCATTER: (("x", "M"), ("y", "M2")),
        ChartKind.HISTOGRAM: (("measure", "M"),),
        ChartKind.HEATMAP: (("dimension", dim), ("dimension2", f"K_{eid}")),
    }
    return CanvasElement(id=eid, spec=ViewSpec(chart_kind=kind,
                                               attrs=attrs_by_kind[kind]))


@given(st.sampled_from(_KINDS), st.sampled_from(_KINDS), st.booleans())
@settings(max_examples=300, deadline=None)
def test_classification_truth_table_property(src_kind, tgt_kind, shared):
    source = _element("s", src_kind, shared)
    target = _element("t", tgt_kind, shared)
    link = classify_pair(source, target)
    if src_kind is ChartKind.DATA_SUMMARY:
        assert not link.valid
    elif tgt_kind is ChartKind.SCATTER:
        assert link.active_mode is InteractionMode.HIGHLIGHT
    else:
        src_dims = {a for r, a in source.spec.attrs if r not in {"measure", "measure2", "x", "y"}}
        tgt_dims = {a for r, a in target.spec.attrs if r not in {"measure", "measure2", "x", "y"}}
        if src_dims & tgt_dims:
            assert link.active_mode is InteractionMode.HIGHLIGHT
            assert set(link.allowed_modes) == {InteractionMode.HIGHLIGHT,
                                               InteractionMode.FILTER}
        else:
            assert link.allowed_modes == (InteractionMode.FILTER,)
