"""Chart-spec emission (Vega-Lite v5) and dashboard export (JSON / HTML).

Visual-consistency rules applied here: one color per quantitative attribute,
one color per categorical value, a fixed diverging red-blue scale for views
that encode change, zero baselines on quantitative positional axes, and a
uniform descending sort for bars.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence

from . import errors
from .canvas import CanvasState
from .dataset import (AggregateQuery, AttrType, Dataset, years_present,
                      year_over_year_change, aggregate)
from .interactions import InteractionLink
from .specs import ChartKind, ViewSpec, WidgetKind, WidgetSpec

VEGA_LITE_SCHEMA_URL = "https://vega.github.io/schema/vega-lite/v5.json"
EXPORT_FORMAT_VERSION = "1.0"

SCATTER_ROW_CAP = 5000

QUANT_PALETTE = (
    "#4c78a8", "#f58518", "#e45756", "#72b7b2", "#54a24b",
    "#eeca3b", "#b279a2", "#ff9da6", "#9d755d", "#bab0ac",
)

CATEGORY_PALETTE = (
    "#1f77b4", "#aec7e8", "#ff7f0e", "#ffbb78", "#2ca02c",
    "#98df8a", "#d62728", "#ff9896", "#9467bd", "#c5b0d5",
    "#8c564b", "#c49c94", "#e377c2", "#f7b6d2", "#7f7f7f",
    "#c7c7c7", "#bcbd22", "#dbdb8d", "#17becf", "#9edae5",
)

CHANGE_SCALE = {"scheme": "redblue", "domainMid": 0}

MAX_CATEGORY_VALUES = 200  # per-attribute cap on distinct colored values


def _lighten(hex_color: str, amount: float) -> str:
    r = int(hex_color[1:3], 16)
    g = int(hex_color[3:5], 16)
    b = int(hex_color[5:7], 16)
    mix = lambda c: int(round(c + (255 - c) * amount))
    return f"#{mix(r):02x}{mix(g):02x}{mix(b):02x}"


def _cycle(palette: Sequence[str], index: int) -> str:
    base = palette[index % len(palette)]
    round_ = index // len(palette)
    if round_ == 0:
        return base
    return _lighten(base, min(0.25 * round_, 0.75))


@dataclass(frozen=True)
class ColorAssignment:
    quant_colors: dict[str, str]
    category_colors: dict[tuple[str, str], str]
    change_scale: dict = field(default_factory=lambda: dict(CHANGE_SCALE))

    def values_for(self, attr: str) -> tuple[list[str], list[str]]:
        """(domain, range) lists for one categorical attribute."""
        domain, range_ = [], []
        for (a, value), color in self.category_colors.items():
            if a == attr:
                domain.append(value)
                range_.append(color)
        return domain, range_


def assign_colors(dataset: Dataset) -> ColorAssignment:
    """Deterministic per-dataset palette: same dataset, same colors."""
    quant: dict[str, str] = {}
    for i, name in enumerate(dataset.attrs_of_type(AttrType.QUANTITATIVE)):
        quant[name] = _cycle(QUANT_PALETTE, i)

    category: dict[tuple[str, str], str] = {}
    idx = 0
    for meta in dataset.attributes:
        if meta.attr_type not in (AttrType.CATEGORICAL, AttrType.GEOGRAPHIC):
            continue
        seen: list[str] = []
        for v in dataset.column(meta.name):
            if v is None or v in seen:
                continue
            seen.append(v)  # type: ignore[arg-type]
            if len(seen) > MAX_CATEGORY_VALUES:
                break
            category[(meta.name, v)] = _cycle(CATEGORY_PALETTE, idx)  # type: ignore[index]
            idx += 1
    return ColorAssignment(quant_colors=quant, category_colors=category)


def is_change_view(view: ViewSpec) -> bool:
    return view.agg_fn == "yoy"


def _change_year(dataset: Dataset, temporal: str) -> int:
    yrs = years_present(dataset, temporal)
    for y in reversed(yrs):
        if y - 1 in yrs:
            return y
    raise errors.SingleYearDataset(temporal)


def _quant_axis(field_name: str, title: Optional[str] = None) -> dict:
    axis = {"field": field_name, "type": "quantitative", "scale": {"zero": True}}
    if title:
        axis["title"] = title
    return axis


def _category_color(attr: str, colors: ColorAssignment) -> dict:
    domain, range_ = colors.values_for(attr)
    enc = {"field": attr, "type": "nominal"}
    if domain:
        enc["scale"] = {"domain": domain, "range": range_}
    return enc


def _agg_rows(view: ViewSpec, dataset: Dataset, dims: Sequence[str]) -> list[dict]:
    measure = view.role("measure")
    agg_fn = view.agg_fn if (measure is not None and view.agg_fn != "count") else "count"
    q = AggregateQuery(group_by=tuple(dims), agg_fn=agg_fn, measure=measure)
    rows = []
    for key, value in aggregate(dataset, q):
        row = {dim: _json_value(part) for dim, part in zip(dims, key)}
        row["value"] = value
        rows.append(row)
    return rows


def _yoy_rows(view: ViewSpec, dataset: Dataset, dims: Sequence[str]) -> list[dict]:
    measure = view.role("measure")
    temporal = view.role("temporal")
    year = _change_year(dataset, temporal)
    rows = []
    for key, cur, prev, change in year_over_year_change(dataset, measure, temporal, dims, year):
        row = {dim: _json_value(part) for dim, part in zip(dims, key)}
        row.update({"currentYear": cur, "previousYear": prev, "change": change})
        rows.append(row)
    return rows


def _json_value(v):
    if isinstance(v, dt.date):
        return v.isoformat()
    return v


def _value_title(view: ViewSpec) -> str:
    measure = view.role("measure")
    if measure is None or view.agg_fn == "count":
        return "Count of records"
    return f"{view.agg_fn.capitalize()} of {measure}"


def emit_chart_spec(view: ViewSpec, dataset: Dataset, colors: ColorAssignment) -> dict:
    """Self-contained Vega-Lite v5 spec with inlined aggregated data."""
    kind = view.chart_kind
    measure = view.role("measure")

    if kind is ChartKind.DATA_SUMMARY:
        if is_change_view(view):
            temporal = view.role("temporal")
            year = _change_year(dataset, temporal)
            rows = year_over_year_change(dataset, measure, temporal, [], year)
            value = rows[0][3] if rows else 0.0
            title = f"Change in total {measure} ({year} vs. {year - 1})"
        else:
            col = [v for v in dataset.column(measure) if v is not None]
            value = float(sum(col))  # type: ignore[arg-type]
            title = f"Total {measure}"
        return {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": title,
            "data": {"values": [{"value": value}]},
            "mark": {"type": "text", "fontSize": 32,
                     "color": colors.quant_colors.get(measure, "#333333")},
            "encoding": {"text": {"field": "value", "type": "quantitative",
                                  "format": ",.2f"}},
        }

    if kind in (ChartKind.BAR, ChartKind.DIFFERENCE_BAR):
        dim = view.role("dimension")
        if is_change_view(view):
            rows = _yoy_rows(view, dataset, [dim])
            value_field, value_title = "change", f"Change in {measure}"
        else:
            rows = _agg_rows(view, dataset, [dim])
            rows.sort(key=lambda r: -r["value"])
            if view.limit is not None:
                rows = rows[:view.limit]
            value_field, value_title = "value", _value_title(view)
        spec = {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": view.title(),
            "data": {"values": rows},
            "mark": {"type": "bar"},
            "encoding": {
                "x": {"field": dim, "type": "nominal", "sort": "-y"},
                "y": {**_quant_axis(value_field, value_title)},
            },
        }
        if is_change_view(view):
            spec["encoding"]["color"] = {
                "field": value_field, "type": "quantitative",
                "scale": dict(colors.change_scale),
            }
        elif measure is not None and measure in colors.quant_colors:
            spec["mark"]["color"] = colors.quant_colors[measure]
        else:
            spec["encoding"]["color"] = _category_color(dim, colors)
        return spec

    if kind is ChartKind.GROUPED_BAR:
        dim = view.role("dimension")
        measure2 = view.role("measure2")
        group_dim = view.role("color")
        if measure2 is not None:
            rows = []
            for m in (measure, measure2):
                for r in _agg_rows(ViewSpec(kind, (("measure", m), ("dimension", dim)),
                                            view.agg_fn), dataset, [dim]):
                    rows.append({dim: r[dim], "series": m, "value": r["value"]})
            color = {"field": "series", "type": "nominal",
                     "scale": {"domain": [measure, measure2],
                               "range": [colors.quant_colors.get(measure, QUANT_PALETTE[0]),
                                         colors.quant_colors.get(measure2, QUANT_PALETTE[1])]}}
            offset_field = "series"
        else:
            rows = _agg_rows(view, dataset, [dim, group_dim])
            color = _category_color(group_dim, colors)
            offset_field = group_dim
        return {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": view.title(),
            "data": {"values": rows},
            "mark": {"type": "bar"},
            "encoding": {
                "x": {"field": dim, "type": "nominal", "sort": "-y"},
                "xOffset": {"field": offset_field},
                "y": {**_quant_axis("value", _value_title(view))},
                "color": color,
            },
        }

    if kind is ChartKind.STACKED_BAR:
        dim = view.role("dimension")
        color_attr = view.role("color")
        rows = _agg_rows(view, dataset, [dim, color_attr])
        return {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": view.title(),
            "data": {"values": rows},
            "mark": {"type": "bar"},
            "encoding": {
                "x": {"field": dim, "type": "nominal", "sort": "-y"},
                "y": {**_quant_axis("value", _value_title(view)), "aggregate": "sum"},
                "color": _category_color(color_attr, colors),
            },
        }

    if kind is ChartKind.DONUT:
        color_attr = view.role("color")
        rows = _agg_rows(view, dataset, [color_attr])
        rows.sort(key=lambda r: -r["value"])
        return {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": view.title(),
            "data": {"values": rows},
            "mark": {"type": "arc", "innerRadius": 40},
            "encoding": {
                "theta": {"field": "value", "type": "quantitative"},
                "color": _category_color(color_attr, colors),
            },
        }

    if kind is ChartKind.LINE:
        temporal = view.role("temporal")
        measure2 = view.role("measure2")
        measures = [m for m in (measure, measure2) if m is not None]
        rows = []
        for m in measures:
            q = AggregateQuery(group_by=(temporal,), agg_fn=view.agg_fn,
                               measure=m, temporal_bin="month")
            for key, value in aggregate(dataset, q):
                rows.append({"period": f"{key[0]}-01", "series": m, "value": value})
        spec = {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": view.title(),
            "data": {"values": rows},
            "mark": {"type": "line", "point": True},
            "encoding": {
                "x": {"field": "period", "type": "temporal"},
                "y": {**_quant_axis("value", _value_title(view))},
            },
        }
        if len(measures) > 1:
            spec["encoding"]["color"] = {
                "field": "series", "type": "nominal",
                "scale": {"domain": measures,
                          "range": [colors.quant_colors.get(m, QUANT_PALETTE[0])
                                    for m in measures]},
            }
        else:
            spec["mark"]["color"] = colors.quant_colors.get(measure, QUANT_PALETTE[0])
        return spec

    if kind is ChartKind.MAP:
        geo = view.role("geo")
        if is_change_view(view):
            rows = _yoy_rows(view, dataset, [geo])
            value_field = "change"
            color = {"field": value_field, "type": "quantitative",
                     "scale": dict(colors.change_scale),
                     "title": f"Change in {measure}"}
        else:
            rows = _agg_rows(view, dataset, [geo])
            value_field = "value"
            color = {"field": value_field, "type": "quantitative",
                     "title": _value_title(view)}
        # region-label map: regions on the y axis, value encoded by color
        return {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": view.title(),
            "data": {"values": rows},
            "mark": {"type": "rect"},
            "encoding": {
                "y": {"field": geo, "type": "nominal", "sort": "color"},
                "color": color,
            },
        }

    if kind is ChartKind.SCATTER:
        x_attr, y_attr = view.role("x"), view.role("y")
        cx, cy = dataset.column(x_attr), dataset.column(y_attr)
        rows = [{x_attr: float(a), y_attr: float(b)}
                for a, b in zip(cx, cy) if a is not None and b is not None]
        if len(rows) > SCATTER_ROW_CAP:
            step = len(rows) / SCATTER_ROW_CAP
            rows = [rows[int(i * step)] for i in range(SCATTER_ROW_CAP)]
        return {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": view.title(),
            "data": {"values": rows},
            "mark": {"type": "point", "filled": True, "opacity": 0.6},
            "encoding": {
                "x": {**_quant_axis(x_attr)},
                "y": {**_quant_axis(y_attr)},
            },
        }

    if kind is ChartKind.HISTOGRAM:
        values = [float(v) for v in dataset.column(measure) if v is not None]
        return {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": view.title(),
            "data": {"values": [{measure: v} for v in values]},
            "mark": {"type": "bar",
                     "color": colors.quant_colors.get(measure, QUANT_PALETTE[0])},
            "encoding": {
                "x": {"field": measure, "type": "quantitative",
                      "bin": True, "scale": {"zero": True}},
                "y": {"aggregate": "count", "type": "quantitative",
                      "scale": {"zero": True}},
            },
        }

    if kind is ChartKind.HEATMAP:
        d1, d2 = view.role("dimension"), view.role("dimension2")
        rows = _agg_rows(view, dataset, [d1, d2])
        return {
            "$schema": VEGA_LITE_SCHEMA_URL,
            "title": view.title(),
            "data": {"values": rows},
            "mark": {"type": "rect"},
            "encoding": {
                "x": {"field": d1, "type": "nominal"},
                "y": {"field": d2, "type": "nominal"},
                "color": {"field": "value", "type": "quantitative",
                          "title": _value_title(view)},
            },
        }

    raise errors.UnsupportedChartKind(str(kind))


def emit_widget_spec(widget: WidgetSpec, dataset: Dataset) -> dict:
    """Renderer-ready description of a filter widget (not a Vega-Lite spec)."""
    meta = dataset.attribute(widget.attr)
    spec: dict = {"widget": widget.widget_kind.value, "attr": widget.attr,
                  "title": widget.title()}
    if widget.widget_kind is WidgetKind.YEAR_PICKER:
        spec["options"] = years_present(dataset, widget.attr)
    elif widget.widget_kind is WidgetKind.RANGE_SLIDER:
        if meta.attr_type is AttrType.TEMPORAL and meta.temporal_range:
            spec["range"] = [d.isoformat() for d in meta.temporal_range]
        elif meta.numeric_range:
            spec["range"] = list(meta.numeric_range)
    else:
        values = sorted({v for v in dataset.column(widget.attr) if v is not None},
                        key=str)[:50]
        spec["options"] = [_json_value(v) for v in values]
    return spec


def vega_lite_schema() -> dict:
    text = resources.files("medley.resources").joinpath("vega-lite-schema.json") \
        .read_text("utf-8")
    return json.loads(text)


def dashboard_document(canvas: CanvasState, links: Sequence[InteractionLink],
                       dataset_id: str = "") -> dict:
    if not canvas.elements:
        raise errors.EmptyCanvas()
    return {
        "version": EXPORT_FORMAT_VERSION,
        "datasetId": dataset_id,
        "elements": [el.to_json() for el in canvas.elements],
        "links": [link.to_json() for link in links],
    }


def canvas_from_document(doc: dict) -> tuple[CanvasState, list[InteractionLink]]:
    canvas = CanvasState.from_json(doc)
    links = [InteractionLink.from_json(l) for l in doc.get("links", [])]
    return canvas, links


def export_dashboard(canvas: CanvasState, links: Sequence[InteractionLink],
                     fmt: str, dataset: Optional[Dataset] = None) -> bytes:
    """Serialize the canvas: ``json`` round-trips losslessly, ``html`` is a
    standalone single-file bundle (vendored JS, no network)."""
    doc = dashboard_document(canvas, links, dataset.id if dataset else "")
    if fmt == "json":
        return (json.dumps(doc, indent=2, sort_keys=False) + "\n").encode("utf-8")
    if fmt == "html":
        if dataset is None:
            raise errors.ValidationError("html export requires the dataset")
        return _export_html(canvas, links, dataset)
    raise errors.ValidationError(f"unknown export format {fmt!r}")


def _export_html(canvas: CanvasState, links: Sequence[InteractionLink],
                 dataset: Dataset) -> bytes:
    colors = assign_colors(dataset)
    cells = []
    specs: dict[str, dict] = {}
    for el in canvas.elements:
        if isinstance(el.spec, WidgetSpec):
            specs[el.id] = {"widget": emit_widget_spec(el.spec, dataset)}
        else:
            specs[el.id] = emit_chart_spec(el.spec, dataset, colors)
        g = el.geometry
        style = (f"grid-column: {g.x + 1} / span {max(g.w, 1)};"
                 f" grid-row: {g.y + 1} / span {max(g.h, 1)};")
        cells.append(f'<div class="cell" id="el-{el.id}" style="{style}"></div>')

    js_dir = resources.files("medley.resources").joinpath("js")
    bundles = "\n".join(
        f"<script>{js_dir.joinpath(name).read_text('utf-8')}</script>"
        for name in ("vega.min.js", "vega-lite.min.js", "vega-embed.min.js")
    )
    payload = json.dumps({
        "specs": specs,
        "links": [l.to_json() for l in links if l.valid],
    })
    script = """
const STATE = JSON.parse(document.getElementById('dashboard-state').textContent);
const viewHandles = {};
function dimsOf(spec) {
  const enc = spec.encoding || {};
  return Object.values(enc).filter(e => e && e.type === 'nominal' && e.field)
    .map(e => e.field);
}
async function renderAll() {
  for (const [id, spec] of Object.entries(STATE.specs)) {
    const node = document.getElementById('el-' + id);
    if (spec.widget) {
      node.innerHTML = '<div class="widget"><b>' + spec.widget.title + '</b></div>';
      continue;
    }
    const res = await vegaEmbed(node, spec, {actions: false});
    viewHandles[id] = res.view;
    res.view.addEventListener('click', (event, item) => {
      if (!item || !item.datum) return;
      applyEvent(id, item.datum, spec);
    });
  }
}
function applyEvent(sourceId, datum, sourceSpec) {
  const fields = dimsOf(sourceSpec);
  for (const link of STATE.links) {
    if (link.sourceId !== sourceId) continue;
    const targetSpec = STATE.specs[link.targetId];
    if (!targetSpec || targetSpec.widget) continue;
    const node = document.getElementById('el-' + link.targetId);
    const shared = fields.filter(f => JSON.stringify(targetSpec).includes('"' + f + '"'));
    if (!shared.length) continue;
    const spec = JSON.parse(JSON.stringify(targetSpec));
    const rows = spec.data.values;
    if (link.activeMode === 'filter') {
      spec.data.values = rows.filter(r => shared.every(f => r[f] === undefined || r[f] === datum[f]));
    } else {
      spec.data.values = rows.map(r => Object.assign({}, r, {
        _dim: shared.every(f => r[f] === undefined || r[f] === datum[f]) ? 1 : 0.25}));
      spec.encoding = Object.assign({}, spec.encoding,
        {opacity: {field: '_dim', type: 'quantitative', legend: null,
                   scale: {domain: [0, 1], range: [0, 1], zero: true}}});
    }
    vegaEmbed(node, spec, {actions: false});
  }
}
renderAll();
"""
    html = f"""<!DOCTYPE html>
<html>
<head>
<meta charset="utf-8">
<title>Dashboard export</title>
<style>
body {{ font-family: sans-serif; margin: 1rem; }}
.grid {{ display: grid; grid-template-columns: repeat(12, 1fr); gap: 8px; }}
.cell {{ border: 1px solid #ddd; border-radius: 4px; padding: 4px; min-height: 80px; }}
.widget {{ padding: 8px; }}
</style>
{bundles}
</head>
<body>
<div class="grid">
{''.join(cells)}
</div>
<script type="application/json" id="dashboard-state">{payload}</script>
<script>{script}</script>
</body>
</html>
"""
    return html.encode("utf-8")
