"""View and widget specifications shared by the catalog, engine, and emitter."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .dataset import AttrType, Dataset, DIMENSION_TYPES


class ChartKind(str, Enum):
    BAR = "bar"
    GROUPED_BAR = "groupedBar"
    STACKED_BAR = "stackedBar"
    DONUT = "donut"
    LINE = "line"
    MAP = "map"
    SCATTER = "scatter"
    HISTOGRAM = "histogram"
    HEATMAP = "heatmap"
    DATA_SUMMARY = "dataSummary"
    DIFFERENCE_BAR = "differenceBar"


class WidgetKind(str, Enum):
    YEAR_PICKER = "yearPicker"
    RANGE_SLIDER = "rangeSlider"
    MULTI_SELECT = "multiSelect"


# Encoding roles a chart kind requires / accepts.
REQUIRED_ROLES: dict[ChartKind, tuple[str, ...]] = {
    ChartKind.BAR: ("dimension",),
    ChartKind.GROUPED_BAR: ("measure", "dimension"),
    ChartKind.STACKED_BAR: ("dimension", "color"),
    ChartKind.DONUT: ("color",),
    ChartKind.LINE: ("measure", "temporal"),
    ChartKind.MAP: ("measure", "geo"),
    ChartKind.SCATTER: ("x", "y"),
    ChartKind.HISTOGRAM: ("measure",),
    ChartKind.HEATMAP: ("dimension", "dimension2"),
    ChartKind.DATA_SUMMARY: ("measure",),
    ChartKind.DIFFERENCE_BAR: ("measure", "dimension", "temporal"),
}

OPTIONAL_ROLES: dict[ChartKind, tuple[str, ...]] = {
    ChartKind.BAR: ("measure",),
    ChartKind.GROUPED_BAR: ("measure2", "color"),
    ChartKind.STACKED_BAR: ("measure",),
    ChartKind.DONUT: ("measure",),
    ChartKind.LINE: ("measure2",),
    ChartKind.MAP: ("temporal",),
    ChartKind.SCATTER: (),
    ChartKind.HISTOGRAM: (),
    ChartKind.HEATMAP: ("measure",),
    ChartKind.DATA_SUMMARY: ("temporal",),
    ChartKind.DIFFERENCE_BAR: (),
}

_QUANT_ROLES = frozenset({"measure", "measure2", "x", "y"})


@dataclass(frozen=True)
class ViewSpec:
    chart_kind: ChartKind
    attrs: tuple[tuple[str, str], ...]  # (role, attribute name), recipe order
    agg_fn: str = "sum"
    limit: Optional[int] = None  # top-N cutoff for sorted bars

    def __post_init__(self):
        # tolerate raw strings at construction time
        object.__setattr__(self, "chart_kind", ChartKind(self.chart_kind))
        object.__setattr__(self, "attrs", tuple(tuple(pair) for pair in self.attrs))

    def role(self, name: str) -> Optional[str]:
        for role, attr in self.attrs:
            if role == name:
                return attr
        return None

    @property
    def attr_names(self) -> tuple[str, ...]:
        seen: list[str] = []
        for _, attr in self.attrs:
            if attr not in seen:
                seen.append(attr)
        return tuple(seen)

    def dimension_attrs(self, dataset: Dataset) -> tuple[str, ...]:
        """Attributes bound to categorical/geographic/temporal encodings."""
        out: list[str] = []
        for _, attr in self.attrs:
            meta = dataset.attribute(attr)
            if meta.attr_type in DIMENSION_TYPES and attr not in out:
                out.append(attr)
        return tuple(out)

    def identity(self) -> tuple:
        """Structural identity used for canvas coverage checks."""
        return (self.chart_kind.value, tuple(sorted(self.attrs)), self.agg_fn)

    def title(self, dataset: Optional[Dataset] = None) -> str:
        kind_names = {
            ChartKind.BAR: "Bar chart", ChartKind.GROUPED_BAR: "Grouped bar chart",
            ChartKind.STACKED_BAR: "Stacked bar chart", ChartKind.DONUT: "Donut chart",
            ChartKind.LINE: "Line chart", ChartKind.MAP: "Map",
            ChartKind.SCATTER: "Scatterplot", ChartKind.HISTOGRAM: "Histogram",
            ChartKind.HEATMAP: "Heatmap", ChartKind.DATA_SUMMARY: "Data summary",
            ChartKind.DIFFERENCE_BAR: "Difference bar chart",
        }
        attrs = ", ".join(self.attr_names)
        return f"{kind_names[self.chart_kind]} of {attrs}"

    def to_json(self) -> dict:
        out = {
            "chartKind": self.chart_kind.value,
            "attrs": {role: attr for role, attr in self.attrs},
            "aggFn": self.agg_fn,
        }
        if self.limit is not None:
            out["limit"] = self.limit
        return out

    @classmethod
    def from_json(cls, doc: dict) -> "ViewSpec":
        return cls(
            chart_kind=ChartKind(doc["chartKind"]),
            attrs=tuple((role, attr) for role, attr in doc["attrs"].items()),
            agg_fn=doc.get("aggFn", "sum"),
            limit=doc.get("limit"),
        )


@dataclass(frozen=True)
class WidgetSpec:
    widget_kind: WidgetKind
    attr: str

    def __post_init__(self):
        # tolerate raw strings at construction time
        object.__setattr__(self, "widget_kind", WidgetKind(self.widget_kind))

    @property
    def attr_names(self) -> tuple[str, ...]:
        return (self.attr,)

    def identity(self) -> tuple:
        return ("widget", self.widget_kind.value, self.attr)

    def title(self, dataset=None) -> str:
        kind_names = {
            WidgetKind.YEAR_PICKER: "Year picker",
            WidgetKind.RANGE_SLIDER: "Range slider",
            WidgetKind.MULTI_SELECT: "Multi-select",
        }
        return f"{kind_names[self.widget_kind]} for {self.attr}"

    def to_json(self) -> dict:
        return {"widgetKind": self.widget_kind.value, "attr": self.attr}

    @classmethod
    def from_json(cls, doc: dict) -> "WidgetSpec":
        return cls(widget_kind=WidgetKind(doc["widgetKind"]), attr=doc["attr"])


def element_from_json(doc: dict):
    if "widgetKind" in doc:
        return WidgetSpec.from_json(doc)
    return ViewSpec.from_json(doc)


def validate_view(view: ViewSpec, dataset: Dataset) -> None:
    from . import errors

    allowed = set(REQUIRED_ROLES[view.chart_kind]) | set(OPTIONAL_ROLES[view.chart_kind])
    roles = [r for r, _ in view.attrs]
    for required in REQUIRED_ROLES[view.chart_kind]:
        if required not in roles:
            raise errors.ValidationError(
                f"{view.chart_kind.value} missing required role {required!r}")
    for role, attr in view.attrs:
        if role not in allowed:
            raise errors.ValidationError(f"role {role!r} not valid for {view.chart_kind.value}")
        dataset.attribute(attr)  # raises UnknownAttribute
        if role in _QUANT_ROLES and dataset.attribute(attr).attr_type is not AttrType.QUANTITATIVE:
            raise errors.TypeMismatch(f"role {role!r} needs a quantitative attribute")
