"""Interaction inference between dashboard elements, and event application.

The pairwise classification has three outcomes: invalid (data summaries
cannot drive anything, widgets cannot be driven), highlight+filter (shared
dimension, or the target plots individual rows), or filter-only.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence, Union

from . import errors
from .canvas import CanvasElement, CanvasState
from .dataset import Dataset, Predicate
from .specs import ChartKind, ViewSpec, WidgetSpec


class InteractionMode(str, Enum):
    HIGHLIGHT = "highlight"
    FILTER = "filter"


@dataclass(frozen=True)
class InteractionLink:
    source_id: str
    target_id: str
    allowed_modes: tuple[InteractionMode, ...]
    active_mode: Optional[InteractionMode]

    @property
    def valid(self) -> bool:
        return bool(self.allowed_modes)

    def to_json(self) -> dict:
        return {
            "sourceId": self.source_id,
            "targetId": self.target_id,
            "allowedModes": [m.value for m in self.allowed_modes],
            "activeMode": self.active_mode.value if self.active_mode else None,
            "valid": self.valid,
        }

    @classmethod
    def from_json(cls, doc: dict) -> "InteractionLink":
        return cls(
            source_id=doc["sourceId"],
            target_id=doc["targetId"],
            allowed_modes=tuple(InteractionMode(m) for m in doc["allowedModes"]),
            active_mode=InteractionMode(doc["activeMode"]) if doc.get("activeMode") else None,
        )


@dataclass(frozen=True)
class SelectionEvent:
    source_id: str
    # (attribute, value) pairs; empty = deselect / restore
    selected: tuple[tuple[str, object], ...] = ()


@dataclass(frozen=True)
class TargetEffect:
    target_id: str
    effect: str  # "filter" | "highlight" | "noop"
    predicates: tuple[Predicate, ...] = ()

    def to_json(self) -> dict:
        return {
            "targetId": self.target_id,
            "effect": self.effect,
            "predicates": [
                {"attribute": p.attribute, "op": p.op, "value": _value_json(p.value)}
                for p in self.predicates
            ],
        }


def _value_json(v):
    if isinstance(v, (set, frozenset)):
        return sorted(v, key=str)
    if isinstance(v, tuple):
        return list(v)
    return v


def _dimension_attrs(element: CanvasElement, dataset: Optional[Dataset]) -> tuple[str, ...]:
    spec = element.spec
    if isinstance(spec, WidgetSpec):
        # a widget's bound attribute acts as its dimension
        return (spec.attr,)
    if dataset is not None:
        return spec.dimension_attrs(dataset)
    # without a dataset, treat non-quantitative roles as dimensions
    quant_roles = {"measure", "measure2", "x", "y"}
    return tuple(dict.fromkeys(
        attr for role, attr in spec.attrs if role not in quant_roles))


def classify_pair(source: CanvasElement, target: CanvasElement,
                  dataset: Optional[Dataset] = None) -> InteractionLink:
    """Classify one ordered (source, target) pair into an interaction link."""
    if source.id == target.id:
        raise errors.SelfLink(source.id)

    source_is_summary = (isinstance(source.spec, ViewSpec)
                         and source.spec.chart_kind is ChartKind.DATA_SUMMARY)
    if source_is_summary or target.is_widget:
        return InteractionLink(source.id, target.id, (), None)

    shared = set(_dimension_attrs(source, dataset)) & set(_dimension_attrs(target, dataset))
    target_plots_rows = (isinstance(target.spec, ViewSpec)
                         and target.spec.chart_kind is ChartKind.SCATTER)
    if shared or target_plots_rows:
        return InteractionLink(
            source.id, target.id,
            (InteractionMode.HIGHLIGHT, InteractionMode.FILTER),
            InteractionMode.HIGHLIGHT,
        )
    return InteractionLink(source.id, target.id,
                           (InteractionMode.FILTER,), InteractionMode.FILTER)


def infer_links(canvas: CanvasState, dataset: Optional[Dataset] = None) -> list[InteractionLink]:
    """Classify every ordered element pair; user mode overrides survive when
    they remain valid for the recomputed link."""
    links: list[InteractionLink] = []
    for source in canvas.elements:
        for target in canvas.elements:
            if source.id == target.id:
                continue
            link = classify_pair(source, target, dataset)
            override = canvas.link_overrides.get((source.id, target.id))
            if override is not None:
                mode = InteractionMode(override)
                if mode in link.allowed_modes:
                    link = replace(link, active_mode=mode)
            links.append(link)
    return links


def set_link_mode(link: InteractionLink, mode: InteractionMode) -> InteractionLink:
    if mode not in link.allowed_modes:
        raise errors.ModeNotAllowed(
            f"{mode.value} not allowed on {link.source_id}->{link.target_id}")
    return replace(link, active_mode=mode)


def apply_event(event: SelectionEvent, links: Sequence[InteractionLink],
                canvas: CanvasState) -> list[TargetEffect]:
    """Resolve a selection on the source element into per-target effects."""
    if not canvas.has_element(event.source_id):
        raise errors.UnknownSource(event.source_id)

    effects: list[TargetEffect] = []
    for link in links:
        if link.source_id != event.source_id:
            continue
        if not link.valid or not event.selected:
            effects.append(TargetEffect(link.target_id, "noop"))
            continue
        by_attr: dict[str, list] = {}
        for attr, value in event.selected:
            by_attr.setdefault(attr, []).append(value)
        predicates = tuple(
            Predicate(attr, "=", values[0]) if len(values) == 1
            else Predicate(attr, "in", tuple(values))
            for attr, values in by_attr.items()
        )
        effect = "filter" if link.active_mode is InteractionMode.FILTER else "highlight"
        effects.append(TargetEffect(link.target_id, effect, predicates))
    return effects
