"""Collection template catalog: loading, validation, and population.

Templates are data, not code: the bundled ``resources/catalog.json`` holds
the default library of ten templates across the four analytic intents, and
a replacement catalog can be supplied via config without code changes.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Optional, Sequence

from . import errors
from .dataset import AttrType, Dataset, years_present
from .specs import ChartKind, ViewSpec, WidgetKind, WidgetSpec


class Intent(str, Enum):
    MEASURE_ANALYSIS = "measureAnalysis"
    CHANGE_ANALYSIS = "changeAnalysis"
    CATEGORY_ANALYSIS = "categoryAnalysis"
    DISTRIBUTION_ANALYSIS = "distributionAnalysis"


MAX_VIEWS_PER_TEMPLATE = 10

SKIPPED = None  # unassigned secondary slot marker


@dataclass(frozen=True)
class AttributeSlot:
    """A typed slot group; ``multiplicity`` expands to numbered instances."""

    id: str
    slot_type: AttrType
    multiplicity: int = 1
    primary: bool = False

    @property
    def instance_ids(self) -> tuple[str, ...]:
        if self.multiplicity == 1:
            return (self.id,)
        return tuple(f"{self.id}{k}" for k in range(1, self.multiplicity + 1))


@dataclass(frozen=True)
class ViewRecipe:
    chart_kind: ChartKind
    slot_refs: tuple[tuple[str, str], ...]  # (encoding role, slot instance id)
    agg_fn: str = "sum"
    limit: Optional[int] = None


@dataclass(frozen=True)
class WidgetRecipe:
    widget_kind: WidgetKind
    slot_ref: str


@dataclass(frozen=True)
class CollectionTemplate:
    code: str
    intent: Intent
    objective: str  # pattern with {slot instance} / {year} / {prevYear} placeholders
    slots: tuple[AttributeSlot, ...]
    view_recipes: tuple[ViewRecipe, ...]
    widget_recipes: tuple[WidgetRecipe, ...] = ()

    @property
    def instance_ids(self) -> tuple[str, ...]:
        out: list[str] = []
        for slot in self.slots:
            out.extend(slot.instance_ids)
        return tuple(out)

    @property
    def primary_instances(self) -> tuple[str, ...]:
        out: list[str] = []
        for slot in self.slots:
            if slot.primary:
                out.extend(slot.instance_ids)
        return tuple(out)

    def slot_for_instance(self, instance_id: str) -> AttributeSlot:
        for slot in self.slots:
            if instance_id in slot.instance_ids:
                return slot
        raise errors.ValidationError(f"{self.code}: unknown slot instance {instance_id!r}")

    def validate(self) -> None:
        instances = self.instance_ids
        if len(set(instances)) != len(instances):
            raise errors.ValidationError(f"{self.code}: duplicate slot instance ids")
        if not self.primary_instances:
            raise errors.ValidationError(f"{self.code}: no primary slot")
        if len(self.view_recipes) > MAX_VIEWS_PER_TEMPLATE:
            raise errors.ValidationError(
                f"{self.code}: {len(self.view_recipes)} views exceeds {MAX_VIEWS_PER_TEMPLATE}")
        referenced = set()
        for recipe in self.view_recipes:
            for _, ref in recipe.slot_refs:
                if ref not in instances:
                    raise errors.ValidationError(
                        f"{self.code}: recipe references undeclared slot {ref!r}")
                referenced.add(ref)
        for wr in self.widget_recipes:
            if wr.slot_ref not in instances:
                raise errors.ValidationError(
                    f"{self.code}: widget references undeclared slot {wr.slot_ref!r}")
        for inst in self.primary_instances:
            if inst not in referenced:
                raise errors.ValidationError(
                    f"{self.code}: primary slot {inst!r} unused by every view recipe")


# Assignment: slot instance id -> attribute name, or None for SKIPPED.
AttributeAssignment = dict


@dataclass
class Collection:
    template_code: str
    intent: Intent
    objective: str
    assignment: AttributeAssignment
    views: list[ViewSpec]
    widgets: list[WidgetSpec]
    primary_attrs: tuple[str, ...]
    non_temporal_primary_attrs: tuple[str, ...]
    mean_interestingness: float = 0.0

    def to_json(self) -> dict:
        return {
            "templateCode": self.template_code,
            "intent": self.intent.value,
            "objective": self.objective,
            "assignment": {k: v for k, v in self.assignment.items()},
            "views": [v.to_json() for v in self.views],
            "widgets": [w.to_json() for w in self.widgets],
            "primaryAttrs": list(self.primary_attrs),
            "meanInterestingness": round(self.mean_interestingness, 12),
        }


def _template_from_json(doc: dict) -> CollectionTemplate:
    try:
        template = CollectionTemplate(
            code=doc["code"],
            intent=Intent(doc["intent"]),
            objective=doc["objective"],
            slots=tuple(
                AttributeSlot(
                    id=s["id"],
                    slot_type=AttrType.from_code(s["type"]),
                    multiplicity=s.get("multiplicity", 1),
                    primary=s.get("primary", False),
                )
                for s in doc["slots"]
            ),
            view_recipes=tuple(
                ViewRecipe(
                    chart_kind=ChartKind(v["chart"]),
                    slot_refs=tuple((role, ref) for role, ref in v["slots"].items()),
                    agg_fn=v.get("agg", "sum"),
                    limit=v.get("limit"),
                )
                for v in doc["views"]
            ),
            widget_recipes=tuple(
                WidgetRecipe(widget_kind=WidgetKind(w["kind"]), slot_ref=w["slot"])
                for w in doc.get("widgets", ())
            ),
        )
    except (KeyError, ValueError) as exc:
        raise errors.ValidationError(f"{doc.get('code', '?')}: {exc}") from exc
    template.validate()
    return template


def load_catalog(document: dict | list) -> list[CollectionTemplate]:
    """Parse and validate a catalog document (the ``templates`` list)."""
    docs = document["templates"] if isinstance(document, dict) else document
    templates = [_template_from_json(d) for d in docs]
    codes = [t.code for t in templates]
    if len(set(codes)) != len(codes):
        raise errors.ValidationError("duplicate template codes in catalog")
    return templates


def serialize_catalog(templates: Sequence[CollectionTemplate]) -> dict:
    return {
        "templates": [
            {
                "code": t.code,
                "intent": t.intent.value,
                "objective": t.objective,
                "slots": [
                    {"id": s.id, "type": s.slot_type.code,
                     "multiplicity": s.multiplicity, "primary": s.primary}
                    for s in t.slots
                ],
                "views": [
                    {k: v for k, v in (
                        ("chart", r.chart_kind.value),
                        ("slots", {role: ref for role, ref in r.slot_refs}),
                        ("agg", r.agg_fn),
                        ("limit", r.limit),
                    ) if v is not None}
                    for r in t.view_recipes
                ],
                "widgets": [
                    {"kind": w.widget_kind.value, "slot": w.slot_ref}
                    for w in t.widget_recipes
                ],
            }
            for t in templates
        ]
    }


def default_catalog() -> list[CollectionTemplate]:
    text = resources.files("medley.resources").joinpath("catalog.json").read_text("utf-8")
    return load_catalog(json.loads(text))


DEFAULT_ENUMERATION_CAP = 256


def _tiered_combinations(tiers: list[list[str]], size: int):
    """Combinations of ``size`` attributes that exhaust earlier tiers first.

    A later-tier attribute may only appear once every earlier-tier attribute
    is included, so explicitly selected attributes always win slot positions.
    """
    if size == 0:
        yield ()
        return
    tiers = [t for t in tiers if t]
    if not tiers:
        return
    head, rest = tiers[0], tiers[1:]
    if size <= len(head):
        for combo in itertools.combinations(head, size):
            yield combo
    else:
        for tail in _tiered_combinations(rest, size - len(head)):
            yield tuple(head) + tail


def enumerate_attribute_sets(
    template: CollectionTemplate,
    attrs_of_interest: Sequence[str],
    other_attrs: Sequence[str],
    dataset: Dataset,
    cap: int = DEFAULT_ENUMERATION_CAP,
    explicit_attrs: Sequence[str] = (),
) -> list[AttributeAssignment]:
    """Enumerate concrete attribute assignments for a template.

    Primary slots fill preferring explicit, then implicit (canvas-derived),
    then remaining attributes; secondary slots take combinations of what is
    left, preferring attributes of interest, and are SKIPPED when the
    dataset runs out. Returns at most ``cap`` assignments, empty when a
    primary slot cannot be filled.
    """
    explicit = [a for a in explicit_attrs if dataset.has_attribute(a)]
    implicit = [a for a in attrs_of_interest
                if a not in explicit and dataset.has_attribute(a)]
    others = [a for a in other_attrs
              if a not in explicit and a not in implicit and dataset.has_attribute(a)]

    by_type: dict[AttrType, list[AttributeSlot]] = {}
    for slot in template.slots:
        by_type.setdefault(slot.slot_type, []).append(slot)

    per_type_choices: list[list[tuple[tuple[str, ...], tuple[str, ...]]]] = []
    type_instances: list[tuple[list[str], list[str]]] = []
    for attr_type, slots in by_type.items():
        pool_tiers = [
            [a for a in tier if dataset.attribute(a).attr_type is attr_type]
            for tier in (explicit, implicit, others)
        ]
        pool = [a for tier in pool_tiers for a in tier]
        primary_instances = [i for s in slots if s.primary for i in s.instance_ids]
        secondary_instances = [i for s in slots if not s.primary for i in s.instance_ids]
        if len(pool) < len(primary_instances):
            return []
        choices: list[tuple[tuple[str, ...], tuple[str, ...]]] = []
        for prim in _tiered_combinations(pool_tiers, len(primary_instances)):
            remaining = [a for a in pool if a not in prim]
            sec_size = min(len(secondary_instances), len(remaining))
            if sec_size == 0:
                choices.append((prim, ()))
            else:
                for sec in itertools.combinations(remaining, sec_size):
                    choices.append((prim, sec))
        per_type_choices.append(choices)
        type_instances.append((primary_instances, secondary_instances))

    assignments: list[AttributeAssignment] = []
    for combo in itertools.product(*per_type_choices):
        assignment: AttributeAssignment = {}
        for (prim_attrs, sec_attrs), (prim_inst, sec_inst) in zip(combo, type_instances):
            for inst, attr in zip(prim_inst, prim_attrs):
                assignment[inst] = attr
            for k, inst in enumerate(sec_inst):
                assignment[inst] = sec_attrs[k] if k < len(sec_attrs) else SKIPPED
        assignments.append(assignment)
        if len(assignments) >= cap:
            break
    return assignments


def _render_objective(template: CollectionTemplate, assignment: AttributeAssignment,
                      dataset: Dataset) -> str:
    text = template.objective
    for inst in template.instance_ids:
        attr = assignment.get(inst)
        if attr is not None:
            text = text.replace("{" + inst + "}", attr)
    if "{year}" in text or "{prevYear}" in text:
        year = _change_year(template, assignment, dataset)
        if year is not None:
            text = text.replace("{year}", str(year)).replace("{prevYear}", str(year - 1))
    return text


def _change_year(template: CollectionTemplate, assignment: AttributeAssignment,
                 dataset: Dataset) -> Optional[int]:
    """Latest year with a preceding year present, for YoY objectives."""
    for slot in template.slots:
        if slot.slot_type is AttrType.TEMPORAL:
            for inst in slot.instance_ids:
                attr = assignment.get(inst)
                if attr is None:
                    continue
                yrs = years_present(dataset, attr)
                for y in reversed(yrs):
                    if y - 1 in yrs:
                        return y
                if yrs:
                    return yrs[-1]
    return None


def populate_collection(template: CollectionTemplate, assignment: AttributeAssignment,
                        dataset: Dataset) -> Collection:
    """Instantiate every recipe whose slots are assigned; drop the rest."""
    for inst in template.primary_instances:
        if assignment.get(inst) is None:
            raise errors.InvalidAssignment(f"{template.code}: primary slot {inst!r} unassigned")
    for inst, attr in assignment.items():
        if attr is None:
            continue
        slot = template.slot_for_instance(inst)
        if dataset.attribute(attr).attr_type is not slot.slot_type:
            raise errors.InvalidAssignment(
                f"{template.code}: {attr!r} does not fit slot {inst!r}")
    bound = [a for a in assignment.values() if a is not None]
    if len(set(bound)) != len(bound):
        raise errors.InvalidAssignment(f"{template.code}: attribute bound twice")

    views: list[ViewSpec] = []
    for recipe in template.view_recipes:
        if any(assignment.get(ref) is None for _, ref in recipe.slot_refs):
            continue
        views.append(ViewSpec(
            chart_kind=recipe.chart_kind,
            attrs=tuple((role, assignment[ref]) for role, ref in recipe.slot_refs),
            agg_fn=recipe.agg_fn,
            limit=recipe.limit,
        ))
    widgets = [
        WidgetSpec(widget_kind=wr.widget_kind, attr=assignment[wr.slot_ref])
        for wr in template.widget_recipes
        if assignment.get(wr.slot_ref) is not None
    ]
    primary = tuple(assignment[i] for i in template.primary_instances)
    non_temporal = tuple(
        assignment[i] for i in template.primary_instances
        if template.slot_for_instance(i).slot_type is not AttrType.TEMPORAL
    )
    return Collection(
        template_code=template.code,
        intent=template.intent,
        objective=_render_objective(template, assignment, dataset),
        assignment=dict(assignment),
        views=views,
        widgets=widgets,
        primary_attrs=primary,
        non_temporal_primary_attrs=non_temporal,
    )
