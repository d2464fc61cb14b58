"""Recommendation engine: candidate generation, display-set selection, ranking.

Pure and reentrant: every call works from the immutable dataset/catalog plus
the input and canvas passed by value, so identical inputs produce identical
ordered output.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import interestingness as metrics
from .canvas import CanvasState
from .catalog import (Collection, CollectionTemplate, Intent,
                      DEFAULT_ENUMERATION_CAP, enumerate_attribute_sets,
                      populate_collection)
from .dataset import AttrType, Dataset
from .specs import ChartKind, ViewSpec


@dataclass(frozen=True)
class UserInput:
    explicit_attrs: tuple[str, ...] = ()
    selected_intents: tuple[Intent, ...] = ()  # empty = all four

    def to_json(self) -> dict:
        return {"explicitAttrs": list(self.explicit_attrs),
                "intents": [i.value for i in self.selected_intents]}

    @classmethod
    def from_json(cls, doc: dict) -> "UserInput":
        return cls(
            explicit_attrs=tuple(doc.get("explicitAttrs", [])),
            selected_intents=tuple(Intent(i) for i in doc.get("intents", [])),
        )


@dataclass(frozen=True)
class AttrsOfInterest:
    explicit: tuple[str, ...]
    implicit: tuple[str, ...]

    @property
    def union(self) -> tuple[str, ...]:
        return self.explicit + self.implicit


@dataclass(frozen=True)
class EngineConfig:
    zscore_lag: int = metrics.ZSCORE_LAG
    zscore_threshold: float = metrics.ZSCORE_THRESHOLD
    zscore_influence: float = metrics.ZSCORE_INFLUENCE
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    # alternate attribute-match formulation: type-level Jaccard similarity
    draft_type_jaccard: bool = False

    @classmethod
    def from_json(cls, doc: dict) -> "EngineConfig":
        return cls(
            zscore_lag=doc.get("zscoreLag", metrics.ZSCORE_LAG),
            zscore_threshold=doc.get("zscoreThreshold", metrics.ZSCORE_THRESHOLD),
            zscore_influence=doc.get("zscoreInfluence", metrics.ZSCORE_INFLUENCE),
            enumeration_cap=doc.get("enumerationCap", DEFAULT_ENUMERATION_CAP),
            draft_type_jaccard=doc.get("draftTypeJaccard", False),
        )


@dataclass
class RankedCollection:
    collection: Collection
    relevance: float
    attr_match: float
    coverage: float
    explicit_match: float
    mean_interestingness: float
    ranked_views: list[ViewSpec]

    def to_json(self) -> dict:
        doc = self.collection.to_json()
        doc["views"] = [v.to_json() for v in self.ranked_views]
        doc["scores"] = {
            "relevance": round(self.relevance, 12),
            "attrMatch": round(self.attr_match, 12),
            "coverage": round(self.coverage, 12),
            "explicitMatch": round(self.explicit_match, 12),
            "meanInterestingness": round(self.mean_interestingness, 12),
        }
        return doc


def implicit_attributes(canvas: CanvasState) -> tuple[str, ...]:
    """Attributes encoded by canvas views (not widgets), first-appearance order."""
    out: list[str] = []
    for el in canvas.views:
        for attr in el.spec.attr_names:
            if attr not in out:
                out.append(attr)
    return tuple(out)


def attrs_of_interest(user_input: UserInput, canvas: CanvasState) -> AttrsOfInterest:
    explicit = tuple(dict.fromkeys(user_input.explicit_attrs))
    implicit = tuple(a for a in implicit_attributes(canvas) if a not in explicit)
    return AttrsOfInterest(explicit=explicit, implicit=implicit)


class _ScoreCache:
    """Per-call memo of raw view scores; views repeat heavily across candidates."""

    def __init__(self, dataset: Dataset, explicit: Sequence[str], config: EngineConfig):
        self.dataset = dataset
        self.explicit = tuple(explicit)
        self.config = config
        self._memo: dict[tuple, metrics.InterestingnessScore] = {}

    def raw(self, view: ViewSpec) -> metrics.InterestingnessScore:
        key = view.identity()
        if key not in self._memo:
            self._memo[key] = metrics.raw_interestingness(
                view, self.dataset, self.explicit,
                zscore_lag=self.config.zscore_lag,
                zscore_threshold=self.config.zscore_threshold,
                zscore_influence=self.config.zscore_influence,
            )
        return self._memo[key]


def _probe_view(dataset: Dataset, attr: str) -> Optional[ViewSpec]:
    """A minimal single-attribute view used to rank attributes by interestingness."""
    meta = dataset.attribute(attr)
    if meta.attr_type is AttrType.QUANTITATIVE:
        return ViewSpec(ChartKind.HISTOGRAM, (("measure", attr),), "count")
    if meta.attr_type in (AttrType.CATEGORICAL, AttrType.GEOGRAPHIC):
        return ViewSpec(ChartKind.BAR, (("dimension", attr),), "count")
    return ViewSpec(ChartKind.BAR, (("dimension", attr),), "count")


def order_other_attrs(dataset: Dataset, interest: AttrsOfInterest,
                      cache: _ScoreCache) -> list[str]:
    """Non-interest attributes, best single-view raw interestingness first."""
    union = set(interest.union)
    rest = [a.name for a in dataset.attributes if a.name not in union]
    scored = []
    for idx, attr in enumerate(rest):
        probe = _probe_view(dataset, attr)
        raw = cache.raw(probe).raw if probe is not None else 0.0
        scored.append((-raw, idx, attr))
    scored.sort()
    return [attr for _, _, attr in scored]


def select_display_set(
    template: CollectionTemplate,
    candidates: Sequence[dict],
    dataset: Dataset,
    explicit_attrs: Sequence[str] = (),
    config: EngineConfig = EngineConfig(),
    cache: Optional[_ScoreCache] = None,
    _populated: Optional[list[Collection]] = None,
) -> tuple[dict, float]:
    """Pick the candidate assignment maximizing mean normalized interestingness.

    Raw scores are min-max normalized per view slot across candidates before
    averaging; ties keep the earliest (preference-ordered) candidate.
    Returns (winning assignment, its mean normalized score).
    """
    if not candidates:
        raise ValueError("candidates must be non-empty")
    cache = cache or _ScoreCache(dataset, explicit_attrs, config)
    populated = [populate_collection(template, a, dataset) for a in candidates]
    if _populated is not None:
        _populated.extend(populated)

    n_slots = max(len(c.views) for c in populated)
    # raw score matrix: candidate x view slot (None where a recipe was dropped)
    raw_matrix: list[list[Optional[float]]] = []
    neutral: list[list[bool]] = []
    for coll in populated:
        row: list[Optional[float]] = []
        neutral_row: list[bool] = []
        for view in coll.views:
            score = cache.raw(view)
            row.append(score.raw)
            neutral_row.append(score.metric is metrics.Metric.NONE)
        row.extend([None] * (n_slots - len(row)))
        neutral_row.extend([False] * (n_slots - len(neutral_row)))
        raw_matrix.append(row)
        neutral.append(neutral_row)

    norm_matrix: list[list[Optional[float]]] = [[None] * n_slots for _ in populated]
    for slot in range(n_slots):
        idxs = [i for i in range(len(populated)) if raw_matrix[i][slot] is not None]
        slot_raws = [raw_matrix[i][slot] for i in idxs]
        slot_norms = metrics.normalize_across_sets(slot_raws)  # type: ignore[arg-type]
        for i, v in zip(idxs, slot_norms):
            norm_matrix[i][slot] = 0.5 if neutral[i][slot] else v

    means = []
    for i in range(len(populated)):
        vals = [v for v in norm_matrix[i] if v is not None]
        means.append(sum(vals) / len(vals) if vals else 0.0)
    best = max(range(len(populated)), key=lambda i: (means[i], -i))
    return dict(candidates[best]), means[best]


def attr_match(collection: Collection, interest: AttrsOfInterest,
               config: EngineConfig = EngineConfig(),
               dataset: Optional[Dataset] = None) -> tuple[float, float]:
    """(match over attrs of interest, match over explicit attrs only).

    Both are proportions over the collection's non-temporal primary
    attributes. With ``draft_type_jaccard`` enabled, scoring switches to a
    multiset Jaccard over attribute *types* covering all primary slots
    (the earlier formulation kept as a config flag).
    """
    if config.draft_type_jaccard and dataset is not None:
        return (_type_jaccard(collection.primary_attrs, interest.union, dataset),
                _type_jaccard(collection.primary_attrs, interest.explicit, dataset))
    primaries = collection.non_temporal_primary_attrs
    if not primaries:
        return 0.0, 0.0
    union = set(interest.union)
    explicit = set(interest.explicit)
    match = sum(1 for p in primaries if p in union) / len(primaries)
    explicit_match = sum(1 for p in primaries if p in explicit) / len(primaries)
    return match, explicit_match


def _type_jaccard(primary_attrs: Sequence[str], user_attrs: Sequence[str],
                  dataset: Dataset) -> float:
    from collections import Counter

    p = Counter(dataset.attribute(a).attr_type for a in primary_attrs)
    u = Counter(dataset.attribute(a).attr_type for a in user_attrs
                if dataset.has_attribute(a))
    inter = sum(min(p[t], u[t]) for t in p)
    union = sum((p | u).values())
    return inter / union if union else 0.0


def coverage(collection: Collection, canvas: CanvasState) -> float:
    """Fraction of collection views already on the canvas, by structural identity.

    Contributes 0 when every view is already present (nothing new to add).
    """
    if not collection.views:
        return 0.0
    on_canvas = canvas.view_identities()
    present = sum(1 for v in collection.views if v.identity() in on_canvas)
    if present == len(collection.views):
        return 0.0
    return present / len(collection.views)


def rank_views(collection: Collection, interest: AttrsOfInterest,
               canvas: CanvasState) -> list[ViewSpec]:
    """Most-relevant-first view order; canvas duplicates move to the end."""
    union = set(interest.union)
    explicit = set(interest.explicit)
    on_canvas = canvas.view_identities()

    def key(item: tuple[int, ViewSpec]):
        idx, view = item
        in_canvas = view.identity() in on_canvas
        overlap = sum(1 for a in view.attr_names if a in union)
        explicit_overlap = sum(1 for a in view.attr_names if a in explicit)
        return (in_canvas, -overlap, -explicit_overlap, idx)

    return [v for _, v in sorted(enumerate(collection.views), key=key)]


_ROUND_ROBIN_ORDER = (
    Intent.DISTRIBUTION_ANALYSIS,
    Intent.MEASURE_ANALYSIS,
    Intent.CATEGORY_ANALYSIS,
    Intent.CHANGE_ANALYSIS,
)


def rank_collections(
    entries: Sequence[tuple[Collection, float]],
    interest: AttrsOfInterest,
    canvas: CanvasState,
    config: EngineConfig = EngineConfig(),
    dataset: Optional[Dataset] = None,
) -> list[RankedCollection]:
    """Order populated collections by Eq. 2 relevance with deterministic tie-breaks.

    ``entries`` pairs each collection with its mean interestingness, in
    catalog order.
    """
    ranked: list[RankedCollection] = []
    for collection, mean_score in entries:
        match, explicit_match = attr_match(collection, interest, config, dataset)
        cov = coverage(collection, canvas)
        ranked.append(RankedCollection(
            collection=collection,
            relevance=match + cov,
            attr_match=match,
            coverage=cov,
            explicit_match=explicit_match,
            mean_interestingness=mean_score,
            ranked_views=rank_views(collection, interest, canvas),
        ))

    default_state = not interest.union and not canvas.elements
    if default_state:
        return _round_robin(ranked)
    order = sorted(
        range(len(ranked)),
        key=lambda i: (-ranked[i].relevance, -ranked[i].explicit_match,
                       -ranked[i].mean_interestingness, i),
    )
    return [ranked[i] for i in order]


def _round_robin(ranked: list[RankedCollection]) -> list[RankedCollection]:
    """Cold-start order: one collection per intent, then rest by interestingness."""
    by_interest = sorted(range(len(ranked)),
                         key=lambda i: (-ranked[i].mean_interestingness, i))
    head: list[int] = []
    for intent in _ROUND_ROBIN_ORDER:
        for i in by_interest:
            if ranked[i].collection.intent is intent and i not in head:
                head.append(i)
                break
    tail = [i for i in by_interest if i not in head]
    return [ranked[i] for i in head + tail]


def recommend_collections(
    dataset: Dataset,
    templates: Sequence[CollectionTemplate],
    user_input: UserInput,
    canvas: CanvasState,
    config: EngineConfig = EngineConfig(),
) -> list[RankedCollection]:
    """Full pipeline: enumerate, select display sets (Eq. 1), rank (Eq. 2)."""
    interest = attrs_of_interest(user_input, canvas)
    cache = _ScoreCache(dataset, interest.explicit, config)
    other = order_other_attrs(dataset, interest, cache)
    intents = set(user_input.selected_intents) or set(Intent)

    entries: list[tuple[Collection, float]] = []
    for template in templates:
        if template.intent not in intents:
            continue
        candidates = enumerate_attribute_sets(
            template, interest.union, other, dataset,
            cap=config.enumeration_cap, explicit_attrs=interest.explicit,
        )
        if not candidates:
            continue
        assignment, mean_score = select_display_set(
            template, candidates, dataset, interest.explicit, config, cache)
        collection = populate_collection(template, assignment, dataset)
        collection.mean_interestingness = mean_score
        entries.append((collection, mean_score))
    return rank_collections(entries, interest, canvas, config, dataset)


def unsatisfiable_templates(
    dataset: Dataset,
    templates: Sequence[CollectionTemplate],
    user_input: UserInput,
) -> list[str]:
    """Diagnostics for templates whose primary slots the dataset cannot fill."""
    intents = set(user_input.selected_intents) or set(Intent)
    out = []
    for template in templates:
        if template.intent not in intents:
            continue
        needed: dict[AttrType, int] = {}
        for slot in template.slots:
            if slot.primary:
                needed[slot.slot_type] = needed.get(slot.slot_type, 0) + slot.multiplicity
        for attr_type, count in needed.items():
            if len(dataset.attrs_of_type(attr_type)) < count:
                out.append(
                    f"{template.code}: needs {count} {attr_type.value} "
                    f"attribute(s), dataset has {len(dataset.attrs_of_type(attr_type))}")
                break
    return out
