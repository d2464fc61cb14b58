"""Canvas state: views and widgets the user has placed, with grid geometry."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from . import errors
from .specs import ViewSpec, WidgetSpec, element_from_json

GRID_COLUMNS = 12


@dataclass(frozen=True)
class Geometry:
    x: int = 0
    y: int = 0
    w: int = 4
    h: int = 3

    def __post_init__(self):
        if min(self.x, self.y, self.w, self.h) < 0:
            raise errors.ValidationError("negative geometry")

    def to_json(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}

    @classmethod
    def from_json(cls, doc: dict) -> "Geometry":
        return cls(x=doc.get("x", 0), y=doc.get("y", 0), w=doc.get("w", 4), h=doc.get("h", 3))


ElementSpec = Union[ViewSpec, WidgetSpec]


@dataclass(frozen=True)
class CanvasElement:
    id: str
    spec: ElementSpec
    geometry: Geometry = Geometry()

    @property
    def is_widget(self) -> bool:
        return isinstance(self.spec, WidgetSpec)

    def to_json(self) -> dict:
        return {"id": self.id, "spec": self.spec.to_json(),
                "geometry": self.geometry.to_json()}

    @classmethod
    def from_json(cls, doc: dict) -> "CanvasElement":
        return cls(id=doc["id"], spec=element_from_json(doc["spec"]),
                   geometry=Geometry.from_json(doc.get("geometry", {})))


@dataclass
class CanvasState:
    elements: list[CanvasElement] = field(default_factory=list)
    # user-chosen interaction modes, keyed by (source id, target id)
    link_overrides: dict[tuple[str, str], str] = field(default_factory=dict)

    def element(self, element_id: str) -> CanvasElement:
        for el in self.elements:
            if el.id == element_id:
                return el
        raise errors.UnknownElement(element_id)

    def has_element(self, element_id: str) -> bool:
        return any(el.id == element_id for el in self.elements)

    @property
    def views(self) -> list[CanvasElement]:
        return [el for el in self.elements if not el.is_widget]

    def view_identities(self) -> set[tuple]:
        return {el.spec.identity() for el in self.views}

    def add(self, element: CanvasElement) -> None:
        if self.has_element(element.id):
            raise errors.DuplicateId(element.id)
        self.elements.append(element)

    def remove(self, element_id: str) -> None:
        el = self.element(element_id)
        self.elements.remove(el)
        self.link_overrides = {
            pair: mode for pair, mode in self.link_overrides.items()
            if element_id not in pair
        }

    def move_resize(self, element_id: str, geometry: Geometry) -> None:
        el = self.element(element_id)
        idx = self.elements.index(el)
        self.elements[idx] = replace(el, geometry=geometry)

    def to_json(self) -> dict:
        return {
            "elements": [el.to_json() for el in self.elements],
            "linkOverrides": [
                {"source": s, "target": t, "mode": m}
                for (s, t), m in self.link_overrides.items()
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "CanvasState":
        state = cls(elements=[CanvasElement.from_json(e) for e in doc.get("elements", [])])
        for o in doc.get("linkOverrides", []):
            state.link_overrides[(o["source"], o["target"])] = o["mode"]
        return state
