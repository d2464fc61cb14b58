"""Per-user composition session: dataset binding, input, canvas, link edits.

Mutations are serialized per session (single writer) and appended to a
newline-delimited JSON log, so replaying a log reproduces the same state.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from . import errors
from .canvas import CanvasElement, CanvasState, Geometry
from .catalog import CollectionTemplate, default_catalog
from .dataset import Dataset
from .engine import EngineConfig, RankedCollection, UserInput, recommend_collections
from .interactions import InteractionLink, InteractionMode, infer_links, set_link_mode
from .specs import element_from_json


@dataclass
class Session:
    id: str
    dataset: Dataset
    templates: list[CollectionTemplate] = field(default_factory=default_catalog)
    config: EngineConfig = field(default_factory=EngineConfig)
    input: UserInput = field(default_factory=UserInput)
    canvas: CanvasState = field(default_factory=CanvasState)
    log_path: Optional[Path] = None
    recompute_count: int = 0

    _cache: Optional[list[RankedCollection]] = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)
    _next_eid: int = 1

    # -- mutation log ------------------------------------------------------

    def _log(self, op: str, payload: dict) -> None:
        if self.log_path is None:
            return
        record = {"op": op, **payload}
        with self.log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(record) + "\n")

    def replay(self, log_lines: Sequence[str]) -> None:
        """Re-apply a recorded mutation log (used for crash recovery)."""
        for line in log_lines:
            if not line.strip():
                continue
            record = json.loads(line)
            op = record.pop("op")
            apply = {
                "addElement": lambda r: self.add_element(
                    element_from_json(r["spec"]), Geometry.from_json(r["geometry"]),
                    element_id=r["id"]),
                "removeElement": lambda r: self.remove_element(r["id"]),
                "moveResize": lambda r: self.move_resize(
                    r["id"], Geometry.from_json(r["geometry"])),
                "updateInput": lambda r: self.update_input(UserInput.from_json(r)),
                "setLinkMode": lambda r: self.set_link_mode(
                    r["source"], r["target"], InteractionMode(r["mode"])),
            }[op]
            apply(record)

    # -- canvas mutations --------------------------------------------------

    def _fresh_id(self) -> str:
        while self.canvas.has_element(f"e{self._next_eid}"):
            self._next_eid += 1
        eid = f"e{self._next_eid}"
        self._next_eid += 1
        return eid

    def add_element(self, spec, geometry: Geometry = Geometry(),
                    element_id: Optional[str] = None) -> CanvasElement:
        with self._lock:
            eid = element_id or self._fresh_id()
            element = CanvasElement(id=eid, spec=spec, geometry=geometry)
            self.canvas.add(element)
            self._cache = None
            self._log("addElement", {"id": eid, "spec": spec.to_json(),
                                     "geometry": geometry.to_json()})
            return element

    def remove_element(self, element_id: str) -> None:
        with self._lock:
            self.canvas.remove(element_id)
            self._cache = None
            self._log("removeElement", {"id": element_id})

    def move_resize(self, element_id: str, geometry: Geometry) -> None:
        with self._lock:
            self.canvas.move_resize(element_id, geometry)
            self._cache = None
            self._log("moveResize", {"id": element_id, "geometry": geometry.to_json()})

    def update_input(self, new_input: UserInput) -> None:
        for attr in new_input.explicit_attrs:
            if not self.dataset.has_attribute(attr):
                raise errors.UnknownAttribute(attr)
        with self._lock:
            self.input = new_input
            self._cache = None
            self._log("updateInput", new_input.to_json())

    # -- interactions ------------------------------------------------------

    def links(self) -> list[InteractionLink]:
        return infer_links(self.canvas, self.dataset)

    def set_link_mode(self, source_id: str, target_id: str,
                      mode: InteractionMode) -> InteractionLink:
        with self._lock:
            for link in infer_links(self.canvas, self.dataset):
                if link.source_id == source_id and link.target_id == target_id:
                    updated = set_link_mode(link, mode)
                    self.canvas.link_overrides[(source_id, target_id)] = mode.value
                    self._log("setLinkMode", {"source": source_id, "target": target_id,
                                              "mode": mode.value})
                    return updated
            raise errors.UnknownElement(f"{source_id}->{target_id}")

    # -- recommendations ---------------------------------------------------

    def refresh_recommendations(self, force: bool = False) -> list[RankedCollection]:
        with self._lock:
            if self._cache is None or force:
                self._cache = recommend_collections(
                    self.dataset, self.templates, self.input, self.canvas, self.config)
                self.recompute_count += 1
            return self._cache
