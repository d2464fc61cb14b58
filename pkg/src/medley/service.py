"""HTTP facade over datasets, sessions, recommendations, interactions, export."""

from __future__ import annotations

import json
import uuid
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import emitter, errors
from .canvas import Geometry
from .catalog import CollectionTemplate, default_catalog, load_catalog
from .dataset import Dataset, load_csv
from .engine import EngineConfig, RankedCollection, UserInput, unsatisfiable_templates
from .interactions import InteractionMode, SelectionEvent, apply_event
from .session import Session
from .specs import element_from_json

MAX_UPLOAD_BYTES = 50 * 1024 * 1024
MAX_ATTRIBUTES = 100
MAX_ROWS = 1_000_000


class ServiceConfig:
    def __init__(self, engine: EngineConfig = EngineConfig(),
                 catalog_path: Optional[Path] = None,
                 session_log_dir: Optional[Path] = None,
                 port: int = 8000):
        self.engine = engine
        self.catalog_path = catalog_path
        self.session_log_dir = session_log_dir
        self.port = port

    @classmethod
    def from_file(cls, path: Path) -> "ServiceConfig":
        doc = json.loads(Path(path).read_text("utf-8"))
        return cls(
            engine=EngineConfig.from_json(doc.get("engine", {})),
            catalog_path=Path(doc["catalogPath"]) if doc.get("catalogPath") else None,
            session_log_dir=Path(doc["sessionLogDir"]) if doc.get("sessionLogDir") else None,
            port=doc.get("port", 8000),
        )

    def templates(self) -> list[CollectionTemplate]:
        if self.catalog_path is None:
            return default_catalog()
        return load_catalog(json.loads(self.catalog_path.read_text("utf-8")))


class InputPatch(BaseModel):
    explicitAttrs: Optional[list[str]] = None
    intents: Optional[list[str]] = None


class ElementBody(BaseModel):
    spec: dict
    geometry: Optional[dict] = None


class ElementPatch(BaseModel):
    geometry: dict


class LinkModeBody(BaseModel):
    mode: str


class EventBody(BaseModel):
    sourceId: str
    selected: list[list] = []


def _ranked_to_json(session: Session, ranked: list[RankedCollection]) -> dict:
    colors = emitter.assign_colors(session.dataset)
    out = []
    for rc in ranked:
        doc = rc.to_json()
        doc["viewSpecs"] = [emitter.emit_chart_spec(v, session.dataset, colors)
                            for v in rc.ranked_views]
        doc["widgetSpecs"] = [emitter.emit_widget_spec(w, session.dataset)
                              for w in rc.collection.widgets]
        out.append(doc)
    return {
        "collections": out,
        "diagnostics": unsatisfiable_templates(
            session.dataset, session.templates, session.input),
    }


def create_app(config: Optional[ServiceConfig] = None) -> FastAPI:
    config = config or ServiceConfig()
    app = FastAPI(title="medley", version="0.1.0",
                  description="Dashboard collection recommendation service")
    datasets: dict[str, Dataset] = {}
    sessions: dict[str, Session] = {}

    @app.exception_handler(errors.MedleyError)
    async def medley_error_handler(request: Request, exc: errors.MedleyError):
        return JSONResponse(
            status_code=exc.http_status,
            content={"code": exc.code, "message": exc.message},
        )

    def get_session(session_id: str) -> Session:
        if session_id not in sessions:
            raise errors.UnknownSession(session_id)
        return sessions[session_id]

    @app.post("/datasets", status_code=201)
    async def upload_dataset(request: Request):
        body = await request.body()
        if len(body) > MAX_UPLOAD_BYTES:
            raise errors.ValidationError("upload exceeds 50 MB cap")
        dataset = load_csv(body, dataset_id=uuid.uuid4().hex[:12])
        if len(dataset.attributes) > MAX_ATTRIBUTES or dataset.row_count > MAX_ROWS:
            raise errors.ValidationError("dataset exceeds size caps")
        datasets[dataset.id] = dataset
        return {"id": dataset.id, "rowCount": dataset.row_count,
                "attributes": [a.to_json() for a in dataset.attributes]}

    @app.get("/datasets/{dataset_id}")
    async def get_dataset(dataset_id: str):
        if dataset_id not in datasets:
            raise errors.UnknownDataset(dataset_id)
        d = datasets[dataset_id]
        return {"id": d.id, "rowCount": d.row_count,
                "attributes": [a.to_json() for a in d.attributes]}

    @app.post("/sessions", status_code=201)
    async def create_session(body: dict):
        dataset_id = body.get("datasetId")
        if dataset_id not in datasets:
            raise errors.UnknownDataset(str(dataset_id))
        sid = uuid.uuid4().hex[:12]
        log_path = None
        if config.session_log_dir is not None:
            config.session_log_dir.mkdir(parents=True, exist_ok=True)
            log_path = config.session_log_dir / f"{sid}.jsonl"
        sessions[sid] = Session(
            id=sid, dataset=datasets[dataset_id],
            templates=config.templates(), config=config.engine,
            log_path=log_path,
        )
        return {"id": sid, "datasetId": dataset_id}

    @app.get("/sessions/{session_id}/recommendations")
    async def recommendations(session_id: str, refresh: bool = Query(default=False)):
        session = get_session(session_id)
        ranked = session.refresh_recommendations(force=refresh)
        return _ranked_to_json(session, ranked)

    @app.patch("/sessions/{session_id}/input")
    async def patch_input(session_id: str, body: InputPatch):
        session = get_session(session_id)
        current = session.input
        session.update_input(UserInput.from_json({
            "explicitAttrs": (body.explicitAttrs if body.explicitAttrs is not None
                              else list(current.explicit_attrs)),
            "intents": (body.intents if body.intents is not None
                        else [i.value for i in current.selected_intents]),
        }))
        return session.input.to_json()

    @app.post("/sessions/{session_id}/canvas/elements", status_code=201)
    async def add_element(session_id: str, body: ElementBody):
        session = get_session(session_id)
        geometry = Geometry.from_json(body.geometry or {})
        element = session.add_element(element_from_json(body.spec), geometry)
        return element.to_json()

    @app.get("/sessions/{session_id}/canvas")
    async def get_canvas(session_id: str):
        return get_session(session_id).canvas.to_json()

    @app.delete("/sessions/{session_id}/canvas/elements/{element_id}", status_code=204)
    async def delete_element(session_id: str, element_id: str):
        get_session(session_id).remove_element(element_id)
        return Response(status_code=204)

    @app.patch("/sessions/{session_id}/canvas/elements/{element_id}")
    async def patch_element(session_id: str, element_id: str, body: ElementPatch):
        session = get_session(session_id)
        session.move_resize(element_id, Geometry.from_json(body.geometry))
        return session.canvas.element(element_id).to_json()

    @app.get("/sessions/{session_id}/links")
    async def get_links(session_id: str):
        return {"links": [l.to_json() for l in get_session(session_id).links()]}

    @app.put("/sessions/{session_id}/links/{source_id}/{target_id}")
    async def put_link_mode(session_id: str, source_id: str, target_id: str,
                            body: LinkModeBody):
        session = get_session(session_id)
        link = session.set_link_mode(source_id, target_id, InteractionMode(body.mode))
        return link.to_json()

    @app.post("/sessions/{session_id}/events")
    async def post_event(session_id: str, body: EventBody):
        session = get_session(session_id)
        event = SelectionEvent(
            source_id=body.sourceId,
            selected=tuple((pair[0], pair[1]) for pair in body.selected),
        )
        effects = apply_event(event, session.links(), session.canvas)
        return {"effects": [e.to_json() for e in effects]}

    @app.get("/sessions/{session_id}/export")
    async def export(session_id: str, format: str = Query(default="json")):
        session = get_session(session_id)
        data = emitter.export_dashboard(session.canvas, session.links(), format,
                                        session.dataset)
        media = "application/json" if format == "json" else "text/html"
        return Response(content=data, media_type=media)

    return app
