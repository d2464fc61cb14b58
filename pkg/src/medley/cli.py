"""Command line entry points: `medley serve` and `medley recommend`."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .canvas import CanvasState
from .catalog import Intent, default_catalog, load_catalog
from .dataset import load_csv
from .engine import EngineConfig, UserInput, recommend_collections
from .service import ServiceConfig, create_app

_INTENT_ALIASES = {
    "measure": Intent.MEASURE_ANALYSIS,
    "change": Intent.CHANGE_ANALYSIS,
    "category": Intent.CATEGORY_ANALYSIS,
    "distribution": Intent.DISTRIBUTION_ANALYSIS,
}


def _parse_intent(token: str) -> Intent:
    token = token.strip()
    if token in _INTENT_ALIASES:
        return _INTENT_ALIASES[token]
    return Intent(token)


@click.group()
def main():
    """Dashboard collection recommendation engine."""


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path),
              default=None, help="Service config file (JSON).")
@click.option("--port", type=int, default=None, help="Override the configured port.")
def serve(config_path, port):
    """Run the HTTP service."""
    import uvicorn

    config = ServiceConfig.from_file(config_path) if config_path else ServiceConfig()
    app = create_app(config)
    uvicorn.run(app, host="127.0.0.1", port=port or config.port)


@main.command()
@click.option("--data", "data_path", type=click.Path(exists=True, path_type=Path),
              required=True, help="CSV file to analyze.")
@click.option("--attrs", default="", help="Comma-separated explicit attributes.")
@click.option("--intents", default="",
              help="Comma-separated intents (measure, change, category, distribution).")
@click.option("--top", default=0, type=int, help="Keep only the top N collections.")
@click.option("--catalog", "catalog_path", type=click.Path(exists=True, path_type=Path),
              default=None, help="Alternate catalog JSON.")
@click.option("--out", "out_path", type=click.Path(path_type=Path), default=None,
              help="Write JSON here instead of stdout.")
def recommend(data_path, attrs, intents, top, catalog_path, out_path):
    """Rank collections for a CSV dataset in batch mode."""
    dataset = load_csv(data_path.read_bytes(), dataset_id=data_path.stem)
    templates = (load_catalog(json.loads(catalog_path.read_text("utf-8")))
                 if catalog_path else default_catalog())
    user_input = UserInput(
        explicit_attrs=tuple(a.strip() for a in attrs.split(",") if a.strip()),
        selected_intents=tuple(_parse_intent(t) for t in intents.split(",") if t.strip()),
    )
    ranked = recommend_collections(dataset, templates, user_input, CanvasState())
    if top > 0:
        ranked = ranked[:top]
    payload = json.dumps({"collections": [rc.to_json() for rc in ranked]},
                         indent=2) + "\n"
    if out_path is not None:
        out_path.write_text(payload, encoding="utf-8")
    else:
        sys.stdout.write(payload)


if __name__ == "__main__":
    main()
