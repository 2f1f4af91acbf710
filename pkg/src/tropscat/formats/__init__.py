"""JSON schemas for manifold and diagram files, and a validator giving field paths."""
from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

import jsonschema
from referencing import Registry, Resource

SCHEMAS = ("manifold", "diagram", "consistency-report", "validation-report")


@lru_cache(maxsize=None)
def load_schema(kind: str) -> dict:
    return json.loads(resources.files(__name__).joinpath(f"{kind}.schema.json").read_text())


@lru_cache(maxsize=None)
def _validator(kind: str):
    registry = Registry().with_resources(
        (load_schema(k)["$id"], Resource.from_contents(load_schema(k))) for k in SCHEMAS)
    return jsonschema.Draft202012Validator(load_schema(kind), registry=registry)


def _where(path) -> str:
    out = ""
    for p in path:
        out += f"[{p}]" if isinstance(p, int) else (f".{p}" if out else str(p))
    return out or "(top level)"


def schema_errors(data, kind: str) -> list[str]:
    """'field.path: message' for every schema violation, sorted by path."""
    errs = sorted(_validator(kind).iter_errors(data), key=lambda e: [str(p) for p in e.absolute_path])
    return [f"{_where(e.absolute_path)}: {e.message}" for e in errs]
