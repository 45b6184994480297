"""JSON forms for the verifiable structures (stable field order)."""

from __future__ import annotations

from typing import Any

from .core import Path, PathSystem, Tournament
from .domination import Dominator
from .linkage import Connector, Linker


def dominator_to_json(d: Dominator) -> dict:
    return {
        "kind": "dominator",
        "orientation": d.orientation,
        "m": d.m,
        "M": d.M,
        "p": d.p,
        "blocks": [list(b) for b in d.blocks()],
        "uncovered": sorted(d.uncovered),
        "exceptional": sorted(d.exceptional),
    }


def dominator_from_json(obj: dict) -> Dominator:
    b = [tuple(x) for x in obj["blocks"]]
    return Dominator(
        obj["orientation"], obj["m"], obj["M"], obj["p"],
        b[0], b[1], b[2], b[3],
        uncovered=frozenset(obj["uncovered"]),
        exceptional=frozenset(obj["exceptional"]),
    )


def connector_to_json(c: Connector) -> dict:
    return {
        "kind": "connector",
        "vertices": sorted(c.vertices),
        "sources": list(c.sources),
        "sinks": list(c.sinks),
        "witness4": [list(p.vertices) for p in c.witness4],
        "witness5": [list(p.vertices) for p in c.witness5],
    }


def connector_from_json(obj: dict) -> Connector:
    return Connector(
        frozenset(obj["vertices"]),
        tuple(obj["sources"]),
        tuple(obj["sinks"]),
        tuple(Path(tuple(p)) for p in obj["witness4"]),
        tuple(Path(tuple(p)) for p in obj["witness5"]),
    )


def linker_to_json(linker: Linker) -> dict:
    return {
        "kind": "linker",
        "t": linker.t,
        "indominators": [dominator_to_json(d) for d in linker.indominators],
        "outdominators": [dominator_to_json(d) for d in linker.outdominators],
        "connectors": [connector_to_json(c) for c in linker.connectors],
        "paths": [list(q.vertices) for q in linker.qpaths],
        "exceptional": sorted(linker.exceptional),
    }


def linker_from_json(obj: dict) -> Linker:
    return Linker(
        obj["t"],
        tuple(dominator_from_json(d) for d in obj["indominators"]),
        tuple(dominator_from_json(d) for d in obj["outdominators"]),
        tuple(connector_from_json(c) for c in obj["connectors"]),
        tuple(Path(tuple(q)) for q in obj["paths"]),
        frozenset(obj["exceptional"]),
    )


def decomposition_to_json(cycles: list[Path]) -> dict:
    return {"kind": "decomposition", "cycles": [list(c.vertices) for c in cycles]}


def decomposition_from_json(obj: dict) -> list[Path]:
    return [Path(tuple(c)) for c in obj["cycles"]]


def paths_to_json(ps: PathSystem) -> dict:
    return {"kind": "paths", "paths": [list(p.vertices) for p in ps.paths]}


def structure_from_json(obj: dict) -> Any:
    kind = obj.get("kind")
    if kind == "dominator":
        return dominator_from_json(obj)
    if kind == "connector":
        return connector_from_json(obj)
    if kind == "linker":
        return linker_from_json(obj)
    if kind == "decomposition":
        return decomposition_from_json(obj)
    raise ValueError(f"unknown structure kind {kind!r}")
