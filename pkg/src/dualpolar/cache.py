"""On-disk cache of enumerated dual polar graphs.

One JSON file per (family, q, d, schema version).  The codimension matrix is
stored row-major as base64 bytes and the whole payload carries a SHA-256
checksum; a file that fails validation is rebuilt without complaint.
"""

from __future__ import annotations

import base64
import hashlib
import json
import os
from pathlib import Path

import numpy as np

from .geometry import DEFAULT_CAP, DualPolarGraph, Subspace, build_graph
from .qcore import PolarParams

SCHEMA_VERSION = 1
ENV_VAR = "DUALPOLAR_CACHE"


def default_cache_dir() -> Path | None:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else None


def cache_path(cache_dir: Path, p: PolarParams) -> Path:
    return Path(cache_dir) / f"{p.family.value}_q{p.q}_d{p.d}_v{SCHEMA_VERSION}.json"


def _checksum(body: dict) -> str:
    blob = json.dumps(body, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def graph_to_json(g: DualPolarGraph) -> dict:
    p = g.params
    body = {
        "schema_version": SCHEMA_VERSION,
        "family": p.family.value,
        "q": p.q,
        "d": p.d,
        "n": g.n,
        "vertices": [[list(row) for row in v.basis] for v in g.vertices],
        "codim": base64.b64encode(np.ascontiguousarray(g.codim, dtype=np.uint8).tobytes()).decode(),
    }
    return {**body, "checksum": _checksum(body)}


def graph_from_json(data: dict) -> DualPolarGraph:
    body = {k: v for k, v in data.items() if k != "checksum"}
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError("stale cache schema")
    if _checksum(body) != data.get("checksum"):
        raise ValueError("cache checksum mismatch")
    p = PolarParams(data["family"], data["q"], data["d"])
    n = data["n"]
    codim = np.frombuffer(base64.b64decode(data["codim"]), dtype=np.uint8).reshape(n, n)
    width = len(data["vertices"][0][0]) if n and data["vertices"][0] else 0
    vertices = [Subspace(tuple(tuple(r) for r in rows), width, p.q) for rows in data["vertices"]]
    return DualPolarGraph(p, vertices, codim.copy())


def load_graph(p: PolarParams, cache_dir: Path | str | None = None, cap: int = DEFAULT_CAP) -> DualPolarGraph:
    """Graph for p, read from the cache when a valid entry exists."""
    cache_dir = Path(cache_dir) if cache_dir is not None else default_cache_dir()
    if cache_dir is None:
        return build_graph(p, cap=cap)
    path = cache_path(cache_dir, p)
    if path.exists():
        try:
            g = graph_from_json(json.loads(path.read_text()))
            if g.params == p:
                return g
        except (ValueError, KeyError, json.JSONDecodeError):
            pass
    g = build_graph(p, cap=cap)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_suffix(".tmp")
    tmp.write_text(json.dumps(graph_to_json(g)))
    tmp.replace(path)
    return g
