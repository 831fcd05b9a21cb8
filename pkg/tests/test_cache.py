import json

import numpy as np

from dualpolar import cache
from dualpolar.qcore import PolarParams


def test_round_trip(tmp_path):
    p = PolarParams("W", 2, 2)
    g = cache.load_graph(p, tmp_path)
    path = cache.cache_path(tmp_path, p)
    assert path.exists()
    h = cache.load_graph(p, tmp_path)
    assert np.array_equal(g.codim, h.codim)
    assert [v.basis for v in g.vertices] == [v.basis for v in h.vertices]


def test_corrupted_entry_is_rebuilt(tmp_path):
    p = PolarParams("Qplus", 2, 2)
    cache.load_graph(p, tmp_path)
    path = cache.cache_path(tmp_path, p)
    data = json.loads(path.read_text())
    data["n"] += 1
    path.write_text(json.dumps(data))
    g = cache.load_graph(p, tmp_path)
    assert g.n == 6
    assert json.loads(path.read_text())["n"] == 6


def test_stale_schema_and_garbage(tmp_path):
    p = PolarParams("W", 2, 2)
    path = cache.cache_path(tmp_path, p)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("not json")
    assert cache.load_graph(p, tmp_path).n == 15
    data = json.loads(path.read_text())
    data["schema_version"] = 0
    path.write_text(json.dumps(data))
    assert cache.load_graph(p, tmp_path).n == 15
    assert json.loads(path.read_text())["schema_version"] == cache.SCHEMA_VERSION


def test_env_override(tmp_path, monkeypatch):
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path))
    cache.load_graph(PolarParams("Q", 2, 2))
    assert cache.cache_path(tmp_path, PolarParams("Q", 2, 2)).exists()
