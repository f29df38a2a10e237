import json
import threading

from torkh.cache import Cache
from torkh.engine import QQ, BigradedTable, khovanov_homology
from torkh.lee import FiltrationTable, filtration_table, lee_complex
from torkh.links import torus_diagram


def test_path_layout(tmp_path):
    c = Cache(tmp_path)
    d = torus_diagram(3, 2)
    p = c.path(d, "Khovanov", "Q")
    assert p.parent == tmp_path and p.name.endswith(".Khovanov.Q.homology.json")
    assert c.load(d, "Khovanov", "Q") is None


def test_roundtrip_tables(tmp_path):
    c = Cache(tmp_path)
    d = torus_diagram(4, 3)
    t = khovanov_homology(d, QQ)
    c.store(d, "Khovanov", "Q", t.to_json())
    assert BigradedTable.from_json(c.load(d, "Khovanov", "Q")) == t
    ft = filtration_table(lee_complex(d))
    c.store(d, "Lee", "Q", json.loads(ft.dumps()), kind="filtration")
    assert FiltrationTable.from_json(c.load(d, "Lee", "Q", kind="filtration")) == ft


def test_corrupt_file_is_a_miss(tmp_path):
    c = Cache(tmp_path)
    d = torus_diagram(2, 2)
    c.path(d, "Khovanov", "Q").write_text("{not json")
    assert c.load(d, "Khovanov", "Q") is None


def test_from_env(tmp_path, monkeypatch):
    monkeypatch.delenv("TORKH_CACHE", raising=False)
    assert Cache.from_env() is None
    monkeypatch.setenv("TORKH_CACHE", str(tmp_path))
    assert Cache.from_env().root == tmp_path
    assert Cache.from_env(str(tmp_path / "x")).root == tmp_path / "x"


def test_concurrent_writers(tmp_path):
    c = Cache(tmp_path)
    d = torus_diagram(2, 2)
    payloads = [{"ring": "Q", "groups": [{"h": 0, "q": k, "free": 1, "torsion": []}]}
                for k in range(8)]
    threads = [threading.Thread(target=c.store, args=(d, "Khovanov", "Q", p)) for p in payloads]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert c.load(d, "Khovanov", "Q") in payloads
    assert not list(tmp_path.glob(".tmp-*"))
