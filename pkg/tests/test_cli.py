import json

from click.testing import CliRunner

from torkh.cli import main


def run(*args, **kw):
    return CliRunner().invoke(main, list(args), catch_exceptions=False, **kw)


def test_s_trefoil():
    r = run("s", "torus:3,2")
    assert r.exit_code == 0 and r.output.strip() == "2"


def test_s_json_and_orientation():
    r = run("s", "torus:2,2", "--orientation", "rev=1", "--format", "json")
    assert json.loads(r.output) == {"s": -1, "orientation": [1], "field": "Q"}
    r = run("s", "torus:3,2", "--ring", "F2", "--format", "json")
    assert json.loads(r.output)["experimental"] is True


def test_kh_formats():
    r = run("kh", "torus:3,2", "--format", "json")
    data = json.loads(r.output)
    assert data["ring"] == "Z"
    assert {"h": 3, "q": 7, "free": 0, "torsion": [2]} in data["groups"]
    r = run("kh", "torus:3,2", "--ring", "Q", "--format", "csv")
    assert r.output.splitlines()[0].startswith("h,q")
    assert run("kh", "torus:2,2").exit_code == 0


def test_predict_matches_lee_json():
    a = run("predict", "gr", "torus:4,4", "--format", "json")
    b = run("lee", "torus:4,4", "--format", "json")
    assert a.exit_code == b.exit_code == 0
    assert json.loads(a.output)["groups"] == json.loads(b.output)["groups"]


def test_lee_levels():
    r = run("lee", "torus:2,2", "--levels", "--format", "json")
    rows = json.loads(r.output)
    assert rows[0]["h"] == 0 and rows[0]["levels"][0] == {"q": 0, "dim_F": 2}


def test_predict_other_targets():
    assert run("predict", "s", "torus:6,6", "--orientation", "rev=1,2,3").output.strip() == "-5"
    assert json.loads(run("predict", "lee-rank", "torus:2,2").output) == {"0": 2, "2": 2}
    rows = json.loads(run("predict", "staircase", "6", "--format", "json").output)
    assert rows["0"] == 24 and rows["18"] == 48
    assert json.loads(run("predict", "L", "2", "--format", "json").output)
    r = run("predict", "relations", "40")
    assert r.exit_code == 0 and json.loads(r.output)["ok"]


def test_jones():
    r = run("jones", "torus:2,2", "--format", "json")
    assert json.loads(r.output) == {"0": 1, "2": 1, "4": 1, "6": 1}


def test_verify_commands():
    r = run("verify", "lower-bound", "--n", "3", "--ring", "Z", "--format", "json")
    assert r.exit_code == 0 and json.loads(r.output)["status"] == "pass"
    r = run("verify", "les", "--n", "4")
    assert r.exit_code == 0 and r.output.count("PASS") == 3
    assert run("verify", "recursions", "--n", "3").exit_code == 0
    assert run("verify", "filtration", "--n", "3", "--m", "2").exit_code == 0
    assert run("verify", "relations", "--n", "30").exit_code == 0


def test_verify_failure_exit_code():
    # additivity does not hold on the whole square family
    r = run("verify", "les", "--n", "4", "--m", "4")
    assert r.exit_code == 1 and "FAIL" in r.output


def test_verify_skipped_exit_code():
    r = run("verify", "lower-bound", "--n", "4", "--max-generators", "3")
    assert r.exit_code == 1 and "SKIP" in r.output


def test_usage_errors():
    assert run("kh", "nonsense:1").exit_code == 2
    assert run("kh", "torus:3,2", "--ring", "R").exit_code == 2
    assert run("verify", "les").exit_code == 2
    r = run("kh", "torus:6,6")
    assert r.exit_code == 2 and "--slow" in r.output
    assert run("jones", "torus:6,6").exit_code == 2
    assert run("predict", "gr", "braid:3:1,2").exit_code == 2
    assert run("lee", "torus:2,2", "--ring", "Z").exit_code == 2


def test_cache_dir_option(tmp_path):
    r = run("kh", "torus:3,2", "--cache-dir", str(tmp_path))
    assert r.exit_code == 0 and any(tmp_path.iterdir())


def test_env_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("TORKH_CACHE", str(tmp_path))
    assert run("kh", "torus:2,2").exit_code == 0
    assert len(list(tmp_path.glob("*.json"))) == 1
