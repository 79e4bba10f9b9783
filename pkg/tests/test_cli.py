import json
import os
import subprocess
import sys
from pathlib import Path

import pytest

from wittforge.cli import main, parse_fixture
from wittforge.serialize import SchemaError

DEMOS = Path(__file__).resolve().parent.parent / "demos" / "scenarios"


def _run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def _scenario(tmp_path, payload):
    path = tmp_path / "s.json"
    path.write_text(json.dumps(payload))
    return str(path)


def test_default_run_passes(capsys):
    code, out, _ = _run(["run"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["summary"]["failed"] == 0 and report["summary"]["total"] > 0
    ids = [r["check_id"] for r in report["records"]]
    assert ids == sorted(ids)
    for r in report["records"]:
        assert set(r) >= {"check_id", "paper_ref", "inputs", "inputs_digest", "expected",
                          "computed", "pass"}


def test_single_suite_and_table(capsys):
    code, out, err = _run(["run", "--suite", "witt", "--suite", "display", "--format", "table"],
                          capsys)
    assert code == 0
    assert "witt." in out and "display." in out and "ram-equiv." not in out
    assert "elapsed" in err


def test_report_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["run", "--suite", "multilinear", "--seed", "7", "--out", str(a)]) == 0
    assert main(["run", "--suite", "multilinear", "--seed", "7", "--out", str(b)]) == 0
    capsys.readouterr()
    assert a.read_bytes() == b.read_bytes()


def test_budget_exceeded(capsys):
    code, out, _ = _run(["run", "--budget-ms", "1"], capsys)
    assert code == 3
    assert json.loads(out)["summary"]["budget_exceeded"]


def test_bad_arguments(tmp_path, capsys):
    assert _run(["run", "--suite", "nope"], capsys)[0] == 2
    assert _run(["run", "--scenario", str(tmp_path / "missing.json")], capsys)[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert _run(["run", "--scenario", str(bad)], capsys)[0] == 2
    assert _run(["frobnicate"], capsys)[0] == 2


def test_bad_fixture_in_scenario(tmp_path, capsys):
    path = _scenario(tmp_path, {"suites": ["dieudonne"], "defaults": False,
                                "objects": [{"id": "D", "fixture": "lubin-tate h=two"}],
                                "checks": []})
    assert _run(["run", "--scenario", path], capsys)[0] == 2
    path = _scenario(tmp_path, {"suites": ["dieudonne"], "defaults": False,
                                "objects": [{"id": "D", "fixture": "no-such-group"}],
                                "checks": []})
    assert _run(["run", "--scenario", path], capsys)[0] == 2


def test_failing_expectation_exits_one(tmp_path, capsys):
    path = _scenario(tmp_path, {
        "suites": ["dieudonne"], "defaults": False,
        "objects": [{"id": "D", "fixture": "lubin-tate h=3 p=3 level=2"}],
        "checks": [{"id": "dieudonne.wrong", "suite": "dieudonne", "op": "module_invariants",
                    "object": "D", "r": 2, "expect": {"height": 4}}]})
    code, out, err = _run(["run", "--scenario", path], capsys)
    assert code == 1
    assert "FAIL dieudonne.wrong" in err
    assert json.loads(out)["summary"]["failed"] == 1


@pytest.mark.parametrize("name", sorted(p.name for p in DEMOS.glob("*.json")))
def test_demo_scenarios(name, capsys):
    code, out, _ = _run(["run", "--scenario", str(DEMOS / name)], capsys)
    assert code == 0, out


def test_fixtures_list_and_dump(capsys):
    code, out, _ = _run(["fixtures", "list"], capsys)
    assert code == 0 and "lubin-tate" in json.loads(out)["modules"]
    code, out, _ = _run(["fixtures", "dump", "lubin-tate", "h=3", "p=3", "level=2"], capsys)
    d = json.loads(out)
    assert code == 0 and d["rank"] == 3 and d["level"] == 2
    code, out, _ = _run(["fixtures", "dump", "--display", "supersingular", "p=3"], capsys)
    assert code == 0 and json.loads(out)["rankT"] == 1
    assert _run(["fixtures", "dump"], capsys)[0] == 2
    assert _run(["fixtures", "dump", "nothing"], capsys)[0] == 2


def test_parse_fixture():
    D = parse_fixture("supersingular-e-curve p=5 level=2")
    assert D.ring.p == 5 and D.ring.n == 2
    with pytest.raises(SchemaError):
        parse_fixture("lubin-tate h")


def test_module_entry_point_and_cache_dir(tmp_path):
    env = dict(os.environ, WITTFORGE_CACHE_DIR=str(tmp_path))
    res = subprocess.run([sys.executable, "-m", "wittforge", "run", "--suite", "witt"],
                         capture_output=True, text=True, env=env)
    assert res.returncode == 0, res.stderr
    assert any(p.name.startswith("witt_") for p in tmp_path.iterdir())
