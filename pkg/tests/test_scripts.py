import importlib.util
import json
from pathlib import Path

import pytest

SCRIPTS = Path(__file__).resolve().parent.parent / "scripts"


def load(name):
    spec = importlib.util.spec_from_file_location(name, SCRIPTS / f"{name}.py")
    mod = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(mod)
    return mod


def test_grassmannian_sweep_writes_consistent_records(tmp_path):
    out = tmp_path / "sweep.json"
    assert load("grassmannian_sweep").main(["--min-n", "4", "--max-n", "6", "--out", str(out)]) == 0
    records = json.loads(out.read_text())
    assert [r["n"] for r in records] == [4, 5, 6]
    assert all(r["consistent"] for r in records)
    assert [r["verdict"] for r in records] == ["Disc(2)", "Sphere(4)", "Sphere(5)"]


def test_grassmannian_sweep_rejects_bad_range():
    with pytest.raises(SystemExit):
        load("grassmannian_sweep").main(["--min-n", "7", "--max-n", "5"])


def test_fiber_separation_summary(tmp_path):
    out = tmp_path / "sep.json"
    assert load("fiber_separation").main(["--n", "5", "--seeds", "3", "--samples", "50", "--out", str(out)]) == 0
    (rec,) = json.loads(out.read_text())
    assert rec["ok"] and rec["n"] == 5 and rec["seed"] == 3
    assert all(c["failed"] == 0 for c in rec["checks"].values())
