import json
import subprocess
import sys

import pytest

from curvegraph.cli import main
from curvegraph.corpus import k2, p3, random_graph, warped_c4
from curvegraph.fileio import load_graph, save_graph, save_warp


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, [json.loads(line) for line in out.splitlines()]


@pytest.fixture
def files(tmp_path):
    save_graph(k2(), tmp_path / "k2.json")
    save_graph(p3(), tmp_path / "p3.json")
    save_warp(warped_c4(), tmp_path / "warped_c4.json")
    return tmp_path


def test_curv_k2(capsys, files):
    code, recs = run(capsys, "curv", files / "k2.json", "--dim", "2")
    assert code == 0
    assert [r["vertex"] for r in recs] == ["x", "y"]
    assert all(abs(r["value"] - 1) <= 1e-9 and r["saturation"] == "unsaturated" for r in recs)


def test_curv_inf_serialized(capsys, files):
    _, recs = run(capsys, "curv", files / "p3.json", "--vertex", "y")
    assert len(recs) == 1 and recs[0]["N"] == "inf"
    assert recs[0]["saturation"] == "strongly_saturated"


def test_report_warped_c4(capsys, files):
    code, recs = run(capsys, "report", files / "warped_c4.json", "--dims", "2,2")
    assert code == 0
    assert recs[0]["record"] == "spec" and recs[0]["dil_alpha2"] == 4.0
    (xq,) = [r for r in recs if r.get("vertex") == "x|q"]
    sw = {e["kind"]: e["value"] for e in xq["entries"]}
    assert sw["sandwich_lower"] == pytest.approx(0.25) and sw["sandwich_upper"] == pytest.approx(1.0)
    assert [r["vertex"] for r in recs[1:]] == sorted(r["vertex"] for r in recs[1:])


def test_workers_do_not_change_output(capsys, files, monkeypatch):
    g = files / "g.json"
    save_graph(random_graph(6, 0.5, seed=1), g)
    main(["bounds", str(g), "--dim", "3"])
    serial = capsys.readouterr().out
    monkeypatch.setenv("CURVEGRAPH_WORKERS", "2")
    main(["bounds", str(g), "--dim", "3"])
    assert capsys.readouterr().out == serial


def test_product_and_metric(capsys, files):
    out = files / "prod.json"
    code, recs = run(capsys, "product", files / "warped_c4.json", "-o", out)
    assert code == 0 and recs[0]["vertices"] == 4
    assert load_graph(out).n == 4
    code, recs = run(capsys, "metric", files / "p3.json", "--kind", "resistance", "--pairs", "x,z")
    assert recs[0]["value"] == pytest.approx(2**0.5)


def test_rigidity(capsys, files):
    code, recs = run(capsys, "rigidity", files / "warped_c4.json", "--dim", "2")
    assert code == 0 and recs[0]["good_pair"] and not recs[0]["contradiction"]


def test_csv(capsys, files):
    code, _ = run(capsys, "bounds", files / "p3.json", "--csv", files / "b.csv")
    lines = (files / "b.csv").read_text().splitlines()
    assert lines[0].startswith("record,vertex") and len(lines) == 4


def test_exit_codes(capsys, files):
    assert main(["curv", str(files / "missing.json")]) == 2
    bad = files / "bad.json"
    bad.write_text('{"vertices": [{"id": "x", "measure": 0}], "edges": []}')
    assert main(["curv", str(bad)]) == 2
    assert "non-positive measure" in capsys.readouterr().err
    assert main(["curv", str(files / "k2.json"), "--vertex", "nope"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["curv", str(files / "k2.json"), "--dim", "zero"])
    assert exc.value.code == 2


def test_verify_small(capsys):
    code, recs = run(capsys, "verify", 1, 2)
    assert code == 0
    assert recs[-1]["record"] == "summary" and recs[-1]["hard_failures"] == 0
    code, recs = run(capsys, "verify", 1, 2, "--strict")
    assert code == (1 if recs[-1]["claims_violated"] else 0)


def test_verify_deterministic(capsys):
    main(["verify", "5", "2"])
    a = capsys.readouterr().out
    main(["verify", "5", "2"])
    assert capsys.readouterr().out == a


def test_module_entry_point(files):
    r = subprocess.run([sys.executable, "-m", "curvegraph", "curv", str(files / "k2.json")], capture_output=True, text=True)
    assert r.returncode == 0 and len(r.stdout.splitlines()) == 2
