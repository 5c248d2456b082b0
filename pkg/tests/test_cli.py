import json
import subprocess
import sys
from pathlib import Path

import pytest

from polyrigid.cli import main

DATA = Path(__file__).parent / "data"


def run(argv, capsys):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(argv, capsys):
    code, out, _ = run(argv, capsys)
    return code, json.loads(out)


def test_analyze_k3(capsys):
    code, rep = report(["analyze", DATA / "k3_linf.json", "--emit-matrix"], capsys)
    assert code == 0 and rep["ok"]
    assert rep["rank"] == 3 and rep["flex_dim"] == 1 and not rep["rigid"]
    assert rep["screens"]["vertex"]["moving"] == ["c"]
    assert rep["matrix"]["rows"] == ["(a-b,F1)", "(a-c,F2)", "(b-c,F2)"]
    assert all(rep["kernel_sanity"].values())


def test_analyze_lovasz(capsys):
    code, rep = report(["analyze", DATA / "lovasz_six.json"], capsys)
    assert code == 0 and rep["minimally_rigid"] and rep["shape"] == [10, 12]


def test_analyze_float_backend(capsys):
    code, rep = report(["analyze", DATA / "k3_linf.json", "--backend", "float"], capsys)
    assert code == 0 and rep["polytope"]["backend"] == "float" and rep["rank"] == 3


def test_construct_and_reanalyze(tmp_path, capsys):
    out = tmp_path / "fw.json"
    code, rep = report(["construct", DATA / "six_vertex_graph.json", "--polytope", "linf:2", "--out", out], capsys)
    assert code == 0 and rep["evidence"]["minimally_rigid"] and rep["maxwell"]["verdict"] == "Tight"
    code, again = report(["analyze", out], capsys)
    assert code == 0 and again["minimally_rigid"] and again["well_positioned"]


def test_construct_non_tight_exits_2(capsys):
    code, rep = report(["construct", DATA / "k3_graph.json", "--polytope", "l1:2"], capsys)
    assert code == 2 and rep["error"]["type"] == "NotTight"


def test_reduce_then_replay(tmp_path, capsys):
    code, rep = report(["reduce", DATA / "k4_graph.json"], capsys)
    assert code == 0
    seq = tmp_path / "seq.json"
    seq.write_text(json.dumps(rep["sequence"]))
    code, rep = report(["replay", seq, "--polytope", "l1:2"], capsys)
    assert code == 0 and rep["minimally_rigid"]


def test_tower_inline(capsys):
    code, rep = report(["tower", '{"family": "zigzag"}', "--depth", "4"], capsys)
    assert code == 0 and rep["summary"] == "rigid union evidence, no rigid truncation"
    assert [t["flex_vertex"] for t in rep["truncations"]] == [2, 4, 6, 8]


def test_tower_depth_one_exits_2(capsys):
    code, _ = report(["tower", '{"family": "zigzag"}', "--depth", "1"], capsys)
    assert code == 2


@pytest.mark.parametrize("text,kind", [
    ("{not json", "ParseError"),
    ('{"polytope": "linf:2", "vertices": 2, "edges": [[0, 1]], "placement": [[0, 0], [0, 0]]}',
     "CoincidentEndpoints"),
    ('{"polytope": "nope:2", "vertices": 1, "placement": [[0, 0]]}', "ValidationError"),
    ('{"polytope": "linf:2", "vertices": 2, "placement": [[0, 0]]}', "ValidationError"),
])
def test_bad_input_exits_2(tmp_path, capsys, text, kind):
    f = tmp_path / "in.json"
    f.write_text(text)
    code, rep = report(["analyze", f], capsys)
    assert code == 2 and not rep["ok"]
    assert rep["error"]["type"] == kind or kind == "ValidationError"


def test_csv_output(capsys):
    code, out, _ = run(["analyze", DATA / "k3_linf.json", "--format", "csv"], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "key,value" and "rank,3" in lines


def test_output_file(tmp_path, capsys):
    dest = tmp_path / "r.json"
    code, out, _ = run(["analyze", DATA / "k3_linf.json", "-o", dest], capsys)
    assert code == 0 and out == "" and json.loads(dest.read_text())["rank"] == 3


def test_repeat_runs_are_bit_identical():
    cmd = [sys.executable, "-m", "polyrigid", "construct", str(DATA / "six_vertex_graph.json"),
           "--polytope", "l1:2", "--seed", "3"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b


def test_timing_is_opt_in(capsys):
    _, rep = report(["analyze", DATA / "k3_linf.json"], capsys)
    assert "timing_seconds" not in rep
    _, rep = report(["analyze", DATA / "k3_linf.json", "--timing"], capsys)
    assert rep["timing_seconds"] >= 0


def test_nested_graph_schema(tmp_path, capsys):
    f = tmp_path / "fw.json"
    f.write_text(json.dumps({"graph": {"n": 3, "edges": [[0, 1], [0, 2], [1, 2]]},
                             "placement": [[-1, 0], [1, 0], [0, 2]],
                             "polytope": {"dim": 2, "vertices": [[1, 1], [1, -1], [-1, 1], [-1, -1]]}}))
    code, rep = report(["analyze", f], capsys)
    assert code == 0 and rep["rank"] == 3
