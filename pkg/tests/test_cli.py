import json
import math
import subprocess
import sys

import jsonschema
import networkx as nx
import numpy as np
import pytest

from conley.cli import main
from conley.serialize import REPORT_SCHEMA, dense_from_rle, parse_pgm

from conftest import BUILTIN_CASES

GOLDEN = (math.sqrt(5) - 1) / 2


def write_cfg(path, system, params=None, cells=32, ladder="4h, 2h", floor="true", extra=""):
    lines = [f"system.name = {system}"]
    lines += [f"system.{k} = {v!r}" for k, v in (params or {}).items()]
    lines += [f"grid.cells = {cells}", f"ladder.values = {ladder}", f"ladder.identity_floor = {floor}"]
    path.write_text("\n".join(lines) + "\n" + extra)
    return path


def dot_graph(text):
    edges = [tuple(line.strip(" ;").split(" -> ")) for line in text.splitlines() if "->" in line]
    nodes = [line.split()[0] for line in text.splitlines() if "[label=" in line]
    g = nx.DiGraph()
    g.add_nodes_from(nodes)
    g.add_edges_from(edges)
    return g


def test_analyze_writes_every_output(tmp_path, capsys):
    cfg = write_cfg(tmp_path / "ns.cfg", "north_south", {"delta": 0.05}, cells=64)
    out = tmp_path / "out"
    assert main(["analyze", str(cfg), "--out-dir", str(out)]) == 0
    data = json.loads((out / "report.json").read_text())
    jsonschema.validate(data, REPORT_SCHEMA)
    assert data["routes_equal"] is True and data["identities_ok"] is True
    assert len(data["rungs"]) == 3 and data["rungs"][-1]["eps"] == 0.0
    g = dot_graph((out / "morse.dot").read_text())
    assert nx.is_directed_acyclic_graph(g) and g.number_of_nodes() == len(data["components"])
    assert parse_pgm((out / "conley.pgm").read_bytes()).shape == (64, 64)
    rel_px = parse_pgm((out / "relation.pgm").read_bytes())
    assert np.array_equal(rel_px == 0, dense_from_rle(data["relation"]))
    csv = (out / "cells.csv").read_text().splitlines()
    assert csv[0] == "index,center,chain_recurrent" and len(csv) == 65
    flagged = [int(row.split(",")[0]) for row in csv[1:] if row.endswith(",1")]
    assert flagged == data["chain_recurrent"]["indices"]
    assert "chain recurrent cells" in capsys.readouterr().out


def test_report_round_trips_cell_sets(tmp_path):
    cfg = write_cfg(tmp_path / "l.cfg", "logistic", {"r": 3.2}, cells=64, floor="false")
    out = tmp_path / "o"
    main(["analyze", str(cfg), "--out-dir", str(out)])
    data = json.loads((out / "report.json").read_text())
    conley = dense_from_rle(data["conley_alt"])
    assert np.flatnonzero(np.diag(conley)).tolist() == data["chain_recurrent"]["indices"]
    assert conley.sum() == data["conley_alt"]["cardinality"]
    centers = np.array(data["chain_recurrent"]["centers"])[:, 0]
    assert np.allclose(centers, (np.array(data["chain_recurrent"]["indices"]) + 0.5) / 64)


def test_reruns_are_byte_identical(tmp_path):
    cfg = write_cfg(tmp_path / "r.cfg", "rotation", {"alpha": GOLDEN}, cells=64, extra="seed = 3\n")
    a, b = tmp_path / "a", tmp_path / "b"
    main(["analyze", str(cfg), "--out-dir", str(a)])
    main(["analyze", str(cfg), "--out-dir", str(b), "--workers", "3"])
    for name in ("report.json", "morse.dot", "relation.pgm", "conley.pgm", "cells.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_golden_rotation_is_one_component(tmp_path):
    cfg = write_cfg(tmp_path / "g.cfg", "rotation", {"alpha": GOLDEN}, cells=256, ladder="2h, 1h", floor="false")
    assert main(["analyze", str(cfg), "--out-dir", str(tmp_path)]) == 0
    data = json.loads((tmp_path / "report.json").read_text())
    assert len(data["chain_recurrent"]["indices"]) == 256
    assert len(data["morse"]["nodes"]) == 1 and data["morse"]["edges"] == []


def test_outputs_key_limits_files(tmp_path):
    cfg = write_cfg(tmp_path / "c.cfg", "doubling", cells=16, extra="outputs = dot\n")
    main(["analyze", str(cfg), "--out-dir", str(tmp_path / "o")])
    assert sorted(p.name for p in (tmp_path / "o").iterdir()) == ["morse.dot"]


def test_env_overrides_out_dir(tmp_path, monkeypatch):
    cfg = write_cfg(tmp_path / "c.cfg", "tent", {"mu": 1.5}, cells=16, extra=f"out_dir = {tmp_path / 'cfg_dir'}\n")
    monkeypatch.setenv("CONLEY_OUT_DIR", str(tmp_path / "env_dir"))
    main(["analyze", str(cfg)])
    assert (tmp_path / "env_dir" / "report.json").exists()
    assert not (tmp_path / "cfg_dir").exists()


def test_missing_system_exits_2(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("grid.cells = 8\nladder.values = 1h\n")
    assert main(["analyze", str(cfg)]) == 2
    assert "'system'" in capsys.readouterr().err


def test_bad_line_exits_2_with_location(tmp_path, capsys):
    cfg = write_cfg(tmp_path / "bad.cfg", "doubling", extra="grid.shape = square\n")
    assert main(["identities", str(cfg)]) == 2
    assert f"{cfg}:5:" in capsys.readouterr().err


def test_sub_resolution_rung_exits_2(tmp_path, capsys):
    cfg = write_cfg(tmp_path / "s.cfg", "doubling", cells=32, ladder="2h, 0.5h", floor="false")
    assert main(["analyze", str(cfg), "--out-dir", str(tmp_path)]) == 2
    assert "rung 0.015625" in capsys.readouterr().err


@pytest.mark.parametrize("name, params", BUILTIN_CASES)
def test_identities_pass_and_fault_injection_fails(tmp_path, capsys, name, params):
    cfg = write_cfg(tmp_path / "i.cfg", name, params, cells=32)
    assert main(["identities", str(cfg)]) == 0
    out = capsys.readouterr().out
    assert "required:" in out and "diagnostics:" in out
    assert main(["identities", str(cfg), "--corrupt-limit"]) == 1
    assert "FAIL" in capsys.readouterr().err


def test_empty_synthetic_passes(tmp_path, capsys):
    cfg = tmp_path / "e.cfg"
    cfg.write_text("system.name = empty\ngrid.domain = unit_interval\ngrid.cells = 8\nladder.values = 2h, 1h\n")
    assert main(["identities", str(cfg)]) == 0
    assert main(["analyze", str(cfg), "--out-dir", str(tmp_path / "o")]) == 0
    data = json.loads((tmp_path / "o" / "report.json").read_text())
    assert data["conley_alt"]["cardinality"] == 0 and data["chain_recurrent"]["indices"] == []


def test_oracle_check_exit_codes(capsys):
    assert main(["oracle-check", "--sizes", "2,3"]) == 0
    assert "size 3: 512 relations agree (exhaustive)" in capsys.readouterr().out
    assert main(["oracle-check", "--sizes", "8", "--trials", "10000", "--seed", "42"]) == 0
    assert main(["oracle-check", "--sizes", "20"]) == 2
    assert main(["oracle-check", "--sizes", "2", "--checks", "nonsense"]) == 2


def test_oracle_check_reports_counterexample(monkeypatch, capsys):
    from conley import limits, relation

    monkeypatch.setattr(limits, "limit_relation", lambda f: relation.identity(f.carrier))
    assert main(["oracle-check", "--sizes", "2", "--checks", "limit_relation"]) == 1
    payload = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert payload["size"] == 2 and payload["check"] == "limit_relation"


def test_render_reproduces_analyze_outputs(tmp_path):
    cfg = write_cfg(tmp_path / "n.cfg", "north_south", {"delta": 0.3}, cells=32)
    out = tmp_path / "o"
    main(["analyze", str(cfg), "--out-dir", str(out)])
    report = out / "report.json"
    assert main(["render", str(report), "--format", "pgm", "-o", str(tmp_path / "c.pgm")]) == 0
    assert (tmp_path / "c.pgm").read_bytes() == (out / "conley.pgm").read_bytes()
    assert main(["render", str(report), "--format", "dot", "-o", str(tmp_path / "m.dot")]) == 0
    assert (tmp_path / "m.dot").read_bytes() == (out / "morse.dot").read_bytes()
    assert main(["render", str(report), "--format", "pgm", "--relation", "omega"]) == 0
    assert (out / "omega.pgm").exists()
    assert main(["render", str(report), "--format", "pgm", "--relation", "nope"]) == 2
    assert main(["render", str(tmp_path / "missing.json"), "--format", "dot"]) == 2


def test_console_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "conley", "oracle-check", "--sizes", "2"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and "16 relations agree" in proc.stdout
