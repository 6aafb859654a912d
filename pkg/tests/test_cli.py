import json

import pytest

from cubecover.cli import collection_from_json, collection_to_json, main
from support import load_golden_table


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out


def test_gen_cell_then_oracle(tmp_path, capsys):
    inst = tmp_path / "cell2.json"
    code, _ = run(capsys, "gen", "--kind", "cell", "--d", "2", "--out", str(inst))
    assert code == 0
    code, out = run(capsys, "oracle", "--in", str(inst))
    assert code == 0
    assert "phi\t1/4" in out


def test_volume_both_methods(tmp_path, capsys):
    inst = tmp_path / "cell2.json"
    run(capsys, "gen", "--kind", "cell", "--d", "2", "--out", str(inst))
    code, out = run(capsys, "volume", "--in", str(inst))
    assert code == 0 and out.startswith("4\t")
    code, out = run(capsys, "volume", "--in", str(inst), "--method", "ie")
    assert code == 0 and out.startswith("4\t")


def test_gen_round_trip_and_determinism(tmp_path, capsys):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    flags = ["gen", "--kind", "random", "--d", "2", "--n", "8", "--rmin", "1/2", "--rmax", "2", "--seed", "9"]
    assert run(capsys, *flags, "--out", str(a))[0] == 0
    assert run(capsys, *flags, "--out", str(b))[0] == 0
    assert a.read_text() == b.read_text()
    doc = json.loads(a.read_text())
    c = collection_from_json(doc)
    assert collection_to_json(c, doc.get("meta")) == doc


def test_select_then_verify_ok(tmp_path, capsys):
    inst = tmp_path / "r.json"
    sel = tmp_path / "sel.json"
    run(capsys, "gen", "--kind", "random", "--d", "2", "--n", "10", "--rmin", "1/4", "--rmax", "4",
        "--radius-law", "loguniform", "--seed", "6", "--out", str(inst))
    code, _ = run(capsys, "select", "--algo", "pipeline", "--in", str(inst), "--out", str(sel))
    assert code == 0
    doc = json.loads(sel.read_text())
    assert doc["algo"] == "pipeline" and doc["params"]["J"] == 6
    code, out = run(capsys, "verify", "--in", str(inst), "--sel", str(sel))
    assert code == 0
    assert "FAIL" not in out


@pytest.mark.parametrize("algo", ["greedy", "window", "lacunary"])
def test_select_other_algos_verify(tmp_path, capsys, algo):
    inst = tmp_path / "r.json"
    sel = tmp_path / "sel.json"
    run(capsys, "gen", "--kind", "random", "--d", "2", "--n", "9", "--rmin", "1/2", "--rmax", "3",
        "--seed", "4", "--out", str(inst))
    code, _ = run(capsys, "select", "--algo", algo, "--in", str(inst), "--out", str(sel))
    assert code == 0
    assert run(capsys, "verify", "--in", str(inst), "--sel", str(sel))[0] == 0


def test_select_pipeline_explicit_params(tmp_path, capsys):
    inst = tmp_path / "r.json"
    sel = tmp_path / "sel.json"
    run(capsys, "gen", "--kind", "random", "--d", "1", "--n", "6", "--rmin", "1/2", "--rmax", "4",
        "--seed", "2", "--out", str(inst))
    code, _ = run(capsys, "select", "--algo", "pipeline", "--in", str(inst),
                  "--J", "4", "--lambda", "3/2", "--out", str(sel))
    assert code == 0
    assert json.loads(sel.read_text())["params"]["lambda"] == "3/2"


def test_verify_corrupted_selection_exits_2(tmp_path, capsys):
    inst = tmp_path / "cell.json"
    sel = tmp_path / "bad.json"
    run(capsys, "gen", "--kind", "cell", "--d", "2", "--out", str(inst))
    sel.write_text(json.dumps({
        "algo": "greedy",
        "indices": [0, 1],
        "achieved_ratio": "1/2",
        "certified_bound": "1/9",
    }))
    code, out = run(capsys, "verify", "--in", str(inst), "--sel", str(sel))
    assert code == 2
    assert "FAIL" in out and "disjoint" in out


def test_oracle_cap_exceeded_exits_3(tmp_path, capsys):
    inst = tmp_path / "cell.json"
    run(capsys, "gen", "--kind", "cell", "--d", "2", "--out", str(inst))
    assert run(capsys, "oracle", "--in", str(inst), "--cap", "2")[0] == 3


def test_malformed_file_exits_1(tmp_path, capsys):
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(capsys, "volume", "--in", str(junk))[0] == 1
    missing_field = tmp_path / "m.json"
    missing_field.write_text(json.dumps({"dim": 2}))
    assert run(capsys, "volume", "--in", str(missing_field))[0] == 1


def test_bad_flags_exit_1(capsys):
    assert main(["select", "--algo", "quantum", "--in", "x.json"]) == 1
    assert main(["frobnicate"]) == 1


def test_table_matches_golden(capsys):
    code, out = run(capsys, "table", "--dmax", "20")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split("\t") == ["d", "L_d", "m_d", "m_d/3^d"]
    golden = load_golden_table()
    assert len(lines) == 21
    for line, (d, L, m, m3d) in zip(lines[1:], golden):
        cells = line.split("\t")
        assert int(cells[0]) == d and int(cells[1]) == L
        assert abs(float(cells[2]) - m) <= 5e-4
        assert abs(float(cells[3]) - m3d) <= 5e-4
    assert "14\t69\t3811881.534\t0.797" in out


def test_table_markdown_and_compare(capsys):
    code, out = run(capsys, "table", "--dmax", "2", "--format", "md", "--compare")
    assert code == 0
    header = out.splitlines()[0]
    assert header.startswith("| d |") and "ours" in header
    assert out.count("|") > 10


def test_table_digits_flag(capsys):
    _, out = run(capsys, "table", "--dmax", "1", "--digits", "6")
    assert "16.970563" in out


def test_frontier_reports_14(capsys):
    code, out = run(capsys, "frontier")
    assert code == 0
    assert out.splitlines()[0] == "improvement dimension\t14"
    assert "g(L_14)" in out


def test_gen_lacunary_cli(tmp_path, capsys):
    inst = tmp_path / "lac.json"
    code, _ = run(capsys, "gen", "--kind", "lacunary", "--d", "2",
                  "--windows", "1:2,8:16", "--lambda", "4", "--mu", "2",
                  "--per-window", "3", "--seed", "5", "--out", str(inst))
    assert code == 0
    c = collection_from_json(json.loads(inst.read_text()))
    assert len(c) == 6


def test_gen_dyadic_cli_stdout(capsys):
    code, out = run(capsys, "gen", "--kind", "dyadic", "--d", "1", "--levels", "1")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["cubes"]) == 3


def test_help_exits_0(capsys):
    assert main(["--help"]) == 0
    capsys.readouterr()
