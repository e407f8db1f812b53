from __future__ import annotations

import json

import pytest

from steklov_trees.cli import main

BALL32 = '{"family":"BALL","D":3,"r":2}'


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- spectrum ---------------------------------------------------------------------

def test_spectrum_json(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", BALL32)
    assert code == 0
    obj = json.loads(out)
    assert obj["schema"] == "steklov-trees/1"
    assert obj["command"] == "spectrum"
    assert obj["tree_id"] == "BALL(D=3,r=2)"
    assert obj["n"] == 10 and obj["boundary_size"] == 6
    assert obj["partial"] is False
    assert obj["eigenvalues"][1] == pytest.approx(1 / 3, abs=1e-9)
    assert "boundary_eigenvectors" not in obj


def test_spectrum_eigenfunctions(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", BALL32, "--eigenfunctions")
    assert code == 0
    obj = json.loads(out)
    assert obj["boundary_vertices"] == [4, 5, 6, 7, 8, 9]
    assert len(obj["boundary_eigenvectors"]) == 6


def test_spectrum_csv(capsys):
    code, out, _ = run(capsys, "spectrum", "--family", BALL32, "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "index,eigenvalue"
    assert len(lines) == 7
    assert float(lines[2].split(",")[1]) == pytest.approx(1 / 3, abs=1e-9)


def test_spectrum_from_files(tmp_path, capsys):
    edge_file = tmp_path / "t.txt"
    edge_file.write_text("0 1\n1 2\n# comment\n2 3\n")
    code, out, _ = run(capsys, "spectrum", "--input", str(edge_file))
    assert code == 0
    assert json.loads(out)["n"] == 4

    json_file = tmp_path / "t.json"
    json_file.write_text('{"n": 4, "edges": [[0, 1], [1, 2], [2, 3]]}')
    code, out, _ = run(capsys, "spectrum", "--input", str(json_file))
    assert code == 0
    assert json.loads(out)["boundary_size"] == 2


def test_spectrum_out_file(tmp_path, capsys):
    target = tmp_path / "spec.json"
    code, out, _ = run(capsys, "spectrum", "--family", BALL32, "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["n"] == 10


# -- bounds -----------------------------------------------------------------------

def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--family", BALL32)
    assert code == 0
    obj = json.loads(out)
    ids = [r["bound_id"] for r in obj["reports"]]
    assert ids == ["LAM2_BOUNDARY", "LAM2_VOLUME", "LAM2_DIAMETER",
                   "LAMK_BOUNDARY", "LAMK_VOLUME", "LAMK_BOUNDARY", "LAMK_VOLUME",
                   "LEMMA_DV", "PROP_L"]
    assert all(r["holds"] in (True, None) for r in obj["reports"])


def test_bounds_csv_k_selection(capsys):
    code, out, _ = run(capsys, "bounds", "--family", BALL32, "--k", "3",
                       "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "tree_id,bound_id,bound,measured,tightness,holds"
    assert len(lines) == 1 + 7  # three lam2 + one k pair + two structural
    assert lines[1].startswith("BALL(D=3,r=2),LAM2_BOUNDARY,")
    assert lines[1].endswith(",true")


def test_bounds_k_validation(capsys):
    code, _, err = run(capsys, "bounds", "--family", BALL32, "--k", "2,x")
    assert code == 2 and "bad --k" in err
    code, _, err = run(capsys, "bounds", "--family", BALL32, "--k", "1")
    assert code == 2


def test_bounds_tol_flag(capsys):
    code, out, _ = run(capsys, "bounds", "--family", BALL32, "--tol", "0.5")
    assert code == 0
    code, _, err = run(capsys, "bounds", "--family", BALL32, "--tol", "-1")
    assert code == 2


def test_tol_env_override(capsys, monkeypatch):
    monkeypatch.setenv("STEKLOV_TOL", "0.125")
    code, out, _ = run(capsys, "bounds", "--family", BALL32)
    assert code == 0
    monkeypatch.setenv("STEKLOV_TOL", "banana")
    code, _, err = run(capsys, "bounds", "--family", BALL32)
    assert code == 2


# -- generate ---------------------------------------------------------------------

def test_generate_edges(capsys):
    code, out, err = run(capsys, "generate", "--family", BALL32)
    assert code == 0
    assert out.splitlines()[0] == "0 1"
    assert len(out.strip().splitlines()) == 9
    assert "n=10 boundary=6 max_degree=3 diameter=4" in err


def test_generate_json(capsys):
    code, out, _ = run(capsys, "generate", "--family", BALL32, "--format", "json")
    assert code == 0
    obj = json.loads(out)
    assert obj["n"] == 10
    assert obj["edges"][0] == [0, 1]


def test_generate_to_file_stats_on_stdout(tmp_path, capsys):
    target = tmp_path / "tree.txt"
    code, out, _ = run(capsys, "generate", "--family", BALL32, "--out", str(target))
    assert code == 0
    assert "n=10" in out  # stats move to stdout when the tree goes to a file
    assert target.read_text().startswith("0 1\n")


def test_generate_bad_family(capsys):
    code, _, err = run(capsys, "generate", "--family", '{"family":"NOPE"}')
    assert code == 2
    code, _, err = run(capsys, "generate", "--family", "{not json")
    assert code == 2


# -- verify -----------------------------------------------------------------------

def test_verify_small(capsys):
    code, out, _ = run(capsys, "verify", "--trials", "10", "--max-n", "20",
                       "--seed", "3")
    assert code == 0
    obj = json.loads(out)
    assert obj["overall_pass"] is True
    assert obj["config"]["trials"] == 10
    assert obj["config"]["interior3_trials"] == 3  # 3/10 of the trial count


def test_verify_csv_and_determinism(capsys):
    args = ("verify", "--trials", "8", "--max-n", "18", "--seed", "5",
            "--format", "csv")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.splitlines()[0] == "check,passed,failed,skipped"


def test_verify_rejects_bad_params(capsys):
    code, _, _ = run(capsys, "verify", "--trials", "0")
    assert code == 2


# -- sweep ------------------------------------------------------------------------

def test_sweep_csv(capsys):
    code, out, _ = run(capsys, "sweep", "--family", '{"family":"PATH","L":[2,40]}',
                       "--threshold", "0.05")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("tree_id,n,boundary,D,L,lambda2,")
    assert len(lines) == 40
    first = lines[1].split(",")
    assert first[0] == "PATH(L=2)" and first[4] == "2"
    # paths have an interior degree-2 vertex: volume columns stay empty
    assert first[8] == "" and first[9] == ""


def test_sweep_json_pass_fail(capsys):
    code, out, _ = run(capsys, "sweep", "--family", '{"family":"BALL","D":3,"r":[1,8]}',
                       "--format", "json")
    assert code == 0
    assert json.loads(out)["passed"] is True

    code, out, _ = run(capsys, "sweep", "--family", '{"family":"BALL","D":3,"r":[1,4]}',
                       "--format", "json")
    assert code == 1  # lambda_2(r=4) = 1/15 is still above the 0.01 threshold
    assert json.loads(out)["passed"] is False


def test_sweep_range_validation(capsys):
    code, _, err = run(capsys, "sweep", "--family", '{"family":"PATH","L":4}')
    assert code == 2 and "exactly one parameter" in err
    code, _, _ = run(capsys, "sweep", "--family",
                     '{"family":"PATH","L":[4,2]}')
    assert code == 2
    code, _, _ = run(capsys, "sweep", "--family",
                     '{"family":"BALL","D":[3,4],"r":[1,2]}')
    assert code == 2


# -- top-level dispatch --------------------------------------------------------------

def test_missing_tree_source(capsys):
    code, _, err = run(capsys, "spectrum")
    assert code == 2 and "required" in err


def test_malformed_input_file(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("0 1\n1\n")
    code, _, err = run(capsys, "spectrum", "--input", str(bad))
    assert code == 2 and "expected 'u v'" in err


def test_missing_file(capsys):
    code, _, err = run(capsys, "spectrum", "--input", "no-such-file.txt")
    assert code == 2


def test_unknown_subcommand(capsys):
    assert main(["frobnicate"]) == 2
    assert main([]) == 2


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
