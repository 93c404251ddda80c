import json

import pytest

from rigx.cli import main
from rigx.fixtures import rigid_fixture
from rigx.gfmat import FieldMatrix, write_matrix

EXAMPLE = FieldMatrix.from_rows([(1, 0), (0, 1), (1, 1)], 2)


@pytest.fixture
def matrix(tmp_path):
    path = tmp_path / "m.txt"
    write_matrix(EXAMPLE, path)
    return str(path)


def run(capsys, *argv):
    code = main([*argv, "--no-timing"])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out else None)


def test_inner_dim_report(capsys, matrix):
    code, rep = run(capsys, "inner-dim", "--matrix", matrix, "--t", "1")
    assert code == 0
    assert rep["op"] == "inner-dim" and rep["schema"] == 1
    assert (rep["p"], rep["m"], rep["n"], rep["t"], rep["value"], rep["exhausted"]) == (2, 3, 2, 1, 1, 27)
    assert rep["witness"].startswith("gfmat 1 p=2 m=3 n=2\n")
    assert "elapsed_ms" not in rep


def test_timing_present_by_default(capsys, matrix):
    main(["inner-dim", "--matrix", matrix, "--t", "1"])
    assert "elapsed_ms" in json.loads(capsys.readouterr().out)


def test_reports_are_byte_identical(capsys, matrix):
    outs = []
    for threads in ("1", "8"):
        main(["outer-dim", "--matrix", matrix, "--t", "1", "--s-max", "3", "--no-timing", "--threads", threads])
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


def test_outer_dim_above_max(capsys, matrix):
    code, rep = run(capsys, "outer-dim", "--matrix", matrix, "--t", "1", "--s-max", "2")
    assert code == 0 and rep["value"] is None and rep["outcome"]["type"] == "AboveMax"


@pytest.mark.parametrize(
    "extra,key,value",
    [
        (["--mode", "row", "--r", "2"], "threshold", 1),
        (["--mode", "global", "--r", "2"], "threshold", 2),
        (["--mode", "strong", "--r", "1", "--t", "1", "--method", "gl-enum"], "rigid", True),
        (["--mode", "strong", "--r", "1", "--t", "1", "--method", "inner-dim"], "rigid", True),
    ],
)
def test_rigidity_modes(capsys, matrix, extra, key, value):
    code, rep = run(capsys, "rigidity", "--matrix", matrix, *extra)
    assert code == 0 and rep[key] == value


def test_sumset(capsys, matrix):
    assert run(capsys, "sumset", "--matrix", matrix, "--s", "2", "--t", "1")[1]["evasive"] is True


def test_counting_roundtrip_through_files(capsys, tmp_path):
    M = FieldMatrix.identity(8)
    mpath, dpath = tmp_path / "m.txt", tmp_path / "d.txt"
    write_matrix(M, mpath)
    code, rep = run(capsys, "synth-counting", "--matrix", str(mpath), "--s", "64", "--eps", "1", "--out", str(dpath))
    assert code == 0 and (rep["s_prime"], rep["t"]) == (16, 4)
    code, rep = run(capsys, "verify-ds", "--matrix", str(mpath), "--ds", str(dpath))
    assert code == 0 and rep["valid"] is True


def test_counting_search(capsys):
    code, rep = run(capsys, "counting-search", "--n", "3", "--m", "4", "--s", "3", "--threads", "2")
    assert code == 0 and rep["value"] == 2


def test_extract_fixture(capsys, tmp_path):
    path = tmp_path / "f.txt"
    write_matrix(rigid_fixture(), path)
    code, rep = run(capsys, "extract", "--matrix", str(path), "--eps", "1/4", "--k", "1", "--t", "1")
    assert code == 0 and rep["branch"] == "RigidSubmatrix"


def test_extract_schedule(capsys, matrix):
    code, rep = run(capsys, "extract", "--matrix", matrix, "--schedule", "1,1")
    assert code == 0 and rep["branch"] == "Cover"


def test_ldc_and_amplify(capsys, matrix):
    code, rep = run(capsys, "ldc", "--k", "3", "--check")
    assert code == 0 and rep["span_check"] is True and rep["verified"] is True
    code, rep = run(capsys, "amplify", "--matrix", matrix, "--ldc", "hadamard:3", "--r", "2")
    assert code == 0 and rep["holds"] is True


def test_amplify_shape_mismatch(capsys, matrix):
    assert run(capsys, "amplify", "--matrix", matrix, "--ldc", "hadamard:2", "--r", "1")[0] == 2


def test_stack(capsys, matrix, tmp_path):
    out = tmp_path / "s.txt"
    code, rep = run(capsys, "stack", "--matrix", matrix, "--copies", "2", "--out", str(out))
    assert code == 0 and rep["rank"] == 2
    assert FieldMatrix.from_text(out.read_text()).shape == (3, 4)


def test_code_emit_and_list(capsys, tmp_path):
    out = tmp_path / "h.txt"
    code, rep = run(capsys, "code", "--kind", "hamming74", "--emit-matrix", str(out))
    assert code == 0 and rep["min_distance"] == 3
    assert FieldMatrix.from_text(out.read_text()).shape == (7, 4)
    code, rep = run(capsys, "code", "--list")
    assert "hamming74" in rep["outcome"]


def test_pipelines(capsys, tmp_path, matrix):
    path = tmp_path / "f.txt"
    write_matrix(rigid_fixture(), path)
    code, rep = run(capsys, "pipeline-square", "--matrix", str(path), "--eps", "1/4", "--t", "1")
    assert code == 0 and rep["certified"] == {"r": 1, "square_threshold": 32768, "size": 256}
    h = tmp_path / "h.txt"
    main(["code", "--kind", "hamming74", "--emit-matrix", str(h)])
    capsys.readouterr()
    code, rep = run(capsys, "pipeline-dslb", "--matrix", str(h), "--r", "1", "--t", "1")
    assert code == 0 and rep["lower_bound"] == {"s": 4, "t": 1}
    code, rep = run(capsys, "pipeline-dslb", "--matrix", matrix, "--r", "2", "--t", "2")
    assert code == 2 and rep["hypothesis"] is False


def test_exit_codes(capsys, matrix, tmp_path):
    assert run(capsys, "inner-dim", "--matrix", matrix, "--t", "1", "--budget", "3")[0] == 3
    assert run(capsys, "inner-dim", "--matrix", str(tmp_path / "missing.txt"), "--t", "1")[0] == 4
    bad = tmp_path / "bad.txt"
    bad.write_text("gfmat 1 p=2 m=1 n=1\n7\n")
    assert run(capsys, "inner-dim", "--matrix", str(bad), "--t", "1")[0] == 4
    assert run(capsys, "extract", "--matrix", matrix, "--schedule", "1,1;1,1")[0] == 2


def test_budget_from_environment(capsys, matrix, monkeypatch):
    monkeypatch.setenv("RIGX_BUDGET", "3")
    assert run(capsys, "inner-dim", "--matrix", matrix, "--t", "1")[0] == 3


def test_acceptance_subset(capsys):
    code, rep = run(capsys, "acceptance", "--criteria", "6,7")
    assert code == 0 and rep["all_passed"] is True
    assert set(rep["outcome"]) == {"6", "7"}
