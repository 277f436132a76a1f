import json
import math
import subprocess
import sys

import numpy as np
import pytest

from qcayley import io
from qcayley import sampling as smp
from qcayley.cli import RunConfig, main
from qcayley.hspace import HilbertBasis, QMatrix
from qcayley.qop import operator_deviation


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def entries(obj) -> np.ndarray:
    return np.array(obj["entries"], dtype=float)


def test_gen_to_file(tmp_path, capsys):
    out = tmp_path / "a.json"
    code, summary = run(capsys, "gen", "--thetas", "0.7,1.1", "--out", str(out))
    assert code == 0
    assert summary["flags"]["in_Y"] is True
    # Every generated matrix has eigenvalue 1, so it is not in class Z.
    assert summary["flags"]["in_Z"] is False
    m = entries(json.loads(out.read_text()))
    assert m.shape == (4, 4, 4)
    r = m[..., 0]
    assert np.abs(m[..., 1:]).max() == 0.0
    assert np.abs(r - r.T).max() == 0.0
    assert np.abs(r @ r.T - np.eye(4)).max() < 1e-12


def test_gen_quarter_turn(capsys):
    code, res = run(capsys, "gen", "--thetas", repr(math.pi / 2))
    assert code == 0
    assert np.abs(entries(res["operator"])[..., 0] - [[0, 1], [1, 0]]).max() <= 1e-12
    # the rounded literal 1.5708 is only accurate to about 4e-6
    _, res = run(capsys, "gen", "--thetas", "1.5708")
    assert np.abs(entries(res["operator"])[..., 0] - [[0, 1], [1, 0]]).max() < 1e-5


def test_gen_without_blocks_is_usage_error(capsys):
    code, res = run(capsys, "gen")
    assert code == 2 and res["error"] == "UsageError"


def test_gen_bad_perm(capsys):
    code, res = run(capsys, "gen", "--thetas", "0.1", "--perm", "3")
    assert code == 2


def test_sspectrum_cayley_inverse_defect(tmp_path, capsys):
    a = tmp_path / "a.json"
    run(capsys, "gen", "--thetas", "0.3,2.0", "--signs", "1", "--out", str(a))
    code, res = run(capsys, "sspectrum", str(a))
    assert code == 0
    assert [(round(s["re"], 9), s["im_norm"]) for s in res["spheres"]] == [(-1.0, 0.0), (1.0, 0.0)]

    pair = tmp_path / "p.json"
    assert run(capsys, "cayley", str(a), "--out", str(pair))[0] == 0
    code, inv = run(capsys, "inv-cayley", str(pair))
    assert code == 0 and inv["round_trip"] <= 1e-8
    back = io.load_operator(inv["operator"])
    assert operator_deviation(io.load_operator(json.loads(a.read_text())), back) <= 1e-8

    code, rep = run(capsys, "defect", str(a), "--q", "0,1,1,1")
    assert code == 0
    assert rep["d"] == 0 and rep["regular"] is True
    assert rep["c_q"] >= math.sqrt(3) - 1e-9


def test_custom_basis_and_basis_check(tmp_path, capsys, rng):
    b = smp.basis(rng, 3)
    a = smp.class_y(rng, 3, b)
    bp, ap = tmp_path / "b.json", tmp_path / "a.json"
    io.write_json(bp, io.dump_basis(b))
    io.write_json(ap, io.dump_operator(a))
    # not class Y for the standard basis
    code, err = run(capsys, "cayley", str(ap))
    assert code == 1 and err["error"] == "NotInClassY"
    code, pair = run(capsys, "cayley", str(ap), "--basis", str(bp))
    assert code == 0 and pair["basis_id"].startswith("custom:")

    b2 = HilbertBasis(b.matrix @ QMatrix.from_real(smp.real_orthogonal(rng, 3)))
    b2p = tmp_path / "b2.json"
    io.write_json(b2p, io.dump_basis(b2))
    code, rep = run(capsys, "basis-check", str(bp), str(b2p), "--operator", str(ap))
    assert code == 0 and rep["compatible"] and rep["cayley_deviation"] <= 1e-9


def test_inverse_of_identity_reports_error(tmp_path, capsys):
    u = tmp_path / "u.json"
    io.write_json(u, io.dump_operator(QMatrix.identity(2)))
    code, err = run(capsys, "inv-cayley", str(u))
    assert code == 1 and err["error"] == "RangeNotDense"


def test_lambda_options(tmp_path, capsys):
    a = tmp_path / "a.json"
    io.write_json(a, io.dump_operator(QMatrix.zeros(1)))
    code, err = run(capsys, "cayley", str(a), "--lambda", "0,-1,1,1")
    assert code == 2 and err["error"] == "InvalidLambda"
    code, pair = run(capsys, "cayley", str(a), "--lambda", "0,-1,1,1", "--relax-lambda")
    assert code == 0
    with pytest.raises(SystemExit):
        main(["cayley", str(a), "--lambda", "1,2"])


def test_malformed_and_missing_input(tmp_path, capsys):
    bad = tmp_path / "corrupt.json"
    bad.write_text('{"entries": [[[1, 0]]]}')
    assert run(capsys, "verify", "--input", str(bad))[0] == 2
    bad.write_text("not json at all")
    assert run(capsys, "verify", "--input", str(bad))[0] == 2
    assert run(capsys, "sspectrum", str(tmp_path / "missing.json"))[0] == 2


def test_tol_from_environment(monkeypatch, capsys, tmp_path):
    a = tmp_path / "a.json"
    io.write_json(a, io.dump_operator(QMatrix.identity(1)))
    monkeypatch.setenv("QCAYLEY_TOL", "-1")
    code, err = run(capsys, "defect", str(a), "--q", "0,0,0,0")
    assert code == 2
    monkeypatch.setenv("QCAYLEY_TOL", "1e-6")
    assert run(capsys, "defect", str(a), "--q", "0,0,0,0")[0] == 0


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(trials=0)
    with pytest.raises(ValueError):
        RunConfig(tol=0.0)


def test_verify_minimal_run(capsys):
    code, rep = run(capsys, "verify", "--trials", "1")
    assert code == 0 and rep["all_passed"]
    assert all(r["trials"] >= 1 for r in rep["propositions"].values())


def test_verify_with_input_corpus(tmp_path, capsys, rng):
    corpus = tmp_path / "ops.json"
    ops = [io.dump_operator(QMatrix.from_real(smp.real_symmetric(rng, 3))),
           io.dump_operator(smp.matrix(rng, 2))]
    io.write_json(corpus, ops)
    code, rep = run(capsys, "verify", "--trials", "2", "--input", str(corpus), "--suite", "Cay_Prn_a",
                    "--suite", "ess_Cay")
    assert code == 0
    assert [e["used"] for e in rep["input"]] == [True, False]
    assert rep["propositions"]["Cay_Prn_a"]["trials"] == 3
    assert run(capsys, "verify", "--suite", "nope")[0] == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "qcayley", "gen", "--thetas", "0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["flags"]["in_Y"] is True
