"""Tests for the batch front-end: schemas, exit codes, determinism."""

import json
from fractions import Fraction as F

from diagkit import serialize
from diagkit.cli import run
from diagkit.field import FieldTag
from diagkit.matrix import Matrix, inverse
from diagkit.preservers import MatrixMap, make_phi
from diagkit.subspaces import MatSubspace, symmetric_subspace

Q = FieldTag.Q
R = FieldTag.REAL_ALG


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def load(path):
    with open(path) as fh:
        return json.load(fh)


def test_matrix_json_round_trip():
    M = Matrix(R, [[1, 2], [3, 4]])
    from diagkit.orthosvd import svd
    t = svd(M)
    doc = serialize.matrix_to_json(t.O)
    assert serialize.matrix_from_json(doc) == t.O


def test_subspace_and_map_round_trip():
    V = symmetric_subspace(Q, 3)
    assert serialize.subspace_from_json(serialize.subspace_to_json(V)) == V
    f = make_phi(0, Matrix(Q, [[1, 2], [0, 1]]), F(3))
    assert serialize.map_from_json(serialize.map_to_json(f)) == f


def test_diag_command_negative_result_exits_zero(tmp_path):
    inp = write(tmp_path, "m.json", serialize.matrix_to_json(
        Matrix(Q, [[0, 1], [0, 0]])))
    out = str(tmp_path / "r.json")
    assert run(["diag", "--in", inp, "--out", out]) == 0
    rep = load(out)
    assert rep["command"] == "diag"
    assert rep["result"]["diagonalizable"] is False
    assert rep["timing_ms"] == 0


def test_diag_certificate_round_trips(tmp_path):
    inp = write(tmp_path, "m.json", serialize.matrix_to_json(
        Matrix(Q, [[0, 2], [1, 1]])))
    out = str(tmp_path / "r.json")
    assert run(["diag", "--in", inp, "--out", out]) == 0
    rep = load(out)
    Qm = serialize.matrix_from_json(rep["certificates"]["Q"])
    D = serialize.matrix_from_json(rep["certificates"]["D"])
    assert Matrix(Q, [[0, 2], [1, 1]]) @ Qm == Qm @ D


def test_field_override_contrast(tmp_path):
    # same file, different fields: sqrt(2) spectrum
    inp = write(tmp_path, "m.json", {
        "field": "Q", "rows": 2, "cols": 2,
        "entries": [["0", "2"], ["1", "0"]]})
    out = str(tmp_path / "r.json")
    run(["diag", "--in", inp, "--out", out])
    assert load(out)["result"]["diagonalizable"] is False
    run(["diag", "--in", inp, "--out", out, "--field", "RealAlg"])
    assert load(out)["result"]["diagonalizable"] is True


def test_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out = str(tmp_path / "r.json")
    assert run(["diag", "--in", str(bad), "--out", out]) == 2
    assert load(out)["result"]["error"] == "ParseError"
    assert run(["diag", "--in", str(tmp_path / "missing.json"),
                "--out", out]) == 2


def test_precondition_error_exit_2(tmp_path):
    # SVD over Q is a precondition failure
    inp = write(tmp_path, "m.json", serialize.matrix_to_json(
        Matrix(Q, [[1, 2], [3, 4]])))
    out = str(tmp_path / "r.json")
    assert run(["svd", "--in", inp, "--out", out]) == 2


def test_normalize_command(tmp_path):
    G = Matrix(R, [[1, 2, 0], [0, 1, 1], [1, 0, 1]])
    V = symmetric_subspace(R, 3).conjugate(G)
    inp = write(tmp_path, "v.json", serialize.subspace_to_json(V))
    out = str(tmp_path / "r.json")
    assert run(["normalize", "--in", inp, "--out", out]) == 0
    rep = load(out)
    assert rep["result"]["outcome"] == "certificate"
    P = serialize.matrix_from_json(rep["certificates"]["P"])
    assert V.conjugate(P) == symmetric_subspace(R, 3)


def test_intersect_command(tmp_path):
    S = symmetric_subspace(Q, 3)
    D = Matrix.diagonal(Q, [F(1), F(2), F(3)])
    W = S.conjugate(inverse(D))
    i1 = write(tmp_path, "v.json", serialize.subspace_to_json(S))
    i2 = write(tmp_path, "w.json", serialize.subspace_to_json(W))
    out = str(tmp_path / "r.json")
    assert run(["intersect", "--in", i1, "--in2", i2, "--out", out]) == 0
    rep = load(out)
    assert rep["result"] == {"dim": 3, "lower_bound": 3, "bound_ok": True}
    assert "R" in rep["certificates"]


def test_obstruct_command(tmp_path):
    A = Matrix.diagonal(R, [0, 1, -1])
    B = Matrix(R, [[0, 1, 0], [0, 0, 1], [0, 1, 0]])
    V = MatSubspace(R, 3, [A, B])
    inp = write(tmp_path, "v.json", serialize.subspace_to_json(V))
    out = str(tmp_path / "r.json")
    assert run(["obstruct", "--in", inp, "--out", out]) == 0
    rep = load(out)
    assert rep["result"]["kind"] == "infeasible"
    assert len(rep["witnesses"]) == 1


def test_classify_and_refute_exit_codes(tmp_path):
    f = make_phi(0, Matrix(Q, [[1, 2], [0, 1]]), F(3))
    good = write(tmp_path, "f.json", serialize.map_to_json(f))

    def rot(M):
        return Matrix(Q, [[M[0, 0], M[0, 1] - 2 * M[1, 0]],
                          [M[1, 0], M[1, 1]]])
    bad = write(tmp_path, "h.json", serialize.map_to_json(
        MatrixMap.from_action(Q, 2, rot)))
    out = str(tmp_path / "r.json")
    assert run(["classify", "--in", good, "--out", out]) == 0
    assert load(out)["result"]["class"] == "Phi"
    assert run(["refute", "--in", good, "--trials", "50", "--out", out]) == 0
    assert run(["refute", "--in", bad, "--out", out]) == 1
    rep = load(out)
    assert rep["result"]["found"] and len(rep["witnesses"]) == 1
    assert run(["pair-check", "--in", bad, "--out", out]) == 1


def test_reports_are_byte_identical(tmp_path):
    inp = write(tmp_path, "m.json", serialize.matrix_to_json(
        Matrix(R, [[1, 2], [2, -1]])))
    o1, o2 = str(tmp_path / "a.json"), str(tmp_path / "b.json")
    run(["diag", "--in", inp, "--out", o1])
    run(["diag", "--in", inp, "--out", o2])
    assert open(o1, "rb").read() == open(o2, "rb").read()
    run(["refute", "--in", write(tmp_path, "f.json", serialize.map_to_json(
        make_phi(0, Matrix(Q, [[1, 1], [0, 1]]), F(2)))),
        "--seed", "7", "--out", o1])
    run(["refute", "--in", str(tmp_path / "f.json"), "--seed", "7",
         "--out", o2])
    assert open(o1, "rb").read() == open(o2, "rb").read()
