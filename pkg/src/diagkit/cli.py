"""Batch front-end.

`diagkit <command> --in <path> [--in2 <path>] [--out <path>] [--seed N]
[--trials N] [--field Q|RealAlg]`.  Reports are JSON with a fixed shape and
are byte-identical across runs for identical inputs and seeds; `timing_ms`
is 0 unless DIAGKIT_REAL_TIMING=1 (wall-clock timings would break report
determinism).

Exit codes: 0 for any sound result (including sound negatives), 1 when a
preservation query (refute, pair-check) found a violating witness, 2 for
parse errors, violated preconditions, and degree overflows.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import random
import sys
import time
from fractions import Fraction

from . import field
from .errors import DiagkitError
from .field import FieldTag
from .matrix import Matrix, inverse, is_diagonalizable, rank, simdiag
from .orthosvd import svd
from .preservers import (NotPhiPsi, Phi, Psi, SingularRejected, classify,
                         pair_preservation_check, refute_preservation,
                         strong_classify)
from .serialize import (ParseError, map_from_json, matrix_from_json,
                        matrix_to_json, subspace_from_json)
from .subspaces import (Certificate, FeasibleWitness, Infeasible, MatSubspace,
                        Witness, counterexample_2_3_check, diagonal_subspace,
                        min_intersection_report, normalize2,
                        normalize_maximal, symmetric_subspace,
                        symmetrizability_obstruction)

COMMANDS = ("diag", "simdiag", "svd", "normalize", "intersect", "obstruct",
            "classify", "strong-classify", "refute", "pair-check", "selftest")


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="diagkit")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--in", dest="inp", help="input document path")
    p.add_argument("--in2", dest="inp2", help="second input document path")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--field", dest="field_override",
                   help="force inputs to Q or RealAlg")
    return p


def _load(path, digest: "hashlib._Hash"):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    digest.update(raw)
    try:
        return json.loads(raw)
    except ValueError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc


def _diag_result(dec) -> tuple[dict, dict]:
    result = {"diagonalizable": dec.diagonalizable}
    if dec.reason:
        result["reason"] = dec.reason
    if dec.detail:
        result["detail"] = dec.detail
    certs = {}
    if dec.Q is not None:
        certs["Q"] = matrix_to_json(dec.Q)
        certs["D"] = matrix_to_json(dec.D)
    return result, certs


def _chain_json(chain) -> list:
    return [{"stage": label, "G": matrix_to_json(G)} for label, G in chain]


def _normalize_report(out) -> tuple[dict, dict, list]:
    if isinstance(out, Certificate):
        return ({"outcome": "certificate"},
                {"P": matrix_to_json(out.P), "chain": _chain_json(out.chain)},
                [])
    if isinstance(out, Witness):
        result = {"outcome": "witness"}
        if out.proof is not None:
            result["reason"] = out.proof.reason
            if out.proof.detail:
                result["detail"] = out.proof.detail
        return result, {}, [matrix_to_json(out.M)]
    return ({"outcome": "obstruction", "stage": out.stage,
             "detail": out.detail}, {}, [])


def _preserver_report(out) -> tuple[dict, dict, list]:
    if isinstance(out, (Phi, Psi)):
        name = "Phi" if isinstance(out, Phi) else "Psi"
        certs = {
            "lambda_row": matrix_to_json(out.lambda_row),
            "P": matrix_to_json(out.P),
            "mu": field.elem_to_json(out.mu, out.P.tag),
        }
        return ({"class": name, "invertible": out.invertible}, certs, [])
    if isinstance(out, NotPhiPsi):
        result = {"class": "NotPhiPsi", "reason": out.reason}
        wit = [matrix_to_json(out.witness)] if out.witness is not None else []
        return result, {}, wit
    if isinstance(out, SingularRejected):
        B, AB = out.counterpair
        return ({"class": "SingularRejected"}, {},
                [matrix_to_json(out.kernel_elem), matrix_to_json(B),
                 matrix_to_json(AB)])
    return ({"class": "Inconclusive", "detail": out.detail}, {}, [])


def _selftest() -> tuple[dict, dict, list]:
    failures = []
    # Pythagorean-contrast fixture: the same 2x2 subspace is a witness case
    # over Q and a certificate case over the real algebraics
    for tag, want in ((FieldTag.Q, Witness), (FieldTag.REAL_ALG, Certificate)):
        V = MatSubspace(tag, 2, [
            Matrix.identity(tag, 2),
            Matrix.diagonal(tag, [1, 0]),
            Matrix(tag, [[0, 2], [1, 0]]),
        ])
        out = normalize2(V)
        if not isinstance(out, want):
            failures.append(f"contrast/{tag.value}: got {type(out).__name__}")
    # 3x3 pointwise-diagonalizable span with no symmetrizing form
    grid = [(a, b) for a in range(-3, 4) for b in range(-3, 4)
            if (a, b) != (0, 0)]
    rep = counterexample_2_3_check(grid)
    if not (rep.all_spectra_ok and rep.obstruction_infeasible):
        failures.append("counterexample-3x3: spectra or obstruction failed")
    # intersection of the symmetric space with a conjugate is the diagonals
    for n in (2, 3, 4, 5):
        tag = FieldTag.Q
        S = symmetric_subspace(tag, n)
        D = Matrix.diagonal(tag, [Fraction(i + 1) for i in range(n)])
        W = S.conjugate(inverse(D))
        if S.intersect(W) != diagonal_subspace(tag, n):
            failures.append(f"intersection/n={n}")
    # randomized certified pairs meet in dimension >= n
    # conjugates of the symmetric space need the real algebraics: over Q a
    # rational symmetric member with irrational spectrum is a sound witness
    rng = random.Random(0)
    pairs_ok = 0
    for n, reps in ((2, 30), (3, 20)):
        tag = FieldTag.REAL_ALG
        S = symmetric_subspace(tag, n)
        for _ in range(reps):
            V = S.conjugate(_rand_inv(rng, tag, n))
            W = S.conjugate(_rand_inv(rng, tag, n))
            cv, cw = normalize_maximal(V), normalize_maximal(W)
            if not (isinstance(cv, Certificate) and isinstance(cw, Certificate)):
                failures.append(f"pair-normalize/n={n}")
                continue
            if min_intersection_report(V, W, cv, cw).bound_ok:
                pairs_ok += 1
            else:
                failures.append(f"pair-bound/n={n}")
    result = {"ok": not failures, "certified_pairs": pairs_ok}
    if failures:
        result["failures"] = failures
    return result, {}, []


def _rand_inv(rng, tag, n) -> Matrix:
    while True:
        Q = Matrix(tag, [[rng.randint(-3, 3) for _ in range(n)]
                         for _ in range(n)])
        if rank(Q) == n:
            return Q


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    digest = hashlib.sha256()
    t0 = time.monotonic()
    exit_code = 0
    try:
        try:
            override = FieldTag.parse(args.field_override) \
                if args.field_override else None
        except ValueError as exc:
            raise ParseError(str(exc)) from exc
        cmd = args.command
        certificates: dict = {}
        witnesses: list = []
        if cmd == "selftest":
            result, certificates, witnesses = _selftest()
            if not result["ok"]:
                raise DiagkitError("selftest failed: "
                                   + "; ".join(result["failures"]))
        elif cmd in ("diag", "svd"):
            M = matrix_from_json(_load(_require(args.inp, "--in"), digest),
                                 override)
            if cmd == "diag":
                result, certificates = _diag_result(is_diagonalizable(M))
            else:
                triple = svd(M)
                certificates = {"O": matrix_to_json(triple.O),
                                "D": matrix_to_json(triple.D),
                                "U": matrix_to_json(triple.U)}
                result = {"ok": True}
        elif cmd == "simdiag":
            A = matrix_from_json(_load(_require(args.inp, "--in"), digest),
                                 override)
            B = matrix_from_json(_load(_require(args.inp2, "--in2"), digest),
                                 override)
            P = simdiag(A, B)
            certificates = {"P": matrix_to_json(P)}
            result = {"ok": True}
        elif cmd == "normalize":
            V = subspace_from_json(_load(_require(args.inp, "--in"), digest),
                                   override)
            result, certificates, witnesses = _normalize_report(
                normalize_maximal(V))
        elif cmd == "intersect":
            V = subspace_from_json(_load(_require(args.inp, "--in"), digest),
                                   override)
            W = subspace_from_json(_load(_require(args.inp2, "--in2"),
                                         digest), override)
            cv, cw = normalize_maximal(V), normalize_maximal(W)
            for name, c in (("--in", cv), ("--in2", cw)):
                if not isinstance(c, Certificate):
                    raise DiagkitError(
                        f"{name} subspace did not normalize: "
                        f"{type(c).__name__}")
            rep = min_intersection_report(V, W, cv, cw)
            result = {"dim": rep.dim, "lower_bound": rep.lower_bound,
                      "bound_ok": rep.bound_ok}
            if rep.R is not None:
                certificates = {"R": matrix_to_json(rep.R)}
        elif cmd == "obstruct":
            V = subspace_from_json(_load(_require(args.inp, "--in"), digest),
                                   override)
            out = symmetrizability_obstruction(V)
            if isinstance(out, FeasibleWitness):
                result = {"kind": "feasible"}
                certificates = {"G": matrix_to_json(out.G)}
            elif isinstance(out, Infeasible):
                result = {"kind": "infeasible"}
                witnesses = [matrix_to_json(out.x)]
            else:
                result = {"kind": "inconclusive", "detail": out.detail}
        elif cmd in ("classify", "strong-classify"):
            f = map_from_json(_load(_require(args.inp, "--in"), digest),
                              override)
            out = classify(f) if cmd == "classify" else strong_classify(f)
            result, certificates, witnesses = _preserver_report(out)
        elif cmd == "refute":
            f = map_from_json(_load(_require(args.inp, "--in"), digest),
                              override)
            rep = refute_preservation(f, trials=args.trials, seed=args.seed)
            result = {"found": rep.found, "trials": rep.trials}
            if rep.found:
                result["trial_index"] = rep.trial_index
                witnesses = [matrix_to_json(rep.witness)]
                exit_code = 1
        elif cmd == "pair-check":
            f = map_from_json(_load(_require(args.inp, "--in"), digest),
                              override)
            rep = pair_preservation_check(f, trials=args.trials,
                                          seed=args.seed)
            result = {"found": rep.found, "trials": rep.trials}
            if rep.found:
                result["trial_index"] = rep.trial_index
                result["detail"] = rep.detail
                witnesses = [matrix_to_json(rep.pair[0]),
                             matrix_to_json(rep.pair[1])]
                exit_code = 1
    except DiagkitError as exc:
        _emit(args, {"command": args.command,
                     "input_digest": digest.hexdigest(),
                     "result": {"error": type(exc).__name__,
                                "detail": str(exc)},
                     "certificates": {}, "witnesses": [], "timing_ms": 0})
        return 2
    timing = int((time.monotonic() - t0) * 1000) \
        if os.environ.get("DIAGKIT_REAL_TIMING") == "1" else 0
    _emit(args, {"command": args.command,
                 "input_digest": digest.hexdigest(),
                 "result": result, "certificates": certificates,
                 "witnesses": witnesses, "timing_ms": timing})
    return exit_code


def _require(value, flag):
    if value is None:
        raise ParseError(f"this command needs {flag}")
    return value


def _emit(args, report: dict) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main() -> None:
    sys.exit(run())
