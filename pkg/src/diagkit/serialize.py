"""JSON schemas for matrices, matrix subspaces, and linear maps on M_n.

Field elements follow the conventions of `field.elem_to_json`: rationals as
strings "p/q" (or "p"), irrational real algebraics as
{"minpoly": [c0, ..., cd], "lo": "p/q", "hi": "p/q"}.  Round trips are
bit-exact.
"""

from __future__ import annotations

from . import field
from .errors import DiagkitError
from .field import FieldTag
from .matrix import Matrix
from .preservers import MatrixMap
from .subspaces import MatSubspace


class ParseError(DiagkitError):
    pass


def _tag_of(obj) -> FieldTag:
    try:
        return FieldTag.parse(obj["field"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"bad or missing field tag: {exc}") from exc


def matrix_to_json(M: Matrix) -> dict:
    return {
        "field": M.tag.value,
        "rows": M.rows,
        "cols": M.cols,
        "entries": [[field.elem_to_json(e, M.tag) for e in row]
                    for row in M.data],
    }


def matrix_from_json(obj, tag: FieldTag | None = None) -> Matrix:
    if not isinstance(obj, dict):
        raise ParseError("matrix document must be a JSON object")
    t = tag or _tag_of(obj)
    try:
        entries = obj["entries"]
        M = Matrix(t, [[field.elem_from_json(e, t) for e in row]
                       for row in entries])
    except DiagkitError:
        raise
    except Exception as exc:
        raise ParseError(f"bad matrix document: {exc}") from exc
    if M.rows != obj.get("rows", M.rows) or M.cols != obj.get("cols", M.cols):
        raise ParseError("declared matrix shape disagrees with the entries")
    return M


def subspace_to_json(V: MatSubspace) -> dict:
    return {
        "field": V.tag.value,
        "n": V.n,
        "basis": [[[field.elem_to_json(e, V.tag) for e in row]
                   for row in B.data] for B in V.basis],
    }


def subspace_from_json(obj, tag: FieldTag | None = None) -> MatSubspace:
    if not isinstance(obj, dict):
        raise ParseError("subspace document must be a JSON object")
    t = tag or _tag_of(obj)
    try:
        n = int(obj["n"])
        mats = [Matrix(t, [[field.elem_from_json(e, t) for e in row]
                           for row in grid]) for grid in obj["basis"]]
    except DiagkitError:
        raise
    except Exception as exc:
        raise ParseError(f"bad subspace document: {exc}") from exc
    for M in mats:
        if M.rows != n or M.cols != n:
            raise ParseError("subspace basis matrix is not n x n")
    return MatSubspace(t, n, mats)


def map_to_json(f: MatrixMap) -> dict:
    return {
        "field": f.tag.value,
        "n": f.n,
        "coeffs": [[field.elem_to_json(e, f.tag) for e in row]
                   for row in f.coeffs.data],
        "basis_order": "row-major-Eij",
    }


def map_from_json(obj, tag: FieldTag | None = None) -> MatrixMap:
    if not isinstance(obj, dict):
        raise ParseError("map document must be a JSON object")
    t = tag or _tag_of(obj)
    order = obj.get("basis_order", "row-major-Eij")
    if order != "row-major-Eij":
        raise ParseError(f"unsupported basis order {order!r}")
    try:
        n = int(obj["n"])
        coeffs = Matrix(t, [[field.elem_from_json(e, t) for e in row]
                            for row in obj["coeffs"]])
        return MatrixMap(t, n, coeffs)
    except DiagkitError:
        raise
    except Exception as exc:
        raise ParseError(f"bad map document: {exc}") from exc
