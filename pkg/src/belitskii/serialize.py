"""JSON encoding of systems, group elements and reduction reports.

Scalars are always written as strings in the ``a+bi`` grammar so nothing is
lost to floating point.  ``dumps`` sorts keys, which makes output bytes a
function of the data alone.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .errors import MalformedInput, MalformedScalar
from .linalg import Matrix, format_scalar, parse_scalar
from .reduction import CanonicalSystem, GroupElement, ReducedBlock, SystemTriple, WEYR, EDGE


def matrix_to_lists(M: Matrix) -> list[list[str]]:
    return [[format_scalar(M[i, j]) for j in range(M.cols)] for i in range(M.rows)]


def system_to_dict(s: SystemTriple) -> dict:
    return {"m": s.m, "n": s.n, "l": s.l,
            "A": matrix_to_lists(s.A), "B": matrix_to_lists(s.B), "C": matrix_to_lists(s.C)}


def _parse_array(obj, name: str, rows: int, cols: int) -> Matrix:
    if not isinstance(obj, list):
        raise MalformedInput(f"{name} must be an array of rows")
    if cols == 0 and obj == []:
        return Matrix.zeros(rows, 0)
    if len(obj) != rows:
        raise MalformedInput(f"{name} has {len(obj)} rows, expected {rows}")
    entries = []
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != cols:
            raise MalformedInput(f"{name} row {i} must be an array of {cols} scalars")
        for x in row:
            if isinstance(x, bool) or not isinstance(x, (str, int)):
                raise MalformedInput(f"{name} row {i}: entries must be scalar strings, got {x!r}")
            try:
                entries.append(parse_scalar(str(x)))
            except MalformedScalar as e:
                raise MalformedInput(f"{name} row {i}: {e}") from None
    return Matrix(rows, cols, entries)


def system_from_dict(obj) -> SystemTriple:
    if not isinstance(obj, dict):
        raise MalformedInput("system file must be a JSON object")
    dims = []
    for key in ("m", "n", "l"):
        v = obj.get(key)
        if isinstance(v, bool) or not isinstance(v, int) or v < 0:
            raise MalformedInput(f"field {key!r} must be a non-negative integer")
        dims.append(v)
    m, n, l = dims
    for key in ("A", "B", "C"):
        if key not in obj:
            raise MalformedInput(f"missing field {key!r}")
    A = _parse_array(obj["A"], "A", n, n)
    B = _parse_array(obj["B"], "B", n, m)
    C = _parse_array(obj["C"], "C", l, n)
    return SystemTriple(m, n, l, A, B, C)


def loads_system(text: str) -> SystemTriple:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise MalformedInput(f"invalid JSON: {e}") from None
    return system_from_dict(obj)


def load_system(path) -> SystemTriple:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as e:
        raise MalformedInput(f"cannot read {path}: {e}") from None
    return loads_system(text)


def group_to_dict(g: GroupElement) -> dict:
    return {"X": matrix_to_lists(g.X), "Y": matrix_to_lists(g.Y), "Z": matrix_to_lists(g.Z)}


def block_to_dict(b: ReducedBlock) -> dict:
    out = {"kind": b.kind, "region": b.location.region, "rows": b.rows, "cols": b.cols,
           "row_range": list(b.location.row_range), "col_range": list(b.location.col_range),
           "sigma": b.sigma}
    if b.kind == EDGE:
        out["rank"] = b.rank
    elif b.kind == WEYR:
        out["eigenvalues"] = [{"value": format_scalar(lam), "jordan_blocks": list(part)}
                              for lam, part in b.structure.eigenvalues]
    return out


def canonical_report(c: CanonicalSystem, witness: bool = False, trace: bool = False) -> dict:
    out = {"canonical": system_to_dict(c.canonical)}
    if witness:
        out["witness"] = group_to_dict(c.witness)
    if trace:
        out["trace"] = [block_to_dict(b) for b in c.trace]
        out["sigma"] = list(c.sigmas)
        out["sigma_total"] = sum(c.sigmas)
    return out


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def write_atomic(path, text: str) -> None:
    """Write via a temporary file in the same directory and rename it into place."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
