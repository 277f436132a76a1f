"""JSON file formats.

* quaternion: ``[w, x, y, z]``
* vector: list of quaternions
* basis: list of vectors (the basis columns)
* dense operator: ``{"n": n, "entries": [[quat, ...], ...]}`` (row major)
* partial operator: ``{"domain_frame": rows, "action": rows,
  "working_space": bool}`` with both matrices n x d, row major
* Cayley pair: ``{"source", "transform", "lambda", "basis_id", "basis"?,
  "residuals"}``

Loaders validate and raise :class:`InvalidOperator` naming the first
violated invariant.
"""

from __future__ import annotations

import hashlib
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .cayley import CayleyPair, LambdaParam
from .errors import InvalidOperator, NotOrthonormal, QuaternionicError
from .hspace import HilbertBasis, QMatrix, QVector
from .qop import Operator, PartialOperator
from .quat import Quaternion

__all__ = [
    "dump_quaternion",
    "load_quaternion",
    "dump_vector",
    "load_vector",
    "dump_basis",
    "load_basis",
    "basis_id",
    "dump_operator",
    "load_operator",
    "dump_cayley_pair",
    "load_cayley_pair",
    "read_json",
    "write_json",
    "dumps",
]


def _finite_quat(obj: Any, where: str) -> np.ndarray:
    if not isinstance(obj, (list, tuple)) or len(obj) != 4:
        raise InvalidOperator(f"{where}: expected a 4-array [w, x, y, z], got {obj!r}")
    try:
        arr = np.array([float(v) for v in obj])
    except (TypeError, ValueError) as exc:
        raise InvalidOperator(f"{where}: non-numeric component in {obj!r}") from exc
    if not np.all(np.isfinite(arr)):
        raise InvalidOperator(f"{where}: non-finite component in {obj!r}")
    return arr


def dump_quaternion(q: Quaternion) -> list[float]:
    return q.to_json()


def load_quaternion(obj: Any) -> Quaternion:
    return Quaternion.from_array(_finite_quat(obj, "quaternion"))


def dump_vector(v: QVector) -> list:
    return v.to_json()


def load_vector(obj: Any) -> QVector:
    if not isinstance(obj, list) or not obj:
        raise InvalidOperator("vector: expected a non-empty list of quaternions")
    return QVector([_finite_quat(q, f"vector[{k}]") for k, q in enumerate(obj)])


def _load_rows(obj: Any, name: str) -> QMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise InvalidOperator(f"{name}: expected a non-empty list of rows")
    width = len(obj[0])
    if width == 0:
        raise InvalidOperator(f"{name}: rows are empty")
    for k, row in enumerate(obj):
        if len(row) != width:
            raise InvalidOperator(f"{name}: row {k} has {len(row)} entries, expected {width}")
    return QMatrix([[_finite_quat(q, f"{name}[{k}][{l}]") for l, q in enumerate(row)]
                    for k, row in enumerate(obj)])


def dump_basis(b: HilbertBasis) -> list:
    return b.to_json()


def load_basis(obj: Any) -> HilbertBasis:
    if isinstance(obj, dict) and "basis" in obj:
        obj = obj["basis"]
    if not isinstance(obj, list) or not obj:
        raise InvalidOperator("basis: expected a list of column vectors")
    cols = [load_vector(c) for c in obj]
    if any(c.dim != len(cols) for c in cols):
        raise InvalidOperator(f"basis: {len(cols)} columns must each have dimension {len(cols)}")
    try:
        return HilbertBasis.from_columns(cols)
    except NotOrthonormal as exc:
        raise InvalidOperator(f"basis: columns are not orthonormal ({exc})") from exc


def basis_id(b: HilbertBasis) -> str:
    if b.matrix.max_abs_diff(QMatrix.identity(b.n)) == 0.0:
        return "standard"
    digest = hashlib.sha256(np.ascontiguousarray(b.matrix.data).tobytes()).hexdigest()
    return f"custom:{digest[:16]}"


def dump_operator(op: Operator) -> dict:
    if isinstance(op, PartialOperator):
        return {
            "domain_frame": op.domain_frame.to_json(),
            "action": op.action.to_json(),
            "working_space": op.working_space,
        }
    return {"n": op.shape[0], "entries": op.to_json()}


def load_operator(obj: Any) -> Operator:
    if not isinstance(obj, dict):
        raise InvalidOperator("operator: expected a JSON object")
    if "entries" in obj:
        m = _load_rows(obj["entries"], "entries")
        if not m.is_square:
            raise InvalidOperator(f"entries: operator must be square, got {m.shape}")
        if "n" in obj and obj["n"] != m.shape[0]:
            raise InvalidOperator(f"n = {obj['n']!r} does not match {m.shape[0]} rows")
        return m
    if "domain_frame" in obj and "action" in obj:
        frame = _load_rows(obj["domain_frame"], "domain_frame")
        action = _load_rows(obj["action"], "action")
        ws = obj.get("working_space", True)
        if not isinstance(ws, bool):
            raise InvalidOperator("working_space must be a boolean")
        try:
            return PartialOperator(frame, action, ws)
        except QuaternionicError as exc:
            raise InvalidOperator(str(exc)) from exc
    raise InvalidOperator("operator: need 'entries' (dense) or 'domain_frame' and 'action' (partial)")


def dump_cayley_pair(pair: CayleyPair) -> dict:
    out = {
        "source": dump_operator(pair.source),
        "transform": dump_operator(pair.transform),
        "lambda": pair.lam.value.to_json(),
        "basis_id": basis_id(pair.basis),
        "residuals": dict(pair.residuals),
    }
    if out["basis_id"] != "standard":
        out["basis"] = dump_basis(pair.basis)
    return out


def load_cayley_pair(obj: Any, relaxed: bool = False) -> CayleyPair:
    if not isinstance(obj, dict) or "transform" not in obj:
        raise InvalidOperator("cayley pair: missing 'transform'")
    source = load_operator(obj["source"])
    transform = load_operator(obj["transform"])
    lam = LambdaParam(load_quaternion(obj.get("lambda", [0, 1, 1, 1])), relaxed)
    n = source.n if isinstance(source, PartialOperator) else source.shape[0]
    basis = load_basis(obj["basis"]) if "basis" in obj else HilbertBasis.standard(n)
    return CayleyPair(source, transform, lam, basis, dict(obj.get("residuals", {})))


def _clean(obj: Any) -> Any:
    # JSON has no inf/nan; encode them as strings so reports stay valid JSON.
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.generic):
        return _clean(obj.item())
    return obj


def dumps(obj: Any) -> str:
    """Stable JSON: sorted keys, fixed indentation."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2)


def write_json(path: str | Path, obj: Any) -> None:
    Path(path).write_text(dumps(obj) + "\n")


def read_json(path: str | Path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InvalidOperator(f"{path}: not valid JSON ({exc.msg} at line {exc.lineno})") from exc
