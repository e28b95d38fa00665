"""JSON documents for sets, operators and reports.

Set documents are tagged by ``kind``; operators are ``{"matrix": [[...]]}`` or
``{"scalar": g, "dim": n}``. Output is canonical: sorted keys and shortest
round-trip float repr, so equal values always serialize to equal bytes.
"""
from __future__ import annotations

import json
import math
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch, UnsupportedRepresentation
from .polarity import Operator
from .sets import (
    INF,
    Ball,
    ConeH,
    ConeV,
    ConvexSet,
    Ellipsoid,
    Interval,
    LorentzCone,
    Orthant,
    PolytopeH,
    PolytopeV,
)


def _endpoint(v):
    if v in ("inf", "+inf"):
        return INF
    if v == "-inf":
        return -INF
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise UnsupportedRepresentation(f"bad interval endpoint {v!r}")
    return Fraction(v)  # exact: every double is a dyadic rational


def _array(doc, key, ndim):
    if key not in doc:
        raise UnsupportedRepresentation(f"{doc.get('kind', 'document')} needs {key!r}")
    try:
        a = np.asarray(doc[key], dtype=float)
    except (TypeError, ValueError):
        raise UnsupportedRepresentation(f"{key!r} must be numeric") from None
    if a.ndim != ndim or a.size == 0 or not np.all(np.isfinite(a)):
        raise UnsupportedRepresentation(f"{key!r} must be a finite {ndim}-d array")
    return a


_SET_PARSERS = {
    "ellipsoid": lambda d: Ellipsoid(_array(d, "matrix", 2)),
    "ball": lambda d: Ball(float(d["radius"]), int(d.get("dim", 2))),
    "polytope_v": lambda d: PolytopeV(_array(d, "vertices", 2)),
    "polytope_h": lambda d: PolytopeH(_array(d, "normals", 2)),
    "cone_v": lambda d: ConeV(_array(d, "generators", 2)),
    "cone_h": lambda d: ConeH(_array(d, "normals", 2)),
    "lorentz": lambda d: LorentzCone(_array(d, "axis", 1)),
    "orthant": lambda d: Orthant(_array(d, "signs", 1)),
    "interval": lambda d: Interval(_endpoint(d["lo"]), _endpoint(d["hi"])),
}


def parse_set(doc: dict) -> ConvexSet:
    """Build a :class:`ConvexSet` from its JSON document.

    Raises:
        UnsupportedRepresentation: unknown ``kind`` or malformed fields.
    """
    if not isinstance(doc, dict) or "kind" not in doc:
        raise UnsupportedRepresentation("set document needs a 'kind'")
    parser = _SET_PARSERS.get(doc["kind"])
    if parser is None:
        raise UnsupportedRepresentation(f"unknown set kind {doc['kind']!r}")
    try:
        return parser(doc)
    except KeyError as exc:
        raise UnsupportedRepresentation(f"{doc['kind']} document lacks {exc}") from None
    except (TypeError, ValueError) as exc:
        raise UnsupportedRepresentation(f"{doc['kind']}: {exc}") from None


def parse_operator(doc: dict) -> Operator:
    """``{"matrix": ...}`` or ``{"scalar": g, "dim": n}`` (integer ``g`` stays exact)."""
    if not isinstance(doc, dict):
        raise UnsupportedRepresentation("operator document must be an object")
    if "matrix" in doc:
        M = _array(doc, "matrix", 2)
        if M.shape[0] != M.shape[1]:
            raise DimensionMismatch(f"operator matrix is {M.shape[0]}x{M.shape[1]}")
        return Operator(M)
    if "scalar" in doc:
        g = doc["scalar"]
        if isinstance(g, bool) or not isinstance(g, (int, float)) or not math.isfinite(g):
            raise UnsupportedRepresentation("scalar must be a finite number")
        return Operator.scalar(g if isinstance(g, int) else Fraction(g), int(doc.get("dim", 1)))
    raise UnsupportedRepresentation("operator document needs 'matrix' or 'scalar'")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        f = float(obj)
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        if math.isnan(f):
            return None
        return f + 0.0  # folds -0.0 into 0.0
    return obj


def dumps(doc, indent: int | None = None) -> str:
    """Canonical JSON: sorted keys, non-finite floats as strings / null."""
    return json.dumps(_plain(doc), sort_keys=True, indent=indent, allow_nan=False)


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UnsupportedRepresentation(f"invalid JSON: {exc}") from None
