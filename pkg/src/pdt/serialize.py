"""JSON codec shared by the CLI: path-aware parsing and deterministic encoding."""

from __future__ import annotations

from enum import Enum
from fractions import Fraction
from typing import Any

import numpy as np

from . import linalg as la
from .cyclotomic import CyclotomicElement
from .errors import MalformedInputError
from .gauss import GaussQ
from .qspace import QuadraticSpace, Subspace


class SchemaError(MalformedInputError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def field(doc: Any, key: str, path: str, default: Any = ...):
    if not isinstance(doc, dict):
        raise SchemaError(path, f"expected an object, got {type(doc).__name__}")
    if key not in doc:
        if default is ...:
            raise SchemaError(f"{path}.{key}", "required field is missing")
        return default
    return doc[key]


def rational(x: Any, path: str) -> Fraction:
    try:
        return la.to_fraction(x)
    except MalformedInputError as exc:
        raise SchemaError(path, str(exc)) from exc


def vector(doc: Any, path: str, length: int | None = None) -> la.Vector:
    if not isinstance(doc, list):
        raise SchemaError(path, "expected an array of rationals")
    v = tuple(rational(x, f"{path}[{i}]") for i, x in enumerate(doc))
    if length is not None and len(v) != length:
        raise SchemaError(path, f"expected length {length}, got {len(v)}")
    return v


def matrix(doc: Any, path: str, rows: int | None = None, cols: int | None = None) -> la.Matrix:
    if not isinstance(doc, list) or not doc:
        raise SchemaError(path, "expected a nonempty array of rows")
    m = tuple(vector(r, f"{path}[{i}]", cols) for i, r in enumerate(doc))
    if rows is not None and len(m) != rows:
        raise SchemaError(path, f"expected {rows} rows, got {len(m)}")
    width = len(m[0])
    for i, r in enumerate(m):
        if len(r) != width:
            raise SchemaError(f"{path}[{i}]", "ragged row")
    return m


def space(doc: Any, path: str) -> QuadraticSpace:
    gram = matrix(field(doc, "gram", path), f"{path}.gram")
    dim = field(doc, "dim", path, None)
    if dim is not None and dim != len(gram):
        raise SchemaError(f"{path}.dim", f"dim {dim} does not match the {len(gram)} x {len(gram)} Gram matrix")
    try:
        return QuadraticSpace(gram)
    except MalformedInputError as exc:
        raise SchemaError(f"{path}.gram", str(exc)) from exc


def subspace(sp: QuadraticSpace, doc: Any, path: str) -> Subspace:
    basis = field(doc, "basis", path)
    if not isinstance(basis, list):
        raise SchemaError(f"{path}.basis", "expected an array of vectors")
    return Subspace(sp, [vector(b, f"{path}.basis[{i}]", sp.dim) for i, b in enumerate(basis)])


def complex_scalar(doc: Any, path: str):
    """{"re": "p/q", "im": "p/q"} is exact; [re, im] numbers are floating point."""
    if isinstance(doc, dict):
        return GaussQ(rational(field(doc, "re", path, 0), f"{path}.re"), rational(field(doc, "im", path, 0), f"{path}.im"))
    if isinstance(doc, list) and len(doc) == 2 and all(isinstance(x, (int, float)) for x in doc):
        return complex(float(doc[0]), float(doc[1]))
    if isinstance(doc, (int, str)) and not isinstance(doc, bool):
        return GaussQ(rational(doc, path))
    if isinstance(doc, float):
        return complex(doc)
    raise SchemaError(path, "expected a complex number ([re, im] or {\"re\", \"im\"})")


def complex_vector(doc: Any, path: str, length: int | None = None):
    if not isinstance(doc, list):
        raise SchemaError(path, "expected an array of complex numbers")
    vals = [complex_scalar(x, f"{path}[{i}]") for i, x in enumerate(doc)]
    if length is not None and len(vals) != length:
        raise SchemaError(path, f"expected length {length}, got {len(vals)}")
    if all(isinstance(x, GaussQ) for x in vals):
        return tuple(vals)
    return np.array([complex(x) for x in vals], dtype=complex)


# -- encoding --------------------------------------------------------------------------------


def encode(obj: Any) -> Any:
    """Plain-JSON view: rationals as "p/q", exact complex as {"re","im"}, floats as [re, im]."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, int):
        return obj
    if isinstance(obj, Fraction):
        return la.fmt(obj)
    if isinstance(obj, GaussQ):
        return {"re": la.fmt(obj.re), "im": la.fmt(obj.im)}
    if isinstance(obj, CyclotomicElement):
        return {"a": la.fmt(obj.a), "b": la.fmt(obj.b), "l": obj.l}
    if isinstance(obj, complex):
        return [_float(obj.real), _float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return _float(float(obj))
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [encode(x.item() if hasattr(x, "item") else x) for x in obj]
    if isinstance(obj, Subspace):
        return {"dim": obj.dim, "basis": encode(obj.basis)}
    if isinstance(obj, QuadraticSpace):
        return {"dim": obj.dim, "gram": encode(obj.gram)}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = sorted(obj) if isinstance(obj, (set, frozenset)) else obj
        return [encode(x) for x in items]
    raise TypeError(f"cannot encode {type(obj).__name__}")


def _float(x: float) -> float:
    # 15 significant digits keep output stable across platforms
    return float(f"{x:.15g}") if x != 0 else 0.0
