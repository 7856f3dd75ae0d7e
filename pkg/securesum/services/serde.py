"""
JSON codec for every artifact the CLI reads or writes.

Field values use fixed shapes: a spec is ``{"q": q}``, a vector is
``{"q": q, "entries": [...]}``, a matrix is ``{"rows", "cols", "q", "entries"}`` with
row-major entries, a rational is a ``"p/q"`` string and a user set is a sorted list of
1-based indices. Files carry ``"schema": 1`` and their ``kind``.
"""
from fractions import Fraction
import json
from pathlib import Path
from typing import Any, Dict, Tuple, Type, TypeVar, Union

import cattr

from securesum.domain.audit import format_rational
from securesum.domain.field import FieldSpec
from securesum.domain.linalg import FieldMatrix, FieldVector
from securesum.domain.scheme import PrecodingFixtureFile
from securesum.exceptions import SchemaError


T = TypeVar("T")

SCHEMA_VERSION = 1


def _is_frozenset(t) -> bool:
    return t is frozenset or getattr(t, "__origin__", None) is frozenset


def _structure_vector(d: Dict[str, Any], _) -> FieldVector:
    return FieldVector(FieldSpec(d["q"]), list(d["entries"]))


def _structure_matrix(d: Dict[str, Any], _) -> FieldMatrix:
    spec = FieldSpec(d["q"])
    rows, cols = int(d["rows"]), int(d["cols"])
    entries = d["entries"]
    if len(entries) != rows or any(len(row) != cols for row in entries):
        raise SchemaError(
            f"matrix entries do not have the declared {rows}x{cols} shape"
        )
    if rows == 0:
        return FieldMatrix.zeros(spec, 0, cols)
    return FieldMatrix(spec, entries)


converter = cattr.Converter()
converter.register_unstructure_hook(FieldSpec, lambda spec: {"q": spec.q})
converter.register_unstructure_hook(
    FieldVector, lambda v: {"q": v.spec.q, "entries": v.to_list()}
)
converter.register_structure_hook(FieldVector, _structure_vector)
converter.register_unstructure_hook(
    FieldMatrix,
    lambda m: {"rows": m.rows, "cols": m.cols, "q": m.spec.q, "entries": m.to_lists()},
)
converter.register_structure_hook(FieldMatrix, _structure_matrix)
converter.register_unstructure_hook(Fraction, format_rational)
converter.register_structure_hook(Fraction, lambda s, _: Fraction(str(s)))
converter.register_unstructure_hook_func(_is_frozenset, lambda s: sorted(s))


def serialize(o: Any) -> str:
    """
    Encode a serializable object into a str. Keys are sorted so equal objects give
    identical text.
    """
    return (
        json.dumps(
            converter.unstructure(o), sort_keys=True, indent=2, ensure_ascii=False
        )
        + "\n"
    )


def deserialize(cls: Type[T], s: str) -> T:
    """
    Decode a serializable object from a str.
    """
    return converter.structure(json.loads(s), cls)


def dump_artifact(kind: str, o: Any) -> str:
    data = converter.unstructure(o)
    data["schema"] = SCHEMA_VERSION
    data["kind"] = kind
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_artifact(kind: str, cls: Type[T], s: str) -> T:
    try:
        data = json.loads(s)
    except ValueError as e:
        raise SchemaError(f"not a JSON document: {e}")
    if not isinstance(data, dict):
        raise SchemaError("expected a JSON object at the top level")
    if data.pop("schema", None) != SCHEMA_VERSION:
        raise SchemaError(f"expected \"schema\": {SCHEMA_VERSION}")
    found = data.pop("kind", None)
    if found != kind:
        raise SchemaError(f"expected a {kind} file, got {found!r}")
    try:
        return converter.structure(data, cls)
    except SchemaError:
        raise
    except Exception as e:
        raise SchemaError(f"malformed {kind} file: {e}") from e


def write_artifact(path: Union[str, Path], kind: str, o: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dump_artifact(kind, o), encoding="utf-8")
    return path


def read_artifact(path: Union[str, Path], kind: str, cls: Type[T]) -> T:
    return load_artifact(kind, cls, Path(path).read_text(encoding="utf-8"))


def read_precoding_fixture(
    path: Union[str, Path]
) -> Dict[Tuple[int, ...], Tuple[FieldMatrix, ...]]:
    fixture = read_artifact(path, "precoding_fixture", PrecodingFixtureFile)
    return {tuple(sorted(group.members)): group.matrices for group in fixture.groups}
