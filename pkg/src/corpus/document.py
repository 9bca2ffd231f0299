"""
JSON documents describing an algebra together with named operators, forms,
symmetric tensors, vectors and representations.

    {
        "kind": "prelie",                  # prelie | lie | associative
        "dim": 2,
        "basis": ["e1", "e2"],             # optional
        "tag": "...",                      # optional free text
        "product": [[e1·e1, e1·e2], [e2·e1, e2·e2]],   # each entry a length-dim vector
        "operators": {"N": matrix},        # column convention: column j is N(e_j)
        "forms": {"B": {"matrix": matrix, "symmetry": "symmetric"}},
        "tensors": {"r": matrix},          # symmetric, the matrix of r♯
        "vectors": {"a": vector},
        "representations": {"V": {"dimV": m, "rho": [dim m×m matrices], "mu": [...]}}
    }

Scalars are integers or strings "p/q". Serialization writes every scalar as the
canonical string of its reduced fraction.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from src.algebra.prelie import (
    Algebra,
    AlgebraKind,
    Representation,
    dual_representation,
    regular_representation,
)
from src.algebra.scalars import format_rational, rational_array, to_rational
from src.errors import DocumentError, InputError
from src.structures.smatrix_hessian import BilinearForm, Symmetry

logger = logging.getLogger(__name__)

_DOCUMENT_KINDS = (AlgebraKind.PRE_LIE, AlgebraKind.LIE, AlgebraKind.ASSOCIATIVE)
_BUILTIN_REPRESENTATIONS = ("regular", "dual")


@dataclass(frozen=True)
class RepresentationData:
    dim_v: int
    rho: np.ndarray
    mu: np.ndarray


@dataclass(frozen=True, eq=False)
class Document:
    """Parsed contents of one document."""

    kind: AlgebraKind
    dim: int
    product: np.ndarray
    basis: Tuple[str, ...] = ()
    tag: str = ""
    operators: Dict[str, np.ndarray] = field(default_factory=dict)
    forms: Dict[str, BilinearForm] = field(default_factory=dict)
    tensors: Dict[str, np.ndarray] = field(default_factory=dict)
    vectors: Dict[str, np.ndarray] = field(default_factory=dict)
    representations: Dict[str, RepresentationData] = field(default_factory=dict)

    @staticmethod
    def from_dict(payload: Mapping[str, object]) -> "Document":
        if not isinstance(payload, Mapping):
            raise DocumentError("$: expected an object")
        kind = _kind(payload.get("kind"), "$.kind")
        dim = payload.get("dim")
        if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
            raise DocumentError(f"$.dim: expected a positive integer, got {dim!r}")
        basis = tuple(str(label) for label in _sequence(payload.get("basis", []), "$.basis"))
        if basis and len(basis) != dim:
            raise DocumentError(f"$.basis: {len(basis)} labels for dimension {dim}")
        product = _array(payload.get("product"), (dim, dim, dim), "$.product")

        operators = {
            name: _operator(value, dim, f"$.operators.{name}")
            for name, value in _section(payload, "operators").items()
        }
        forms = {name: _form(value, dim, f"$.forms.{name}") for name, value in _section(payload, "forms").items()}
        tensors = {}
        for name, value in _section(payload, "tensors").items():
            matrix = _array(value, (dim, dim), f"$.tensors.{name}")
            if not np.all(matrix == matrix.T):
                raise DocumentError(f"$.tensors.{name}: tensor must be symmetric")
            tensors[name] = matrix
        vectors = {
            name: _array(value, (dim,), f"$.vectors.{name}") for name, value in _section(payload, "vectors").items()
        }
        representations = {
            name: _representation(value, dim, f"$.representations.{name}")
            for name, value in _section(payload, "representations").items()
        }
        return Document(
            kind=kind,
            dim=dim,
            product=product,
            basis=basis,
            tag=str(payload.get("tag", "")),
            operators=operators,
            forms=forms,
            tensors=tensors,
            vectors=vectors,
            representations=representations,
        )

    @property
    def algebra(self) -> Algebra:
        return Algebra.from_constants(self.product, self.kind, self.basis)

    def operator(self, name: str) -> np.ndarray:
        return _lookup(self.operators, name, "operator")

    def form(self, name: str) -> BilinearForm:
        return _lookup(self.forms, name, "form")

    def tensor(self, name: str) -> np.ndarray:
        return _lookup(self.tensors, name, "tensor")

    def vector(self, name: str) -> np.ndarray:
        return _lookup(self.vectors, name, "vector")

    def representation(self, name: str) -> Representation:
        """A stored representation, or the built-in "regular" and "dual" ones."""
        if name in self.representations:
            data = self.representations[name]
            return Representation(self.algebra, data.rho, data.mu, name=name)
        if name == "regular":
            return regular_representation(self.algebra)
        if name == "dual":
            return dual_representation(self.algebra)
        known = ", ".join(sorted(self.representations) + list(_BUILTIN_REPRESENTATIONS))
        raise DocumentError(f"no representation named '{name}' (known: {known})")

    def with_operator(self, name: str, matrix: np.ndarray) -> "Document":
        operators = dict(self.operators)
        operators[name] = rational_array(matrix)
        return replace(self, operators=operators)

    def with_product(self, constants: np.ndarray, kind: Union[AlgebraKind, str], tag: str) -> "Document":
        return replace(self, product=rational_array(constants), kind=AlgebraKind(kind), tag=tag)

    def to_dict(self) -> Dict[str, object]:
        payload: Dict[str, object] = {"kind": self.kind.value, "dim": self.dim}
        if self.basis:
            payload["basis"] = list(self.basis)
        if self.tag:
            payload["tag"] = self.tag
        payload["product"] = _plain(self.product)
        payload["operators"] = {name: _plain(self.operators[name]) for name in sorted(self.operators)}
        payload["forms"] = {
            name: {"matrix": _plain(self.forms[name].matrix), "symmetry": self.forms[name].symmetry.value}
            for name in sorted(self.forms)
        }
        payload["tensors"] = {name: _plain(self.tensors[name]) for name in sorted(self.tensors)}
        payload["vectors"] = {name: _plain(self.vectors[name]) for name in sorted(self.vectors)}
        payload["representations"] = {
            name: {
                "dimV": self.representations[name].dim_v,
                "rho": _plain(self.representations[name].rho),
                "mu": _plain(self.representations[name].mu),
            }
            for name in sorted(self.representations)
        }
        return payload


def _lookup(section: Mapping[str, object], name: str, what: str):
    if name not in section:
        known = ", ".join(sorted(section)) or "none"
        raise DocumentError(f"no {what} named '{name}' (known: {known})")
    return section[name]


# ============================================================================
# VALIDATION HELPERS
# ============================================================================


def _kind(value: object, path: str) -> AlgebraKind:
    try:
        kind = AlgebraKind(value)
    except ValueError:
        kind = None
    if kind not in _DOCUMENT_KINDS:
        allowed = ", ".join(k.value for k in _DOCUMENT_KINDS)
        raise DocumentError(f"{path}: expected one of {allowed}, got {value!r}")
    return kind


def _sequence(value: object, path: str) -> Sequence[object]:
    if not isinstance(value, list):
        raise DocumentError(f"{path}: expected an array")
    return value


def _section(payload: Mapping[str, object], name: str) -> Mapping[str, object]:
    value = payload.get(name, {})
    if not isinstance(value, Mapping):
        raise DocumentError(f"$.{name}: expected an object")
    return value


def _scalar(value: object, path: str):
    if isinstance(value, float):
        raise DocumentError(f"{path}: floating point value {value!r} is not exact; write it as \"p/q\"")
    try:
        return to_rational(value)
    except InputError as exc:
        raise DocumentError(f"{path}: {exc}") from exc


def _nested(value: object, shape: Tuple[int, ...], path: str) -> object:
    if not shape:
        return _scalar(value, path)
    items = _sequence(value, path)
    if len(items) != shape[0]:
        raise DocumentError(f"{path}: expected {shape[0]} entries, got {len(items)}")
    return [_nested(item, shape[1:], f"{path}[{index}]") for index, item in enumerate(items)]


def _array(value: object, shape: Tuple[int, ...], path: str) -> np.ndarray:
    if value is None:
        raise DocumentError(f"{path}: missing")
    return rational_array(_nested(value, shape, path))


def _operator(value: object, dim: int, path: str) -> np.ndarray:
    """dim rows; a map V -> g may have any number of columns."""
    rows = _sequence(value, path)
    first = rows[0] if rows else None
    columns = len(first) if isinstance(first, list) else dim
    return _array(value, (dim, columns), path)


def _form(value: object, dim: int, path: str) -> BilinearForm:
    if not isinstance(value, Mapping):
        raise DocumentError(f"{path}: expected an object with matrix and symmetry")
    matrix = _array(value.get("matrix"), (dim, dim), f"{path}.matrix")
    try:
        return BilinearForm(matrix, Symmetry(value.get("symmetry", Symmetry.SYMMETRIC.value)))
    except (InputError, ValueError) as exc:
        raise DocumentError(f"{path}: {exc}") from exc


def _representation(value: object, dim: int, path: str) -> RepresentationData:
    if not isinstance(value, Mapping):
        raise DocumentError(f"{path}: expected an object with dimV, rho and mu")
    dim_v = value.get("dimV")
    if isinstance(dim_v, bool) or not isinstance(dim_v, int) or dim_v < 1:
        raise DocumentError(f"{path}.dimV: expected a positive integer, got {dim_v!r}")
    rho = _array(value.get("rho"), (dim, dim_v, dim_v), f"{path}.rho")
    mu = _array(value.get("mu"), (dim, dim_v, dim_v), f"{path}.mu")
    return RepresentationData(dim_v=dim_v, rho=rho, mu=mu)


def _plain(array: np.ndarray) -> object:
    if isinstance(array, np.ndarray) and array.ndim:
        return [_plain(item) for item in array]
    return format_rational(array)


# ============================================================================
# TEXT CODEC
# ============================================================================


def parse_document(text: str) -> Document:
    try:
        payload = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    return Document.from_dict(payload)


def serialize_document(document: Document) -> str:
    return json.dumps(document.to_dict(), indent=4, ensure_ascii=False) + "\n"


def load_document(path: Union[str, Path]) -> Document:
    path = Path(path)
    logger.debug("loading document %s", path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from exc
    except UnicodeDecodeError as exc:
        raise DocumentError(f"{path}: not UTF-8 ({exc.reason})") from exc
    try:
        return parse_document(text)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from exc


def save_document(document: Document, path: Union[str, Path]) -> None:
    Path(path).write_text(serialize_document(document), encoding="utf-8")


def document_from_algebra(
    A: Algebra,
    tag: str = "",
    operators: Optional[Mapping[str, np.ndarray]] = None,
) -> Document:
    return Document(
        kind=A.kind if A.kind in _DOCUMENT_KINDS else AlgebraKind.PRE_LIE,
        dim=A.dim,
        product=A.constants,
        basis=A.basis,
        tag=tag,
        operators={name: rational_array(matrix) for name, matrix in (operators or {}).items()},
    )
