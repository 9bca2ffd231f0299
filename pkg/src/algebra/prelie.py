"""Algebras given by structure constants, their structural checks and representations."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence, Tuple, Union

import numpy as np

from src.errors import ConsistencyError, InputError

from .scalars import arrays_equal, rational_array, zeros
from .tensor_core import Cochain, structure_map
from .verdict import Verdict, compare, vanishes

logger = logging.getLogger(__name__)


class AlgebraKind(str, Enum):
    PRE_LIE = "prelie"
    LIE = "lie"
    ASSOCIATIVE = "associative"
    UNCHECKED = "unchecked"


@dataclass(frozen=True, eq=False)
class Algebra:
    """A finite-dimensional algebra e_i·e_j = Σ_k c[i, j, k] e_k."""

    product: Cochain
    kind: AlgebraKind = AlgebraKind.UNCHECKED
    basis: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        product = self.product if isinstance(self.product, Cochain) else structure_map(self.product)
        if product.degree != 1 or product.codim != product.dim:
            raise InputError("an algebra product is a bilinear map of the space to itself")
        object.__setattr__(self, "product", product)
        object.__setattr__(self, "kind", AlgebraKind(self.kind))
        labels = tuple(self.basis) or tuple(f"e{index + 1}" for index in range(product.dim))
        if len(labels) != product.dim:
            raise InputError(f"{len(labels)} basis labels given for dimension {product.dim}")
        object.__setattr__(self, "basis", labels)

    @staticmethod
    def from_constants(
        constants: object,
        kind: Union[AlgebraKind, str] = AlgebraKind.UNCHECKED,
        basis: Sequence[str] = (),
    ) -> "Algebra":
        return Algebra(product=structure_map(constants), kind=AlgebraKind(kind), basis=tuple(basis))

    @staticmethod
    def from_table(
        dim: int,
        table: Mapping[Tuple[int, int], Mapping[int, object]],
        kind: Union[AlgebraKind, str] = AlgebraKind.UNCHECKED,
        basis: Sequence[str] = (),
    ) -> "Algebra":
        """Build from nonzero products written with 1-based indices, e.g. {(2, 1): {1: -1}}."""
        constants = zeros((dim, dim, dim))
        for (left, right), image in table.items():
            for target, coefficient in image.items():
                constants[left - 1, right - 1, target - 1] = coefficient
        return Algebra.from_constants(constants, kind, basis)

    @staticmethod
    def zero(dim: int, kind: Union[AlgebraKind, str] = AlgebraKind.PRE_LIE) -> "Algebra":
        return Algebra.from_constants(zeros((dim, dim, dim)), kind)

    @property
    def dim(self) -> int:
        return self.product.dim

    @property
    def constants(self) -> np.ndarray:
        return self.product.coeffs

    def multiply(self, x: Sequence[object], y: Sequence[object]) -> np.ndarray:
        return self.product.evaluate(x, y)

    def with_kind(self, kind: Union[AlgebraKind, str]) -> "Algebra":
        return Algebra(product=self.product, kind=AlgebraKind(kind), basis=self.basis)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Algebra):
            return NotImplemented
        return arrays_equal(self.constants, other.constants)

    __hash__ = None  # type: ignore[assignment]


# ============================================================================
# NESTED PRODUCTS
# ============================================================================


def left_nested(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """[x, y, z] ↦ (x inner y) outer z."""
    return rational_array(np.tensordot(inner, outer, axes=([2], [0])))


def right_nested(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """[x, y, z] ↦ x outer (y inner z)."""
    return rational_array(np.tensordot(outer, inner, axes=([1], [2])).transpose(0, 2, 3, 1))


def associator(constants: np.ndarray) -> np.ndarray:
    return left_nested(constants, constants) - right_nested(constants, constants)


def commutator_constants(constants: np.ndarray) -> np.ndarray:
    return rational_array(constants - constants.transpose(1, 0, 2))


def swap_first_two(tensor: np.ndarray) -> np.ndarray:
    order = (1, 0) + tuple(range(2, tensor.ndim))
    return tensor.transpose(order)


# ============================================================================
# STRUCTURAL CHECKS
# ============================================================================


def check_pre_lie(A: Algebra) -> Verdict:
    """(x·y)·z − x·(y·z) must be symmetric in x and y on every basis triple."""
    assoc = associator(A.constants)
    return compare("pre-lie", assoc, swap_first_two(assoc), reason="associator is not symmetric in x, y")


def check_associative(A: Algebra) -> Verdict:
    return vanishes("associative", associator(A.constants), reason="associator does not vanish")


def check_commutative(A: Algebra) -> Verdict:
    c = A.constants
    return compare("commutative", c, swap_first_two(c), reason="x·y != y·x")


def check_lie(A: Algebra) -> Verdict:
    c = A.constants
    skew = compare("lie", c, -swap_first_two(c), reason="bracket is not skew")
    if not skew:
        return skew
    nested = left_nested(c, c)
    jacobi = nested + nested.transpose(2, 0, 1, 3) + nested.transpose(1, 2, 0, 3)
    return vanishes("lie", jacobi, reason="Jacobi identity fails")


def check_novikov(A: Algebra) -> Verdict:
    """Pre-Lie with commuting right multiplications: (z·x)·y = (z·y)·x."""
    pre_lie = check_pre_lie(A)
    if not pre_lie:
        return Verdict.failed("novikov", pre_lie.reason, pre_lie.witness)
    nested = left_nested(A.constants, A.constants)
    return compare("novikov", nested, nested.transpose(0, 2, 1, 3), reason="R_x R_y != R_y R_x")


_KIND_CHECKS = {
    AlgebraKind.PRE_LIE: check_pre_lie,
    AlgebraKind.LIE: check_lie,
    AlgebraKind.ASSOCIATIVE: check_associative,
}


def verify_kind(A: Algebra) -> Verdict:
    """Re-check the invariant promised by the kind tag."""
    check = _KIND_CHECKS.get(A.kind)
    return check(A) if check else Verdict.passed("unchecked")


def require(verdict: Verdict, what: str, labels: Sequence[str] = ()) -> None:
    if not verdict:
        where = f" at {verdict.witness.describe(labels)}" if verdict.witness else ""
        raise InputError(f"{what}: {verdict.reason}{where}")


def sub_adjacent(A: Algebra) -> Algebra:
    """The Lie algebra [x, y]^c = x·y − y·x of a pre-Lie algebra."""
    require(check_pre_lie(A), "sub-adjacent Lie algebra needs a pre-Lie algebra", A.basis)
    lie = Algebra.from_constants(commutator_constants(A.constants), AlgebraKind.LIE, A.basis)
    if not check_lie(lie):
        raise ConsistencyError("commutator of a pre-Lie product failed the Jacobi identity")
    return lie


# ============================================================================
# MULTIPLICATION OPERATORS AND REPRESENTATIONS
# ============================================================================


def left_multiplications(A: Algebra) -> np.ndarray:
    """Stack of L_{e_a} matrices, L[a][u, v] = c[a, v, u]."""
    return rational_array(A.constants.transpose(0, 2, 1))


def right_multiplications(A: Algebra) -> np.ndarray:
    """Stack of R_{e_a} matrices, R[a][u, v] = c[v, a, u]."""
    return rational_array(A.constants.transpose(1, 2, 0))


@dataclass(frozen=True, eq=False)
class Representation:
    """Pair (ρ, μ) of actions of a pre-Lie algebra on an auxiliary space V."""

    base: Algebra
    rho: np.ndarray
    mu: np.ndarray
    name: str = ""
    labels: Tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        rho = rational_array(self.rho)
        mu = rational_array(self.mu)
        n = self.base.dim
        if rho.ndim != 3 or rho.shape[0] != n or rho.shape[1] != rho.shape[2]:
            raise InputError(f"rho must hold {n} square matrices, got shape {rho.shape}")
        if mu.shape != rho.shape:
            raise InputError(f"mu has shape {mu.shape}, rho has {rho.shape}")
        rho.setflags(write=False)
        mu.setflags(write=False)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "mu", mu)
        labels = tuple(self.labels) or tuple(f"v{index + 1}" for index in range(rho.shape[1]))
        object.__setattr__(self, "labels", labels)

    @property
    def dim_v(self) -> int:
        return self.rho.shape[1]

    @staticmethod
    def trivial(A: Algebra, dim_v: int = 1) -> "Representation":
        empty = zeros((A.dim, dim_v, dim_v))
        return Representation(A, empty, empty, name="trivial", labels=("1",) if dim_v == 1 else ())


def regular_representation(A: Algebra) -> Representation:
    return Representation(A, left_multiplications(A), right_multiplications(A), "regular", A.basis)


def dual_representation(A: Algebra) -> Representation:
    """(g*; ad* = L* − R*, −R*) with ⟨L*_x ξ, y⟩ = −⟨ξ, x·y⟩ and ⟨R*_x ξ, y⟩ = −⟨ξ, y·x⟩."""
    left_t = left_multiplications(A).transpose(0, 2, 1)
    right_t = right_multiplications(A).transpose(0, 2, 1)
    dual_labels = tuple(f"{label}*" for label in A.basis)
    return Representation(A, rational_array(right_t - left_t), rational_array(right_t), "dual", dual_labels)


def mult_and_dual_reps(A: Algebra) -> Tuple[Representation, Representation]:
    require(check_pre_lie(A), "multiplication representations need a pre-Lie algebra", A.basis)
    return regular_representation(A), dual_representation(A)


def _require_same_base(A: Algebra, rep: Representation) -> None:
    if rep.base.dim != A.dim:
        raise InputError(f"representation is over dimension {rep.base.dim}, algebra has {A.dim}")


def check_representation(A: Algebra, rep: Representation) -> Verdict:
    """ρ represents the sub-adjacent Lie algebra and ρ(x)μ(y) − μ(y)ρ(x) = μ(x·y) − μ(y)μ(x)."""
    _require_same_base(A, rep)
    rho, mu = rep.rho, rep.mu
    bracket = commutator_constants(A.constants)
    rho_of_bracket = rational_array(np.tensordot(bracket, rho, axes=([2], [0])))
    rho_commutator = rational_array(np.matmul(rho[:, None], rho[None, :]) - np.matmul(rho[None, :], rho[:, None]))
    lie_part = compare(
        "representation", rho_commutator, rho_of_bracket, value_axes=2,
        reason="rho is not a representation of the sub-adjacent Lie algebra",
    )
    if not lie_part:
        return lie_part
    lhs = np.matmul(rho[:, None], mu[None, :]) - np.matmul(mu[None, :], rho[:, None])
    rhs = np.tensordot(A.constants, mu, axes=([2], [0])) - np.matmul(mu[None, :], mu[:, None])
    return compare(
        "representation", rational_array(lhs), rational_array(rhs), value_axes=2,
        reason="rho(x)mu(y) - mu(y)rho(x) != mu(x.y) - mu(y)mu(x)",
    )


def semidirect_structure(A: Algebra, rep: Representation) -> np.ndarray:
    """(x1+v1)⋆(x2+v2) = x1·x2 + ρ(x1)v2 + μ(x2)v1, without validating the representation."""
    _require_same_base(A, rep)
    n, m = A.dim, rep.dim_v
    constants = zeros((n + m,) * 3)
    constants[:n, :n, :n] = A.constants
    # e_a ⋆ v_j = ρ(e_a) v_j and v_j ⋆ e_b = μ(e_b) v_j
    constants[:n, n:, n:] = rep.rho.transpose(0, 2, 1)
    constants[n:, :n, n:] = rep.mu.transpose(2, 0, 1)
    return constants


def semidirect_product(A: Algebra, rep: Representation) -> Algebra:
    require(check_pre_lie(A), "semidirect product needs a pre-Lie algebra", A.basis)
    require(check_representation(A, rep), "semidirect product needs a valid representation")
    product = Algebra.from_constants(semidirect_structure(A, rep), AlgebraKind.PRE_LIE, A.basis + rep.labels)
    if not check_pre_lie(product):
        raise ConsistencyError("semidirect product of a valid representation is not pre-Lie")
    logger.debug("semidirect product of dimension %d built", product.dim)
    return product
