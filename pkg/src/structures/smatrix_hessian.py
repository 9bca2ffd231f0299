"""
s-matrices, pseudo-Hessian forms and pseudo-Hessian-Nijenhuis structures.

A symmetric 2-tensor r is handled through the matrix of r♯ : g* -> g in the
column convention; a bilinear form B through its Gram matrix B[i, j] = B(e_i, e_j).
Algebras on g* use the dual basis with the standard pairing.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from enum import Enum
from typing import Tuple

import numpy as np

from src.algebra.cohomology import form_coboundary, is_closed_form
from src.algebra.prelie import (
    Algebra,
    AlgebraKind,
    check_pre_lie,
    commutator_constants,
    dual_representation,
    require,
    sub_adjacent,
)
from src.algebra.scalars import (
    arrays_equal,
    identity,
    inverse,
    is_invertible,
    is_skew,
    is_symmetric,
    matrix_power,
    rational_array,
    require_square,
)
from src.algebra.tensor_core import pullback
from src.algebra.verdict import Report, Verdict, compare, vanishes
from src.errors import ConsistencyError, InputError

from .nijenhuis import deformed_product, is_nijenhuis, torsion
from .operators import (
    COMBINATION_SAMPLES,
    LDendriform,
    are_compatible_o_operators,
    descendent_product,
    is_o_operator,
    l_dendriform_from_o_operator,
)

logger = logging.getLogger(__name__)


class Symmetry(str, Enum):
    SYMMETRIC = "symmetric"
    SKEW = "skew"


@dataclass(frozen=True, eq=False)
class BilinearForm:
    matrix: np.ndarray
    symmetry: Symmetry = Symmetry.SYMMETRIC

    def __post_init__(self) -> None:
        matrix = rational_array(self.matrix)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InputError(f"a bilinear form needs a square matrix, got shape {matrix.shape}")
        symmetry = Symmetry(self.symmetry)
        if symmetry is Symmetry.SYMMETRIC and not is_symmetric(matrix):
            raise InputError("form is tagged symmetric but its matrix is not")
        if symmetry is Symmetry.SKEW and not is_skew(matrix):
            raise InputError("form is tagged skew but its matrix is not")
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "symmetry", symmetry)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def evaluate(self, x: np.ndarray, y: np.ndarray) -> object:
        return rational_array(x) @ self.matrix @ rational_array(y)


def _require_symmetric(A: Algebra, matrix: np.ndarray, name: str) -> np.ndarray:
    matrix = require_square(matrix, A.dim, name)
    if not is_symmetric(matrix):
        raise InputError(f"{name} must be symmetric")
    return matrix


def _dual_labels(A: Algebra) -> Tuple[str, ...]:
    return tuple(f"{label}*" for label in A.basis)


# ============================================================================
# S-MATRICES
# ============================================================================


def s_bracket(A: Algebra, r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """
    ⟦r1, r2⟧(ξ, η, ζ) as a tensor [ξ, η, ζ] over the dual basis:
    ½(−⟨ξ, r1η·r2ζ + r2η·r1ζ⟩ + ⟨η, r1ξ·r2ζ + r2ξ·r1ζ⟩ + ⟨ζ, [r1ξ, r2η] + [r2ξ, r1η]⟩).
    """
    T1 = _require_symmetric(A, r1, "r1")
    T2 = _require_symmetric(A, r2, "r2")
    c = A.constants
    products = pullback(c, [T1, T2]) + pullback(c, [T2, T1])  # [η, ζ; ξ]
    brackets = pullback(commutator_constants(c), [T1, T2]) + pullback(commutator_constants(c), [T2, T1])
    total = -products.transpose(2, 0, 1) + products.transpose(0, 2, 1) + brackets
    bracket = rational_array(total / 2)
    if not arrays_equal(bracket, -bracket.transpose(1, 0, 2)):
        raise ConsistencyError("s-bracket is not skew in its first two arguments")
    return bracket


def _dual_algebra(A: Algebra, constants: np.ndarray) -> Algebra:
    return Algebra.from_constants(constants, AlgebraKind.UNCHECKED, _dual_labels(A))


def _raw_dual_product(A: Algebra, r: np.ndarray) -> np.ndarray:
    return descendent_product(dual_representation(A), r)


def is_s_matrix(A: Algebra, r: np.ndarray) -> Verdict:
    """
    ⟦r, r⟧ = 0. When it holds, r♯ is checked to be an O-operator for (ad*, −R*),
    which is the statement that r♯ is a morphism from (g*, ·_r) to g.
    """
    r = _require_symmetric(A, r, "r")
    verdict = vanishes("s-matrix", s_bracket(A, r, r), reason="⟦r, r⟧ is nonzero")
    if verdict:
        if not is_o_operator(A, dual_representation(A), r):
            raise ConsistencyError("r♯ of an s-matrix is not an O-operator of the dual representation")
    return verdict


def are_compatible_s_matrices(A: Algebra, r1: np.ndarray, r2: np.ndarray) -> Verdict:
    """⟦r1, r2⟧ = 0 for two s-matrices; matches compatibility of r1♯, r2♯ as O-operators."""
    require(is_s_matrix(A, r1), "first tensor is not an s-matrix", A.basis)
    require(is_s_matrix(A, r2), "second tensor is not an s-matrix", A.basis)
    verdict = vanishes("compatible-s-matrices", s_bracket(A, r1, r2), reason="⟦r1, r2⟧ is nonzero")
    for k1, k2 in COMBINATION_SAMPLES:
        combined = rational_array(k1 * rational_array(r1) + k2 * rational_array(r2))
        if vanishes("s-matrix", s_bracket(A, combined, combined)).holds != verdict.holds:
            raise ConsistencyError(f"s-matrix compatibility disagrees with {k1} r1 + {k2} r2")
    if are_compatible_o_operators(A, dual_representation(A), r1, r2).holds != verdict.holds:
        raise ConsistencyError("s-matrix compatibility disagrees with O-operator compatibility")
    return verdict


def dual_product(A: Algebra, r: np.ndarray) -> Algebra:
    """ξ ·_r η = ad*_{r♯ξ} η − R*_{r♯η} ξ on g*."""
    require(is_s_matrix(A, r), "dual product needs an s-matrix", A.basis)
    product = _dual_algebra(A, _raw_dual_product(A, r))
    if not check_pre_lie(product):
        raise ConsistencyError("dual product of an s-matrix is not pre-Lie")
    return product.with_kind(AlgebraKind.PRE_LIE)


# ============================================================================
# PSEUDO-HESSIAN STRUCTURES
# ============================================================================


def hessian_from_r(A: Algebra, r: np.ndarray) -> np.ndarray:
    """B(x, y) = ⟨x, (r♯)⁻¹ y⟩, so the Gram matrix is (r♯)⁻¹."""
    r = _require_symmetric(A, r, "r")
    B = inverse(r, "r♯")
    if is_s_matrix(A, r) and not is_closed_form(A, B):
        raise ConsistencyError("form of an invertible s-matrix is not closed")
    return B


def r_from_hessian(A: Algebra, B: np.ndarray) -> np.ndarray:
    B = _require_symmetric(A, B, "form")
    r = inverse(B, "form")
    if is_closed_form(A, B) and not is_s_matrix(A, r):
        raise ConsistencyError("inverse of a closed form is not an s-matrix")
    return r


def is_pseudo_hessian(A: Algebra, B: np.ndarray) -> Verdict:
    """Symmetric, nondegenerate and closed for the trivial representation."""
    B = _require_symmetric(A, B, "form")
    if not is_invertible(B):
        return Verdict.failed("pseudo-hessian", "form is degenerate")
    verdict = is_closed_form(A, B)
    return Verdict("pseudo-hessian", verdict.holds, verdict.witness, verdict.reason)


def is_self_adjoint(B: np.ndarray, N: np.ndarray) -> Verdict:
    """B(Nx, y) = B(x, Ny)."""
    B, N = rational_array(B), rational_array(N)
    return compare("self-adjoint", N.T @ B, B @ N, value_axes=0, reason="B(Nx, y) != B(x, Ny)")


def is_pseudo_hessian_nijenhuis(A: Algebra, B: np.ndarray, N: np.ndarray) -> Report:
    B = _require_symmetric(A, B, "form")
    N = require_square(N, A.dim)
    parts = [is_pseudo_hessian(A, B)]
    if is_invertible(N):
        parts.append(is_nijenhuis(A, N))
    else:
        parts.append(Verdict.failed("nijenhuis", "operator is not invertible"))
    parts.append(is_self_adjoint(B, N))
    closed = is_closed_form(A, B @ N)
    parts.append(replace(closed, check="closed-b1"))
    return Report(check="pseudo-hessian-nijenhuis", parts=tuple(parts))


def hessian_sequence(A: Algebra, B: np.ndarray, N: np.ndarray, k: int) -> np.ndarray:
    """B_k(x, y) = B(x, N^k y); negative k needs an invertible N."""
    B = _require_symmetric(A, B, "form")
    return rational_array(B @ matrix_power(require_square(N, A.dim), k))


def s_sequence(A: Algebra, r1: np.ndarray, r2: np.ndarray, n: int) -> np.ndarray:
    """(s_n)♯ = (r2♯ (r1♯)⁻¹)^n r1♯, so s_0 = r1 and s_1 = r2."""
    r1 = _require_symmetric(A, r1, "r1")
    r2 = _require_symmetric(A, r2, "r2")
    step = rational_array(r2 @ inverse(r1, "r1♯"))
    return rational_array(matrix_power(step, n) @ r1)


def hessian_recursion_residual(A: Algebra, B: np.ndarray, N: np.ndarray, k: int) -> np.ndarray:
    """
    d B_{k+1} − d B_k(N·,·,·) − d B_k(·,N·,·) + d B_{k−1}(N·,N·,·) + B(T(x,y), N^{k−1}z)
    with T(x, y) = [Nx, Ny] − N([Nx, y] + [x, Ny] − N[x, y]) on the sub-adjacent
    Lie algebra. Vanishes whenever N is self-adjoint for B.
    """
    N = require_square(N, A.dim)
    d = {j: form_coboundary(A, hessian_sequence(A, B, N, j)) for j in (k - 1, k, k + 1)}
    lie_torsion = -torsion(sub_adjacent(A), N).coeffs
    coupling = np.tensordot(lie_torsion, rational_array(B) @ matrix_power(N, k - 1), axes=([2], [0]))
    residual = (
        d[k + 1]
        - pullback(d[k], [N, None, None])
        - pullback(d[k], [None, N, None])
        + pullback(d[k - 1], [N, N, None])
        + coupling
    )
    return rational_array(residual)


# ============================================================================
# BRIDGES BETWEEN S-MATRICES AND PSEUDO-HESSIAN-NIJENHUIS STRUCTURES
# ============================================================================


def phn_bridge(A: Algebra, r1: np.ndarray, r2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Compatible invertible s-matrices give B = (r1♯)⁻¹ and N = r1♯ (r2♯)⁻¹."""
    require(are_compatible_s_matrices(A, r1, r2), "s-matrices are not compatible", A.basis)
    N = rational_array(rational_array(r1) @ inverse(r2, "r2♯"))
    B = hessian_from_r(A, r1)
    report = is_pseudo_hessian_nijenhuis(A, B, N)
    if not report:
        raise ConsistencyError(f"compatible s-matrices gave no pseudo-Hessian-Nijenhuis structure: {report.as_verdict().reason}")
    return B, N


def phn_to_smatrices(A: Algebra, B: np.ndarray, N: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """r1♯ = (B♮)⁻¹ and r2♯ = N⁻¹ (B♮)⁻¹."""
    report = is_pseudo_hessian_nijenhuis(A, B, N)
    require(report.as_verdict(), "not a pseudo-Hessian-Nijenhuis structure", A.basis)
    r1 = inverse(B, "form")
    r2 = rational_array(inverse(N) @ r1)
    if not are_compatible_s_matrices(A, r1, r2):
        raise ConsistencyError("a pseudo-Hessian-Nijenhuis structure gave incompatible s-matrices")
    return r1, r2


@dataclass(frozen=True)
class DualNijenhuis:
    operator: np.ndarray
    base: Algebra
    deformed: Algebra
    nijenhuis: Verdict
    generates: Verdict


def dual_nijenhuis(A: Algebra, r1: np.ndarray, r2: np.ndarray) -> DualNijenhuis:
    """
    N* = (r2♯)⁻¹ r1♯ on (g*, ·_{r2}). It is Nijenhuis there and its deformed
    product is ·_{r1}, so ξ ·_t η = ξ ·_{r2} η + t ξ ·_{r1} η is generated by N*.
    """
    require(are_compatible_s_matrices(A, r1, r2), "s-matrices are not compatible", A.basis)
    N_star = rational_array(inverse(r2, "r2♯") @ rational_array(r1))
    base = dual_product(A, r2)
    target = _raw_dual_product(A, r1)
    nijenhuis = is_nijenhuis(base, N_star)
    generates = compare(
        "generates-r1-product", deformed_product(base, N_star).coeffs, target,
        reason="deformed product of N* differs from the r1 product",
    )
    deformed = _dual_algebra(A, target)
    return DualNijenhuis(N_star, base, deformed, nijenhuis, generates)


def _form_dendriform(A: Algebra, B: np.ndarray, M: np.ndarray) -> LDendriform:
    """
    Products defined through B by
      B(x ▷ y, z) = −B(My, [x, M⁻¹z]),  B(x ◁ y, z) = −B(My, (M⁻¹z)·x).
    """
    M_inv = inverse(M, "operator")
    c = A.constants
    gram = rational_array(B)

    def pairing(tensor: np.ndarray) -> np.ndarray:
        # tensor[x, z, :] is a vector v; returns F[x, y, z] = −B(M e_y, v)
        values = np.tensordot(np.tensordot(tensor, gram, axes=([2], [1])), M, axes=([2], [0]))
        return -values.transpose(0, 2, 1)

    bracket_part = pullback(commutator_constants(c), [None, M_inv])  # [x, M⁻¹z]
    right_part = pullback(c, [M_inv, None]).transpose(1, 0, 2)  # (M⁻¹z)·x as [x, z]
    solve_matrix = inverse(gram.T, "form")
    rhd = np.tensordot(pairing(bracket_part), solve_matrix, axes=([2], [1]))
    lhd = np.tensordot(pairing(right_part), solve_matrix, axes=([2], [1]))
    return LDendriform(rational_array(rhd), rational_array(lhd))


def phn_l_dendriform(A: Algebra, B: np.ndarray, N: np.ndarray) -> Tuple[LDendriform, LDendriform]:
    """
    The two compatible L-dendriform algebras of a pseudo-Hessian-Nijenhuis
    structure, solved from B directly. They agree with the algebras moved to g
    from r1♯ and r2♯.
    """
    r1, r2 = phn_to_smatrices(A, B, N)
    first = _form_dendriform(A, B, identity(A.dim))
    second = _form_dendriform(A, B, N)
    dual = dual_representation(A)
    for name, ours, operator in (("first", first, r1), ("second", second, r2)):
        if ours != l_dendriform_from_o_operator(A, dual, operator, on_algebra=True):
            raise ConsistencyError(f"{name} L-dendriform algebra differs from the O-operator route")
    return first, second


def form_dual_product(A: Algebra, B: np.ndarray) -> Algebra:
    """⟨ξ · η, x⟩ = B(r♯ξ · r♯η, x) with r♯ = B⁻¹; equals the dual product of r = B⁻¹."""
    B = _require_symmetric(A, B, "form")
    r = inverse(B, "form")
    constants = np.tensordot(pullback(A.constants, [r, r]), B, axes=([2], [0]))
    return _dual_algebra(A, rational_array(constants))


def transpose_nijenhuis(A: Algebra, B: np.ndarray, N: np.ndarray) -> Verdict:
    """For a pseudo-Hessian-Nijenhuis (B, N), N^T is Nijenhuis on the form's dual product."""
    require(is_pseudo_hessian_nijenhuis(A, B, N).as_verdict(), "not a pseudo-Hessian-Nijenhuis structure", A.basis)
    product = form_dual_product(A, B)
    N_t = rational_array(rational_array(N).T)
    if not arrays_equal(N_t, rational_array(B) @ rational_array(N) @ inverse(B)):
        raise ConsistencyError("transpose of a self-adjoint operator differs from B N B^-1")
    return is_nijenhuis(product, N_t)

