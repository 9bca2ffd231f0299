"""O-operators, Rota-Baxter operators, their semidirect lifts and L-dendriform algebras."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Tuple

import numpy as np

from src.algebra.prelie import (
    Algebra,
    AlgebraKind,
    Representation,
    check_pre_lie,
    left_nested,
    regular_representation,
    require,
    right_nested,
    semidirect_product,
    swap_first_two,
)
from src.algebra.scalars import arrays_equal, identity, inverse, is_invertible, rational_array, to_rational, zeros
from src.algebra.tensor_core import pullback, pushforward
from src.algebra.verdict import Report, Verdict, compare
from src.errors import ConsistencyError, InputError

from .nijenhuis import is_nijenhuis

logger = logging.getLogger(__name__)

# ============================================================================
# TUNING CONSTANTS
# ============================================================================
# (k1, k2) pairs used to cross-check compatibility against linear combinations.
COMBINATION_SAMPLES: Tuple[Tuple[Fraction, Fraction], ...] = (
    (Fraction(1), Fraction(1)),
    (Fraction(1), Fraction(-1)),
    (Fraction(2), Fraction(1, 3)),
)


def _require_map(A: Algebra, rep: Representation, T: np.ndarray) -> np.ndarray:
    matrix = rational_array(T)
    if matrix.shape != (A.dim, rep.dim_v):
        raise InputError(f"map V -> g must be {A.dim}x{rep.dim_v}, got shape {matrix.shape}")
    return matrix


def _acting(family: np.ndarray, T: np.ndarray) -> np.ndarray:
    """Stack of ρ(T u_a) for a family ρ of matrices indexed by the algebra basis."""
    return rational_array(np.tensordot(T, family, axes=([0], [0])))


def descendent_product(rep: Representation, T: np.ndarray) -> np.ndarray:
    """u ⋆ v = ρ(T u) v + μ(T v) u on V."""
    rho_t, mu_t = _acting(rep.rho, T), _acting(rep.mu, T)
    return rational_array(rho_t.transpose(0, 2, 1) + mu_t.transpose(2, 0, 1))


def is_o_operator(A: Algebra, rep: Representation, T: np.ndarray) -> Verdict:
    """T(u)·T(v) = T(ρ(T u) v + μ(T v) u) on every pair of basis vectors of V."""
    T = _require_map(A, rep, T)
    return compare(
        "o-operator",
        pullback(A.constants, [T, T]),
        pushforward(descendent_product(rep, T), T),
        reason="T(u)·T(v) != T(ρ(Tu)v + μ(Tv)u)",
    )


def is_rota_baxter(A: Algebra, R: np.ndarray, weight: object = 0) -> Verdict:
    """R(x)·R(y) = R(R(x)·y + x·R(y)) + λR(x·y)."""
    R = rational_array(R)
    if R.shape != (A.dim, A.dim):
        raise InputError(f"operator must be {A.dim}x{A.dim}, got shape {R.shape}")
    lam = to_rational(weight)
    c = A.constants
    inner = pullback(c, [R, None]) + pullback(c, [None, R]) + lam * c
    return compare(
        f"rota-baxter({lam})",
        pullback(c, [R, R]),
        pushforward(inner, R),
        reason=f"R is not a Rota-Baxter operator of weight {lam}",
    )


def projection_relations(A: Algebra, N: np.ndarray) -> Report:
    """
    Relations between the Nijenhuis and Rota-Baxter conditions for square-zero,
    idempotent and involutive operators. Each applicable relation becomes one
    part; a failing part is a counterexample to the relation, not an error.
    """
    N = rational_array(N)
    square = rational_array(N @ N)
    nijenhuis = bool(is_nijenhuis(A, N))
    parts = []

    def relation(check: str, other: bool) -> Verdict:
        if nijenhuis == other:
            return Verdict.passed(check)
        return Verdict.failed(check, f"nijenhuis={nijenhuis} but rota-baxter={other}")

    if arrays_equal(square, zeros(N.shape)):
        parts.append(relation("square-zero", bool(is_rota_baxter(A, N, 0))))
    if arrays_equal(square, N):
        parts.append(relation("idempotent", bool(is_rota_baxter(A, N, -1))))
    if arrays_equal(square, identity(A.dim)):
        parts.append(relation("involution+", bool(is_rota_baxter(A, N + identity(A.dim), -2))))
        parts.append(relation("involution-", bool(is_rota_baxter(A, N - identity(A.dim), 2))))
    return Report(check="projection-relations", parts=tuple(parts))


# ============================================================================
# SEMIDIRECT LIFTS
# ============================================================================


class LiftMode(str, Enum):
    ROTA_BAXTER = "rota-baxter"
    NILPOTENT = "nilpotent"
    IDEMPOTENT = "idempotent"


@dataclass(frozen=True)
class Lift:
    algebra: Algebra
    operator: np.ndarray
    verdict: Verdict


def lift_to_semidirect(
    A: Algebra,
    rep: Representation,
    T: np.ndarray,
    mode: LiftMode = LiftMode.NILPOTENT,
    weight: object = 0,
) -> Lift:
    """
    Block operator on g ⋉ V built from T : V -> g.

    ROTA_BAXTER gives (0 T; 0 −λId) checked as Rota-Baxter of weight λ,
    NILPOTENT gives (0 T; 0 0) and IDEMPOTENT gives (0 T; 0 Id), both checked
    as Nijenhuis operators.
    """
    T = _require_map(A, rep, T)
    mode = LiftMode(mode)
    total = semidirect_product(A, rep)
    n, m = A.dim, rep.dim_v
    operator = zeros((n + m, n + m))
    operator[:n, n:] = T
    lam = to_rational(weight)
    if mode is LiftMode.ROTA_BAXTER:
        operator[n:, n:] = -lam * identity(m)
        verdict = is_rota_baxter(total, operator, lam)
    else:
        if mode is LiftMode.IDEMPOTENT:
            operator[n:, n:] = identity(m)
        verdict = is_nijenhuis(total, operator)
    logger.debug("lifted %s operator to dimension %d: %s", mode.value, n + m, verdict.holds)
    return Lift(algebra=total, operator=rational_array(operator), verdict=verdict)


# ============================================================================
# COMPATIBILITY
# ============================================================================


def _compatibility_residual(A: Algebra, rep: Representation, T1: np.ndarray, T2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    c = A.constants
    lhs = pullback(c, [T1, T2]) + pullback(c, [T2, T1])
    first = pushforward(descendent_product(rep, T2), T1)
    second = pushforward(descendent_product(rep, T1), T2)
    return lhs, rational_array(first + second)


def are_compatible_o_operators(A: Algebra, rep: Representation, T1: np.ndarray, T2: np.ndarray) -> Verdict:
    """Every k1 T1 + k2 T2 is an O-operator; decided by the bilinear identity in T1, T2."""
    T1, T2 = _require_map(A, rep, T1), _require_map(A, rep, T2)
    require(is_o_operator(A, rep, T1), "first map is not an O-operator", rep.labels)
    require(is_o_operator(A, rep, T2), "second map is not an O-operator", rep.labels)
    lhs, rhs = _compatibility_residual(A, rep, T1, T2)
    verdict = compare("compatible-o-operators", lhs, rhs, reason="mixed O-operator identity fails")
    for k1, k2 in COMBINATION_SAMPLES:
        combined = bool(is_o_operator(A, rep, k1 * T1 + k2 * T2))
        if combined != verdict.holds:
            logger.warning("compatibility disagrees with the combination %s T1 + %s T2", k1, k2)
            raise ConsistencyError(f"compatibility identity disagrees with {k1} T1 + {k2} T2")
    return verdict


def are_compatible_rota_baxter(A: Algebra, R1: np.ndarray, R2: np.ndarray) -> Verdict:
    """Weight-zero Rota-Baxter operators are O-operators of the regular representation."""
    return are_compatible_o_operators(A, regular_representation(A), R1, R2)


def nijenhuis_from_compatible(A: Algebra, rep: Representation, T1: np.ndarray, T2: np.ndarray) -> np.ndarray:
    """N = T1 ∘ T2⁻¹ for compatible O-operators with T2 invertible."""
    T1, T2 = _require_map(A, rep, T1), _require_map(A, rep, T2)
    T2_inv = inverse(T2, "second O-operator")
    require(are_compatible_o_operators(A, rep, T1, T2), "O-operators are not compatible")
    N = rational_array(T1 @ T2_inv)
    if not is_nijenhuis(A, N):
        raise ConsistencyError("T1 T2^-1 of compatible O-operators is not Nijenhuis")
    return N


# ============================================================================
# L-DENDRIFORM ALGEBRAS
# ============================================================================


@dataclass(frozen=True, eq=False)
class LDendriform:
    """Two products x ▷ y (``rhd``) and x ◁ y (``lhd``), stored like structure constants."""

    rhd: np.ndarray
    lhd: np.ndarray

    def __post_init__(self) -> None:
        rhd, lhd = rational_array(self.rhd), rational_array(self.lhd)
        if rhd.ndim != 3 or len(set(rhd.shape)) != 1 or lhd.shape != rhd.shape:
            raise InputError(f"L-dendriform products need equal (n, n, n) shapes, got {rhd.shape} and {lhd.shape}")
        rhd.setflags(write=False)
        lhd.setflags(write=False)
        object.__setattr__(self, "rhd", rhd)
        object.__setattr__(self, "lhd", lhd)

    @property
    def dim(self) -> int:
        return self.rhd.shape[0]

    def combined(self, k1: object, other: "LDendriform", k2: object) -> "LDendriform":
        a, b = to_rational(k1), to_rational(k2)
        return LDendriform(a * self.rhd + b * other.rhd, a * self.lhd + b * other.lhd)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LDendriform):
            return NotImplemented
        return arrays_equal(self.rhd, other.rhd) and arrays_equal(self.lhd, other.lhd)

    __hash__ = None  # type: ignore[assignment]


def _axiom_residuals(rhd: np.ndarray, lhd: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Both L-dendriform axioms as (lhs − rhs) tensors on [x, y, z]."""
    first = (
        right_nested(rhd, rhd)
        - left_nested(rhd, rhd)
        - left_nested(rhd, lhd)
        - swap_first_two(right_nested(rhd, rhd))
        + swap_first_two(left_nested(rhd, lhd))
        + swap_first_two(left_nested(rhd, rhd))
    )
    second = (
        right_nested(rhd, lhd)
        - left_nested(lhd, rhd)
        - swap_first_two(right_nested(lhd, rhd))
        - swap_first_two(right_nested(lhd, lhd))
        + swap_first_two(left_nested(lhd, lhd))
    )
    return rational_array(first), rational_array(second)


def _axioms_verdict(check: str, first: np.ndarray, second: np.ndarray) -> Verdict:
    zero = zeros(first.shape)
    verdict = compare(check, first, zero, reason="x▷(y▷z) axiom fails")
    if not verdict:
        return verdict
    return compare(check, second, zero, reason="x▷(y◁z) axiom fails")


def is_l_dendriform(D: LDendriform) -> Verdict:
    return _axioms_verdict("l-dendriform", *_axiom_residuals(D.rhd, D.lhd))


def vertical_prelie(D: LDendriform) -> Algebra:
    """x·y = x ▷ y − y ◁ x."""
    return Algebra.from_constants(D.rhd - swap_first_two(D.lhd), AlgebraKind.UNCHECKED)


def are_compatible_l_dendriform(D1: LDendriform, D2: LDendriform) -> Verdict:
    """Every k1 D1 + k2 D2 is L-dendriform; the axioms are quadratic so the mixed part decides it."""
    if D1.dim != D2.dim:
        raise InputError(f"L-dendriform algebras of dimensions {D1.dim} and {D2.dim}")
    require(is_l_dendriform(D1), "first algebra is not L-dendriform")
    require(is_l_dendriform(D2), "second algebra is not L-dendriform")
    total = _axiom_residuals(D1.rhd + D2.rhd, D1.lhd + D2.lhd)
    one = _axiom_residuals(D1.rhd, D1.lhd)
    two = _axiom_residuals(D2.rhd, D2.lhd)
    mixed = [total[index] - one[index] - two[index] for index in range(2)]
    verdict = _axioms_verdict("compatible-l-dendriform", *mixed)
    for k1, k2 in COMBINATION_SAMPLES:
        if bool(is_l_dendriform(D1.combined(k1, D2, k2))) != verdict.holds:
            raise ConsistencyError(f"L-dendriform compatibility disagrees with {k1} D1 + {k2} D2")
    return verdict


def l_dendriform_from_o_operator(
    A: Algebra, rep: Representation, T: np.ndarray, on_algebra: bool = False
) -> LDendriform:
    """
    u ▷ v = ρ(Tu)v and u ◁ v = −μ(Tu)v on V. With ``on_algebra`` the structure
    is moved to g through an invertible T: x ▷ y = Tρ(x)T⁻¹y, x ◁ y = −Tμ(x)T⁻¹y.
    """
    T = _require_map(A, rep, T)
    require(is_o_operator(A, rep, T), "L-dendriform structure needs an O-operator", rep.labels)
    if on_algebra:
        T_inv = inverse(T, "O-operator")
        rhd = np.matmul(np.matmul(T, rep.rho), T_inv).transpose(0, 2, 1)
        lhd = -np.matmul(np.matmul(T, rep.mu), T_inv).transpose(0, 2, 1)
    else:
        rhd = _acting(rep.rho, T).transpose(0, 2, 1)
        lhd = -_acting(rep.mu, T).transpose(0, 2, 1)
    D = LDendriform(rhd, lhd)
    if not is_l_dendriform(D):
        raise ConsistencyError("O-operator produced products failing the L-dendriform axioms")
    if not check_pre_lie(vertical_prelie(D)):
        raise ConsistencyError("vertical product of an L-dendriform algebra is not pre-Lie")
    return D


def rota_baxter_l_dendriform(A: Algebra, R: np.ndarray, on_algebra: bool = False) -> LDendriform:
    """x ▷ y = R(x)·y and x ◁ y = −y·R(x) for a weight-zero Rota-Baxter operator."""
    return l_dendriform_from_o_operator(A, regular_representation(A), R, on_algebra)


@dataclass(frozen=True)
class OperatorPair:
    compatible: Verdict
    first: LDendriform
    second: LDendriform


def o_operator_pair(A: Algebra, rep: Representation, N: np.ndarray, T: np.ndarray) -> OperatorPair:
    """
    T and N∘T for a Nijenhuis N with both maps O-operators. With N invertible
    the two are compatible, and so are their L-dendriform algebras.
    """
    T = _require_map(A, rep, T)
    require(is_nijenhuis(A, N), "operator is not Nijenhuis", A.basis)
    NT = rational_array(rational_array(N) @ T)
    require(is_o_operator(A, rep, T), "T is not an O-operator", rep.labels)
    require(is_o_operator(A, rep, NT), "N∘T is not an O-operator", rep.labels)
    compatible = are_compatible_o_operators(A, rep, T, NT)
    if is_invertible(N) and not compatible:
        raise ConsistencyError("T and N∘T are not compatible although N is invertible")
    first = l_dendriform_from_o_operator(A, rep, T)
    second = l_dendriform_from_o_operator(A, rep, NT)
    if compatible and not are_compatible_l_dendriform(first, second):
        raise ConsistencyError("compatible O-operators produced incompatible L-dendriform algebras")
    return OperatorPair(compatible=compatible, first=first, second=second)
