"""Nijenhuis torsion, deformed products, deformations and operator polynomials."""
from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from src.algebra.cohomology import regular_coboundary
from src.algebra.prelie import (
    Algebra,
    AlgebraKind,
    check_associative,
    check_lie,
    check_pre_lie,
    commutator_constants,
    sub_adjacent,
)
from src.algebra.scalars import identity, matrix_power, rational_array, require_square, to_rational, zeros
from src.algebra.tensor_core import Cochain, MultiMap, c_bracket, diamond, pullback, pushforward
from src.algebra.verdict import Report, Verdict, compare, vanishes
from src.errors import ConsistencyError, InputError

logger = logging.getLogger(__name__)

# ============================================================================
# TUNING CONSTANTS
# ============================================================================
# Parameters at which t-polynomial identities are sampled. Both sides of the
# intertwining identity have degree <= 3 in t (<= 2 when ω' = 0), so four
# distinct values decide it.
DEFORMATION_SAMPLES: Tuple[Fraction, ...] = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(3))


def operator_cochain(A: Algebra, N: np.ndarray) -> Cochain:
    return Cochain.from_operator(require_square(N, A.dim))


def deformed_product(A: Algebra, N: np.ndarray) -> Cochain:
    """π_N = [π, N]^C, i.e. x·_N y = N(x)·y + x·N(y) − N(x·y)."""
    return c_bracket(A.product, operator_cochain(A, N))


def deformed_algebra(A: Algebra, N: np.ndarray) -> Algebra:
    return Algebra(product=deformed_product(A, N), kind=AlgebraKind.UNCHECKED, basis=A.basis)


def _torsion_direct(A: Algebra, N: np.ndarray) -> np.ndarray:
    """T(x, y) = N(x·_N y) − N(x)·N(y)."""
    deformed = deformed_product(A, N).coeffs
    return pushforward(deformed, N) - pullback(A.constants, [N, N])


def _torsion_bracket(A: Algebra, N: np.ndarray) -> np.ndarray:
    """½([π, N⋄N]^C + [N, [π, N]^C]^C)."""
    n_map = operator_cochain(A, N)
    square = diamond(n_map, n_map)
    total = c_bracket(A.product, square) + c_bracket(n_map, c_bracket(A.product, n_map))
    return total.coeffs * Fraction(1, 2)


def torsion(A: Algebra, N: np.ndarray) -> Cochain:
    N = require_square(N, A.dim)
    direct = _torsion_direct(A, N)
    if compare("torsion", direct, _torsion_bracket(A, N)).holds is False:
        raise ConsistencyError("the two torsion formulas disagree")
    return Cochain(direct)


def _kind_postconditions(A: Algebra, N: np.ndarray) -> None:
    deformed = deformed_algebra(A, N)
    morphism = compare("morphism", pushforward(deformed.constants, N), pullback(A.constants, [N, N]))
    if not morphism:
        raise ConsistencyError("N is not a morphism from the deformed product")
    kind_check = {
        AlgebraKind.PRE_LIE: check_pre_lie,
        AlgebraKind.LIE: check_lie,
        AlgebraKind.ASSOCIATIVE: check_associative,
    }.get(A.kind)
    if kind_check is not None and not kind_check(deformed):
        raise ConsistencyError(f"deformed product of a Nijenhuis operator is not {A.kind.value}")
    if A.kind is AlgebraKind.PRE_LIE:
        lie = sub_adjacent(A)
        if torsion(lie, N).is_zero() is False:
            raise ConsistencyError("N is not Nijenhuis on the sub-adjacent Lie algebra")
        expected = commutator_constants(deformed.constants)
        if compare("sub-adjacent", deformed_product(lie, N).coeffs, expected).holds is False:
            raise ConsistencyError("deformed bracket differs from the commutator of the deformed product")


def is_nijenhuis(A: Algebra, N: np.ndarray) -> Verdict:
    """
    True iff the torsion vanishes on every basis pair.

    When it does, the statements that follow from it are re-derived for the
    algebra's kind and a disagreement raises ConsistencyError.
    """
    N = require_square(N, A.dim)
    verdict = vanishes("nijenhuis", torsion(A, N).coeffs, reason="torsion is nonzero")
    if verdict:
        _kind_postconditions(A, N)
    return verdict


def first_torsion_violation(A: Algebra, N: np.ndarray) -> Optional[Tuple[int, int]]:
    """Cheap scan for grid search: skip the bracket cross-check and postconditions."""
    residual = _torsion_direct(A, rational_array(N))
    mismatch = np.argwhere(np.asarray(residual != 0, dtype=bool).any(axis=-1))
    return None if mismatch.size == 0 else (int(mismatch[0][0]), int(mismatch[0][1]))


def check_power_identity(A: Algebra, N: np.ndarray, j: int, k: int) -> Verdict:
    """N^j(x)·N^k(y) − N^k(N^j(x)·y) − N^j(x·N^k(y)) + N^{j+k}(x·y) = 0."""
    Nj, Nk, Njk = (matrix_power(N, exponent) for exponent in (j, k, j + k))
    c = A.constants
    residual = (
        pullback(c, [Nj, Nk])
        - pushforward(pullback(c, [Nj, None]), Nk)
        - pushforward(pullback(c, [None, Nk]), Nj)
        + pushforward(c, Njk)
    )
    return vanishes(f"power-identity({j},{k})", residual)


def operator_polynomial(N: np.ndarray, coeffs: Sequence[object], lowest_power: int = 0) -> np.ndarray:
    """Σ coeffs[i] N^(lowest_power + i); negative powers need an invertible N."""
    N = rational_array(N)
    total = zeros(N.shape)
    for offset, coefficient in enumerate(coeffs):
        value = to_rational(coefficient)
        if value:
            total = total + value * matrix_power(N, lowest_power + offset)
    return rational_array(total)


# ============================================================================
# DEFORMATIONS
# ============================================================================


@dataclass(frozen=True)
class DeformationReport:
    """π_t = π + tω is a deformation iff ω is a 2-cocycle and [ω, ω]^C = 0."""

    cocycle: Verdict
    square_zero: Verdict

    @property
    def is_cocycle(self) -> bool:
        return self.cocycle.holds

    @property
    def is_square_zero(self) -> bool:
        return self.square_zero.holds

    @property
    def is_deformation(self) -> bool:
        return self.is_cocycle and self.is_square_zero

    def __bool__(self) -> bool:
        return self.is_deformation

    def as_verdict(self) -> Verdict:
        if self.is_deformation:
            return Verdict.passed("deformation")
        failed = self.cocycle if not self.is_cocycle else self.square_zero
        return Verdict.failed("deformation", f"{failed.check}: {failed.reason}", failed.witness)

    def to_dict(self) -> dict:
        return {
            "check": "deformation",
            "result": self.is_deformation,
            "parts": [self.cocycle.to_dict(), self.square_zero.to_dict()],
        }


def deformation_family(A: Algebra, omega: MultiMap, t: object) -> Algebra:
    constants = A.constants + to_rational(t) * rational_array(omega.coeffs)
    return Algebra.from_constants(constants, AlgebraKind.UNCHECKED, A.basis)


def check_deformation(A: Algebra, omega: MultiMap) -> DeformationReport:
    if omega.coeffs.shape != A.constants.shape:
        raise InputError(f"deformation cochain has shape {omega.coeffs.shape}, expected {A.constants.shape}")
    cocycle = vanishes("cocycle", regular_coboundary(A, omega).coeffs, reason="δω is nonzero")
    square_zero = vanishes("square-zero", c_bracket(omega, omega).coeffs, reason="[ω, ω]^C is nonzero")
    report = DeformationReport(cocycle=cocycle, square_zero=square_zero)
    if report.is_deformation:
        for t in DEFORMATION_SAMPLES:
            if not check_pre_lie(deformation_family(A, omega, t)):
                raise ConsistencyError(f"π + tω is not pre-Lie at t={t} although both conditions hold")
    return report


def check_equivalence(A: Algebra, omega: MultiMap, omega_prime: MultiMap, N: np.ndarray) -> Report:
    """
    π + tω and π + tω' are equivalent through Id + tN iff
      ω − ω' = π_N,  Nω(x,y) = ω'(Nx,y) + ω'(x,Ny) + Nx·Ny,  ω'(Nx,Ny) = 0.
    """
    N = require_square(N, A.dim)
    w, w_prime = rational_array(omega.coeffs), rational_array(omega_prime.coeffs)
    exact = compare("exactness", w - w_prime, deformed_product(A, N).coeffs, reason="ω − ω' != π_N")
    integrable = compare(
        "integrability",
        pushforward(w, N),
        pullback(w_prime, [N, None]) + pullback(w_prime, [None, N]) + pullback(A.constants, [N, N]),
        reason="Nω(x,y) != ω'(Nx,y) + ω'(x,Ny) + Nx·Ny",
    )
    annihilating = vanishes("annihilation", pullback(w_prime, [N, N]), reason="ω'(Nx,Ny) != 0")
    report = Report(check="equivalence", parts=(exact, integrable, annihilating))
    if report.holds:
        for t in DEFORMATION_SAMPLES:
            phi = identity(A.dim) + t * N
            lhs = pushforward(A.constants + t * w, phi)
            rhs = pullback(A.constants + t * w_prime, [phi, phi])
            if not compare("intertwining", lhs, rhs):
                raise ConsistencyError(f"Id + tN fails to intertwine the deformations at t={t}")
    return report
