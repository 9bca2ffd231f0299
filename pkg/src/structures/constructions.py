"""
Recipes producing pre-Lie algebras from other data, and how each recipe
interacts with a Nijenhuis operator.

* operator solutions of the classical Yang-Baxter equation: x·y = [r(x), y]
* Burgers type products: x·y = ⟨x, y⟩a + ⟨x, a⟩y
* Rota-Baxter type operators on associative algebras: x·y = R(x)∗y − y∗R(x) − x∗y
* derivations of commutative associative algebras: x·y = x∗D(y) + s x∗y
"""
from __future__ import annotations

import logging
from dataclasses import replace
from typing import Optional, Sequence

import numpy as np

from src.algebra.prelie import (
    Algebra,
    AlgebraKind,
    check_associative,
    check_commutative,
    check_lie,
    check_novikov,
    check_pre_lie,
    left_multiplications,
    require,
    sub_adjacent,
    swap_first_two,
)
from src.algebra.scalars import identity, is_invertible, is_symmetric, rational_array, require_square, to_rational
from src.algebra.tensor_core import pullback, pushforward
from src.algebra.verdict import Report, Verdict, compare
from src.errors import ConsistencyError, InputError

from .nijenhuis import deformed_algebra, is_nijenhuis
from .operators import is_rota_baxter

logger = logging.getLogger(__name__)


def _require_commuting(first: np.ndarray, second: np.ndarray, what: str) -> None:
    if not compare("commuting", first @ second, second @ first):
        raise InputError(f"{what} must commute with N")


def _require_nijenhuis(A: Algebra, N: np.ndarray) -> np.ndarray:
    N = require_square(N, A.dim)
    require(is_nijenhuis(A, N), "N is not a Nijenhuis operator", A.basis)
    return N


def _renamed(check: str, verdict: Verdict) -> Verdict:
    return replace(verdict, check=check)


def _ensure_pre_lie(A: Algebra, recipe: str) -> Algebra:
    if not check_pre_lie(A):
        raise ConsistencyError(f"{recipe} product is not pre-Lie")
    return A


# ============================================================================
# CLASSICAL YANG-BAXTER
# ============================================================================


def solves_cybe(L: Algebra, r: np.ndarray) -> Verdict:
    """[r(x), r(y)] = r([r(x), y] + [x, r(y)])."""
    r = require_square(r, L.dim)
    K = L.constants
    return compare(
        "cybe",
        pullback(K, [r, r]),
        pushforward(pullback(K, [r, None]) + pullback(K, [None, r]), r),
        reason="[r(x), r(y)] != r([r(x), y] + [x, r(y)])",
    )


def prelie_from_cybe(L: Algebra, r: np.ndarray) -> Algebra:
    require(check_lie(L), "Yang-Baxter construction needs a Lie algebra", L.basis)
    require(solves_cybe(L, r), "r does not solve the classical Yang-Baxter equation", L.basis)
    constants = pullback(L.constants, [rational_array(r), None])
    return _ensure_pre_lie(Algebra.from_constants(constants, AlgebraKind.PRE_LIE, L.basis), "Yang-Baxter")


def cybe_nijenhuis_report(L: Algebra, r: np.ndarray, N: np.ndarray) -> Report:
    """For N Nijenhuis on L commuting with r."""
    L = L.with_kind(AlgebraKind.LIE)
    N = _require_nijenhuis(L, N)
    r = require_square(r, L.dim)
    _require_commuting(r, N, "r")
    A = prelie_from_cybe(L, r)
    deformed_lie = deformed_algebra(L, N).with_kind(AlgebraKind.LIE)
    cybe = solves_cybe(deformed_lie, r)
    expected = pullback(deformed_lie.constants, [r, None])
    return Report(
        check="cybe-nijenhuis",
        parts=(
            _renamed("cybe-deformed", cybe),
            _renamed("nijenhuis-on-product", is_nijenhuis(A, N)),
            compare("deformed-product", deformed_algebra(A, N).constants, expected, reason="x·_N y != [r(x), y]_N"),
        ),
    )


# ============================================================================
# BURGERS TYPE
# ============================================================================


def burgers_prelie(n: int, a: Sequence[object], G: np.ndarray) -> Algebra:
    a = rational_array(a)
    G = require_square(G, n, "metric")
    if a.shape != (n,):
        raise InputError(f"vector a must have length {n}")
    if not is_symmetric(G) or not is_invertible(G):
        raise InputError("metric must be symmetric and nondegenerate")
    constants = np.multiply.outer(G, a) + np.multiply.outer(G @ a, identity(n))
    return _ensure_pre_lie(Algebra.from_constants(rational_array(constants), AlgebraKind.PRE_LIE), "Burgers")


def burgers_nijenhuis_criterion(a: Sequence[object], G: np.ndarray, N: np.ndarray) -> Verdict:
    """⟨N(x), N(y)⟩a = −⟨x, y⟩N²(a)."""
    a, G, N = rational_array(a), rational_array(G), rational_array(N)
    return compare(
        "burgers-criterion",
        np.multiply.outer(N.T @ G @ N, a),
        -np.multiply.outer(G, N @ N @ a),
        reason="⟨Nx, Ny⟩a != −⟨x, y⟩N²(a)",
    )


def burgers_report(n: int, a: Sequence[object], G: np.ndarray, N: np.ndarray) -> Report:
    """
    N is Nijenhuis on the sub-adjacent Lie algebra for every N. For N skew with
    respect to G, N is Nijenhuis on the product iff the criterion holds, and the
    deformed product equals −x·y computed with N(a) in place of a.
    """
    A = burgers_prelie(n, a, G)
    a, G, N = rational_array(a), rational_array(G), require_square(N, n)
    lie = _renamed("lie-nijenhuis", is_nijenhuis(sub_adjacent(A), N))
    if not compare("g-skew", N.T @ G, -(G @ N)):
        return Report(check="burgers-nijenhuis", parts=(lie,))
    nijenhuis = is_nijenhuis(A, N)
    criterion = burgers_nijenhuis_criterion(a, G, N)
    if nijenhuis.holds != criterion.holds:
        raise ConsistencyError("Burgers Nijenhuis criterion disagrees with the torsion")
    deformed = compare(
        "deformed-product",
        deformed_algebra(A, N).constants,
        -burgers_prelie(n, N @ a, G).constants,
        reason="x·_N y != −x·y with N(a)",
    )
    return Report(
        check="burgers-nijenhuis",
        parts=(lie, _renamed("nijenhuis", nijenhuis), criterion, deformed),
    )


# ============================================================================
# ROTA-BAXTER ON ASSOCIATIVE ALGEBRAS
# ============================================================================


def _rb_assoc_constants(c: np.ndarray, R: np.ndarray) -> np.ndarray:
    return pullback(c, [R, None]) - swap_first_two(pullback(c, [None, R])) - c


def prelie_from_rb_assoc(assoc: Algebra, R: np.ndarray) -> Algebra:
    """Needs R(x)∗R(y) + R(x∗y) = R(R(x)∗y + x∗R(y)), the weight −1 identity."""
    R = require_square(R, assoc.dim)
    require(check_associative(assoc), "construction needs an associative algebra", assoc.basis)
    require(is_rota_baxter(assoc, R, -1), "R fails R(x)∗R(y) + R(x∗y) = R(R(x)∗y + x∗R(y))", assoc.basis)
    constants = _rb_assoc_constants(assoc.constants, R)
    return _ensure_pre_lie(Algebra.from_constants(constants, AlgebraKind.PRE_LIE, assoc.basis), "Rota-Baxter")


def rb_assoc_nijenhuis_report(assoc: Algebra, R: np.ndarray, N: np.ndarray) -> Report:
    """For N Nijenhuis on the associative algebra commuting with R."""
    assoc = assoc.with_kind(AlgebraKind.ASSOCIATIVE)
    N = _require_nijenhuis(assoc, N)
    R = require_square(R, assoc.dim)
    _require_commuting(R, N, "R")
    A = prelie_from_rb_assoc(assoc, R)
    deformed_assoc = deformed_algebra(assoc, N).with_kind(AlgebraKind.ASSOCIATIVE)
    rota_baxter = is_rota_baxter(deformed_assoc, R, -1)
    return Report(
        check="rb-assoc-nijenhuis",
        parts=(
            _renamed("rota-baxter-deformed", rota_baxter),
            _renamed("nijenhuis-on-product", is_nijenhuis(A, N)),
            compare(
                "deformed-product",
                deformed_algebra(A, N).constants,
                _rb_assoc_constants(deformed_assoc.constants, R),
                reason="deformed product differs from the construction on ∗_N",
            ),
        ),
    )


# ============================================================================
# DERIVATIONS AND NOVIKOV ALGEBRAS
# ============================================================================


def is_derivation(A: Algebra, D: np.ndarray) -> Verdict:
    """D(x∗y) = D(x)∗y + x∗D(y)."""
    D = require_square(D, A.dim)
    c = A.constants
    return compare(
        "derivation",
        pushforward(c, D),
        pullback(c, [D, None]) + pullback(c, [None, D]),
        reason="D(x∗y) != D(x)∗y + x∗D(y)",
    )


def _left_by(A: Algebra, alpha: Sequence[object]) -> np.ndarray:
    """Matrix of y ↦ α∗y."""
    alpha = rational_array(alpha)
    if alpha.shape != (A.dim,):
        raise InputError(f"element α must have length {A.dim}")
    return rational_array(np.tensordot(alpha, left_multiplications(A), axes=([0], [0])))


def _novikov_constants(
    c: np.ndarray, D: np.ndarray, s: object, left_alpha: Optional[np.ndarray]
) -> np.ndarray:
    constants = pullback(c, [None, D]) + to_rational(s) * c
    if left_alpha is not None:
        constants = constants + pushforward(c, left_alpha)
    return rational_array(constants)


def novikov_from_derivation(
    comm: Algebra, D: np.ndarray, s: object = 0, alpha: Optional[Sequence[object]] = None
) -> Algebra:
    """x·y = x∗D(y) + s x∗y, plus α∗x∗y when α is given. The result is Novikov."""
    D = require_square(D, comm.dim)
    require(check_commutative(comm), "construction needs a commutative algebra", comm.basis)
    require(check_associative(comm), "construction needs an associative algebra", comm.basis)
    require(is_derivation(comm, D), "D is not a derivation", comm.basis)
    left_alpha = None if alpha is None else _left_by(comm, alpha)
    A = Algebra.from_constants(_novikov_constants(comm.constants, D, s, left_alpha), AlgebraKind.PRE_LIE, comm.basis)
    if not check_novikov(A):
        raise ConsistencyError("product built from a derivation is not Novikov")
    return A


def alpha_hypothesis(comm: Algebra, alpha: Sequence[object], N: np.ndarray) -> Verdict:
    """N(α∗x∗y) = α∗N(x∗y)."""
    left_alpha = _left_by(comm, alpha)
    N = require_square(N, comm.dim)
    c = comm.constants
    return compare(
        "alpha-hypothesis",
        pushforward(c, N @ left_alpha),
        pushforward(c, left_alpha @ N),
        reason="N(α∗x∗y) != α∗N(x∗y)",
    )


def derivation_nijenhuis_report(
    comm: Algebra, D: np.ndarray, s: object, N: np.ndarray, alpha: Optional[Sequence[object]] = None
) -> Report:
    """
    For N Nijenhuis on the commutative algebra commuting with D. With α given
    the hypothesis N(α∗x∗y) = α∗N(x∗y) is reported as its own part, and the
    deformed product is compared against x∗_N D(y) + s x∗_N y + α∗(x∗_N y).
    """
    comm = comm.with_kind(AlgebraKind.ASSOCIATIVE)
    N = _require_nijenhuis(comm, N)
    D = require_square(D, comm.dim)
    _require_commuting(D, N, "D")
    A = novikov_from_derivation(comm, D, s, alpha)
    deformed_comm = deformed_algebra(comm, N).with_kind(AlgebraKind.ASSOCIATIVE)
    left_alpha = None if alpha is None else _left_by(comm, alpha)
    parts = []
    if alpha is not None:
        parts.append(alpha_hypothesis(comm, alpha, N))
    parts.extend(
        (
            _renamed("derivation-deformed", is_derivation(deformed_comm, D)),
            _renamed("nijenhuis-on-product", is_nijenhuis(A, N)),
            compare(
                "deformed-product",
                deformed_algebra(A, N).constants,
                _novikov_constants(deformed_comm.constants, D, s, left_alpha),
                reason="deformed product differs from the construction on ∗_N",
            ),
        )
    )
    return Report(check="derivation-nijenhuis", parts=tuple(parts))
