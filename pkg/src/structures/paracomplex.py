"""Para-complex structures, quadratic and symplectic forms, para-Kähler checks."""
from __future__ import annotations

import logging
from dataclasses import replace
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np

from src.algebra.cohomology import is_lie_two_cocycle
from src.algebra.prelie import (
    Algebra,
    AlgebraKind,
    check_lie,
    check_pre_lie,
    commutator_constants,
    require,
    sub_adjacent,
)
from src.algebra.scalars import (
    identity,
    in_span,
    inverse,
    is_invertible,
    is_skew,
    is_symmetric,
    nullspace,
    rational_array,
    require_square,
)
from src.algebra.verdict import Report, Verdict, compare, vanishes
from src.errors import ConsistencyError, InputError

from .nijenhuis import deformed_algebra, is_nijenhuis
from .smatrix_hessian import is_pseudo_hessian

logger = logging.getLogger(__name__)


class Flavor(str, Enum):
    QUADRATIC = "quadratic"
    HESSIAN = "hessian"


def eigensplitting(N: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """Bases of ker(N − Id) and ker(N + Id)."""
    N = rational_array(N)
    n = N.shape[0]
    return nullspace(N - identity(n)), nullspace(N + identity(n))


def _closed_under(A: Algebra, basis: Sequence[np.ndarray]) -> bool:
    return all(in_span(A.multiply(x, y), basis) for x in basis for y in basis)


def _require_skew(A: Algebra, omega: np.ndarray) -> np.ndarray:
    omega = require_square(omega, A.dim, "form")
    if not is_skew(omega):
        raise InputError("form must be skew-symmetric")
    return omega


def is_paracomplex(A: Algebra, N: np.ndarray) -> Verdict:
    """N Nijenhuis with N² = Id and eigenspaces of equal dimension; details carry both bases."""
    N = require_square(N, A.dim)
    square = compare("paracomplex", N @ N, identity(A.dim), reason="N² != Id")
    if not square:
        return square
    plus, minus = eigensplitting(N)
    if len(plus) != len(minus):
        return Verdict.failed("paracomplex", f"eigenspaces have dimensions {len(plus)} and {len(minus)}")
    nijenhuis = is_nijenhuis(A, N)
    if not nijenhuis:
        return Verdict.failed("paracomplex", nijenhuis.reason, nijenhuis.witness)
    for name, basis in (("+1", plus), ("-1", minus)):
        if not _closed_under(A, basis):
            raise ConsistencyError(f"the {name} eigenspace of a para-complex structure is not a subalgebra")
    return Verdict.passed("paracomplex", plus=tuple(plus), minus=tuple(minus))


def _invariance_residual(A: Algebra, omega: np.ndarray) -> np.ndarray:
    """ω(x·y, z) + ω(y, [x, z]) on [x, y, z]."""
    first = np.tensordot(A.constants, omega, axes=([2], [0]))
    second = np.tensordot(commutator_constants(A.constants), omega, axes=([2], [1])).transpose(0, 2, 1)
    return rational_array(first + second)


def is_quadratic(A: Algebra, omega: np.ndarray) -> Verdict:
    omega = _require_skew(A, omega)
    if not is_invertible(omega):
        return Verdict.failed("quadratic", "form is degenerate")
    return vanishes("quadratic", _invariance_residual(A, omega), value_axes=0, reason="ω(x·y, z) + ω(y, [x, z]) != 0")


def is_symplectic(L: Algebra, omega: np.ndarray) -> Verdict:
    """Nondegenerate skew 2-cocycle on a Lie algebra."""
    omega = _require_skew(L, omega)
    if not is_invertible(omega):
        return Verdict.failed("symplectic", "form is degenerate")
    cocycle = is_lie_two_cocycle(L, omega)
    return replace(cocycle, check="symplectic")


def prelie_from_symplectic(L: Algebra, omega: np.ndarray) -> Algebra:
    """The product solving ω(x·y, z) = −ω(y, [x, z])."""
    omega = _require_skew(L, omega)
    require(check_lie(L), "symplectic construction needs a Lie algebra", L.basis)
    require(is_symplectic(L, omega), "form is not symplectic", L.basis)
    rhs = -np.tensordot(L.constants, omega, axes=([2], [1])).transpose(0, 2, 1)
    constants = np.tensordot(rhs, inverse(omega.T, "form"), axes=([2], [1]))
    A = Algebra.from_constants(rational_array(constants), AlgebraKind.PRE_LIE, L.basis)
    if not check_pre_lie(A):
        raise ConsistencyError("product of a symplectic Lie algebra is not pre-Lie")
    if sub_adjacent(A) != L:
        raise ConsistencyError("product of a symplectic Lie algebra does not recover the bracket")
    if not is_quadratic(A, omega):
        raise ConsistencyError("product of a symplectic Lie algebra is not quadratic")
    return A


def _anti_compatible(check: str, form: np.ndarray, N: np.ndarray) -> Verdict:
    """F(Nx, y) = −F(x, Ny)."""
    return compare(check, N.T @ form, -(form @ N), value_axes=0, reason="F(Nx, y) != −F(x, Ny)")


def _para_kahler_conditions(L: Algebra, omega: np.ndarray, N: np.ndarray) -> Report:
    N = require_square(N, L.dim)
    return Report(
        check="para-kahler",
        parts=(is_symplectic(L, omega), is_paracomplex(L, N), _anti_compatible("anti-compatible", omega, N)),
    )


def para_kahler_consequences(L: Algebra, omega: np.ndarray, N: np.ndarray) -> Report:
    """
    For a para-Kähler (L, ω, N) with associated pre-Lie algebra A:
    (A, ω, N) is para-complex quadratic; ([·,·]_N, ω, N) is again para-Kähler;
    the pre-Lie algebra of ([·,·]_N, ω) is A deformed by N.
    """
    omega = _require_skew(L, omega)
    N = require_square(N, L.dim)
    A = prelie_from_symplectic(L, omega)
    quadratic = is_paracomplex_quadratic(A, omega, N).as_verdict()
    deformed_lie = deformed_algebra(L, N).with_kind(AlgebraKind.LIE)
    lie_check = check_lie(deformed_lie)
    if lie_check:
        kahler = _para_kahler_conditions(deformed_lie, omega, N).as_verdict()
    else:
        kahler = lie_check
    if kahler:
        recovered = prelie_from_symplectic(deformed_lie, omega)
        same = compare("deformed-prelie", recovered.constants, deformed_algebra(A, N).constants)
    else:
        same = Verdict.failed("deformed-prelie", "deformed bracket is not para-Kähler")
    return Report(
        check="para-kahler-consequences",
        parts=(
            replace(quadratic, check="quadratic-paracomplex"),
            replace(kahler, check="deformed-para-kahler"),
            replace(same, check="deformed-prelie"),
        ),
    )


def is_para_kahler(L: Algebra, omega: np.ndarray, N: np.ndarray) -> Report:
    require(check_lie(L), "para-Kähler check needs a Lie algebra", L.basis)
    omega = _require_skew(L, omega)
    report = _para_kahler_conditions(L, omega, N)
    if report:
        consequences = para_kahler_consequences(L, omega, N)
        if not consequences:
            raise ConsistencyError(f"para-Kähler consequence fails: {consequences.as_verdict().reason}")
    return report


def is_paracomplex_quadratic(A: Algebra, omega: np.ndarray, N: np.ndarray) -> Report:
    omega = _require_skew(A, omega)
    N = require_square(N, A.dim)
    require(is_quadratic(A, omega), "form is not quadratic", A.basis)
    return Report(
        check="paracomplex-quadratic",
        parts=(is_paracomplex(A, N), _anti_compatible("anti-compatible", omega, N)),
    )


def is_paracomplex_pseudo_hessian(A: Algebra, B: np.ndarray, N: np.ndarray) -> Report:
    """
    (B, N) with B pseudo-Hessian, N para-complex and B(Nx, y) = −B(x, Ny).
    The derived ω(x, y) = B(x, Ny) is then skew with ω(Nx, Ny) = −ω(x, y).
    """
    B = require_square(B, A.dim, "form")
    N = require_square(N, A.dim)
    if not is_symmetric(B):
        raise InputError("form must be symmetric")
    report = Report(
        check="paracomplex-pseudo-hessian",
        parts=(is_pseudo_hessian(A, B), is_paracomplex(A, N), _anti_compatible("anti-compatible", B, N)),
    )
    if report:
        omega = rational_array(B @ N)
        if not is_skew(omega) or not compare("compatible", N.T @ omega @ N, -omega, value_axes=0):
            raise ConsistencyError("derived form of a para-complex pseudo-Hessian structure is not compatible")
    return report


def paracomplex_from_splitting(
    A: Algebra,
    plus: Sequence[Sequence[object]],
    minus: Sequence[Sequence[object]],
    form: np.ndarray,
    flavor: Flavor = Flavor.QUADRATIC,
) -> Tuple[np.ndarray, Report]:
    """N = +1 on span(plus) and −1 on span(minus), checked against the flavor's structure."""
    flavor = Flavor(flavor)
    plus_basis = [rational_array(v) for v in plus]
    minus_basis = [rational_array(v) for v in minus]
    form = require_square(form, A.dim, "form")
    if len(plus_basis) != len(minus_basis) or len(plus_basis) * 2 != A.dim:
        raise InputError("splitting needs two subspaces of half the dimension")
    change = rational_array(np.stack(plus_basis + minus_basis, axis=1))
    if not is_invertible(change):
        raise InputError("subspaces are not complementary")
    for name, basis in (("first", plus_basis), ("second", minus_basis)):
        if not _closed_under(A, basis):
            raise InputError(f"{name} subspace is not a subalgebra")
        if any(x @ form @ y != 0 for x in basis for y in basis):
            raise InputError(f"{name} subspace is not isotropic")
    half = len(plus_basis)
    signs = np.diag(np.array([1] * half + [-1] * half, dtype=object))
    N = rational_array(change @ rational_array(signs) @ inverse(change))
    if flavor is Flavor.QUADRATIC:
        report = is_paracomplex_quadratic(A, form, N)
    else:
        report = is_paracomplex_pseudo_hessian(A, form, N)
    return N, report
