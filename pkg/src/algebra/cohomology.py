"""
Coboundary operators of pre-Lie algebras with coefficients in a representation.

A cochain of stored degree ``p`` takes ``p + 1`` arguments, is skew in the
first ``p`` and has values in V (its output axis has length ``dim V``).
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import List

import numpy as np

from src.errors import ConsistencyError, InputError

from .prelie import (
    Algebra,
    Representation,
    check_lie,
    check_pre_lie,
    check_representation,
    commutator_constants,
    regular_representation,
    require,
)
from .scalars import arrays_equal, rank, rational_array, zeros
from .tensor_core import Cochain, MultiMap, _check_budget, alternator, c_bracket, gerstenhaber_bracket
from .verdict import Verdict, vanishes

logger = logging.getLogger(__name__)


def _axis_order(target_positions: List[int]) -> List[int]:
    """Transpose order placing source axis ``s`` at output position ``target_positions[s]``."""
    order = [0] * len(target_positions)
    for source, target in enumerate(target_positions):
        order[target] = source
    return order


def _coboundary_terms(constants: np.ndarray, rho: np.ndarray, mu: np.ndarray, phi: np.ndarray) -> np.ndarray:
    p = phi.ndim - 2
    n_args = p + 1  # arguments of phi; the result takes n_args + 1
    out_inputs = n_args + 1
    total = zeros((constants.shape[0],) * out_inputs + (phi.shape[-1],))
    bracket = commutator_constants(constants)

    for i in range(1, n_args + 1):
        sign = (-1) ** (i + 1)

        # ρ(x_i) φ(x_1, …, x̂_i, …, x_{n+1}); axes: x_i, value, φ inputs
        acted = np.tensordot(rho, phi, axes=([2], [p + 1]))
        targets = [i - 1, out_inputs] + [k if k < i - 1 else k + 1 for k in range(n_args)]
        total = total + sign * acted.transpose(_axis_order(targets))

        # μ(x_{n+1}) φ(x_1, …, x̂_i, …, x_n, x_i); axes: x_{n+1}, value, φ inputs
        acted = np.tensordot(mu, phi, axes=([2], [p + 1]))
        skewed = [k if k < i - 1 else k + 1 for k in range(p)] + [i - 1]
        targets = [n_args, out_inputs] + skewed
        total = total + sign * acted.transpose(_axis_order(targets))

        # −φ(x_1, …, x̂_i, …, x_n, x_i·x_{n+1}); axes: x_i, x_{n+1}, φ skew inputs, value
        acted = np.tensordot(constants, phi, axes=([2], [p]))
        targets = [i - 1, n_args] + [k if k < i - 1 else k + 1 for k in range(p)] + [out_inputs]
        total = total - sign * acted.transpose(_axis_order(targets))

    for i, j in itertools.combinations(range(1, n_args + 1), 2):
        # φ([x_i, x_j]^c, x_1, …, x̂_i, …, x̂_j, …, x_{n+1}); axes: x_i, x_j, rest, value
        acted = np.tensordot(bracket, phi, axes=([2], [0]))
        rest = [k for k in range(out_inputs) if k not in (i - 1, j - 1)]
        targets = [i - 1, j - 1] + rest + [out_inputs]
        total = total + ((-1) ** (i + j)) * acted.transpose(_axis_order(targets))
    return rational_array(total)


def _require_cochain(A: Algebra, rep: Representation, phi: MultiMap) -> Cochain:
    if phi.dim != A.dim or phi.codim != rep.dim_v:
        raise InputError(
            f"cochain maps dimension {phi.dim} into {phi.codim}; expected {A.dim} into {rep.dim_v}"
        )
    if not phi.is_skew():
        raise InputError(f"cochain is not skew in its first {phi.degree} arguments")
    return phi if isinstance(phi, Cochain) else Cochain(phi.coeffs)


def coboundary(A: Algebra, rep: Representation, phi: MultiMap) -> Cochain:
    """
    d φ(x_1..x_{n+1}) = Σ (−1)^{i+1} ρ(x_i) φ(.., x̂_i, ..)
                      + Σ (−1)^{i+1} μ(x_{n+1}) φ(.., x̂_i, .., x_n, x_i)
                      − Σ (−1)^{i+1} φ(.., x̂_i, .., x_n, x_i·x_{n+1})
                      + Σ_{i<j} (−1)^{i+j} φ([x_i, x_j]^c, .., x̂_i, .., x̂_j, ..)
    with n = p + 1 the number of arguments of φ.
    """
    phi = _require_cochain(A, rep, phi)
    _check_budget(A.dim, phi.degree + 1)
    require(check_representation(A, rep), "coboundary needs a valid representation")
    result = Cochain(_coboundary_terms(A.constants, rep.rho, rep.mu, phi.coeffs))
    regular = regular_representation(A)
    if arrays_equal(rep.rho, regular.rho) and arrays_equal(rep.mu, regular.mu):
        bracket = c_bracket(A.product, phi).scaled((-1) ** phi.degree)
        if bracket != result:
            logger.warning("regular coboundary disagrees with the bracket formula at degree %d", phi.degree)
            raise ConsistencyError("coboundary and (-1)^p [pi, phi]^C disagree")
    return result


def regular_coboundary(A: Algebra, phi: MultiMap) -> Cochain:
    """δ = d for the regular representation."""
    return coboundary(A, regular_representation(A), phi)


def is_cocycle(A: Algebra, rep: Representation, phi: MultiMap) -> Verdict:
    return vanishes("cocycle", coboundary(A, rep, phi).coeffs, reason="coboundary is nonzero")


def form_coboundary(A: Algebra, form: np.ndarray) -> np.ndarray:
    """d^T of a scalar bilinear form, as a tensor [x, y, z]."""
    matrix = rational_array(form)
    if matrix.shape != (A.dim, A.dim):
        raise InputError(f"form must be {A.dim}x{A.dim}, got {matrix.shape}")
    cochain = Cochain(matrix.reshape(A.dim, A.dim, 1))
    return coboundary(A, Representation.trivial(A), cochain).coeffs[..., 0]


def is_closed_form(A: Algebra, form: np.ndarray) -> Verdict:
    return vanishes("closed-form", form_coboundary(A, form), value_axes=0, reason="d^T B is nonzero")


def is_lie_two_cocycle(L: Algebra, omega: np.ndarray) -> Verdict:
    """ω([x,y],z) + ω([z,x],y) + ω([y,z],x) = 0 on a Lie algebra."""
    require(check_lie(L), "Lie 2-cocycle check needs a Lie algebra", L.basis)
    matrix = rational_array(omega)
    first = np.tensordot(L.constants, matrix, axes=([2], [0]))  # ω([x,y],z)
    cyclic = first + first.transpose(1, 2, 0) + first.transpose(2, 0, 1)
    return vanishes("lie-2-cocycle", rational_array(cyclic), value_axes=0, reason="cyclic sum is nonzero")


# ============================================================================
# HOCHSCHILD
# ============================================================================


def hochschild_coboundary(A: Algebra, P: MultiMap) -> MultiMap:
    """Explicit Hochschild sum for P with q+1 arguments on an associative algebra."""
    if P.dim != A.dim or P.codim != A.dim:
        raise InputError("Hochschild cochains act on the algebra itself")
    _check_budget(A.dim, P.degree + 1)
    c = A.constants
    args = P.arity
    out_inputs = args + 1

    # x_1 ∗ P(x_2, …): axes after tensordot: x_1, value(c), P inputs
    head = np.tensordot(c, P.coeffs, axes=([1], [args]))
    total = head.transpose([0] + list(range(2, 2 + args)) + [1])

    for i in range(1, args + 1):
        # P(.., x_i ∗ x_{i+1}, ..): axes x_i, x_{i+1}, P inputs without slot i-1, value
        merged = np.tensordot(c, P.coeffs, axes=([2], [i - 1]))
        targets = [i - 1, i] + [k if k < i - 1 else k + 2 for k in range(args - 1)] + [out_inputs]
        total = total + ((-1) ** i) * merged.transpose(_axis_order(targets))

    # P(x_1, …, x_{q+1}) ∗ x_{q+2}
    tail = np.tensordot(P.coeffs, c, axes=([args], [0]))
    total = total + ((-1) ** (args + 1)) * tail
    return MultiMap(rational_array(total))


def hochschild_via_bracket(A: Algebra, P: MultiMap) -> MultiMap:
    """d^H P = (−1)^q [π, P]^G."""
    return gerstenhaber_bracket(A.product, P).scaled((-1) ** P.degree)


# ============================================================================
# DIMENSIONS
# ============================================================================


@dataclass(frozen=True)
class CochainDimensions:
    degree: int
    cochains: int
    cocycles: int
    coboundaries: int

    @property
    def cohomology(self) -> int:
        return self.cocycles - self.coboundaries


def _elementary_cochains(dim: int, degree: int, codim: int) -> List[np.ndarray]:
    shape = (dim,) * (degree + 1) + (codim,)
    elements = []
    for position in np.ndindex(*shape):
        tensor = zeros(shape)
        tensor[position] = 1
        elements.append(alternator(MultiMap(tensor)).coeffs)
    return elements


def _image_rank(images: List[np.ndarray]) -> int:
    if not images:
        return 0
    return rank(np.stack([image.reshape(-1) for image in images], axis=1))


def cochain_dimensions(A: Algebra, rep: Representation, degree: int) -> CochainDimensions:
    """Exact dimensions of C^p, Z^p and B^p (B^0 = 0) for the given representation."""
    if degree < 0:
        raise InputError("cochain degree must be non-negative")
    _check_budget(A.dim, degree + 1)
    require(check_pre_lie(A), "cochain dimensions need a pre-Lie algebra", A.basis)
    spanning = _elementary_cochains(A.dim, degree, rep.dim_v)
    cochains = _image_rank(spanning)
    cocycle_defect = _image_rank([coboundary(A, rep, Cochain(tensor)).coeffs for tensor in spanning])
    boundaries = 0
    if degree > 0:
        lower = _elementary_cochains(A.dim, degree - 1, rep.dim_v)
        boundaries = _image_rank([coboundary(A, rep, Cochain(tensor)).coeffs for tensor in lower])
    logger.debug("dimensions at degree %d: C=%d, rank d=%d, B=%d", degree, cochains, cocycle_defect, boundaries)
    return CochainDimensions(
        degree=degree, cochains=cochains, cocycles=cochains - cocycle_defect, coboundaries=boundaries
    )
