"""
Dense multilinear maps over the rationals and the graded brackets on them.

A map of degree ``p`` takes ``p + 1`` arguments. Its coefficient tensor has
``p + 1`` input axes of length ``dim`` followed by one output axis of length
``codim``; entry ``[i1, ..., i_{p+1}, k]`` is the coefficient of ``e_k`` in
``P(e_{i1}, ..., e_{i_{p+1}})``.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import List, Optional, Sequence

import numpy as np
from sympy.combinatorics import Permutation

from src.errors import InputError, ResourceLimitError

from .scalars import arrays_equal, is_zero, rational_array, to_rational, zeros

logger = logging.getLogger(__name__)

# ============================================================================
# GUARDRAILS
# ============================================================================
# Cost of a bracket grows like dim ** (p + q + 2).
MAX_TOTAL_DEGREE = 4
MAX_DIM = 10


@dataclass(frozen=True, eq=False)
class MultiMap:
    """A (p+1)-ary multilinear map stored as a dense rational tensor."""

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        array = rational_array(self.coeffs)
        if array.ndim < 2:
            raise InputError("a multilinear map needs at least one input axis and an output axis")
        inputs = array.shape[:-1]
        if len(set(inputs)) != 1:
            raise InputError(f"input axes must share one length, got shape {array.shape}")
        array.setflags(write=False)
        object.__setattr__(self, "coeffs", array)

    @property
    def degree(self) -> int:
        return self.coeffs.ndim - 2

    @property
    def arity(self) -> int:
        return self.coeffs.ndim - 1

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def codim(self) -> int:
        return self.coeffs.shape[-1]

    def evaluate(self, *vectors: Sequence[object]) -> np.ndarray:
        if len(vectors) != self.arity:
            raise InputError(f"expected {self.arity} arguments, got {len(vectors)}")
        result = self.coeffs
        for vector in vectors:
            result = np.tensordot(rational_array(vector), result, axes=([0], [0]))
        return rational_array(result)

    def is_zero(self) -> bool:
        return is_zero(self.coeffs)

    def is_skew(self) -> bool:
        """Antisymmetric in the first ``degree`` slots (adjacent swaps generate S_p)."""
        return all(
            arrays_equal(self.coeffs, -np.swapaxes(self.coeffs, slot, slot + 1))
            for slot in range(self.degree - 1)
        )

    def _rebuild(self, coeffs: np.ndarray, other: Optional["MultiMap"] = None) -> "MultiMap":
        keep_skew = isinstance(self, Cochain) and (other is None or isinstance(other, Cochain))
        return Cochain(coeffs) if keep_skew else MultiMap(coeffs)

    def _check_shape(self, other: "MultiMap") -> None:
        if self.coeffs.shape != other.coeffs.shape:
            raise InputError(f"shape mismatch: {self.coeffs.shape} vs {other.coeffs.shape}")

    def __add__(self, other: "MultiMap") -> "MultiMap":
        self._check_shape(other)
        return self._rebuild(self.coeffs + other.coeffs, other)

    def __sub__(self, other: "MultiMap") -> "MultiMap":
        self._check_shape(other)
        return self._rebuild(self.coeffs - other.coeffs, other)

    def __neg__(self) -> "MultiMap":
        return self._rebuild(-self.coeffs)

    def scaled(self, factor: object) -> "MultiMap":
        return self._rebuild(self.coeffs * to_rational(factor))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiMap):
            return NotImplemented
        return arrays_equal(self.coeffs, other.coeffs)

    __hash__ = None  # type: ignore[assignment]

    @staticmethod
    def zero(dim: int, degree: int, codim: Optional[int] = None) -> "MultiMap":
        return MultiMap(zeros((dim,) * (degree + 1) + (codim or dim,)))


@dataclass(frozen=True, eq=False)
class Cochain(MultiMap):
    """A multilinear map antisymmetric in its first ``degree`` arguments."""

    def __post_init__(self) -> None:
        super().__post_init__()
        if not self.is_skew():
            raise InputError(f"coefficients are not skew in the first {self.degree} arguments")

    @staticmethod
    def zero(dim: int, degree: int, codim: Optional[int] = None) -> "Cochain":
        return Cochain(zeros((dim,) * (degree + 1) + (codim or dim,)))

    @staticmethod
    def from_operator(matrix: np.ndarray) -> "Cochain":
        """Degree-0 cochain of a column-convention operator matrix."""
        return Cochain(rational_array(matrix).T)

    def as_operator(self) -> np.ndarray:
        if self.degree != 0:
            raise InputError("only degree-0 cochains are operators")
        return rational_array(self.coeffs.T)


def as_cochain(value: MultiMap) -> Cochain:
    if isinstance(value, Cochain):
        return value
    if not value.is_skew():
        raise InputError(f"degree-{value.degree} map is not skew in its first {value.degree} arguments")
    return Cochain(value.coeffs)


# ============================================================================
# TENSOR HELPERS
# ============================================================================


def pullback(tensor: np.ndarray, maps: Sequence[Optional[np.ndarray]]) -> np.ndarray:
    """
    Precompose input slots with column-convention matrices.

    ``maps[s]`` acts on argument ``s``; ``None`` leaves the slot alone. The
    matrices may be rectangular (a map ``V -> g`` turns a slot over ``g`` into
    a slot over ``V``).
    """
    result = np.asarray(tensor, dtype=object)
    for slot, matrix in enumerate(maps):
        if matrix is None:
            continue
        contracted = np.tensordot(result, rational_array(matrix), axes=([slot], [0]))
        result = np.moveaxis(contracted, -1, slot)
    return rational_array(result)


def pushforward(tensor: np.ndarray, matrix: np.ndarray) -> np.ndarray:
    """Postcompose the output axis with a column-convention matrix."""
    return rational_array(np.tensordot(np.asarray(tensor, dtype=object), rational_array(matrix), axes=([-1], [1])))


def _check_budget(dim: int, total_degree: int) -> None:
    if total_degree > MAX_TOTAL_DEGREE or dim > MAX_DIM:
        logger.debug("guardrail rejected dim=%d total degree=%d", dim, total_degree)
        raise ResourceLimitError(
            f"degree {total_degree} on dimension {dim} exceeds the limits "
            f"(degree <= {MAX_TOTAL_DEGREE}, dimension <= {MAX_DIM})"
        )


def _check_composable(P: MultiMap, Q: MultiMap) -> None:
    if P.dim != Q.dim or P.codim != P.dim or Q.codim != Q.dim:
        raise InputError(
            f"maps must act on one space: got dim {P.dim}->{P.codim} and {Q.dim}->{Q.codim}"
        )


def _permutation_sign(order: Sequence[int]) -> int:
    return int(Permutation(list(order)).signature())


def _inverse_order(order: Sequence[int]) -> List[int]:
    inverse = [0] * len(order)
    for position, value in enumerate(order):
        inverse[value] = position
    return inverse


# ============================================================================
# BRACKETS
# ============================================================================


def compose_circle(P: MultiMap, Q: MultiMap) -> MultiMap:
    """P∘Q = Σ_i (−1)^{(i−1)q} P(x_1, …, Q(x_i, …, x_{i+q}), …, x_{p+q+1})."""
    _check_composable(P, Q)
    _check_budget(P.dim, P.degree + Q.degree)
    p, q = P.degree, Q.degree
    q_arity = q + 1
    total = zeros((P.dim,) * (p + q + 1) + (P.dim,))
    for slot in range(p + 1):
        inserted = np.tensordot(Q.coeffs, P.coeffs, axes=([q_arity], [slot]))
        # inserted axes: Q inputs, P inputs before slot, P inputs after slot, output
        order = (
            list(range(q_arity, q_arity + slot))
            + list(range(q_arity))
            + list(range(q_arity + slot, q_arity + p + 1))
        )
        total = total + ((-1) ** (slot * q)) * inserted.transpose(order)
    return MultiMap(total)


def gerstenhaber_bracket(P: MultiMap, Q: MultiMap) -> MultiMap:
    sign = (-1) ** (P.degree * Q.degree)
    return compose_circle(P, Q) - compose_circle(Q, P).scaled(sign)


def alternator(P: MultiMap) -> Cochain:
    """Skew-symmetrize the first ``p`` arguments: (1/p!) Σ sgn(σ) P(x_σ(1), …, x_σ(p), x_{p+1})."""
    p = P.degree
    if p < 2:
        return Cochain(P.coeffs)
    fixed = tuple(range(p, P.coeffs.ndim))
    total = zeros(P.coeffs.shape)
    for order in itertools.permutations(range(p)):
        total = total + _permutation_sign(order) * P.coeffs.transpose(order + fixed)
    return Cochain(total * Fraction(1, factorial(p)))


def _binomial_factor(p: int, q: int) -> Fraction:
    return Fraction(factorial(p + q), factorial(p) * factorial(q))


def diamond(P: MultiMap, Q: MultiMap) -> Cochain:
    """P⋄Q = ((p+q)!/(p!q!)) α(P∘Q)."""
    P, Q = as_cochain(P), as_cochain(Q)
    return alternator(compose_circle(P, Q)).scaled(_binomial_factor(P.degree, Q.degree))  # type: ignore[return-value]


def c_bracket(P: MultiMap, Q: MultiMap) -> Cochain:
    """[P,Q]^C = ((p+q)!/(p!q!)) α([P,Q]^G); graded Lie bracket on skew cochains."""
    P, Q = as_cochain(P), as_cochain(Q)
    return alternator(gerstenhaber_bracket(P, Q)).scaled(  # type: ignore[return-value]
        _binomial_factor(P.degree, Q.degree)
    )


def _permuted_inputs(tensor: np.ndarray, order: Sequence[int], free: int) -> np.ndarray:
    """Tensor of (x_1..x_free) ↦ T(x_order[0], …, x_order[free-1], rest)."""
    tail = tuple(range(free, tensor.ndim))
    return tensor.transpose(tuple(_inverse_order(order)) + tail)


def diamond_expanded(P: MultiMap, Q: MultiMap) -> Cochain:
    """
    P⋄Q written as unshuffle sums; only used to cross-check ``diamond``.

    The first sum places Q in the first slot of P with Q's skew arguments and
    P's remaining skew arguments each increasing. The second places Q in the
    last slot of P over (p, q)-unshuffles, with sign (−1)^{pq}.
    """
    P, Q = as_cochain(P), as_cochain(Q)
    _check_composable(P, Q)
    _check_budget(P.dim, P.degree + Q.degree)
    p, q = P.degree, Q.degree
    free = p + q
    total = zeros((P.dim,) * (free + 1) + (P.dim,))
    positions = range(free)

    if p >= 1:
        # axes: Q inputs (q+1), P skew inputs 2..p, P last input, output
        first_slot = np.tensordot(Q.coeffs, P.coeffs, axes=([q + 1], [0]))
        for pivot in positions:
            remaining = [index for index in positions if index != pivot]
            for chosen in itertools.combinations(remaining, q):
                rest = [index for index in remaining if index not in chosen]
                order = list(chosen) + [pivot] + rest
                total = total + _permutation_sign(order) * _permuted_inputs(first_slot, order, free)

    last_slot = np.tensordot(Q.coeffs, P.coeffs, axes=([q + 1], [p]))
    # reorder to: P skew inputs, Q inputs (its last one is x_{p+q+1}), output
    last_slot = last_slot.transpose(list(range(q + 1, q + 1 + p)) + list(range(q + 1)) + [q + 1 + p])
    sign = (-1) ** (p * q)
    for chosen in itertools.combinations(positions, p):
        order = list(chosen) + [index for index in positions if index not in chosen]
        total = total + sign * _permutation_sign(order) * _permuted_inputs(last_slot, order, free)
    return Cochain(total)


def structure_map(constants: np.ndarray) -> Cochain:
    """Degree-1 cochain of structure constants ``c[i, j, k]``."""
    array = rational_array(constants)
    if array.ndim != 3 or len(set(array.shape)) != 1:
        raise InputError(f"structure constants must have shape (n, n, n), got {array.shape}")
    return Cochain(array)
