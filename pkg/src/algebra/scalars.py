"""
Exact scalars and the bridge to sympy's rational linear algebra.

Every array in the package is a numpy ``object`` array whose entries are
``fractions.Fraction``. Rank, inverses, kernels and solves are delegated to
``sympy.Matrix`` over ``Rational`` so that no floating point value is ever
produced.
"""
from __future__ import annotations

import numbers
import re
from fractions import Fraction
from typing import List, Sequence, Union

import numpy as np
import sympy

from src.errors import InputError, InvertibilityError

ScalarLike = Union[Fraction, int, str]

_RATIONAL_PATTERN = re.compile(r"^\s*[+-]?\d+\s*(/\s*\d+\s*)?$")


def to_rational(value: object) -> Fraction:
    """Convert ``value`` to a Fraction, refusing anything inexact."""
    if isinstance(value, bool):
        raise InputError(f"{value!r} is not a rational number")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    if isinstance(value, numbers.Integral):
        return Fraction(int(value))
    if isinstance(value, str):
        if not _RATIONAL_PATTERN.match(value):
            raise InputError(f"'{value}' is not a rational of the form p/q")
        try:
            return Fraction(value.replace(" ", ""))
        except ZeroDivisionError as exc:
            raise InputError(f"'{value}' has a zero denominator") from exc
    raise InputError(f"{value!r} is not an exact rational")


_to_rational_elementwise = np.frompyfunc(to_rational, 1, 1)


def rational_array(data: object) -> np.ndarray:
    """Return ``data`` as an object array of Fractions (always a fresh copy)."""
    array = np.asarray(data, dtype=object)
    if array.ndim == 0:
        return np.array(to_rational(array.item()), dtype=object)
    return np.asarray(_to_rational_elementwise(array), dtype=object)


def zeros(shape: Sequence[int]) -> np.ndarray:
    return np.full(tuple(shape), Fraction(0), dtype=object)


def identity(n: int) -> np.ndarray:
    result = zeros((n, n))
    for index in range(n):
        result[index, index] = Fraction(1)
    return result


def basis_vector(n: int, index: int) -> np.ndarray:
    result = zeros((n,))
    result[index] = Fraction(1)
    return result


def is_zero(array: np.ndarray) -> bool:
    return bool(np.all(np.asarray(array, dtype=object) == 0))


def arrays_equal(left: np.ndarray, right: np.ndarray) -> bool:
    if np.shape(left) != np.shape(right):
        return False
    return bool(np.all(np.asarray(left, dtype=object) == np.asarray(right, dtype=object)))


def is_symmetric(matrix: np.ndarray) -> bool:
    return arrays_equal(matrix, matrix.T)


def is_skew(matrix: np.ndarray) -> bool:
    return arrays_equal(matrix, -matrix.T)


def require_square(matrix: np.ndarray, n: int, name: str = "operator") -> np.ndarray:
    array = rational_array(matrix)
    if array.shape != (n, n):
        raise InputError(f"{name} must be {n}x{n}, got shape {array.shape}")
    return array


# ============================================================================
# SYMPY BRIDGE
# ============================================================================


def to_sympy(matrix: np.ndarray) -> sympy.Matrix:
    array = rational_array(matrix)
    if array.ndim == 1:
        array = array.reshape(-1, 1)
    rows, cols = array.shape
    return sympy.Matrix(rows, cols, [sympy.Rational(x.numerator, x.denominator) for x in array.flat])


def from_sympy(matrix: sympy.Matrix) -> np.ndarray:
    rows, cols = matrix.shape
    return rational_array([[matrix[i, j] for j in range(cols)] for i in range(rows)])


def rank(matrix: np.ndarray) -> int:
    array = rational_array(matrix)
    if array.size == 0:
        return 0
    return int(to_sympy(array).rank())


def is_invertible(matrix: np.ndarray) -> bool:
    array = rational_array(matrix)
    return array.ndim == 2 and array.shape[0] == array.shape[1] and rank(array) == array.shape[0]


def inverse(matrix: np.ndarray, name: str = "matrix") -> np.ndarray:
    if not is_invertible(matrix):
        raise InvertibilityError(f"{name} is singular and cannot be inverted")
    return from_sympy(to_sympy(matrix).inv())


def matrix_power(matrix: np.ndarray, exponent: int, name: str = "operator") -> np.ndarray:
    """Integer power; negative exponents go through the exact inverse."""
    base = rational_array(matrix)
    if exponent < 0:
        base = inverse(base, name)
        exponent = -exponent
    return rational_array(np.linalg.matrix_power(base, exponent))


def nullspace(matrix: np.ndarray) -> List[np.ndarray]:
    """Basis of the kernel, one vector per entry (reduced echelon order)."""
    return [from_sympy(vector).reshape(-1) for vector in to_sympy(matrix).nullspace()]


def solve(matrix: np.ndarray, rhs: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Unique solution of ``matrix @ x = rhs`` for an invertible square matrix."""
    rhs_array = rational_array(rhs)
    solution = from_sympy(to_sympy(matrix).LUsolve(to_sympy(rhs_array))) if is_invertible(matrix) else None
    if solution is None:
        raise InvertibilityError(f"{name} is singular; the system has no unique solution")
    return solution.reshape(rhs_array.shape)


def span_rank(vectors: Sequence[np.ndarray]) -> int:
    if not vectors:
        return 0
    return rank(np.stack([rational_array(v) for v in vectors], axis=1))


def in_span(vector: np.ndarray, spanning: Sequence[np.ndarray]) -> bool:
    return span_rank(list(spanning) + [vector]) == span_rank(spanning)


def format_rational(value: object) -> str:
    """Canonical text form: ``p/q`` in lowest terms, ``p`` when ``q == 1``."""
    return str(to_rational(value))
