"""Exhaustive search for operators with entries from a finite grid of rationals."""
from __future__ import annotations

import itertools
import logging
import re
from enum import Enum
from fractions import Fraction
from multiprocessing.pool import ThreadPool
from typing import Callable, Iterable, Iterator, List, Sequence, Tuple

import numpy as np

from src.algebra.prelie import Algebra
from src.algebra.scalars import rational_array, to_rational, zeros
from src.errors import InputError, ResourceLimitError

from .nijenhuis import first_torsion_violation
from .operators import is_rota_baxter
from .smatrix_hessian import is_s_matrix

logger = logging.getLogger(__name__)

# ============================================================================
# TUNING CONSTANTS
# ============================================================================
DEFAULT_GRID: Tuple[Fraction, ...] = tuple(Fraction(k) for k in range(-2, 3))
MAX_GRID_CANDIDATES = 2_000_000
CHUNK_SIZE = 2048

_GRID_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*\.\.\s*([+-]?\d+)\s*$")


class SearchTarget(str, Enum):
    NIJENHUIS = "nijenhuis"
    ROTA_BAXTER = "rota-baxter"
    S_MATRIX = "s-matrix"


def parse_grid(text: str, denominators: Sequence[int] = (1,)) -> Tuple[Fraction, ...]:
    """Grid text lo..hi with denominators q gives every p/q in [lo, hi], sorted and deduplicated."""
    match = _GRID_PATTERN.match(text)
    if not match:
        raise InputError(f"grid '{text}' must look like lo..hi")
    lo, hi = int(match.group(1)), int(match.group(2))
    if lo > hi:
        raise InputError(f"grid '{text}' is empty")
    if not denominators or any(int(q) <= 0 for q in denominators):
        raise InputError("denominators must be positive integers")
    values = {Fraction(p, int(q)) for q in denominators for p in range(lo * int(q), hi * int(q) + 1)}
    return tuple(sorted(values))


def _positions(dim: int, symmetric: bool) -> List[Tuple[int, int]]:
    if symmetric:
        return [(i, j) for i in range(dim) for j in range(i, dim)]
    return [(i, j) for i in range(dim) for j in range(dim)]


def candidate_count(dim: int, values: Sequence[object], target: SearchTarget) -> int:
    return len(values) ** len(_positions(dim, SearchTarget(target) is SearchTarget.S_MATRIX))


def _build(dim: int, positions: Sequence[Tuple[int, int]], entries: Sequence[Fraction], symmetric: bool) -> np.ndarray:
    matrix = zeros((dim, dim))
    for (i, j), value in zip(positions, entries):
        matrix[i, j] = value
        if symmetric:
            matrix[j, i] = value
    return matrix


def _acceptor(A: Algebra, target: SearchTarget, weight: Fraction) -> Callable[[np.ndarray], bool]:
    if target is SearchTarget.NIJENHUIS:
        return lambda N: first_torsion_violation(A, N) is None
    if target is SearchTarget.ROTA_BAXTER:
        return lambda R: is_rota_baxter(A, R, weight).holds
    return lambda r: is_s_matrix(A, r).holds


def _chunks(iterable: Iterable[Tuple[Fraction, ...]]) -> Iterator[List[Tuple[Fraction, ...]]]:
    iterator = iter(iterable)
    while True:
        chunk = list(itertools.islice(iterator, CHUNK_SIZE))
        if not chunk:
            return
        yield chunk


def search_operators(
    A: Algebra,
    target: SearchTarget,
    values: Sequence[object] = DEFAULT_GRID,
    weight: object = 0,
    workers: int = 1,
) -> List[np.ndarray]:
    """
    Every matrix with entries from ``values`` passing the target check, sorted
    by entries in row-major order. s-matrix candidates are symmetric.
    """
    target = SearchTarget(target)
    grid = tuple(sorted({to_rational(value) for value in values}))
    if not grid:
        raise InputError("search grid is empty")
    total = candidate_count(A.dim, grid, target)
    if total > MAX_GRID_CANDIDATES:
        raise ResourceLimitError(f"grid has {total} candidates, more than {MAX_GRID_CANDIDATES}")
    symmetric = target is SearchTarget.S_MATRIX
    positions = _positions(A.dim, symmetric)
    accepts = _acceptor(A, target, to_rational(weight))
    logger.info("searching %d %s candidates on %d worker(s)", total, target.value, workers)

    def scan(chunk: List[Tuple[Fraction, ...]]) -> List[np.ndarray]:
        hits = [matrix for matrix in (_build(A.dim, positions, entries, symmetric) for entries in chunk) if accepts(matrix)]
        logger.debug("chunk of %d candidates gave %d hits", len(chunk), len(hits))
        return hits

    candidates = itertools.product(grid, repeat=len(positions))
    if workers <= 1:
        found = [scan(chunk) for chunk in _chunks(candidates)]
    else:
        with ThreadPool(workers) as pool:
            found = pool.map(scan, _chunks(candidates))
    hits = [rational_array(matrix) for batch in found for matrix in batch]
    hits.sort(key=lambda matrix: tuple(matrix.flat))
    return hits
