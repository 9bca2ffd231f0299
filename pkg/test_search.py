from fractions import Fraction

import pytest

from src.algebra.prelie import Algebra
from src.algebra.scalars import arrays_equal, is_zero
from src.errors import InputError, ResourceLimitError
from src.structures.search import DEFAULT_GRID, SearchTarget, candidate_count, parse_grid, search_operators

UNIT_GRID = parse_grid("-1..1")


class TestGrid:
    def test_integers(self):
        assert parse_grid("-2..2") == DEFAULT_GRID

    def test_denominators(self):
        assert parse_grid("0..1", (1, 2)) == (Fraction(0), Fraction(1, 2), Fraction(1))

    def test_single_value(self):
        assert parse_grid(" 3 .. 3 ") == (Fraction(3),)

    @pytest.mark.parametrize("text", ["", "1..", "a..b", "1.5..2", "-2:2"])
    def test_malformed(self, text):
        with pytest.raises(InputError):
            parse_grid(text)

    def test_empty_range(self):
        with pytest.raises(InputError, match="empty"):
            parse_grid("2..1")

    def test_bad_denominators(self):
        with pytest.raises(InputError):
            parse_grid("0..1", (0,))
        with pytest.raises(InputError):
            parse_grid("0..1", ())

    def test_candidate_count(self):
        assert candidate_count(2, DEFAULT_GRID, SearchTarget.NIJENHUIS) == 625
        assert candidate_count(2, DEFAULT_GRID, "s-matrix") == 125


class TestSearch:
    def test_every_operator_is_nijenhuis_on_third_family(self, repository):
        A = repository.get("rb_family_3").algebra
        hits = search_operators(A, SearchTarget.NIJENHUIS, UNIT_GRID)
        assert len(hits) == 81
        assert list(hits[0].flat) == [-1, -1, -1, -1]
        assert list(hits[-1].flat) == [1, 1, 1, 1]

    def test_square_zero_operators(self, repository):
        A = repository.get("rb_family_3").algebra
        hits = search_operators(A, SearchTarget.ROTA_BAXTER, UNIT_GRID, weight=0)
        assert len(hits) == 9
        assert all(is_zero(R @ R) for R in hits)

    def test_a2_operators(self, a2, a2_doc):
        hits = search_operators(a2, "nijenhuis", UNIT_GRID)
        for name, expected in (("N", True), ("N_nil", True), ("N_bad", False)):
            assert any(arrays_equal(N, a2_doc.operator(name)) for N in hits) is expected

    def test_s_matrices_are_symmetric(self, a2, a2_doc):
        hits = search_operators(a2, SearchTarget.S_MATRIX, UNIT_GRID)
        assert all(arrays_equal(r, r.T) for r in hits)
        assert any(arrays_equal(r, a2_doc.tensor("r1")) for r in hits)
        assert any(is_zero(r) for r in hits)

    def test_results_are_sorted(self, a2):
        hits = search_operators(a2, SearchTarget.NIJENHUIS, UNIT_GRID)
        keys = [tuple(N.flat) for N in hits]
        assert keys == sorted(keys)

    def test_workers_give_the_same_answer(self, a2):
        serial = search_operators(a2, SearchTarget.NIJENHUIS, UNIT_GRID)
        parallel = search_operators(a2, SearchTarget.NIJENHUIS, UNIT_GRID, workers=3)
        assert len(serial) == len(parallel)
        assert all(arrays_equal(left, right) for left, right in zip(serial, parallel))

    def test_candidate_limit(self):
        with pytest.raises(ResourceLimitError):
            search_operators(Algebra.zero(4), SearchTarget.NIJENHUIS, DEFAULT_GRID)

    def test_empty_grid(self, a2):
        with pytest.raises(InputError):
            search_operators(a2, SearchTarget.NIJENHUIS, ())

    def test_unknown_target(self, a2):
        with pytest.raises(ValueError):
            search_operators(a2, "symplectic", UNIT_GRID)
