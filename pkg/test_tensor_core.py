from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cochains, random_tensor, tensors
from src.algebra.prelie import Algebra, check_pre_lie
from src.algebra.scalars import arrays_equal, identity, rational_array, zeros
from src.algebra.tensor_core import (
    Cochain,
    MultiMap,
    alternator,
    c_bracket,
    compose_circle,
    diamond,
    diamond_expanded,
    gerstenhaber_bracket,
    pullback,
    pushforward,
)
from src.errors import InputError, ResourceLimitError

FAST = settings(max_examples=25, deadline=None)


def sign(p, q):
    return (-1) ** (p * q)


class TestMultiMap:
    def test_shape_bookkeeping(self):
        P = MultiMap.zero(3, 2)
        assert (P.degree, P.arity, P.dim, P.codim) == (2, 3, 3, 3)

    def test_evaluate_reads_structure_constants(self, a2):
        e1, e2 = identity(2)
        assert list(a2.product.evaluate(e2, e1)) == [-1, 0]
        assert list(a2.product.evaluate(e2, e2)) == [0, 1]

    def test_cochain_rejects_non_skew_coefficients(self):
        coeffs = zeros((2, 2, 2, 2))
        coeffs[0, 1, 0, 0] = 1
        with pytest.raises(InputError):
            Cochain(coeffs)

    def test_floats_are_refused(self):
        with pytest.raises(InputError):
            MultiMap(np.array([[0.5, 0], [0, 1]], dtype=object))

    def test_operator_round_trip_uses_columns(self):
        N = rational_array([[1, 2], [0, 3]])
        cochain = Cochain.from_operator(N)
        # column j holds N(e_j)
        assert list(cochain.evaluate([1, 0])) == [1, 0]
        assert list(cochain.evaluate([0, 1])) == [2, 3]
        assert arrays_equal(cochain.as_operator(), N)

    def test_pullback_and_pushforward_transport_products(self, a2):
        P = rational_array([[0, 1], [1, 0]])
        swapped = pushforward(pullback(a2.constants, [P, P]), P)
        # relabelling e1 <-> e2 moves e2.e1 = -e1 to e1.e2 = -e2
        assert list(swapped[0, 1]) == [0, -1]
        assert list(swapped[0, 0]) == [1, 0]


class TestCompose:
    def test_circle_of_product_with_itself_is_the_associator(self, a2):
        pi = a2.product
        assert list(compose_circle(pi, pi).coeffs[1, 1, 0]) == [-2, 0]

    def test_gerstenhaber_square_of_operator_vanishes_in_degree_zero(self):
        N = Cochain.from_operator(rational_array([[1, 2], [3, 4]]))
        assert gerstenhaber_bracket(N, N).is_zero()

    def test_mismatched_dimensions_are_rejected(self):
        with pytest.raises(InputError):
            compose_circle(MultiMap.zero(2, 1), MultiMap.zero(3, 1))

    def test_degree_guardrail(self):
        with pytest.raises(ResourceLimitError):
            compose_circle(MultiMap.zero(2, 3), MultiMap.zero(2, 2))

    def test_dimension_guardrail(self):
        with pytest.raises(ResourceLimitError):
            compose_circle(MultiMap.zero(11, 0), MultiMap.zero(11, 0))

    @pytest.mark.parametrize("p, q", [(0, 0), (0, 1), (1, 1), (1, 2), (2, 1)])
    def test_degrees_add(self, p, q):
        P, Q = MultiMap.zero(2, p), MultiMap.zero(2, q)
        assert compose_circle(P, Q).degree == p + q
        assert compose_circle(P, Q).coeffs.shape == (2,) * (p + q + 2)
        assert gerstenhaber_bracket(P, Q).degree == p + q

    def test_skew_brackets_keep_degrees(self, a2):
        pi = a2.product
        N = Cochain.from_operator(rational_array([[1, 1], [0, 1]]))
        assert compose_circle(pi, pi).degree == 2
        assert c_bracket(pi, pi).degree == diamond(pi, pi).degree == diamond_expanded(pi, pi).degree == 2
        assert c_bracket(pi, N).degree == 1


class TestAlternator:
    @FAST
    @given(tensors((2, 2, 2)))
    def test_degree_one_is_untouched(self, coeffs):
        assert alternator(MultiMap(coeffs)) == MultiMap(coeffs)

    @FAST
    @given(tensors((2, 2, 2, 2)))
    def test_degree_two_averages_one_swap(self, coeffs):
        expected = (coeffs - coeffs.transpose(1, 0, 2, 3)) * Fraction(1, 2)
        assert arrays_equal(alternator(MultiMap(coeffs)).coeffs, expected)

    @FAST
    @given(st.sampled_from([(2, 2), (2, 3), (3, 2), (2, 4)]).flatmap(
        lambda shape: tensors((shape[0],) * (shape[1] + 2))
    ))
    def test_is_a_projection(self, coeffs):
        once = alternator(MultiMap(coeffs))
        assert once.is_skew()
        assert alternator(once) == once

    @FAST
    @given(
        st.sampled_from([(0, 2), (1, 1), (2, 0), (2, 1), (1, 2), (0, 3)]).flatmap(
            lambda degrees: st.tuples(tensors((2,) * (degrees[0] + 2)), tensors((2,) * (degrees[1] + 2)))
        )
    )
    def test_alternating_first_changes_nothing_after_composition(self, pair):
        P, Q = (MultiMap(coeffs) for coeffs in pair)
        assert alternator(compose_circle(P, Q)) == alternator(compose_circle(alternator(P), alternator(Q)))


class TestCBracket:
    def test_product_of_pre_lie_algebra_squares_to_zero(self, a2):
        assert c_bracket(a2.product, a2.product).is_zero()

    @pytest.mark.parametrize("c, d", [(1, 1), (2, 0), (Fraction(1, 2), 3), (0, 1)])
    def test_bracket_with_operator_on_basis_pair(self, a2, c, d):
        N = Cochain.from_operator(rational_array([[c, d], [0, c]]))
        assert list(c_bracket(a2.product, N).coeffs[1, 0]) == [-c, 0]

    def test_bracket_with_zero(self, a2):
        assert c_bracket(a2.product, Cochain.zero(2, 2)).is_zero()

    def test_non_skew_input_is_rejected(self):
        coeffs = zeros((2, 2, 2, 2))
        coeffs[0, 0, 1, 0] = 1
        coeffs[1, 0, 0, 0] = 1
        with pytest.raises(InputError):
            c_bracket(MultiMap(coeffs), Cochain.zero(2, 0))

    @FAST
    @given(
        st.sampled_from([(0, 0), (0, 1), (1, 1), (1, 2), (0, 2)]).flatmap(
            lambda degrees: st.tuples(st.just(degrees), cochains(2, degrees[0]), cochains(2, degrees[1]))
        )
    )
    def test_graded_antisymmetry(self, sample):
        (p, q), P, Q = sample
        assert c_bracket(P, Q) == c_bracket(Q, P).scaled(-sign(p, q))

    @settings(max_examples=15, deadline=None)
    @given(
        st.sampled_from([(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 1, 1), (0, 1, 2)]).flatmap(
            lambda degrees: st.tuples(
                st.just(degrees), cochains(2, degrees[0]), cochains(2, degrees[1]), cochains(2, degrees[2])
            )
        )
    )
    def test_graded_jacobi(self, sample):
        (p, q, r), P, Q, R = sample
        total = (
            c_bracket(P, c_bracket(Q, R)).scaled(sign(p, r))
            + c_bracket(Q, c_bracket(R, P)).scaled(sign(q, p))
            + c_bracket(R, c_bracket(P, Q)).scaled(sign(r, q))
        )
        assert total.is_zero()

    @FAST
    @given(
        st.sampled_from([(2, 0, 1), (2, 1, 1), (3, 1, 1), (2, 2, 1), (2, 1, 2), (2, 0, 2), (2, 2, 2)]).flatmap(
            lambda shape: st.tuples(cochains(shape[0], shape[1]), cochains(shape[0], shape[2]))
        )
    )
    def test_projection_formula_matches_unshuffle_sums(self, pair):
        P, Q = pair
        assert diamond(P, Q) == diamond_expanded(P, Q)


def test_pre_lie_iff_product_squares_to_zero(rng, random_prelie):
    samples = [random_prelie() for _ in range(100)]
    for _ in range(100):
        dim = rng.randint(1, 3)
        density = rng.choice([0.15, 0.3, 1.0])
        samples.append(Algebra.from_constants(random_tensor(rng, (dim, dim, dim), span=2, density=density)))

    agreed = [bool(check_pre_lie(A)) == c_bracket(A.product, A.product).is_zero() for A in samples]
    assert all(agreed)
    assert any(not check_pre_lie(A) for A in samples)
