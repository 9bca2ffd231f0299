from fractions import Fraction

import pytest

from conftest import random_rational, random_tensor
from src.algebra.cohomology import is_closed_form
from src.algebra.prelie import Algebra, dual_representation
from src.algebra.scalars import arrays_equal, identity, inverse, is_symmetric, is_zero, rational_array, zeros
from src.corpus.fixtures import a2_structure, a3_structure
from src.errors import InputError, InvertibilityError
from src.structures.nijenhuis import is_nijenhuis
from src.structures.operators import are_compatible_l_dendriform, are_compatible_o_operators, is_l_dendriform
from src.structures.smatrix_hessian import (
    BilinearForm,
    are_compatible_s_matrices,
    dual_nijenhuis,
    dual_product,
    form_dual_product,
    hessian_from_r,
    hessian_recursion_residual,
    hessian_sequence,
    is_pseudo_hessian,
    is_pseudo_hessian_nijenhuis,
    is_s_matrix,
    is_self_adjoint,
    phn_bridge,
    phn_l_dendriform,
    phn_to_smatrices,
    r_from_hessian,
    s_bracket,
    s_sequence,
    transpose_nijenhuis,
)

A2_SAMPLES = [(1, 0, 1, 1), (2, 3, -1, Fraction(1, 2)), (1, -1, 2, 0)]
A3_SAMPLES = [(1, 1, 0, 1, 1, 1), (2, -1, 3, Fraction(1, 2), 2, 0)]


@pytest.fixture(scope="module")
def structure(a2_doc):
    return a2_doc.form("B").matrix, a2_doc.operator("N")


@pytest.fixture(scope="module")
def r_pair(a2_doc):
    return a2_doc.tensor("r1"), a2_doc.tensor("r2")


def random_symmetric(rng, n):
    t = random_tensor(rng, (n, n), span=2)
    return rational_array(t + t.T)


class TestSBracket:
    def test_s_matrix_of_a2(self, a2, r_pair):
        assert is_zero(s_bracket(a2, r_pair[0], r_pair[0]))

    def test_zero(self, a2):
        assert is_zero(s_bracket(a2, zeros((2, 2)), zeros((2, 2))))

    def test_identity(self, a2):
        assert s_bracket(a2, identity(2), identity(2))[0, 1, 0] == 2

    def test_requires_symmetric_tensors(self, a2):
        with pytest.raises(InputError):
            s_bracket(a2, rational_array([[0, 1], [0, 0]]), identity(2))

    def test_bilinear_and_symmetric(self, rng, random_prelie):
        for _ in range(20):
            A = random_prelie(max_dim=3)
            r1, r2 = random_symmetric(rng, A.dim), random_symmetric(rng, A.dim)
            scale = random_rational(rng)
            assert arrays_equal(s_bracket(A, r1, r2), s_bracket(A, r2, r1))
            assert arrays_equal(s_bracket(A, r1, scale * r2), scale * s_bracket(A, r1, r2))
            expanded = s_bracket(A, r1, r1) + 2 * s_bracket(A, r1, r2) + s_bracket(A, r2, r2)
            assert arrays_equal(s_bracket(A, r1 + r2, r1 + r2), expanded)


class TestSMatrices:
    def test_predicate(self, a2, r_pair):
        assert is_s_matrix(a2, r_pair[0])
        assert is_s_matrix(a2, zeros((2, 2)))
        assert not is_s_matrix(a2, identity(2))

    def test_compatible_pair(self, a2, r_pair):
        assert are_compatible_s_matrices(a2, *r_pair)
        assert are_compatible_o_operators(a2, dual_representation(a2), *r_pair)

    def test_dual_product(self, a2, r_pair):
        r1 = r_pair[0]
        product = dual_product(a2, r1)
        assert list(product.constants[0, 0]) == [1, 0]
        assert product.basis == ("e1*", "e2*")
        # r♯(e¹ · e¹) = e2 = r♯e¹ · r♯e¹
        assert list(r1 @ product.constants[0, 0]) == [0, 1]
        assert list(a2.multiply(r1[:, 0], r1[:, 0])) == [0, 1]

    def test_dual_product_of_zero(self, a2):
        assert is_zero(dual_product(a2, zeros((2, 2))).constants)

    def test_dual_product_needs_s_matrix(self, a2):
        with pytest.raises(InputError):
            dual_product(a2, identity(2))


class TestPseudoHessian:
    def test_form_of_s_matrix(self, a2, r_pair):
        B = hessian_from_r(a2, r_pair[0])
        assert arrays_equal(B, rational_array([[0, 1], [1, 0]]))
        assert arrays_equal(r_from_hessian(a2, B), r_pair[0])

    def test_zero_algebra(self):
        assert arrays_equal(hessian_from_r(Algebra.zero(2), identity(2)), identity(2))

    def test_singular(self, a2):
        with pytest.raises(InvertibilityError):
            hessian_from_r(a2, zeros((2, 2)))

    def test_degenerate_form(self, a2):
        assert not is_pseudo_hessian(a2, zeros((2, 2)))

    @pytest.mark.parametrize("params", A2_SAMPLES)
    def test_a2_family(self, a2, params):
        assert is_pseudo_hessian_nijenhuis(a2, *a2_structure(*params))

    @pytest.mark.parametrize("params", A3_SAMPLES)
    def test_a3_family(self, a3, params):
        assert is_pseudo_hessian_nijenhuis(a3, *a3_structure(*params))

    def test_non_invertible_operator(self, a2, structure, a2_doc):
        report = is_pseudo_hessian_nijenhuis(a2, structure[0], a2_doc.operator("N_nil"))
        assert not report
        assert not report.part("nijenhuis")

    def test_form_tag_must_match(self):
        with pytest.raises(InputError):
            BilinearForm(identity(2), "skew")


class TestSequences:
    def test_first_form(self, a2, structure):
        assert arrays_equal(hessian_sequence(a2, *structure, 1), rational_array([[0, 1], [1, 1]]))
        assert arrays_equal(hessian_sequence(a2, *structure, 0), structure[0])

    @pytest.mark.parametrize("name", ["a2", "a3"])
    def test_forms_are_closed(self, repository, name):
        document = repository.get(name)
        A, B, N = document.algebra, document.form("B").matrix, document.operator("N")
        for k in range(-2, 4):
            B_k = hessian_sequence(A, B, N, k)
            assert is_symmetric(B_k) and is_closed_form(A, B_k)
        for k in (1, 2):
            for power in (1, 2):
                N_l = rational_array(N @ N) if power == 2 else N
                assert is_pseudo_hessian_nijenhuis(A, hessian_sequence(A, B, N, k), N_l)

    @pytest.mark.parametrize("name", ["a2", "a3"])
    def test_recursion(self, repository, name):
        document = repository.get(name)
        A, B, N = document.algebra, document.form("B").matrix, document.operator("N")
        for k in (0, 1, 2):
            assert is_zero(hessian_recursion_residual(A, B, N, k))

    def test_negative_power_of_singular_operator(self, a2, structure, a2_doc):
        with pytest.raises(InvertibilityError):
            hessian_sequence(a2, structure[0], a2_doc.operator("N_nil"), -1)

    def test_s_sequence(self, a2, r_pair):
        r1, r2 = r_pair
        assert arrays_equal(s_sequence(a2, r1, r2, 0), r1)
        assert arrays_equal(s_sequence(a2, r1, r2, 1), r2)
        terms = [s_sequence(a2, r1, r2, n) for n in range(-1, 4)]
        for term in terms:
            assert is_s_matrix(a2, term)
            assert are_compatible_s_matrices(a2, r1, term)
        for first, second in zip(terms, terms[1:]):
            assert are_compatible_s_matrices(a2, first, second)


class TestBridges:
    def test_backward(self, a2, structure, r_pair):
        r1, r2 = phn_to_smatrices(a2, *structure)
        assert arrays_equal(r1, r_pair[0]) and arrays_equal(r2, r_pair[1])
        assert arrays_equal(r2, inverse(structure[1]) @ r1)

    def test_forward(self, a2, structure, r_pair):
        B, N = phn_bridge(a2, *r_pair)
        assert arrays_equal(B, structure[0]) and arrays_equal(N, structure[1])

    def test_equal_pair(self, a2, r_pair):
        B, N = phn_bridge(a2, r_pair[0], r_pair[0])
        assert arrays_equal(N, identity(2)) and arrays_equal(B, inverse(r_pair[0]))

    @pytest.mark.parametrize("params", A3_SAMPLES)
    def test_round_trip_on_a3(self, a3, params):
        B, N = a3_structure(*params)
        B_back, N_back = phn_bridge(a3, *phn_to_smatrices(a3, B, N))
        assert arrays_equal(B_back, B) and arrays_equal(N_back, N)


class TestDualNijenhuis:
    def test_a2_pair(self, a2, r_pair):
        result = dual_nijenhuis(a2, *r_pair)
        assert arrays_equal(result.operator, rational_array([[1, 0], [1, 1]]))
        assert result.nijenhuis and result.generates

    def test_equal_pair(self, a2, r_pair):
        result = dual_nijenhuis(a2, r_pair[1], r_pair[1])
        assert arrays_equal(result.operator, identity(2))
        assert result.deformed == result.base

    def test_zero_first_tensor(self, a2, r_pair):
        result = dual_nijenhuis(a2, zeros((2, 2)), r_pair[1])
        assert is_zero(result.operator) and is_zero(result.deformed.constants)
        assert result.generates

    def test_transpose(self, a2, structure):
        assert transpose_nijenhuis(a2, *structure)


def test_l_dendriform_pair_from_form(a2, structure):
    first, second = phn_l_dendriform(a2, *structure)
    assert is_l_dendriform(first) and is_l_dendriform(second)
    assert are_compatible_l_dendriform(first, second)


def test_nijenhuis_operator_on_dual_product(a2, r_pair):
    result = dual_nijenhuis(a2, *r_pair)
    assert is_nijenhuis(result.base, result.operator)


def test_self_adjoint(structure):
    B, N = structure
    assert is_self_adjoint(B, N)
    assert not is_self_adjoint(B, rational_array([[1, 0], [0, -1]]))


def test_dual_product_of_a_form(a2, structure, r_pair):
    assert form_dual_product(a2, structure[0]) == dual_product(a2, r_pair[0])
