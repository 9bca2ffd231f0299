from fractions import Fraction

import pytest

from conftest import random_rational, random_tensor
from src.algebra.cohomology import regular_coboundary
from src.algebra.prelie import check_pre_lie
from src.algebra.scalars import arrays_equal, identity, is_invertible, rational_array, zeros
from src.algebra.tensor_core import Cochain, MultiMap, c_bracket
from src.corpus.fixtures import PARAMETER_SAMPLES, a2_structure
from src.errors import InvertibilityError
from src.structures.nijenhuis import (
    check_deformation,
    check_equivalence,
    check_power_identity,
    deformation_family,
    deformed_algebra,
    deformed_product,
    first_torsion_violation,
    is_nijenhuis,
    operator_polynomial,
    torsion,
)

A2_FAMILY = [(c, d) for c in PARAMETER_SAMPLES + (Fraction(0),) for d in PARAMETER_SAMPLES]


@pytest.fixture(scope="module")
def nijenhuis_operators(repository):
    """(algebra, operator) for every Nijenhuis operator shipped with a pre-Lie fixture."""
    pairs = []
    for name, keys in (("a2", ("N", "N_nil")), ("a3", ("N",)), ("parakahler4_prelie", ("N1", "N2"))):
        document = repository.get(name)
        pairs.extend((document.algebra, document.operator(key)) for key in keys)
    return pairs


class TestDeformedProduct:
    def test_a2_basis_pairs(self, a2, a2_doc):
        product = deformed_product(a2, a2_doc.operator("N")).coeffs
        assert list(product[1, 0]) == [-1, 0]
        assert list(product[1, 1]) == [-2, 1]
        assert list(product[0, 0]) == [0, 0]

    def test_identity_and_zero(self, a2):
        assert deformed_product(a2, identity(2)) == a2.product
        assert deformed_product(a2, zeros((2, 2))).is_zero()


class TestTorsion:
    def test_nonzero_torsion(self, a2, a2_doc):
        T = torsion(a2, a2_doc.operator("N_bad"))
        assert list(T.coeffs[0, 0]) == [0, -2]

    def test_identity_has_no_torsion(self, prelie_seeds):
        for A in prelie_seeds:
            assert torsion(A, identity(A.dim)).is_zero()

    @pytest.mark.parametrize("c, d", A2_FAMILY)
    def test_a2_family_is_nijenhuis(self, a2, c, d):
        _, N = a2_structure(1, 0, c, d)
        assert torsion(a2, N).is_zero()

    def test_two_formulas_agree_on_random_operators(self, rng, random_prelie):
        # torsion() raises ConsistencyError when the formulas disagree
        for _ in range(200):
            A = random_prelie()
            N = random_tensor(rng, (A.dim, A.dim), span=2, density=rng.choice([0.3, 1.0]))
            assert isinstance(torsion(A, N), Cochain)

    def test_deformed_product_is_pre_lie_iff_torsion_is_closed(self, rng, random_prelie):
        closed = 0
        for round_ in range(60):
            A = random_prelie(max_dim=3)
            density = 0.2 if round_ % 3 == 0 else 1.0
            N = random_tensor(rng, (A.dim, A.dim), span=2, density=density)
            is_closed = regular_coboundary(A, torsion(A, N)).is_zero()
            closed += is_closed
            assert bool(check_pre_lie(deformed_algebra(A, N))) == is_closed
        assert closed


class TestIsNijenhuis:
    def test_fixture_operators(self, a2, a2_doc):
        assert is_nijenhuis(a2, a2_doc.operator("N"))
        assert is_nijenhuis(a2, a2_doc.operator("N_nil"))

    def test_witness(self, a2, a2_doc):
        verdict = is_nijenhuis(a2, a2_doc.operator("N_bad"))
        assert not verdict
        assert verdict.witness.location == (0, 0)
        assert first_torsion_violation(a2, a2_doc.operator("N_bad")) == (0, 0)
        assert first_torsion_violation(a2, a2_doc.operator("N")) is None

    def test_sum_with_deformed_product_squares_to_zero(self, nijenhuis_operators):
        for A, N in nijenhuis_operators:
            assert is_nijenhuis(A, N)
            total = A.product + deformed_product(A, N)
            assert c_bracket(total, total).is_zero()


class TestDeformations:
    def test_trivial_deformations(self, nijenhuis_operators):
        for A, N in nijenhuis_operators:
            report = check_deformation(A, deformed_product(A, N))
            assert report.is_cocycle and report.is_square_zero and report

    def test_scaling_the_product(self, a2):
        assert check_deformation(a2, a2.product)
        assert deformation_family(a2, a2.product, 2) == deformed_algebra(a2, identity(2) * 3)

    def test_symmetrized_product_is_decided(self, a2):
        omega = MultiMap(a2.constants + a2.constants.transpose(1, 0, 2))
        report = check_deformation(a2, omega)
        assert report.is_deformation == (report.is_cocycle and report.is_square_zero)
        payload = report.to_dict()
        assert payload["result"] is report.is_deformation
        assert [part["check"] for part in payload["parts"]] == ["cocycle", "square-zero"]


class TestEquivalence:
    def test_nijenhuis_deformation_is_trivial(self, a2, a2_doc):
        N = a2_doc.operator("N")
        report = check_equivalence(a2, deformed_product(a2, N), Cochain.zero(2, 1), N)
        assert report.holds

    def test_zero_operator(self, a2, rng):
        omega = MultiMap(random_tensor(rng, (2, 2, 2)))
        assert check_equivalence(a2, omega, omega, zeros((2, 2))).holds

    def test_non_nijenhuis_operator_fails_integrability(self, a2, a2_doc):
        N = a2_doc.operator("N_bad")
        report = check_equivalence(a2, deformed_product(a2, N), Cochain.zero(2, 1), N)
        assert not report
        assert report.part("exactness")
        assert not report.part("integrability")


class TestPowers:
    @pytest.mark.parametrize("j", [1, 2, 3])
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_positive_powers(self, nijenhuis_operators, j, k):
        for A, N in nijenhuis_operators:
            assert check_power_identity(A, N, j, k)

    def test_negative_powers_of_invertible_operators(self, nijenhuis_operators):
        for A, N in nijenhuis_operators:
            if not is_invertible(N):
                continue
            for j in range(-2, 4):
                for k in range(-2, 4):
                    assert check_power_identity(A, N, j, k)


class TestOperatorPolynomials:
    def test_square(self, a2, a2_doc):
        square = operator_polynomial(a2_doc.operator("N"), [0, 0, 1])
        assert arrays_equal(square, rational_array([[1, 2], [0, 1]]))
        assert is_nijenhuis(a2, square)

    def test_constant(self, a2_doc):
        assert arrays_equal(operator_polynomial(a2_doc.operator("N"), [1]), identity(2))

    def test_inverse(self, a2, a2_doc):
        inverse = operator_polynomial(a2_doc.operator("N"), [1], lowest_power=-1)
        assert arrays_equal(inverse, rational_array([[1, -1], [0, 1]]))
        assert is_nijenhuis(a2, inverse)

    def test_negative_power_of_singular_operator(self, a2_doc):
        with pytest.raises(InvertibilityError):
            operator_polynomial(a2_doc.operator("N_nil"), [1, 1], lowest_power=-1)

    def test_random_polynomials_stay_nijenhuis(self, rng, nijenhuis_operators):
        for _ in range(50):
            A, N = rng.choice(nijenhuis_operators)
            lowest = rng.randint(-2, 0) if is_invertible(N) else 0
            coeffs = [random_rational(rng, span=2) for _ in range(rng.randint(1, 4))]
            assert is_nijenhuis(A, operator_polynomial(N, coeffs, lowest))
