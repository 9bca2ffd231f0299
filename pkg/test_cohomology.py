import pytest

from conftest import random_invertible, random_tensor, transported
from src.algebra.cohomology import (
    coboundary,
    cochain_dimensions,
    form_coboundary,
    hochschild_coboundary,
    hochschild_via_bracket,
    is_closed_form,
    is_cocycle,
    is_lie_two_cocycle,
    regular_coboundary,
)
from src.algebra.prelie import (
    Algebra,
    Representation,
    dual_representation,
    left_multiplications,
    regular_representation,
    sub_adjacent,
)
from src.algebra.scalars import identity, is_zero, zeros
from src.algebra.tensor_core import Cochain, MultiMap, alternator
from src.corpus.fixtures import PARAMETER_SAMPLES, a2_structure
from src.errors import InputError


def random_cochain(rng, dim, degree, codim):
    return alternator(MultiMap(random_tensor(rng, (dim,) * (degree + 1) + (codim,), span=2)))


class TestCoboundary:
    def test_identity_operator_gives_the_product(self, a2):
        assert regular_coboundary(a2, Cochain.from_operator(identity(2))) == a2.product

    @pytest.mark.parametrize("a", [value for value in PARAMETER_SAMPLES if value])
    @pytest.mark.parametrize("b", PARAMETER_SAMPLES)
    def test_hessian_forms_of_a2_are_closed(self, a2, a, b):
        B, _ = a2_structure(a, b, 1, 0)
        assert is_zero(form_coboundary(a2, B))
        assert is_closed_form(a2, B)

    def test_coboundaries_are_cocycles(self, a2, rng):
        for _ in range(10):
            N = Cochain.from_operator(random_tensor(rng, (2, 2)))
            assert is_cocycle(a2, regular_representation(a2), regular_coboundary(a2, N))

    def test_squares_to_zero(self, rng, random_prelie):
        for round_ in range(100):
            A = random_prelie(max_dim=4 if round_ % 4 == 0 else 3)
            degree = rng.randint(0, 1 if A.dim == 4 else 2)
            trivial = Representation.trivial(A)
            for rep, codim in ((regular_representation(A), A.dim), (trivial, 1)):
                phi = random_cochain(rng, A.dim, degree, codim)
                assert coboundary(A, rep, coboundary(A, rep, phi)).is_zero()

    def test_dual_representation(self, a3, rng):
        rep = dual_representation(a3)
        phi = random_cochain(rng, 3, 1, 3)
        assert coboundary(a3, rep, coboundary(a3, rep, phi)).is_zero()

    def test_invalid_representation_is_refused(self, a2):
        L = left_multiplications(a2)
        with pytest.raises(InputError):
            coboundary(a2, Representation(a2, L, L), Cochain.zero(2, 0))

    def test_value_space_must_match(self, a2):
        with pytest.raises(InputError):
            coboundary(a2, Representation.trivial(a2), Cochain.zero(2, 1))


class TestLieCocycles:
    def test_symplectic_form_of_para_kahler_algebra(self, repository):
        document = repository.get("parakahler4")
        assert is_lie_two_cocycle(document.algebra, document.form("omega").matrix)

    def test_every_two_form_on_a_plane_is_closed(self, a2):
        lie = sub_adjacent(a2)
        omega = zeros((2, 2))
        omega[0, 1], omega[1, 0] = 1, -1
        assert is_lie_two_cocycle(lie, omega)

    def test_needs_a_lie_algebra(self, a2):
        with pytest.raises(InputError):
            is_lie_two_cocycle(a2, zeros((2, 2)))


def associative_samples(repository, rng):
    for name in ("rb_assoc", "novikov"):
        A = repository.get(name).algebra
        yield A
        yield transported(A, random_invertible(rng, A.dim))


def test_hochschild_sum_matches_bracket(repository, rng):
    for A in associative_samples(repository, rng):
        for degree in (0, 1, 2):
            P = MultiMap(random_tensor(rng, (A.dim,) * (degree + 2), span=2))
            assert hochschild_coboundary(A, P) == hochschild_via_bracket(A, P)


class TestDimensions:
    def test_counts_in_low_degree(self, a2):
        regular = regular_representation(a2)
        zeroth = cochain_dimensions(a2, regular, 0)
        first = cochain_dimensions(a2, regular, 1)
        assert zeroth.cochains == 4 and zeroth.coboundaries == 0
        assert first.cochains == 8
        assert first.coboundaries == zeroth.cochains - zeroth.cocycles
        assert cochain_dimensions(a2, regular, 2).cochains == 4

    def test_zero_algebra_has_no_coboundaries(self):
        zero = Algebra.zero(2)
        dims = cochain_dimensions(zero, Representation.trivial(zero), 1)
        assert dims.coboundaries == 0 and dims.cocycles == dims.cochains == 4
        assert dims.cohomology == 4

    def test_negative_degree(self, a2):
        with pytest.raises(InputError):
            cochain_dimensions(a2, regular_representation(a2), -1)