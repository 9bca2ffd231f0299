import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import strategies as st

from src.algebra.prelie import Algebra, AlgebraKind
from src.algebra.scalars import inverse, is_invertible, rational_array
from src.algebra.tensor_core import MultiMap, alternator, pullback, pushforward
from src.corpus.fixtures import FixtureRepository

SEED = 20240611

# Pre-Lie fixtures used as seeds for random isomorphic copies.
PRELIE_SEEDS = ("a2", "a3", "rb_family_1", "rb_family_3", "rb_family_5", "parakahler4_prelie", "burgers")


RATIONALS = st.fractions(min_value=-3, max_value=3, max_denominator=3)


def tensors(shape):
    size = int(np.prod(shape))
    return st.lists(RATIONALS, min_size=size, max_size=size).map(
        lambda values: rational_array(np.array(values, dtype=object).reshape(shape))
    )


def cochains(dim: int, degree: int):
    """Skew cochains obtained by alternating random tensors."""
    return tensors((dim,) * (degree + 2)).map(lambda coeffs: alternator(MultiMap(coeffs)))


def random_rational(rng: random.Random, span: int = 3, denominators=(1, 1, 2, 3)) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.choice(denominators))


def random_tensor(rng: random.Random, shape, span: int = 3, density: float = 1.0) -> np.ndarray:
    values = [random_rational(rng, span) if rng.random() < density else 0 for _ in range(int(np.prod(shape)))]
    return rational_array(np.array(values, dtype=object).reshape(shape))


def random_invertible(rng: random.Random, n: int) -> np.ndarray:
    while True:
        matrix = random_tensor(rng, (n, n), span=2)
        if is_invertible(matrix):
            return matrix


def transported(A: Algebra, P: np.ndarray) -> Algebra:
    """The product x * y = P⁻¹(Px · Py), isomorphic to A."""
    constants = pushforward(pullback(A.constants, [P, P]), inverse(P))
    return Algebra.from_constants(constants, A.kind)


@pytest.fixture
def rng():
    return random.Random(SEED)


@pytest.fixture(scope="session")
def repository():
    return FixtureRepository()


@pytest.fixture(scope="session")
def a2_doc(repository):
    return repository.get("a2")


@pytest.fixture(scope="session")
def a2(a2_doc):
    return a2_doc.algebra


@pytest.fixture(scope="session")
def a3(repository):
    return repository.get("a3").algebra


@pytest.fixture(scope="session")
def prelie_seeds(repository):
    return [repository.get(name).algebra.with_kind(AlgebraKind.PRE_LIE) for name in PRELIE_SEEDS]


@pytest.fixture
def random_prelie(rng, prelie_seeds):
    """Factory for random pre-Lie algebras of dimension at most max_dim."""

    def build(max_dim: int = 4) -> Algebra:
        candidates = [A for A in prelie_seeds if A.dim <= max_dim]
        A = rng.choice(candidates)
        return transported(A, random_invertible(rng, A.dim))

    return build
