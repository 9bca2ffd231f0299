"""Fixture corpus: lazy repository over assets/data/fixtures and the checks run on it."""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, replace
from fractions import Fraction
from multiprocessing.pool import ThreadPool
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.algebra.cohomology import is_closed_form
from src.algebra.prelie import (
    Algebra,
    AlgebraKind,
    check_associative,
    check_commutative,
    check_lie,
    check_novikov,
    check_pre_lie,
)
from src.algebra.scalars import arrays_equal, identity, rational_array, zeros
from src.algebra.tensor_core import Cochain
from src.algebra.verdict import Report, Verdict, compare
from src.errors import AlgebraError, InputError
from src.structures.constructions import (
    alpha_hypothesis,
    burgers_prelie,
    burgers_report,
    cybe_nijenhuis_report,
    derivation_nijenhuis_report,
    is_derivation,
    novikov_from_derivation,
    prelie_from_cybe,
    prelie_from_rb_assoc,
    rb_assoc_nijenhuis_report,
    solves_cybe,
)
from src.structures.nijenhuis import (
    check_deformation,
    check_equivalence,
    check_power_identity,
    deformed_product,
    first_torsion_violation,
    is_nijenhuis,
    operator_polynomial,
)
from src.structures.operators import are_compatible_l_dendriform, is_l_dendriform, is_o_operator, is_rota_baxter
from src.structures.paracomplex import (
    is_para_kahler,
    is_paracomplex_quadratic,
    is_quadratic,
    is_symplectic,
    para_kahler_consequences,
    paracomplex_from_splitting,
    prelie_from_symplectic,
)
from src.structures.search import DEFAULT_GRID, SearchTarget, search_operators
from src.structures.smatrix_hessian import (
    are_compatible_s_matrices,
    dual_nijenhuis,
    hessian_sequence,
    is_pseudo_hessian_nijenhuis,
    is_s_matrix,
    phn_bridge,
    phn_l_dendriform,
    s_sequence,
    transpose_nijenhuis,
)

from .document import Document, load_document

logger = logging.getLogger(__name__)

# ============================================================================
# TUNING CONSTANTS
# ============================================================================
# Values substituted for the free parameters of parametric families. All are
# nonzero, so every nonvanishing constraint of the families is met.
PARAMETER_SAMPLES: Tuple[Fraction, ...] = (Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(3))
# Families up to this dimension are searched over the whole default grid.
EXHAUSTIVE_MAX_DIM = 2

Outcome = Union[Verdict, Report]


class FixtureRepository:
    """Lazy loader for the fixture documents."""

    def __init__(self, data_path: Optional[Path] = None):
        if data_path is None:
            data_path = Path(__file__).resolve().parents[2] / "assets" / "data" / "fixtures"
        self._data_path = Path(data_path)
        self._documents: Optional[Dict[str, Document]] = None

    @property
    def data_path(self) -> Path:
        return self._data_path

    def paths(self) -> List[Path]:
        return sorted(self._data_path.glob("*.json"))

    def _ensure_loaded(self) -> None:
        if self._documents is not None:
            return
        self._documents = {path.stem: load_document(path) for path in self.paths()}
        logger.debug("loaded %d fixtures from %s", len(self._documents), self._data_path)

    def names(self) -> Tuple[str, ...]:
        self._ensure_loaded()
        return tuple(sorted(self._documents))  # type: ignore[arg-type]

    def get(self, name: str) -> Document:
        self._ensure_loaded()
        if name not in self._documents:  # type: ignore[operator]
            raise KeyError(f"no fixture named '{name}'")
        return self._documents[name]  # type: ignore[index]


# ============================================================================
# PARAMETRIC FAMILIES
# ============================================================================


def parameter_tuples(width: int, free: Sequence[int] = ()) -> List[Tuple[Fraction, ...]]:
    """
    Cyclic windows of PARAMETER_SAMPLES of the given width, each once as is and
    once with the positions in ``free`` (parameters allowed to vanish) set to 0.
    """
    count = len(PARAMETER_SAMPLES)
    tuples = []
    for start in range(count):
        window = tuple(PARAMETER_SAMPLES[(start + offset) % count] for offset in range(width))
        tuples.append(window)
        if free:
            tuples.append(tuple(Fraction(0) if index in free else value for index, value in enumerate(window)))
    return tuples


def rota_baxter_family_algebra(item: int, dim: int) -> Algebra:
    """
    The n-dimensional Rota-Baxter families: item 1 has L(e1) = Id, item 2 has
    R(e1) = Id, every other left or right multiplication vanishing.
    """
    if item not in (1, 2) or dim < 1:
        raise InputError(f"no Rota-Baxter family {item} in dimension {dim}")
    constants = zeros((dim, dim, dim))
    for index in range(dim):
        if item == 1:
            constants[0, index, index] = 1
        else:
            constants[index, 0, index] = 1
    return Algebra.from_constants(constants, AlgebraKind.PRE_LIE)


def rank_one_samples(dim: int) -> List[Tuple[np.ndarray, bool]]:
    """
    Rank one operators u vᵀ over parameter_tuples, paired with whether R² = 0.
    With v = (u2, −u1, 0, …) the square vanishes; with v = u1 e1 it is u1² R.
    """
    if dim < 2:
        return []
    samples = []
    for u in parameter_tuples(dim, free=tuple(range(1, dim))):
        orthogonal = [u[1], -u[0]] + [Fraction(0)] * (dim - 2)
        aligned = [u[0]] + [Fraction(0)] * (dim - 1)
        samples.append((rational_array(np.outer(u, orthogonal)), True))
        samples.append((rational_array(np.outer(u, aligned)), False))
    return samples


def a2_structure(a: object, b: object, c: object, d: object) -> Tuple[np.ndarray, np.ndarray]:
    """B = a(e1*e2* + e2*e1*) + b e2*e2* and N = [[c, d], [0, c]]."""
    B = rational_array([[0, a], [a, b]])
    N = rational_array([[c, d], [0, c]])
    return B, N


def a3_structure(a: object, b: object, c: object, d: object, e: object, f: object) -> Tuple[np.ndarray, np.ndarray]:
    B = rational_array([[a, 0, 0], [0, 0, b], [0, b, c]])
    N = rational_array([[d, 0, 0], [0, e, f], [0, 0, e]])
    return B, N


def _family_report(check: str, A, structures: Iterable[Tuple[Tuple[Fraction, ...], Tuple[np.ndarray, np.ndarray]]]) -> Report:
    parts = []
    for params, (B, N) in structures:
        label = ", ".join(str(value) for value in params)
        parts.append(replace(is_pseudo_hessian_nijenhuis(A, B, N).as_verdict(), check=f"({label})"))
    return Report(check=check, parts=tuple(parts))


# ============================================================================
# CHECK REGISTRY
# ============================================================================


@dataclass(frozen=True)
class FixtureCheck:
    fixture: str
    name: str
    run: Callable[[Document, FixtureRepository], Outcome]


@dataclass(frozen=True)
class FixtureResult:
    fixture: str
    check: str
    outcome: Outcome
    reference: str

    @property
    def holds(self) -> bool:
        return self.outcome.holds

    def to_dict(self) -> Dict[str, object]:
        verdict = self.outcome.as_verdict() if isinstance(self.outcome, Report) else self.outcome
        payload = {"fixture": self.fixture, **verdict.to_dict(), "check": self.check, "reference": self.reference}
        return payload


_REGISTRY: List[FixtureCheck] = []


def fixture_check(fixture: str, name: str):
    def register(function: Callable[[Document, FixtureRepository], Outcome]):
        _REGISTRY.append(FixtureCheck(fixture, name, function))
        return function

    return register


def registered_checks() -> Tuple[FixtureCheck, ...]:
    return tuple(sorted(_REGISTRY, key=lambda item: (item.fixture, item.name)))


def _expect_failure(check: str, verdict: Verdict) -> Verdict:
    if verdict:
        return Verdict.failed(check, f"{verdict.check} was expected to fail")
    return Verdict.passed(check, witness=verdict.witness)


def _rota_baxter_square_zero(doc: Document) -> Verdict:
    """R is a weight zero Rota-Baxter operator iff R² = 0, and such R are Nijenhuis."""
    A = doc.algebra
    if A.dim <= EXHAUSTIVE_MAX_DIM:
        found = search_operators(A, SearchTarget.ROTA_BAXTER, DEFAULT_GRID)
        nilpotent = [
            matrix
            for matrix in search_operators(A, SearchTarget.NIJENHUIS, DEFAULT_GRID)
            if arrays_equal(matrix @ matrix, zeros(matrix.shape))
        ]
        expected = sum(1 for _ in _square_zero_grid(A.dim))
        if len(found) != expected or len(nilpotent) != expected:
            return Verdict.failed(
                "rota-baxter-square-zero",
                f"{len(found)} Rota-Baxter and {len(nilpotent)} nilpotent Nijenhuis operators, {expected} with R² = 0",
            )
        for matrix in found:
            if not arrays_equal(matrix @ matrix, zeros(matrix.shape)):
                return Verdict.failed("rota-baxter-square-zero", f"Rota-Baxter operator {matrix.tolist()} has R² != 0")
        return Verdict.passed("rota-baxter-square-zero", candidates=len(DEFAULT_GRID) ** (A.dim * A.dim))
    named = sorted(doc.operators.items())
    sampled = [(f"rank-one sample {index}", R) for index, (R, _) in enumerate(rank_one_samples(A.dim), 1)]
    for name, R in named + sampled:
        square_zero = arrays_equal(R @ R, zeros(R.shape))
        if bool(is_rota_baxter(A, R, 0)) != square_zero:
            return Verdict.failed("rota-baxter-square-zero", f"operator {name} breaks the equivalence")
        if square_zero and first_torsion_violation(A, R) is not None:
            return Verdict.failed("rota-baxter-square-zero", f"operator {name} is not Nijenhuis")
    return Verdict.passed("rota-baxter-square-zero", operators=len(named) + len(sampled))


def _square_zero_grid(dim: int) -> Iterable[np.ndarray]:
    for entries in itertools.product(DEFAULT_GRID, repeat=dim * dim):
        matrix = rational_array(np.array(entries, dtype=object).reshape(dim, dim))
        if arrays_equal(matrix @ matrix, zeros((dim, dim))):
            yield matrix


# ---------------------------------------------------------------------------
# two-dimensional pseudo-Hessian-Nijenhuis example
# ---------------------------------------------------------------------------


@fixture_check("a2", "pre-lie")
def _a2_pre_lie(doc: Document, repo: FixtureRepository) -> Outcome:
    return check_pre_lie(doc.algebra)


@fixture_check("a2", "phn-family")
def _a2_family(doc: Document, repo: FixtureRepository) -> Outcome:
    tuples = parameter_tuples(4, free=(1, 3))
    return _family_report("phn-family", doc.algebra, ((t, a2_structure(*t)) for t in tuples))


@fixture_check("a2", "nijenhuis")
def _a2_nijenhuis(doc: Document, repo: FixtureRepository) -> Outcome:
    A = doc.algebra
    return Report(
        check="nijenhuis",
        parts=(
            replace(is_nijenhuis(A, doc.operator("N")), check="N"),
            replace(is_nijenhuis(A, doc.operator("N_nil")), check="N_nil"),
            _expect_failure("N_bad", is_nijenhuis(A, doc.operator("N_bad"))),
        ),
    )


@fixture_check("a2", "trivial-deformation")
def _a2_deformation(doc: Document, repo: FixtureRepository) -> Outcome:
    A, N = doc.algebra, doc.operator("N")
    omega = deformed_product(A, N)
    return Report(
        check="trivial-deformation",
        parts=(
            check_deformation(A, omega).as_verdict(),
            check_equivalence(A, omega, Cochain.zero(A.dim, 1), N).as_verdict(),
        ),
    )


@fixture_check("a2", "operator-polynomials")
def _a2_polynomials(doc: Document, repo: FixtureRepository) -> Outcome:
    A, N = doc.algebra, doc.operator("N")
    parts = [check_power_identity(A, N, j, k) for j in range(-2, 4) for k in range(-2, 4)]
    for coeffs, lowest in (((1,), 2), ((1,), -1), ((2, -1, Fraction(1, 2), 3), 0), ((1, 0, 1), -1)):
        P = operator_polynomial(N, coeffs, lowest)
        parts.append(replace(is_nijenhuis(A, P), check=f"P{coeffs}@{lowest}"))
    return Report(check="operator-polynomials", parts=tuple(parts))


@fixture_check("a2", "s-matrices")
def _a2_s_matrices(doc: Document, repo: FixtureRepository) -> Outcome:
    A, r1, r2 = doc.algebra, doc.tensor("r1"), doc.tensor("r2")
    return Report(
        check="s-matrices",
        parts=(
            replace(is_s_matrix(A, r1), check="r1"),
            replace(is_s_matrix(A, r2), check="r2"),
            are_compatible_s_matrices(A, r1, r2),
            replace(is_o_operator(A, doc.representation("dual"), doc.operator("T")), check="T"),
        ),
    )


@fixture_check("a2", "phn-bridge")
def _a2_bridge(doc: Document, repo: FixtureRepository) -> Outcome:
    A, B, N = doc.algebra, doc.form("B").matrix, doc.operator("N")
    r1, r2 = doc.tensor("r1"), doc.tensor("r2")
    bridged_B, bridged_N = phn_bridge(A, r1, r2)
    parts = [
        compare("bridge-form", bridged_B, B, value_axes=0),
        compare("bridge-operator", bridged_N, N, value_axes=0),
    ]
    parts.extend(replace(is_closed_form(A, hessian_sequence(A, B, N, k)), check=f"B{k}") for k in range(-2, 4))
    parts.append(compare("s0", s_sequence(A, r1, r2, 0), r1, value_axes=0))
    parts.append(compare("s1", s_sequence(A, r1, r2, 1), r2, value_axes=0))
    for n in (2, 3):
        s_n = s_sequence(A, r1, r2, n)
        parts.append(replace(is_s_matrix(A, s_n), check=f"s{n}"))
        parts.append(replace(are_compatible_s_matrices(A, r1, s_n), check=f"r1-s{n}"))
    return Report(check="phn-bridge", parts=tuple(parts))


@fixture_check("a2", "dual-nijenhuis")
def _a2_dual(doc: Document, repo: FixtureRepository) -> Outcome:
    A = doc.algebra
    result = dual_nijenhuis(A, doc.tensor("r1"), doc.tensor("r2"))
    B, N = doc.form("B").matrix, doc.operator("N")
    return Report(
        check="dual-nijenhuis",
        parts=(result.nijenhuis, result.generates, transpose_nijenhuis(A, B, N)),
    )


@fixture_check("a2", "l-dendriform")
def _a2_dendriform(doc: Document, repo: FixtureRepository) -> Outcome:
    first, second = phn_l_dendriform(doc.algebra, doc.form("B").matrix, doc.operator("N"))
    return Report(
        check="l-dendriform",
        parts=(
            replace(is_l_dendriform(first), check="first"),
            replace(is_l_dendriform(second), check="second"),
            are_compatible_l_dendriform(first, second),
        ),
    )


# ---------------------------------------------------------------------------
# three-dimensional pseudo-Hessian-Nijenhuis example
# ---------------------------------------------------------------------------


@fixture_check("a3", "pre-lie")
def _a3_pre_lie(doc: Document, repo: FixtureRepository) -> Outcome:
    return check_pre_lie(doc.algebra)


@fixture_check("a3", "phn-family")
def _a3_family(doc: Document, repo: FixtureRepository) -> Outcome:
    tuples = parameter_tuples(6, free=(2, 5))
    return _family_report("phn-family", doc.algebra, ((t, a3_structure(*t)) for t in tuples))


@fixture_check("a3", "phn")
def _a3_phn(doc: Document, repo: FixtureRepository) -> Outcome:
    return is_pseudo_hessian_nijenhuis(doc.algebra, doc.form("B").matrix, doc.operator("N"))


# ---------------------------------------------------------------------------
# Rota-Baxter families
# ---------------------------------------------------------------------------


def _register_rota_baxter_family(fixture: str) -> None:
    fixture_check(fixture, "pre-lie")(lambda doc, repo: check_pre_lie(doc.algebra))
    fixture_check(fixture, "rota-baxter-square-zero")(lambda doc, repo: _rota_baxter_square_zero(doc))


def _family_product(item: int) -> Callable[[Document, FixtureRepository], Outcome]:
    def check(doc: Document, repo: FixtureRepository) -> Outcome:
        built = rota_baxter_family_algebra(item, doc.algebra.dim)
        return compare("family-product", doc.algebra.constants, built.constants, reason="document differs from the family")

    return check


for _item in range(1, 7):
    _register_rota_baxter_family(f"rb_family_{_item}")
for _item in (1, 2):
    for _fixture in (f"rb_family_{_item}", f"rb_family_{_item}_n3"):
        fixture_check(_fixture, "family-product")(_family_product(_item))
    _register_rota_baxter_family(f"rb_family_{_item}_n3")


# ---------------------------------------------------------------------------
# four-dimensional para-Kähler Lie algebra
# ---------------------------------------------------------------------------


@fixture_check("parakahler4", "symplectic")
def _pk_symplectic(doc: Document, repo: FixtureRepository) -> Outcome:
    L = doc.algebra
    return Report(check="symplectic", parts=(check_lie(L), is_symplectic(L, doc.form("omega").matrix)))


@fixture_check("parakahler4", "symplectic-prelie")
def _pk_prelie(doc: Document, repo: FixtureRepository) -> Outcome:
    A = prelie_from_symplectic(doc.algebra, doc.form("omega").matrix)
    return compare("symplectic-prelie", A.constants, repo.get("parakahler4_prelie").product)


@fixture_check("parakahler4", "para-kahler")
def _pk_para_kahler(doc: Document, repo: FixtureRepository) -> Outcome:
    L, omega = doc.algebra, doc.form("omega").matrix
    parts = []
    for name in ("N1", "N2"):
        parts.append(replace(is_para_kahler(L, omega, doc.operator(name)).as_verdict(), check=name))
        consequences = para_kahler_consequences(L, omega, doc.operator(name))
        parts.append(replace(consequences.as_verdict(), check=f"{name}-consequences"))
    return Report(check="para-kahler", parts=tuple(parts))


@fixture_check("parakahler4_prelie", "quadratic")
def _pk_quadratic(doc: Document, repo: FixtureRepository) -> Outcome:
    A, omega = doc.algebra, doc.form("omega").matrix
    parts = [check_pre_lie(A), is_quadratic(A, omega)]
    for name in ("N1", "N2"):
        parts.append(replace(is_paracomplex_quadratic(A, omega, doc.operator(name)).as_verdict(), check=name))
    return Report(check="quadratic", parts=tuple(parts))


@fixture_check("parakahler4_prelie", "splitting")
def _pk_splitting(doc: Document, repo: FixtureRepository) -> Outcome:
    A, omega = doc.algebra, doc.form("omega").matrix
    basis = identity(A.dim)
    N, report = paracomplex_from_splitting(A, [basis[0], basis[1]], [basis[2], basis[3]], omega)
    return Report(check="splitting", parts=(report.as_verdict(), compare("N1", N, doc.operator("N1"), value_axes=0)))


# ---------------------------------------------------------------------------
# construction recipes
# ---------------------------------------------------------------------------


@fixture_check("cybe", "yang-baxter")
def _cybe(doc: Document, repo: FixtureRepository) -> Outcome:
    L, r = doc.algebra, doc.operator("r")
    A = prelie_from_cybe(L, r)
    return Report(
        check="yang-baxter",
        parts=(solves_cybe(L, r), check_pre_lie(A), cybe_nijenhuis_report(L, r, doc.operator("N")).as_verdict()),
    )


@fixture_check("burgers", "burgers")
def _burgers(doc: Document, repo: FixtureRepository) -> Outcome:
    a, G = doc.vector("a"), doc.form("G").matrix
    A = burgers_prelie(doc.dim, a, G)
    return Report(
        check="burgers",
        parts=(
            compare("product", A.constants, doc.product),
            burgers_report(doc.dim, a, G, doc.operator("N")).as_verdict(),
        ),
    )


@fixture_check("rb_assoc", "rota-baxter-associative")
def _rb_assoc(doc: Document, repo: FixtureRepository) -> Outcome:
    assoc, R = doc.algebra, doc.operator("R")
    A = prelie_from_rb_assoc(assoc, R)
    return Report(
        check="rota-baxter-associative",
        parts=(check_associative(assoc), check_pre_lie(A), rb_assoc_nijenhuis_report(assoc, R, doc.operator("N")).as_verdict()),
    )


@fixture_check("novikov", "derivation")
def _novikov(doc: Document, repo: FixtureRepository) -> Outcome:
    comm, D = doc.algebra, doc.operator("D")
    parts = [check_commutative(comm), check_associative(comm), is_derivation(comm, D)]
    for s in (0, 1, Fraction(-1, 2)):
        parts.append(replace(check_novikov(novikov_from_derivation(comm, D, s)), check=f"novikov(s={s})"))
    parts.append(replace(derivation_nijenhuis_report(comm, D, 0, doc.operator("N")).as_verdict(), check="N"))
    for operator, alpha in (("N_scalar", "alpha"), ("N", "unit")):
        report = derivation_nijenhuis_report(comm, D, 1, doc.operator(operator), alpha=doc.vector(alpha))
        parts.append(replace(report.as_verdict(), check=f"{operator}-{alpha}"))
    parts.append(
        _expect_failure("N-alpha", alpha_hypothesis(comm, doc.vector("alpha"), doc.operator("N")))
    )
    return Report(check="derivation", parts=tuple(parts))


# ============================================================================
# RUNNER
# ============================================================================


def _run_one(item: Tuple[FixtureCheck, Document, FixtureRepository]) -> FixtureResult:
    check, document, repository = item
    try:
        outcome = check.run(document, repository)
    except AlgebraError as exc:
        logger.warning("fixture %s check %s raised %s", check.fixture, check.name, exc)
        outcome = Verdict.failed(check.name, f"{type(exc).__name__}: {exc}")
    return FixtureResult(check.fixture, check.name, outcome, document.tag)


def run_fixture_checks(
    repository: Optional[FixtureRepository] = None,
    fixtures: Optional[Sequence[str]] = None,
    workers: int = 1,
) -> List[FixtureResult]:
    """Run every registered check on the selected fixtures, sorted by fixture then check."""
    repository = repository or FixtureRepository()
    available = set(repository.names())
    if fixtures is None:
        selected = available
    else:
        unknown = sorted(set(fixtures) - available)
        if unknown:
            raise InputError(f"unknown fixture(s): {', '.join(unknown)}")
        selected = set(fixtures)
    work = [(check, repository.get(check.fixture), repository) for check in registered_checks() if check.fixture in selected]
    logger.info("running %d fixture checks on %d worker(s)", len(work), workers)
    if workers <= 1:
        results = [_run_one(item) for item in work]
    else:
        with ThreadPool(workers) as pool:
            results = pool.map(_run_one, work)
    return sorted(results, key=lambda result: (result.fixture, result.check))
