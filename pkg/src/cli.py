"""
Command line front end.

    check <file> [checks...]       verify structures named in a document
    deform <file> --nijenhuis N    write the deformed product of a Nijenhuis operator
    search <file> --target T       enumerate operators over a grid of rationals
    fixtures                       run every built-in fixture check

Exit status is 0 when every requested check holds, 1 when one fails and 2 on
input or resource errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import replace
from typing import List, Optional, Sequence, Tuple, Union

from src import __version__
from src.algebra.prelie import AlgebraKind, check_associative, check_lie, check_pre_lie, check_representation, verify_kind
from src.algebra.scalars import format_rational, is_skew, is_symmetric, to_rational
from src.algebra.verdict import Report, Verdict
from src.corpus.document import Document, load_document, save_document, serialize_document
from src.corpus.fixtures import FixtureRepository, run_fixture_checks
from src.errors import ConsistencyError, InputError, ResourceLimitError
from src.structures.nijenhuis import check_deformation, deformation_family, deformed_product, is_nijenhuis
from src.structures.operators import is_o_operator, is_rota_baxter
from src.structures.paracomplex import is_para_kahler, is_paracomplex, is_quadratic, is_symplectic
from src.structures.search import SearchTarget, parse_grid, search_operators
from src.structures.smatrix_hessian import is_pseudo_hessian, is_pseudo_hessian_nijenhuis, is_s_matrix
from src.utils.ui import format_matrix, print_failure, print_header, print_section, print_success, print_table

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2

Outcome = Union[Verdict, Report]

# options whose values may start with a minus sign, e.g. --grid -1..1 or --t -1/2
SIGNED_VALUE_OPTIONS = ("--grid", "--weight", "--t")


# ============================================================================
# PARSER
# ============================================================================


def _common_options() -> argparse.ArgumentParser:
    """Options accepted both before and after the subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS, help="report format")
    common.add_argument("-v", "--verbose", action="count", default=argparse.SUPPRESS, help="-v for INFO, -vv for DEBUG")
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS, help="thread pool size")
    return common


def _attach_signed_values(argv: Sequence[str]) -> List[str]:
    """Rewrite ``--grid -1..1`` as ``--grid=-1..1``; argparse reads ``-1..1`` as an option."""
    attached: List[str] = []
    tokens = iter(argv)
    for token in tokens:
        if token in SIGNED_VALUE_OPTIONS:
            value = next(tokens, None)
            if value is not None and value.startswith("-"):
                attached.append(f"{token}={value}")
                continue
            attached.append(token)
            if value is not None:
                attached.append(value)
            continue
        attached.append(token)
    return attached


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="prelie-nijenhuis",
        description="Exact verification of pre-Lie algebra structures.",
        parents=[common],
    )
    parser.set_defaults(format="text", verbose=0, workers=1)
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", parents=[common], help="verify structures named in a document")
    check.add_argument("file")
    group_alg = check.add_argument_group("algebra")
    group_alg.add_argument("--pre-lie", action="store_true", help="product is pre-Lie")
    group_alg.add_argument("--lie", action="store_true", help="product is a Lie bracket")
    group_alg.add_argument("--assoc", action="store_true", help="product is associative")
    group_alg.add_argument("--rep", metavar="NAME", help="representation to check, and to use for --o-operator")
    group_op = check.add_argument_group("operators")
    group_op.add_argument("--nijenhuis", metavar="OP", action="append", default=[])
    group_op.add_argument("--rota-baxter", metavar="OP", action="append", default=[])
    group_op.add_argument("--weight", metavar="Q", default="0", help="Rota-Baxter weight, default=%(default)s")
    group_op.add_argument("--o-operator", metavar="MAP", action="append", default=[])
    group_op.add_argument("--paracomplex", metavar="OP", action="append", default=[])
    group_form = check.add_argument_group("tensors and forms")
    group_form.add_argument("--s-matrix", metavar="TENSOR", action="append", default=[])
    group_form.add_argument("--hessian", metavar="FORM", action="append", default=[])
    group_form.add_argument("--phn", metavar=("FORM", "OP"), nargs=2, action="append", default=[])
    group_form.add_argument("--quadratic", metavar="FORM", action="append", default=[])
    group_form.add_argument("--para-kahler", metavar=("FORM", "OP"), nargs=2, action="append", default=[])
    check.add_argument("--all", action="store_true", help="every check that applies to the document")

    deform = commands.add_parser("deform", parents=[common], help="deform a product by a Nijenhuis operator")
    deform.add_argument("file")
    deform.add_argument("--nijenhuis", metavar="OP", required=True)
    deform.add_argument("--t", metavar="Q", help="write π + tπ_N instead of π_N")
    deform.add_argument("-o", "--output", metavar="PATH")

    search = commands.add_parser("search", parents=[common], help="grid search for operators")
    search.add_argument("file")
    search.add_argument("--target", choices=[target.value for target in SearchTarget], required=True)
    search.add_argument("--grid", default="-2..2", help="integer range lo..hi, default=%(default)s")
    search.add_argument("--denominators", default="1", help="comma separated, default=%(default)s")
    search.add_argument("--weight", metavar="Q", default="0", help="Rota-Baxter weight, default=%(default)s")

    fixtures = commands.add_parser("fixtures", parents=[common], help="run the built-in fixture checks")
    fixtures.add_argument("--only", metavar="NAME", action="append", help="restrict to a fixture")
    fixtures.add_argument("--data", metavar="DIR", help="fixture directory")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


# ============================================================================
# REPORTING
# ============================================================================


def _record(outcome: Outcome, reference: str) -> dict:
    verdict = outcome.as_verdict() if isinstance(outcome, Report) else outcome
    record = verdict.to_dict()
    record["reference"] = reference
    return record


def _describe(outcome: Outcome, labels: Sequence[str]) -> str:
    verdict = outcome.as_verdict() if isinstance(outcome, Report) else outcome
    where = f" at {verdict.witness.describe(labels)}" if verdict.witness else ""
    return f"{verdict.reason}{where}"


def _emit(title: str, outcomes: Sequence[Outcome], document: Document, fmt: str) -> int:
    labels = document.algebra.basis
    if fmt == "json":
        print(json.dumps([_record(outcome, document.tag) for outcome in outcomes], indent=2, ensure_ascii=False))
    else:
        print_header(title)
        if document.tag:
            print(f"  {document.tag}\n")
        for outcome in outcomes:
            if outcome.holds:
                print_success(outcome.check)
            else:
                print_failure(outcome.check, _describe(outcome, labels))
    return EXIT_OK if all(outcome.holds for outcome in outcomes) else EXIT_FAILED


def _named(check: str, outcome: Outcome) -> Outcome:
    return replace(outcome, check=check)


# ============================================================================
# SUBCOMMANDS
# ============================================================================


def _everything(document: Document) -> List[Tuple[str, object]]:
    """Checks that apply to every named item of the document."""
    requested: List[Tuple[str, object]] = []
    for name, matrix in sorted(document.operators.items()):
        if matrix.shape == (document.dim, document.dim):
            requested.append(("nijenhuis", name))
    if document.kind is AlgebraKind.PRE_LIE:
        requested.extend(("s-matrix", name) for name in sorted(document.tensors))
    for name, form in sorted(document.forms.items()):
        if document.kind is AlgebraKind.PRE_LIE and is_symmetric(form.matrix):
            requested.append(("hessian", name))
        elif document.kind is AlgebraKind.PRE_LIE and is_skew(form.matrix):
            requested.append(("quadratic", name))
        elif document.kind is AlgebraKind.LIE and is_skew(form.matrix):
            requested.append(("symplectic", name))
    requested.extend(("representation", name) for name in sorted(document.representations))
    return requested


def _requested_checks(args: argparse.Namespace, document: Document) -> List[Tuple[str, object]]:
    requested: List[Tuple[str, object]] = []
    for flag, check in (("pre_lie", "pre-lie"), ("lie", "lie"), ("assoc", "associative")):
        if getattr(args, flag):
            requested.append((check, None))
    requested.extend(("nijenhuis", name) for name in args.nijenhuis)
    requested.extend(("rota-baxter", name) for name in args.rota_baxter)
    requested.extend(("o-operator", name) for name in args.o_operator)
    requested.extend(("paracomplex", name) for name in args.paracomplex)
    requested.extend(("s-matrix", name) for name in args.s_matrix)
    requested.extend(("hessian", name) for name in args.hessian)
    requested.extend(("phn", tuple(pair)) for pair in args.phn)
    requested.extend(("quadratic", name) for name in args.quadratic)
    requested.extend(("para-kahler", tuple(pair)) for pair in args.para_kahler)
    if args.rep and not args.o_operator:
        requested.append(("representation", args.rep))
    if args.all or not requested:
        requested.extend(_everything(document))
    return requested


def _run_check(check: str, target: object, document: Document, args: argparse.Namespace, A) -> Outcome:
    if check == "pre-lie":
        return check_pre_lie(A)
    if check == "lie":
        return check_lie(A)
    if check == "associative":
        return check_associative(A)
    if check == "nijenhuis":
        return _named(f"nijenhuis {target}", is_nijenhuis(A, document.operator(target)))
    if check == "rota-baxter":
        weight = to_rational(args.weight)
        verdict = is_rota_baxter(A, document.operator(target), weight)
        return _named(f"rota-baxter {target} (weight {format_rational(weight)})", verdict)
    if check == "o-operator":
        rep = document.representation(args.rep or "regular")
        return _named(f"o-operator {target} ({rep.name})", is_o_operator(A, rep, document.operator(target)))
    if check == "paracomplex":
        return _named(f"paracomplex {target}", is_paracomplex(A, document.operator(target)))
    if check == "s-matrix":
        return _named(f"s-matrix {target}", is_s_matrix(A, document.tensor(target)))
    if check == "hessian":
        return _named(f"pseudo-hessian {target}", is_pseudo_hessian(A, document.form(target).matrix))
    if check == "phn":
        form, operator = target
        report = is_pseudo_hessian_nijenhuis(A, document.form(form).matrix, document.operator(operator))
        return _named(f"pseudo-hessian-nijenhuis {form} {operator}", report)
    if check == "quadratic":
        return _named(f"quadratic {target}", is_quadratic(A, document.form(target).matrix))
    if check == "symplectic":
        return _named(f"symplectic {target}", is_symplectic(A, document.form(target).matrix))
    if check == "para-kahler":
        form, operator = target
        report = is_para_kahler(A, document.form(form).matrix, document.operator(operator))
        return _named(f"para-kahler {form} {operator}", report)
    if check == "representation":
        return _named(f"representation {target}", check_representation(A, document.representation(target)))
    raise InputError(f"unknown check '{check}'")


def cmd_check(args: argparse.Namespace) -> int:
    document = load_document(args.file)
    A = document.algebra
    kind = _named(f"kind {document.kind.value}", verify_kind(A))
    if not kind:
        # The kind tag promises identities the product lacks; later checks see it untagged.
        logger.warning("%s: product is not %s", args.file, document.kind.value)
        A = A.with_kind(AlgebraKind.UNCHECKED)
    outcomes: List[Outcome] = [kind]
    for check, target in _requested_checks(args, document):
        logger.info("running %s on %s", check, target)
        outcomes.append(_run_check(check, target, document, args, A))
    return _emit(f"CHECK {args.file}", outcomes, document, args.format)


def cmd_deform(args: argparse.Namespace) -> int:
    document = load_document(args.file)
    A = document.algebra
    kind = verify_kind(A)
    if not kind:
        raise InputError(f"product is not {document.kind.value}: {_describe(kind, A.basis)}")
    N = document.operator(args.nijenhuis)
    outcomes: List[Outcome] = [_named(f"nijenhuis {args.nijenhuis}", is_nijenhuis(A, N))]
    omega = deformed_product(A, N)
    if document.kind is AlgebraKind.PRE_LIE:
        outcomes.append(check_deformation(A, omega).as_verdict())
    deformed = None
    if outcomes[0]:
        if args.t is None:
            constants, tag = omega.coeffs, f"deformed by {args.nijenhuis}"
        else:
            t = to_rational(args.t)
            constants = deformation_family(A, omega, t).constants
            tag = f"deformed by {args.nijenhuis} at t = {format_rational(t)}"
        deformed = document.with_product(constants, document.kind, tag)
        if args.output:
            save_document(deformed, args.output)
            logger.info("wrote %s", args.output)

    if args.format == "json":
        payload = {"checks": [_record(outcome, document.tag) for outcome in outcomes]}
        if deformed is not None and not args.output:
            payload["document"] = deformed.to_dict()
        print(json.dumps(payload, indent=2, ensure_ascii=False))
        return EXIT_OK if all(outcome.holds for outcome in outcomes) else EXIT_FAILED
    status = _emit(f"DEFORM {args.file}", outcomes, document, args.format)
    if deformed is not None and not args.output:
        print_section("DEFORMED DOCUMENT")
        print(serialize_document(deformed), end="")
    return status


def cmd_search(args: argparse.Namespace) -> int:
    document = load_document(args.file)
    try:
        denominators = [int(item) for item in args.denominators.split(",") if item.strip()]
    except ValueError as exc:
        raise InputError(f"denominators must be integers: {args.denominators}") from exc
    grid = parse_grid(args.grid, denominators)
    target = SearchTarget(args.target)
    found = search_operators(document.algebra, target, grid, weight=to_rational(args.weight), workers=args.workers)
    if args.format == "json":
        payload = {
            "target": target.value,
            "grid": [format_rational(value) for value in grid],
            "count": len(found),
            "operators": [[[format_rational(value) for value in row] for row in matrix] for matrix in found],
        }
        print(json.dumps(payload, indent=2))
    else:
        print_header(f"SEARCH {target.value.upper()}")
        print(f"  {len(grid)} grid values, {len(found)} solutions\n")
        for index, matrix in enumerate(found, start=1):
            print(f"  #{index}")
            print(format_matrix(matrix))
    return EXIT_OK


def cmd_fixtures(args: argparse.Namespace) -> int:
    repository = FixtureRepository(args.data) if args.data else FixtureRepository()
    results = run_fixture_checks(repository, args.only, workers=args.workers)
    if args.format == "json":
        print(json.dumps([result.to_dict() for result in results], indent=2, ensure_ascii=False))
    else:
        print_header("FIXTURE CHECKS")
        rows = [
            {"fixture": result.fixture, "check": result.check, "result": "pass" if result.holds else "FAIL"}
            for result in results
        ]
        print_table(rows, ("fixture", "check", "result"))
        failures = [result for result in results if not result.holds]
        if failures:
            print_section("FAILURES")
            for result in failures:
                labels = repository.get(result.fixture).algebra.basis
                print_failure(f"{result.fixture} {result.check}", _describe(result.outcome, labels))
        else:
            print()
            print_success(f"all {len(results)} checks hold")
    return EXIT_OK if all(result.holds for result in results) else EXIT_FAILED


COMMANDS = {
    "check": cmd_check,
    "deform": cmd_deform,
    "search": cmd_search,
    "fixtures": cmd_fixtures,
}


def run_cli(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(_attach_signed_values(sys.argv[1:] if argv is None else argv))
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    _configure_logging(args.verbose)
    try:
        return COMMANDS[args.command](args)
    except (InputError, ResourceLimitError) as exc:
        logger.debug("input error", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConsistencyError as exc:
        logger.error("cross-check failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED


def run_cli_main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
