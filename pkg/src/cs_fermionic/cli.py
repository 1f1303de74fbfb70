"""Command-line front end: verification suites, operator application and matrices."""

import argparse
import csv
import json
import sys
from typing import Any, Callable, Optional, Sequence, TextIO

from dotenv import load_dotenv
from pydantic import ValidationError

from .config import CSConfig
from .debug_utils import debug_config, debug_mode
from .dunkl import dunkl, hbar_k, hk_finite_p
from .errors import (
    CSAlgebraError,
    ParseError,
    PartitionTooLong,
    UnknownSuite,
    UsageError,
)
from .fermion import check_prop6, finite_wedge_to_poly, omega_N
from .fock import hk_pipeline
from .hamiltonians import bosonic_comparison, h_limit, hk_explicit_limit
from .logging_config import get_logger, setup_logging
from .parser import parse_pdiffop, parse_poly, parse_ppoly, parse_xpoly
from .pdiff import PDiffOp, apply_pdiffop, pdiffop_matrix
from .suites import SUITES, SuiteGrid, SuiteReport, list_suites, run_suite
from .symfun import Partition, partitions_up_to
from .window import WindowPolicy

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_USAGE = 2

USAGE_ERRORS = (
    ParseError,
    PartitionTooLong,
    UnknownSuite,
    UsageError,
    ValidationError,
)
FINITE_OPERATORS = ("dunkl", "hbar", "hk")

LIMIT_OPERATORS: dict[str, Callable[[int], PDiffOp]] = {
    "H0": lambda grade: hk_explicit_limit(0, grade),
    "H1": lambda grade: hk_explicit_limit(1, grade),
    "H2": lambda grade: hk_explicit_limit(2, grade),
    "H": h_limit,
    "bosonic": bosonic_comparison,
}


def _p0_value(text: str) -> Any:
    if text == "formal":
        return text
    try:
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected 'formal' or an integer, got {text!r}"
        ) from None


def _partition_value(text: str) -> Partition:
    try:
        return Partition.parse(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(piece) for piece in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected integers like 2,3,4, got {text!r}"
        ) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cs-fermionic",
        description="Exact checks of the Calogero-Sutherland fermionic limit.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    verify = commands.add_parser("verify", help="Run a verification suite (or 'all')")
    verify.add_argument("suite", help="Suite name, or 'all'")
    verify.add_argument("--seed", type=int, help="Seed for random cases")
    verify.add_argument("--n", type=int, help="Largest particle number")
    verify.add_argument("--grade", type=int, help="Largest grade / weight")
    verify.add_argument("--kmax", type=int, help="Largest Hamiltonian index")
    verify.add_argument("--trials", type=int, help="Random cases per point")
    verify.add_argument("--workers", type=int, help="Parallel case workers")
    verify.add_argument("--format", choices=["json", "table"], default="json")
    verify.add_argument(
        "--timings", action="store_true", help="Include wall times in the report"
    )

    commands.add_parser("list-suites", help="List the suite catalog")

    apply = commands.add_parser("apply", help="Apply an operator to a literal")
    apply.add_argument("--space", choices=["finite", "limit"], required=True)
    apply.add_argument(
        "--op",
        required=True,
        help="finite: dunkl|hbar|hk; limit: H0|H1|H2|H|bosonic|pipeline",
    )
    apply.add_argument("--n", type=int, default=2, help="Particle number (finite)")
    apply.add_argument("--k", type=int, default=1, help="Hamiltonian index")
    apply.add_argument("--i", type=int, default=1, help="Dunkl variable index")
    apply.add_argument("--input", required=True, help="Polynomial literal")

    matrix = commands.add_parser("matrix", help="Limit operator matrix on one grade")
    matrix.add_argument("--op", choices=sorted(LIMIT_OPERATORS), default="H2")
    matrix.add_argument("--grade", type=int, default=4)
    matrix.add_argument(
        "--p0", type=_p0_value, default="formal", help="'formal' or an integer"
    )
    matrix.add_argument("--format", choices=["json", "csv"], default="json")

    fermion = commands.add_parser("fermion", help="Fermionic Fock space tools")
    fermion_commands = fermion.add_subparsers(dest="fermion_command", required=True)
    cut = fermion_commands.add_parser("cut", help="Cut a wedge to N factors")
    cut.add_argument(
        "--lambda",
        dest="partition",
        type=_partition_value,
        default="",
        help='e.g. "3,1"',
    )
    cut.add_argument("--charge", type=int, required=True)
    cut.add_argument("--n", type=int, required=True)
    check_bf = fermion_commands.add_parser(
        "check-bf", help="Cut against bosonization for all small partitions"
    )
    check_bf.add_argument("--max-weight", type=int, default=6)
    check_bf.add_argument(
        "--n", type=_int_list, default="2,3,4", help="Comma-separated N values"
    )

    parse = commands.add_parser("parse", help="Print a literal in normal form")
    parse.add_argument("literal")
    parse.add_argument(
        "--kind",
        choices=["auto", "x", "p", "op"],
        default="auto",
        help="Target type; auto picks it from the symbols used",
    )
    parse.add_argument("--n", type=int, help="Variable count of an x-literal")
    return parser


def _emit_json(data: Any, out: TextIO) -> None:
    out.write(json.dumps(data, sort_keys=True, indent=2) + "\n")


def _emit_reports(reports: list[SuiteReport], fmt: str, out: TextIO) -> None:
    if fmt == "json":
        payload = [r.model_dump(mode="json", exclude_none=True) for r in reports]
        _emit_json(payload[0] if len(payload) == 1 else payload, out)
        return
    for report in reports:
        for case in report.cases:
            params = " ".join(f"{k}={v}" for k, v in sorted(case.params.items()))
            out.write(f"{report.suite:<16} {case.index:>5} {case.status:<4} {params}\n")
        summary = " ".join(f"{k}={v}" for k, v in sorted(report.summary.items()))
        out.write(
            f"{report.suite:<16} passed={report.passed} failed={report.failed}"
            f" seed={report.seed} {summary}".rstrip()
            + "\n"
        )


def _verify(args: argparse.Namespace, config: CSConfig, out: TextIO) -> int:
    names = list(SUITES) if args.suite == "all" else [args.suite]
    overrides = {
        key: getattr(args, key)
        for key in ("n", "grade", "kmax", "trials")
        if getattr(args, key) is not None
    }
    grid = SuiteGrid(**{"trials": config.trials, **overrides, "timings": args.timings})
    reports = [run_suite(name, args.seed, grid, config) for name in names]
    _emit_reports(reports, args.format, out)
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAILURES


def _check_apply_args(args: argparse.Namespace) -> None:
    if args.space == "finite":
        if args.op not in FINITE_OPERATORS:
            raise UsageError(f"Unknown finite operator {args.op!r}")
        if args.n < 1:
            raise UsageError(f"--n must be positive, got {args.n}")
        if args.op == "dunkl" and not 1 <= args.i <= args.n:
            raise UsageError(f"--i must lie in 1..{args.n}, got {args.i}")
    elif args.op != "pipeline" and args.op not in LIMIT_OPERATORS:
        raise UsageError(f"Unknown limit operator {args.op!r}")
    if args.k < 0:
        raise UsageError(f"--k must be non-negative, got {args.k}")


def _apply(args: argparse.Namespace, config: CSConfig, out: TextIO) -> int:
    _check_apply_args(args)
    if args.space == "finite":
        if args.op == "dunkl":
            result: Any = dunkl(parse_xpoly(args.input, args.n), args.i, args.n)
        elif args.op == "hbar":
            result = hbar_k(parse_xpoly(args.input, args.n), args.k, args.n)
        else:
            result = hk_finite_p(args.k, args.n, parse_ppoly(args.input))
    else:
        state = parse_ppoly(args.input)
        if args.op == "pipeline":
            result = hk_pipeline(args.k, state, WindowPolicy.from_config(config))
        else:
            op = LIMIT_OPERATORS[args.op](max(state.grade, 1))
            result = apply_pdiffop(op, state)
    out.write(f"{result}\n")
    return EXIT_OK


def _matrix(args: argparse.Namespace, config: CSConfig, out: TextIO) -> int:
    if args.grade < 0:
        raise UsageError(f"--grade must be non-negative, got {args.grade}")
    matrix = pdiffop_matrix(LIMIT_OPERATORS[args.op](args.grade), args.grade, args.p0)
    if args.format == "json":
        _emit_json(matrix.model_dump(), out)
        return EXIT_OK
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([""] + matrix.basis)
    for label, row in zip(matrix.basis, matrix.rows):
        writer.writerow([label] + row)
    return EXIT_OK


def _fermion(args: argparse.Namespace, config: CSConfig, out: TextIO) -> int:
    if args.fermion_command == "cut":
        fw = omega_N(args.partition, args.charge, args.n)
        if fw is None:
            out.write("0\n")
        else:
            exponents = ",".join(str(k) for k in fw.exponents)
            out.write(f"({exponents}) -> {finite_wedge_to_poly(fw)}\n")
        return EXIT_OK

    failures = []
    checked = 0
    for n in args.n:
        for lam in partitions_up_to(args.max_weight):
            if lam.length > n:
                continue
            checked += 1
            if not check_prop6(lam, n, n):
                failures.append(f"n={n} partition={lam}")
    for failure in failures:
        out.write(f"FAIL {failure}\n")
    out.write(f"checked={checked} failed={len(failures)}\n")
    return EXIT_OK if not failures else EXIT_FAILURES


def _parse(args: argparse.Namespace, config: CSConfig, out: TextIO) -> int:
    value: Any
    if args.kind == "x":
        if args.n is None:
            raise UsageError("--kind x needs --n")
        value = parse_xpoly(args.literal, args.n)
    elif args.kind == "p":
        value = parse_ppoly(args.literal)
    elif args.kind == "op":
        value = parse_pdiffop(args.literal)
    else:
        value = parse_poly(args.literal, args.n)
    out.write(f"{type(value).__name__}: {value}\n")
    return EXIT_OK


def _list_suites(args: argparse.Namespace, config: CSConfig, out: TextIO) -> int:
    for name, description in list_suites():
        out.write(f"{name:<16} {description}\n")
    return EXIT_OK


COMMANDS: dict[str, Callable[[argparse.Namespace, CSConfig, TextIO], int]] = {
    "verify": _verify,
    "list-suites": _list_suites,
    "apply": _apply,
    "matrix": _matrix,
    "fermion": _fermion,
    "parse": _parse,
}


def main(argv: Optional[Sequence[str]] = None, out: Optional[TextIO] = None) -> int:
    """Entry point of the ``cs-fermionic`` command.

    Returns:
        0 when everything passes, 1 on failed cases, 2 on usage errors
    """
    load_dotenv()
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    try:
        config = CSConfig.from_env(
            seed=getattr(args, "seed", None),
            workers=getattr(args, "workers", None),
            trials=getattr(args, "trials", None),
        )
    except ValidationError as e:
        sys.stderr.write(f"[error] invalid configuration: {e}\n")
        return EXIT_USAGE

    setup_logging(config.log_level, config.log_format, config.log_file)

    try:
        with debug_mode(config.enable_debug_mode):
            debug_config(config)
            return COMMANDS[args.command](args, config, out)
    except USAGE_ERRORS as e:
        sys.stderr.write(f"[error] {e}\n")
        return EXIT_USAGE
    except (CSAlgebraError, ValueError) as e:
        details = e.details if isinstance(e, CSAlgebraError) else {}
        logger.error(
            f"Computation failed: {e}",
            extra={"extra_fields": {"error_type": type(e).__name__, **details}},
        )
        sys.stderr.write(f"[error] {e}\n")
        return EXIT_FAILURES


if __name__ == "__main__":
    sys.exit(main())
