from __future__ import annotations

import sys
import time
import logging
import argparse
import functools
from typing import TextIO, Callable, Sequence

import numpy as np

# Project
import config
from core.utils import generate_trace_phrase
from core.models import NormOrder, FactorMethod, InitStrategy, ProjectionMethod
from core.factorize import decompose
from core.accounting import norm_accounting
from core.exceptions import TaxicabError, LinearlyDependent
from core.conjugation import conjugate_gram_schmidt
from core.projections import project, corollary_classify
from core.verification import run_invariant_suite
from cli.io import MatrixFile, read_matrix, read_vector, write_report
from cli.reports import RunReport, projection_report, conjugation_report, decomposition_report, verification_report
from cli.messages import message_keeper

__all__ = [
    "Runner",
    "build_parser",
    "run_cli",
]

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VIOLATION = 1


class CommandGuardMeta(type):
    """
    Wraps every `handle_*` command of the runner into a try-except block:
    a failure is logged with a trace phrase, explained on stderr and turned into an exit code.
    """
    def __new__(cls, name, bases, dct):
        for attr, value in dct.items():
            if callable(value) and attr.startswith("handle_"):
                dct[attr] = cls.handle_exceptions(value)
        return super().__new__(cls, name, bases, dct)

    @classmethod
    def handle_exceptions(cls, method: Callable):
        @functools.wraps(method)
        def wrapped(self, args: argparse.Namespace) -> int:
            try:
                return method(self, args)
            except Exception as e:
                trace_phrase = generate_trace_phrase()
                logger.error(
                    f"\n"
                    f"\tException occurred during the '{type(self).__name__}.{method.__name__}' execution:\n"
                    f"\targs: {[f'{k}={v!s}' for k, v in vars(args).items()]}\n"
                    f"\texception: {e!r}\n"
                    f"\ttrace_phrase: '{trace_phrase}'",
                    exc_info=logger.isEnabledFor(logging.DEBUG),
                )
                if isinstance(e, TaxicabError):
                    text = "\n".join([message_keeper.get_message("errors", e.alias), str(e)])
                    exit_code = e.exit_code
                else:
                    text = message_keeper.get_message("error", "unexpected")
                    exit_code = EXIT_VIOLATION
                trace = message_keeper.get_message("error", "trace")
                print(f"{text}\n{trace} '{trace_phrase}'", file=self.err)
                return exit_code
        return wrapped


def _format(values: np.ndarray) -> str:
    return " ".join(f"{value:.12g}" for value in np.ravel(values))


class Runner(metaclass=CommandGuardMeta):
    def __init__(self, out: TextIO = None, err: TextIO = None):
        self.out = out or sys.stdout
        self.err = err or sys.stderr
        self.handlers_map = {
            "project": self.handle_project,
            "decompose": self.handle_decompose,
            "conjugate": self.handle_conjugate,
            "verify": self.handle_verify,
        }

    def run(self, args: argparse.Namespace) -> int:
        if args.verbose:
            logging.getLogger().setLevel(logging.INFO)
        return self.handlers_map[args.command](args)

    def emit(self, line: str = "") -> None:
        print(line, file=self.out)

    @staticmethod
    def _file(args: argparse.Namespace, path: str) -> MatrixFile:
        return MatrixFile(path=path, has_header=args.header, delimiter=args.delimiter)

    @staticmethod
    def _save(args: argparse.Namespace, report: RunReport, started: float) -> None:
        if args.json is None:
            return
        if args.timings:
            report.wall_time = time.perf_counter() - started
        write_report(report, args.json)

    def handle_project(self, args: argparse.Namespace) -> int:
        started = time.perf_counter()
        method = ProjectionMethod(args.method)
        x = read_vector(self._file(args, args.x))
        y = read_vector(self._file(args, args.y))

        result = project(y, x, method)
        verdict = result.verdict
        try:
            verdict = corollary_classify(x, y, method)
        except LinearlyDependent:
            self.emit(message_keeper.get_message("project", "dependent"))

        self.emit(f"method {method.value}")
        self.emit(f"alpha {result.alpha:.12g}")
        self.emit(f"fitted {_format(result.fitted)}")
        self.emit(f"residual {_format(result.residual)}")
        self.emit(f"b {_format(result.b_coeffs)}")
        self.emit(verdict.summary)
        if verdict.predicted is not None:
            self.emit(f"predicted {verdict.predicted.value.lower().replace('_', ' ')}")

        self._save(args, projection_report(result, x, verdict), started)
        return EXIT_OK

    def handle_decompose(self, args: argparse.Namespace) -> int:
        started = time.perf_counter()
        method = FactorMethod(args.method)
        X = read_matrix(self._file(args, args.matrix))
        strategy = InitStrategy.EXHAUSTIVE if args.exhaustive else None

        d = decompose(X, method, args.k, strategy=strategy, tol=args.tol, max_iter=args.max_iter)
        self.emit(f"method {method.value}")
        for index, step in enumerate(d.steps, start=1):
            self.emit(
                f"step {index}: delta {step.delta:.12g}, iterations {step.iterations}, "
                f"start {step.start_label}, converged {step.converged}"
            )
            self.emit(f"  a {_format(step.a)}")
            self.emit(f"  b {_format(step.b)}")
        self.emit(f"deltas {', '.join(f'{delta:.12g}' for delta in d.deltas)}")
        self.emit(f"residual trace {_format(np.array(d.residual_trace))}")
        if d.aborted_at is not None:
            self.emit(message_keeper.get_message("decompose", "aborted"))
        elif not d.converged:
            self.emit(message_keeper.get_message("decompose", "not_converged"))

        accounting = None
        if method == FactorMethod.L1MIN_SVD:
            self.emit(message_keeper.get_message("decompose", "no_accounting"))
        else:
            accounting = norm_accounting(X, d)
            self.emit(
                f"accounting {accounting.order.value}: {accounting.relation.value.lower().replace('_', ' ')}: "
                f"{accounting.total_lhs:.12g} {accounting.relation.symbol} {accounting.total_rhs:.12g}"
                f"{'' if accounting.full_rank else ' (residual included)'}"
            )
            for check in accounting.step_checks:
                self.emit(f"  step {check.step}: {check.lhs:.12g} <= {check.rhs:.12g}, equality {check.equality}")

        self._save(args, decomposition_report(X, d, accounting), started)
        return EXIT_OK

    def handle_conjugate(self, args: argparse.Namespace) -> int:
        started = time.perf_counter()
        order = NormOrder.from_p(args.p)
        X = read_matrix(self._file(args, args.matrix))

        conjugate = conjugate_gram_schmidt(list(X), order)
        self.emit(f"order {order.value}")
        for index, vector in enumerate(conjugate.vectors, start=1):
            self.emit(f"y{index} {_format(vector)}")
        self.emit("gram")
        for row in conjugate.gram:
            self.emit(f"  {_format(row)}")

        self._save(args, conjugation_report(X, conjugate), started)
        return EXIT_OK

    def handle_verify(self, args: argparse.Namespace) -> int:
        started = time.perf_counter()
        X = read_matrix(self._file(args, args.matrix))

        checks = run_invariant_suite(X)
        for check in checks:
            self.emit(f"{'PASS' if check.passed else 'FAIL'} {check.name}{f': {check.detail}' if check.detail else ''}")
        passed = all(check.passed for check in checks)
        self.emit(message_keeper.get_message("verify", "passed" if passed else "failed"))

        self._save(args, verification_report(X, checks), started)
        return EXIT_OK if passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", action="store_true", help="log progress at INFO level on stderr")
    common.add_argument("--delimiter", default=",", help="cell delimiter of the input files (default ',')")
    common.add_argument("--header", action="store_true", help="skip the first line of every input file")
    common.add_argument("--timings", action="store_true", help="add wall time to the JSON report")
    common.add_argument("--json", metavar="OUT", help="write a JSON report to OUT")

    parser = argparse.ArgumentParser(
        prog="taxicab",
        description="Projections and stepwise rank-1 decompositions in l1 and l2 norms.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    project_parser = commands.add_parser("project", parents=[common], help="project y onto the line through x")
    project_parser.add_argument("--method", required=True, choices=[m.value for m in ProjectionMethod])
    project_parser.add_argument("--x", required=True, help="vector file (one row or one column)")
    project_parser.add_argument("--y", required=True, help="vector file (one row or one column)")

    decompose_parser = commands.add_parser("decompose", parents=[common], help="stepwise rank-1 decomposition")
    decompose_parser.add_argument("--method", required=True, choices=[m.value for m in FactorMethod])
    decompose_parser.add_argument("-k", type=int, required=True, help="number of terms to extract")
    decompose_parser.add_argument("--exhaustive", action="store_true", help="seed from the exhaustive sign search")
    decompose_parser.add_argument(
        "--tol",
        type=float,
        default=None,
        help="stopping tolerance of the svd and l1min iterations (tsvd stops on a repeated sign vector)",
    )
    decompose_parser.add_argument("--max-iter", type=int, default=None, help="iteration cap per step")
    decompose_parser.add_argument("matrix")

    conjugate_parser = commands.add_parser("conjugate", parents=[common], help="conjugate the rows of a matrix")
    conjugate_parser.add_argument("--p", required=True, choices=["1", "2"])
    conjugate_parser.add_argument("matrix")

    verify_parser = commands.add_parser("verify", parents=[common], help="run the invariant suite on a matrix")
    verify_parser.add_argument("matrix")

    return parser


def run_cli(argv: Sequence[str] = None, out: TextIO = None, err: TextIO = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors and 0 on --help
        return e.code if isinstance(e.code, int) else 2
    logger.debug(f"Parsed arguments: {args=}, {config.LOG_LEVEL=}")
    return Runner(out=out, err=err).run(args)
