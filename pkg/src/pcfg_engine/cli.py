"""``pcfg`` command-line entry point.

Exit codes: 0 on success, 1 on user errors (unreadable, malformed or invalid
input, bad flags), 2 on semantic errors (evaluation failures, undefined
normalization, non-convergence under ``--strict``, failed adequacy checks).
"""

import argparse
import logging
import sys
from collections.abc import Callable, Sequence
from fractions import Fraction
from pathlib import Path
from typing import NoReturn

from pydantic import BaseModel

from pcfg_engine import __version__
from pcfg_engine.adequacy import SamplingOptions, check_adequacy, sample_program
from pcfg_engine.denotational import ReturnValue, normalized_semantics, raw_semantics
from pcfg_engine.errors import (
    DocumentFormatError,
    NonConvergenceError,
    SemanticError,
    UserInputError,
)
from pcfg_engine.fixpoint_semantics import ConvergenceReport, SemanticsEngine, SemanticsOptions
from pcfg_engine.graph_analysis import AnalysisOptions, GraphAnalyser
from pcfg_engine.pcfg import Pcfg, compress_skips, dump_pcfg, load_pcfg, to_dot
from pcfg_engine.rational import Rational, parse_rational
from pcfg_engine.store_dist import Dist, DistDocument, Store, load_dist
from pcfg_engine.syntax import (
    Program,
    contains_loop,
    count_statements,
    is_deterministic_stmt,
    parse_program,
    uninitialised_reads,
)
from pcfg_engine.translate import translate_program


class CheckReport(BaseModel):
    universe: list[str]
    statements: int
    deterministic: bool
    has_loops: bool
    uninitialised_reads: list[str]


class RunReport(BaseModel):
    source: int
    target: int
    result: DistDocument
    mass: Rational
    report: ConvergenceReport


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(str(e)) from e


def _node_pair(text: str) -> tuple[int, int]:
    try:
        source, target = (int(part) for part in text.split(","))
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected 'v,v2', got {text!r}") from e
    return source, target


def _write(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _read(path: Path) -> str:
    return path.read_text(encoding="utf-8")


def _load_program(args: argparse.Namespace) -> Program:
    return parse_program(_read(args.program))


def _load_graph(args: argparse.Namespace) -> Pcfg:
    if args.graph is not None:
        graph = load_pcfg(_read(args.graph))
    else:
        graph = translate_program(_load_program(args))
    return compress_skips(graph) if args.simplify else graph


def _semantics_options(args: argparse.Namespace) -> SemanticsOptions:
    return SemanticsOptions(tol=args.tol, max_k=args.max_k)


def _enforce(report: ConvergenceReport, args: argparse.Namespace) -> None:
    if args.strict and report.budget_exhausted:
        raise NonConvergenceError(
            f"No convergence within {report.iterations_used} iterations "
            f"(sup_delta {report.sup_delta}, residual {report.residual_mass})"
        )


def _check(args: argparse.Namespace) -> int:
    program = _load_program(args)
    check = CheckReport(
        universe=list(program.universe),
        statements=count_statements(program.body),
        deterministic=is_deterministic_stmt(program.body),
        has_loops=contains_loop(program.body),
        uninitialised_reads=uninitialised_reads(program),
    )
    if args.json:
        _write(check.model_dump_json(indent=2))
        return 0
    _write(f"ok: {args.program}")
    _write(f"variables: {', '.join(check.universe) or '-'}")
    _write(f"statements: {check.statements}")
    _write(f"deterministic: {'yes' if check.deterministic else 'no'}")
    _write(f"loops: {'yes' if check.has_loops else 'no'}")
    for name in check.uninitialised_reads:
        _write(f"warning: '{name}' may be read before it is assigned")
    return 0


def _translate(args: argparse.Namespace) -> int:
    graph = translate_program(_load_program(args))
    if args.simplify:
        graph = compress_skips(graph)
    _write(dump_pcfg(graph) if args.format == "json" else to_dot(graph))
    return 0


def _analyze(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    report = GraphAnalyser(AnalysisOptions(path_node_limit=args.path_node_limit)).report(graph)
    if args.json:
        _write(report.model_dump_json(indent=2))
        return 0
    for node in report.nodes:
        fppd = "-" if node.fppd is None else str(node.fppd)
        marker = "  cycle-inducing" if node.cycle_inducing else ""
        _write(f"{node.id}: {node.label or '(end)'}  fppd={fppd}{marker}")
    for entry in report.lap:
        if entry.source != entry.target:
            _write(f"LAP({entry.source},{entry.target}) = {entry.lap}")
    return 0


def _run(args: argparse.Namespace) -> int:
    graph = _load_graph(args)
    if args.input is not None:
        dist = load_dist(_read(args.input))
        if dist.universe != graph.universe:
            raise DocumentFormatError(
                f"Input ranges over {list(dist.universe)}, the graph over {list(graph.universe)}"
            )
    else:
        dist = Dist.point(Store.bottom(graph.universe))
    source, target = args.at or (graph.start, graph.end)

    on_iterate: Callable[[int, Dist], None] | None = None
    if args.trace_k:
        sys.stderr.write("k,mass\n")
        on_iterate = _trace

    engine = SemanticsEngine(
        graph,
        _semantics_options(args),
        AnalysisOptions(path_node_limit=args.path_node_limit),
    )
    result, report = engine.omega(source, target, dist, on_iterate)
    _enforce(report, args)
    run = RunReport(
        source=source,
        target=target,
        result=DistDocument.from_dist(result),
        mass=result.mass,
        report=report,
    )
    if args.json:
        _write(run.model_dump_json(indent=2))
        return 0
    _write(f"result: {result}")
    _write(f"mass: {result.mass}")
    _write(_describe(report))
    return 0


def _expect(args: argparse.Namespace) -> int:
    program = _load_program(args)
    options = _semantics_options(args)
    output: BaseModel
    if args.raw:
        raw = raw_semantics(program, options)
        _enforce(raw.report, args)
        output, text = raw, f"{raw.numerator} / {raw.denominator}"
    else:
        normalized = normalized_semantics(program, options)
        _enforce(normalized.report, args)
        output, text = normalized, str(normalized.value)
    _write(output.model_dump_json(indent=2) if args.json else text)
    return 0


def _adequacy(args: argparse.Namespace) -> int:
    program = _load_program(args)
    if args.dist is not None:
        dist = load_dist(_read(args.dist))
        if dist.universe != program.universe:
            raise DocumentFormatError(
                f"Distribution ranges over {list(dist.universe)}, "
                f"the program over {list(program.universe)}"
            )
    else:
        dist = Dist.point(Store.bottom(program.universe))
    result = check_adequacy(
        program.body,
        ReturnValue(program.return_expr),
        dist,
        _semantics_options(args),
        AnalysisOptions(path_node_limit=args.path_node_limit),
    )
    if args.json:
        _write(result.model_dump_json(indent=2))
    else:
        _write(f"lhs: {result.lhs}")
        _write(f"rhs: {result.rhs}")
        _write(f"{'passed' if result.passed else 'FAILED'} (|lhs - rhs| = {result.abs_diff})")
    return 0 if result.passed else 2


def _sample(args: argparse.Namespace) -> int:
    program = _load_program(args)
    report = sample_program(
        program,
        SamplingOptions(
            n=args.n,
            seed=args.seed,
            step_bound=args.step_bound,
            shards=args.shards,
            workers=args.workers,
        ),
    )
    if args.json:
        _write(report.model_dump_json(indent=2))
        return 0
    _write(
        f"runs: {report.n_total}  accepted: {report.n_accepted}  "
        f"rejected: {report.n_rejected_observe}  step bound: {report.n_step_bound_hit}"
    )
    _write(f"acceptance rate: {float(report.acceptance_rate):.6f}")
    if report.empirical_normalized_expectation is None:
        _write("expectation: undefined (no accepted runs)")
    else:
        _write(f"expectation: {float(report.empirical_normalized_expectation):.6f}")
    return 0


def _trace(k: int, current: Dist) -> None:
    sys.stderr.write(f"{k},{current.mass}\n")


def _describe(report: ConvergenceReport) -> str:
    if report.budget_exhausted:
        status = "budget exhausted"
    elif report.exact:
        status = "exact"
    elif report.certified:
        status = "converged (certified)"
    else:
        status = "converged (successive iterates and frontier stable)"
    return (
        f"{status} after {report.iterations_used} iterations; "
        f"sup_delta {report.sup_delta}, residual {report.residual_mass}"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(
        prog="pcfg", description="Exact semantics workbench for probabilistic programs"
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logging"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(
        name: str,
        handler: Callable[[argparse.Namespace], int],
        summary: str,
        json_flag: bool = True,
    ) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=summary, description=summary)
        sub.set_defaults(handler=handler)
        if json_flag:
            sub.add_argument("--json", action="store_true", help="Machine-readable output")
        return sub

    def program_argument(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("--program", type=Path, required=True, help="Program file (.prob)")

    def graph_arguments(sub: argparse.ArgumentParser) -> None:
        source = sub.add_mutually_exclusive_group(required=True)
        source.add_argument("--graph", type=Path, help="Graph file (.pcfg.json)")
        source.add_argument("--program", type=Path, help="Program file (.prob), translated")
        sub.add_argument("--simplify", action="store_true", help="Compress skip nodes")
        limit_argument(sub)

    def limit_argument(sub: argparse.ArgumentParser) -> None:
        sub.add_argument(
            "--path-node-limit",
            type=int,
            default=AnalysisOptions().path_node_limit,
            help="Largest graph on which simple paths are enumerated",
        )

    def semantics_arguments(sub: argparse.ArgumentParser) -> None:
        defaults = SemanticsOptions()
        sub.add_argument("--tol", type=_rational, default=defaults.tol, help="Tolerance, e.g. 1e-9 or 1/1000")
        sub.add_argument("--max-k", type=int, default=defaults.max_k, help="Iteration budget")
        sub.add_argument("--strict", action="store_true", help="Exit 2 when the budget is exhausted")

    check = command("check", _check, "Parse a program and report lint warnings")
    program_argument(check)

    translate = command(
        "translate", _translate, "Translate a program into a pCFG", json_flag=False
    )
    program_argument(translate)
    translate.add_argument("--simplify", action="store_true", help="Compress skip nodes")
    form = translate.add_mutually_exclusive_group()
    form.add_argument("--dot", dest="format", action="store_const", const="dot", help="Graphviz (default)")
    form.add_argument("--json", dest="format", action="store_const", const="json", help="pCFG JSON")
    translate.set_defaults(format="dot")

    analyze = command("analyze", _analyze, "Postdominators, LAP and cycle-inducing nodes")
    graph_arguments(analyze)

    run = command("run", _run, "Evaluate the fixed-point semantics on a distribution")
    graph_arguments(run)
    semantics_arguments(run)
    run.add_argument("--input", type=Path, help="Input distribution (.dist.json); default: point mass at 0")
    run.add_argument("--at", type=_node_pair, help="Node pair 'v,v2' instead of Start,End")
    run.add_argument("--trace-k", action="store_true", help="Write 'k,mass' CSV to stderr")

    expect = command("expect", _expect, "Evaluate the expectation-transformer semantics")
    program_argument(expect)
    semantics_arguments(expect)
    mode = expect.add_mutually_exclusive_group()
    mode.add_argument("--raw", action="store_true", help="Numerator and denominator")
    mode.add_argument("--normalized", action="store_true", help="Normalized value (default)")

    adequacy = command("adequacy", _adequacy, "Compare both semantics on a program")
    program_argument(adequacy)
    semantics_arguments(adequacy)
    limit_argument(adequacy)
    adequacy.add_argument("--dist", type=Path, help="Input distribution (.dist.json)")

    sample = command("sample", _sample, "Estimate the semantics by rejection sampling")
    program_argument(sample)
    defaults = SamplingOptions()
    sample.add_argument("-n", type=int, default=defaults.n, help="Number of runs")
    sample.add_argument("--seed", type=int, default=defaults.seed, help="64-bit seed")
    sample.add_argument("--step-bound", type=int, default=defaults.step_bound, help="Steps per run")
    sample.add_argument("--shards", type=int, default=defaults.shards, help="Independent sub-streams")
    sample.add_argument("--workers", type=int, default=defaults.workers, help="Worker processes")

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=[logging.WARNING, logging.INFO, logging.DEBUG][min(args.verbose, 2)],
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return int(args.handler(args))
    except (UserInputError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 1
    except SemanticError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except ValueError as e:
        # pydantic option validation
        sys.stderr.write(f"error: {e}\n")
        return 1
