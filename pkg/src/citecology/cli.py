"""Command-line interface.

``citecology run`` executes the whole analysis; the remaining subcommands
run one stage each on files written by earlier stages, and composing them
reproduces the files of ``run`` byte for byte.

Exit codes: 0 success, 1 usage error, 2 data error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

from . import __version__
from .aggregates import format_aggregate, macro_aggregate
from .centrality import betweenness, format_centrality
from .corpus import DEFAULT_MIN_COUNT, Direction, extract_environment, format_environment, load_corpus, parse_environment, parse_metadata
from .exceptions import DataError, NumericalError
from .factors import (
    DEFAULT_MAX_SWEEPS,
    DEFAULT_N_FACTORS,
    DEFAULT_TOLERANCE,
    classify_by_max_loading,
    format_factor_report,
    parse_factor_report,
    pearson_matrix,
    principal_components,
    varimax,
)
from .matrixops import build_matrix, drop_isolates, format_citation_matrix, parse_citation_matrix
from .pipeline import RunConfig, StageError, load_config_file, run_pipeline
from .report import DEFAULT_MIN_IMPACT_FACTOR, emit_report, write_pajek
from .similarity import DEFAULT_THRESHOLD, build_graph, cosine_matrix, format_graph, format_similarity, parse_graph, parse_similarity

logger = logging.getLogger("citecology")

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _k(value: str):
    if value == "auto":
        return value
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError("k must be a positive integer or 'auto'") from None
    if k < 1:
        raise argparse.ArgumentTypeError("k must be a positive integer or 'auto'")
    return k


def _positive_int(value: str) -> int:
    try:
        v = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"{value!r} is not an integer") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


_NO_CUTOFF = "none"


def _impact(value: str):
    if value.lower() == _NO_CUTOFF:
        return _NO_CUTOFF
    try:
        return Decimal(value)
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"{value!r} is not a number or 'none'") from None


def _factor_label(value: str) -> tuple[int, str]:
    num, sep, text = value.partition("=")
    if not sep or not num.strip().isdigit():
        raise argparse.ArgumentTypeError("expected FACTOR=LABEL, e.g. 1=cognition")
    return int(num), text


def _emit(text: str, path) -> None:
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _open(path):
    return open(path, encoding="utf-8", newline="")


def _add_factor_options(p, defaults=True):
    d = (lambda v: v) if defaults else (lambda v: None)
    p.add_argument("--k", type=_k, default=d(DEFAULT_N_FACTORS), help="number of factors or 'auto' (default 5)")
    p.add_argument("--signed", action="store_true", default=d(False), help="classify by signed instead of absolute loading")
    p.add_argument("--no-kaiser", dest="kaiser_normalize", action="store_false", default=d(True),
                   help="skip Kaiser row normalization before varimax")
    p.add_argument("--tolerance", type=float, default=d(DEFAULT_TOLERANCE))
    p.add_argument("--max-sweeps", type=_positive_int, default=d(DEFAULT_MAX_SWEEPS))


def _add_orientation(p, default="column"):
    p.add_argument("--orientation", choices=["row", "column"], default=default,
                   help="profiles are citations given (row) or received (column)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="citecology", description="Citation ecology of a focal journal.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run the full analysis")
    p.add_argument("--config", help="JSON file of option values; command-line flags take precedence")
    p.add_argument("--corpus", help="citation CSV (citing,cited,count)")
    p.add_argument("--metadata", help="journal CSV (id,name,impact_factor)")
    p.add_argument("--focal")
    p.add_argument("--label", help="corpus label, e.g. the year")
    p.add_argument("--direction", choices=["import", "export"], default=None)
    p.add_argument("--min-count", type=_positive_int, default=None)
    p.add_argument("--threshold", type=float, default=None)
    _add_orientation(p, default=None)
    p.add_argument("--zero-diagonal", action="store_true", default=None)
    _add_factor_options(p, defaults=False)
    p.add_argument("--min-impact-factor", type=_impact, default=None, help="label cutoff for Pajek vertices, or 'none'")
    p.add_argument("--factor-label", action="append", type=_factor_label, dest="factor_labels", metavar="N=TEXT")
    p.add_argument("--timestamp", action="store_true", default=None, help="add a generation timestamp to the report")
    p.add_argument("-o", "--output-dir", default=None)

    p = sub.add_parser("env", help="extract the import or export environment")
    p.add_argument("corpus")
    p.add_argument("--metadata")
    p.add_argument("--focal", required=True)
    p.add_argument("--direction", choices=["import", "export"], default="import")
    p.add_argument("--min-count", type=_positive_int, default=DEFAULT_MIN_COUNT)
    p.add_argument("-o", "--output")

    p = sub.add_parser("matrix", help="build the citation matrix and drop isolates")
    p.add_argument("corpus")
    p.add_argument("environment")
    _add_orientation(p)
    p.add_argument("--zero-diagonal", action="store_true")
    p.add_argument("--keep-isolates", action="store_true")
    p.add_argument("-o", "--output")

    p = sub.add_parser("factors", help="factor analysis of a matrix CSV")
    p.add_argument("matrix")
    _add_orientation(p)
    _add_factor_options(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("cosine", help="cosine similarity of a matrix CSV")
    p.add_argument("matrix")
    _add_orientation(p)
    p.add_argument("-o", "--output")

    p = sub.add_parser("graph", help="threshold a cosine CSV into a graph")
    p.add_argument("cosine")
    p.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD)
    p.add_argument("-o", "--output")

    p = sub.add_parser("centrality", help="betweenness centrality of a graph file")
    p.add_argument("graph")
    p.add_argument("-o", "--output")

    p = sub.add_parser("aggregate", help="macro-journal citation counts")
    p.add_argument("matrix")
    p.add_argument("factors")
    p.add_argument("--direction", choices=["import", "export"], default="import")
    p.add_argument("--focal", help="defaults to the first journal of the matrix")
    p.add_argument("--factor-label", action="append", type=_factor_label, dest="factor_labels", metavar="N=TEXT")
    p.add_argument("-o", "--output")

    p = sub.add_parser("export", help="write Pajek .net and .clu files")
    p.add_argument("graph")
    p.add_argument("factors")
    p.add_argument("--metadata")
    p.add_argument("--focal", help="defaults to the first graph node")
    p.add_argument("--min-impact-factor", type=_impact, default=DEFAULT_MIN_IMPACT_FACTOR)
    p.add_argument("--net", required=True)
    p.add_argument("--clu", required=True)
    return parser


def _run_config(args) -> RunConfig:
    values = load_config_file(args.config) if args.config else {}
    for name in (
        "corpus", "metadata", "focal", "label", "direction", "min_count", "threshold", "orientation",
        "zero_diagonal", "k", "signed", "kaiser_normalize", "tolerance", "max_sweeps",
        "min_impact_factor", "timestamp", "output_dir",
    ):
        v = getattr(args, name)
        if v is not None:
            values[name] = v
    if values.get("min_impact_factor") == _NO_CUTOFF:
        values["min_impact_factor"] = None
    if args.factor_labels:
        values["factor_labels"] = dict(values.get("factor_labels", {}), **{str(k): v for k, v in args.factor_labels})
    for required in ("corpus", "focal"):
        if not values.get(required):
            raise UsageError(f"--{required} is required (flag or config file)")
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise UsageError(f"invalid configuration: {exc}") from None


def cmd_run(args) -> None:
    config = _run_config(args)
    logger.info("effective configuration: %s", config.echo())
    result = run_pipeline(config)
    if config.output_dir is None:
        sys.stdout.write(emit_report(result.report()))
    else:
        e = result.centrality.entries[0]
        print(
            f"{config.direction.value} environment of {config.focal}: "
            f"{len(result.full_matrix)} journals, {len(result.matrix)} after isolate drop; "
            f"top betweenness {e.journal} ({e.percent:.1f}%); outputs in {config.output_dir}",
            file=sys.stderr,
        )


def cmd_env(args) -> None:
    corpus = load_corpus(args.corpus, args.metadata)
    env = extract_environment(corpus, args.focal, args.direction, args.min_count)
    _emit(format_environment(env), args.output)


def cmd_matrix(args) -> None:
    corpus = load_corpus(args.corpus)
    with _open(args.environment) as fh:
        env = parse_environment(fh, name=args.environment)
    m = build_matrix(corpus, env, zero_diagonal=args.zero_diagonal)
    if not args.keep_isolates:
        m = drop_isolates(m, args.orientation, env.focal)
    _emit(format_citation_matrix(m), args.output)


def _read_matrix(path):
    with _open(path) as fh:
        return parse_citation_matrix(fh, name=path)


def cmd_factors(args) -> None:
    m = _read_matrix(args.matrix)
    model = varimax(principal_components(pearson_matrix(m, args.orientation), args.k),
                    args.kaiser_normalize, args.tolerance, args.max_sweeps)
    _emit(format_factor_report(model, classify_by_max_loading(model, args.signed)), args.output)


def cmd_cosine(args) -> None:
    _emit(format_similarity(cosine_matrix(_read_matrix(args.matrix), args.orientation)), args.output)


def cmd_graph(args) -> None:
    with _open(args.cosine) as fh:
        sim = parse_similarity(fh, name=args.cosine)
    _emit(format_graph(build_graph(sim, args.threshold)), args.output)


def _read_graph(path):
    with _open(path) as fh:
        return parse_graph(fh, name=path)


def _read_factors(path):
    with _open(path) as fh:
        return parse_factor_report(fh, name=path)


def cmd_centrality(args) -> None:
    _emit(format_centrality(betweenness(_read_graph(args.graph))), args.output)


def cmd_aggregate(args) -> None:
    m = _read_matrix(args.matrix)
    model, assignment = _read_factors(args.factors)
    focal = args.focal or m.journals[0]
    labels = dict(args.factor_labels or [])
    agg = macro_aggregate(m, assignment, focal, Direction.parse(args.direction), labels, n_factors=model.k)
    _emit(format_aggregate(agg), args.output)


def cmd_export(args) -> None:
    graph = _read_graph(args.graph)
    _, assignment = _read_factors(args.factors)
    labels = {}
    if args.metadata:
        with _open(args.metadata) as fh:
            labels = {ref.id: ref for ref in parse_metadata(fh, name=args.metadata)}
    focal = args.focal or graph.nodes[0]
    cutoff = None if args.min_impact_factor == _NO_CUTOFF else args.min_impact_factor
    net, clu = write_pajek(graph, assignment, labels, cutoff, focal=focal)
    _emit(net, args.net)
    _emit(clu, args.clu)


COMMANDS = {
    "run": cmd_run,
    "env": cmd_env,
    "matrix": cmd_matrix,
    "factors": cmd_factors,
    "cosine": cmd_cosine,
    "graph": cmd_graph,
    "centrality": cmd_centrality,
    "aggregate": cmd_aggregate,
    "export": cmd_export,
}


def _exit_code(exc: BaseException) -> int:
    if isinstance(exc, StageError):
        return _exit_code(exc.cause)
    if isinstance(exc, NumericalError):
        return EXIT_NUMERIC
    if isinstance(exc, (DataError, OSError, UnicodeDecodeError)):
        return EXIT_DATA
    return EXIT_USAGE


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING - 10 * min(args.verbose, 2),
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        COMMANDS[args.command](args)
    except (StageError, DataError, NumericalError, OSError, UnicodeDecodeError, ValueError, UsageError) as exc:
        print(f"citecology {args.command}: error: {exc}", file=sys.stderr)
        return _exit_code(exc)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
