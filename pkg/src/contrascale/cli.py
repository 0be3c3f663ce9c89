"""Command-line driver for the whole pipeline.

Structured results go to stdout as JSON (human-readable tables behind
``--pretty``); diagnostics go to stderr.  Exit status: 0 success, 1 usage
error, 2 data error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .adjust import (
    NotPreprocessedError,
    delta_adjust,
    influence,
    influence_csv,
    influence_json,
    influence_table,
    selection_json,
)
from .bench import (
    ExperimentConfig,
    benchmark_enumeration,
    experiment_result_csv,
    experiment_result_json,
    run_knowledge_experiment,
    run_structure_experiment,
)
from .context import (
    FormalContext,
    NotClarifiedError,
    SubcontextSelection,
    apply_selection,
    clarify,
    pq_core,
    reduce_context,
)
from .formats import ContextParseError, dumps_csv, dumps_cxt, infer_format, load_context
from .lattice import (
    canonical_base,
    concepts_json,
    enumerate_concepts,
    implication_to_line,
    implications_json,
)
from .scales import (
    ALGORITHMS,
    ScaleCount,
    count_report_json,
    count_scales,
    enumerate_scales,
    scale_to_json_obj,
    scale_to_line,
)

USAGE_EXIT = 1
DATA_EXIT = 2

_DataError = (ContextParseError, NotClarifiedError, NotPreprocessedError, ValueError, OSError)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # noqa: D102 - argparse hook
        raise _UsageError(message)


def _default_threads() -> int:
    raw = os.environ.get("CONTRASCALE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _read_context(args: argparse.Namespace) -> FormalContext:
    fmt = args.format or infer_format(args.input)
    if args.input == "-":
        return load_context(sys.stdin, fmt)
    return load_context(args.input, fmt)


def _emit(args: argparse.Namespace, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if getattr(args, "output", None):
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_input(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("input", help="context file, or - for stdin")
    parser.add_argument(
        "--format",
        choices=("cxt", "csv"),
        help="input format (default: from the file extension)",
    )


def _add_output(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-o", "--output", help="write to this file instead of stdout")


def build_parser() -> _Parser:
    parser = _Parser(prog="contrascale", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("convert", help="convert between cxt and csv")
    _add_input(p)
    _add_output(p)
    p.add_argument("--to", choices=("cxt", "csv"), required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("stats", help="size and density descriptives")
    _add_input(p)
    _add_output(p)
    p.add_argument(
        "--full",
        action="store_true",
        help="also compute concept and base statistics (can be slow)",
    )
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("preprocess", help="clarify and/or reduce a context")
    _add_input(p)
    _add_output(p)
    p.add_argument("--mode", choices=("clarify", "reduce", "both"), default="both")
    p.add_argument("--to", choices=("cxt", "csv"), default="cxt")
    p.add_argument("--trace", help="write the clarification/reduction trace JSON here")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("core", help="peel to the (p,q)-core")
    _add_input(p)
    _add_output(p)
    p.add_argument("-p", type=int, required=True, help="minimum crosses per object")
    p.add_argument("-q", type=int, required=True, help="minimum crosses per attribute")
    p.add_argument("--to", choices=("cxt", "csv"), help="emit the core as a context file")
    p.set_defaults(func=cmd_core)

    p = sub.add_parser("scales", help="enumerate contranominal scales")
    _add_input(p)
    _add_output(p)
    p.add_argument("--algorithm", choices=ALGORITHMS, default="backtracking")
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--min-dim", type=int, help="peel a core and keep dimensions >= this")
    p.add_argument(
        "--preprocess",
        action="store_true",
        help="enumerate on the clarified+reduced context and reconstruct",
    )
    p.add_argument("--pretty", action="store_true", help="one scale per line instead of JSON")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_scales)

    p = sub.add_parser("influence", help="per-attribute influence report")
    _add_input(p)
    _add_output(p)
    p.add_argument("--delta", help="mark the selection for this delta in the table")
    p.add_argument("--pretty", action="store_true")
    p.add_argument("--csv", action="store_true")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_influence)

    p = sub.add_parser("adjust", help="select the low-influence attribute subset")
    _add_input(p)
    _add_output(p)
    p.add_argument("--delta", required=True)
    p.add_argument("--to", choices=("cxt", "csv"), help="emit the adjusted subcontext")
    p.add_argument("--threads", type=int, default=_default_threads())
    p.set_defaults(func=cmd_adjust)

    p = sub.add_parser("concepts", help="enumerate formal concepts")
    _add_input(p)
    _add_output(p)
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=cmd_concepts)

    p = sub.add_parser("base", help="canonical implication base")
    _add_input(p)
    _add_output(p)
    p.add_argument("--count-only", action="store_true")
    p.add_argument("--pretty", action="store_true", help="one implication per line")
    p.set_defaults(func=cmd_base)

    p = sub.add_parser("experiment", help="structure or knowledge experiments")
    exp = p.add_subparsers(dest="experiment", required=True)

    ps = exp.add_parser("structure", help="concept/base shrinkage for one delta")
    _add_input(ps)
    _add_output(ps)
    ps.add_argument("--delta", default="0.5")
    ps.add_argument("--samples", type=int, default=10)
    ps.add_argument("--seed", type=int, default=0)
    ps.set_defaults(func=cmd_experiment_structure)

    pk = exp.add_parser("knowledge", help="decision-tree label prediction")
    _add_input(pk)
    _add_output(pk)
    pk.add_argument("--delta", default="0.5")
    pk.add_argument("--repetitions", type=int, default=1000)
    pk.add_argument("--split", type=float, default=0.5)
    pk.add_argument("--seed", type=int, required=True)
    pk.add_argument("--method", choices=("adjusted", "sampled", "both"), default="both")
    pk.add_argument("--csv", action="store_true", help="summary CSV instead of JSON")
    pk.set_defaults(func=cmd_experiment_knowledge)

    p = sub.add_parser("bench", help="time the enumeration algorithms")
    _add_input(p)
    _add_output(p)
    p.add_argument(
        "--algorithms",
        default=",".join(ALGORITHMS),
        help="comma-separated subset of: " + ", ".join(ALGORITHMS),
    )
    p.add_argument("--timeout", type=float, help="per-algorithm budget in seconds")
    p.set_defaults(func=cmd_bench)

    return parser


# -- subcommands ----------------------------------------------------------------


def cmd_convert(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    _emit(args, dumps_cxt(ctx) if args.to == "cxt" else dumps_csv(ctx))
    return 0


def cmd_stats(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    payload: dict = {
        "objects": ctx.n_objects,
        "attributes": ctx.n_attributes,
        "density": round(ctx.density, 6),
    }
    if args.full:
        concepts = enumerate_concepts(ctx)
        n = len(concepts)
        payload["concepts"] = n
        payload["mean_objects_per_concept"] = round(
            sum(len(c.extent) for c in concepts) / n, 4
        )
        payload["mean_attributes_per_concept"] = round(
            sum(len(c.intent) for c in concepts) / n, 4
        )
        payload["canonical_base_size"] = len(canonical_base(ctx))
    _emit(args, json.dumps(payload, indent=2))
    return 0


def cmd_preprocess(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    trace_payload: dict = {}
    if args.mode in ("clarify", "both"):
        ctx, cmap = clarify(ctx)
        trace_payload["object_classes"] = [list(c) for c in cmap.object_classes]
        trace_payload["attribute_classes"] = [list(c) for c in cmap.attribute_classes]
    if args.mode in ("reduce", "both"):
        ctx, trace = reduce_context(ctx)
        trace_payload["removed_attributes"] = [
            {"index": x, "replacement": list(w)} for x, w in trace.removed_attributes
        ]
        trace_payload["removed_objects"] = [
            {"index": x, "replacement": list(w)} for x, w in trace.removed_objects
        ]
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(json.dumps(trace_payload, indent=2) + "\n")
    _emit(args, dumps_cxt(ctx) if args.to == "cxt" else dumps_csv(ctx))
    return 0


def cmd_core(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    selection = pq_core(ctx, args.p, args.q)
    if args.to:
        core_ctx = apply_selection(selection)
        _emit(args, dumps_cxt(core_ctx) if args.to == "cxt" else dumps_csv(core_ctx))
    else:
        payload = {
            "objects": [ctx.objects[g] for g in selection.object_indices],
            "attributes": [ctx.attributes[m] for m in selection.attribute_indices],
        }
        _emit(args, json.dumps(payload, indent=2))
    return 0


def cmd_scales(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    if args.count_only:
        if args.algorithm == "backtracking":
            count = count_scales(ctx, min_dimension=args.min_dim, threads=args.threads)
        else:
            histogram: dict[int, int] = {}
            for scale in enumerate_scales(ctx, algorithm=args.algorithm, min_dimension=args.min_dim):
                histogram[scale.dimension] = histogram.get(scale.dimension, 0) + 1
            count = ScaleCount(
                sum(histogram.values()),
                dict(sorted(histogram.items())),
                max(histogram, default=0),
            )
        _emit(args, count_report_json(count))
        return 0
    stream = enumerate_scales(
        ctx,
        algorithm=args.algorithm,
        min_dimension=args.min_dim,
        preprocess=args.preprocess,
        threads=args.threads,
    )
    if args.pretty:
        lines = [scale_to_line(s, ctx) for s in stream]
        _emit(args, "\n".join(lines) if lines else "")
    else:
        _emit(args, json.dumps([scale_to_json_obj(s, ctx) for s in stream], indent=2))
    return 0


def cmd_influence(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    if args.pretty:
        _emit(args, influence_table(ctx, args.delta))
        return 0
    report = influence(ctx, threads=args.threads)
    _emit(args, influence_csv(report) if args.csv else influence_json(report))
    return 0


def cmd_adjust(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    selection = delta_adjust(ctx, args.delta, threads=args.threads)
    if args.to:
        sub = apply_selection(
            SubcontextSelection(ctx, tuple(range(ctx.n_objects)), selection.attributes)
        )
        _emit(args, dumps_cxt(sub) if args.to == "cxt" else dumps_csv(sub))
    else:
        _emit(args, selection_json(selection, ctx))
    return 0


def cmd_concepts(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    concepts = enumerate_concepts(ctx)
    if args.count_only:
        _emit(args, json.dumps({"concepts": len(concepts)}, indent=2))
    else:
        _emit(args, concepts_json(concepts, ctx))
    return 0


def cmd_base(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    base = canonical_base(ctx)
    if args.count_only:
        _emit(args, json.dumps({"implications": len(base)}, indent=2))
    elif args.pretty:
        _emit(args, "\n".join(implication_to_line(imp, ctx) for imp in base))
    else:
        _emit(args, implications_json(base, ctx))
    return 0


def cmd_experiment_structure(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    payload = run_structure_experiment(
        ctx, args.delta, samples=args.samples, seed=args.seed
    )
    _emit(args, json.dumps(payload, indent=2))
    return 0


def cmd_experiment_knowledge(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    methods = ("adjusted", "sampled") if args.method == "both" else (args.method,)
    results = [
        run_knowledge_experiment(
            ctx,
            ExperimentConfig(
                seed=args.seed,
                delta=float(Fraction(args.delta)),
                repetitions=args.repetitions,
                split_fraction=args.split,
                method=method,
            ),
        )
        for method in methods
    ]
    if args.csv:
        _emit(args, experiment_result_csv(results))
    elif len(results) == 1:
        _emit(args, experiment_result_json(results[0]))
    else:
        payload = [json.loads(experiment_result_json(r)) for r in results]
        _emit(args, json.dumps(payload, indent=2))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    ctx = _read_context(args)
    algorithms = tuple(a.strip() for a in args.algorithms.split(",") if a.strip())
    report = benchmark_enumeration(ctx, algorithms, timeout=args.timeout)
    _emit(args, json.dumps(report, indent=2))
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    try:
        return args.func(args)
    except _DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DATA_EXIT


if __name__ == "__main__":
    sys.exit(main())
