"""Command-line interface.

Subcommands:
  reconstruct  fill the native gaps of a dataset, emit completed long CSV
  sweep        masked-reconstruction experiment over sampling ratios/tails
  synth        generate a synthetic instance as long CSV
  info         dataset statistics

Every error exits nonzero after printing one diagnostic line to stderr.
"""

import argparse
import io
import sys

import numpy as np

from .config import SolverConfig
from .datasets import (
    densest_block,
    parse_intel_berkeley,
    parse_long_csv,
    parse_synth_spec,
    pivot_matrix,
    pivot_tensor,
    standardize_params,
    table_from_matrix,
    table_from_tensor,
    write_long_csv,
)
from .harness import (
    ALGORITHMS,
    MATRIX_ALGORITHMS,
    ExperimentError,
    ExperimentSpec,
    FileSource,
    SynthSource,
    emit_report,
    run_experiment,
    solve_once,
)
from .knn import KnnConfig
from .metrics import sampling_ratio

__all__ = ["main"]

_SOLVER_FLAG_DESTS = ("rho", "lambda0", "c_lambda", "lambda_min", "max_iters", "tol")
_LAMBDA_FLAGS = (("--lambda0", "lambda0"), ("--c-lambda", "c_lambda"),
                 ("--lambda-min", "lambda_min"))


def _add_source_flags(p, formats=("intel", "csv", "synth")):
    p.add_argument("--input", required=True,
                   help="dataset path, or the synth spec when --format synth")
    p.add_argument("--format", required=True, choices=formats)


def _add_solver_flags(p):
    p.add_argument("--rho", type=float, default=None)
    p.add_argument("--lambda0", type=float, default=None)
    p.add_argument("--c-lambda", type=float, default=None)
    p.add_argument("--lambda-min", type=float, default=None)
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--k", type=int, default=None, help="neighbor count (knn only)")
    p.add_argument("--standardize", choices=("on", "off"), default=None,
                   help="z-score attributes before solving (default: on for tensors)")
    p.add_argument("--z-update", choices=("paper", "exact"), default=None,
                   help="consensus update rule (radmac only)")


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sensorfill",
        description="Reconstruct missing sensor data by low-rank completion.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reconstruct",
                       help="fill native gaps, emit completed long CSV")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    _add_source_flags(p)
    p.add_argument("--attribute", action="append", default=None)
    _add_solver_flags(p)
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=_cmd_reconstruct)

    p = sub.add_parser("sweep", help="masked-reconstruction experiment sweep")
    p.add_argument("--algorithm", required=True, choices=ALGORITHMS)
    _add_source_flags(p)
    p.add_argument("--attribute", action="append", default=None)
    p.add_argument("--pattern", choices=("random", "consecutive"), default="random")
    p.add_argument("--ratio", action="append", type=float, default=None,
                   help="sampling ratio sweep value (random pattern; repeatable)")
    p.add_argument("--node-fraction", type=float, default=0.1,
                   help="fraction of nodes hit by the consecutive pattern")
    p.add_argument("--tail", action="append", type=float, default=None,
                   help="tail fraction sweep value (consecutive pattern; repeatable)")
    p.add_argument("--trials", type=int, default=30)
    p.add_argument("--seed", type=int, default=0)
    _add_solver_flags(p)
    p.add_argument("--out", default=None, help="report path (default stdout)")
    p.add_argument("--out-format", choices=("csv", "jsonl"), default="csv")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("synth", help="generate a synthetic dataset as long CSV")
    p.add_argument("--input", required=True,
                   help="synth spec, e.g. lowrank:50x60:rank=3:seed=7")
    p.add_argument("--out", default=None, help="output path (default stdout)")
    p.set_defaults(func=_cmd_synth)

    p = sub.add_parser("info", help="dataset statistics")
    _add_source_flags(p)
    p.set_defaults(func=_cmd_info)
    return parser


def _check_solver_flags(args):
    """Reject flags that do not apply to the chosen algorithm."""
    alg = args.algorithm
    if alg in ("halrtc", "knn"):
        for flag, dest in _LAMBDA_FLAGS:
            if getattr(args, dest) is not None:
                raise ValueError(f"{flag} does not apply to {alg}")
    if alg == "knn":
        for flag, dest in (("--rho", "rho"), ("--max-iters", "max_iters"),
                           ("--tol", "tol")):
            if getattr(args, dest) is not None:
                raise ValueError(f"{flag} does not apply to knn")
    if alg != "knn" and args.k is not None:
        raise ValueError("--k applies to knn only")
    if alg != "radmac" and args.z_update is not None:
        raise ValueError("--z-update applies to radmac only")


def _solver_config(args):
    overrides = {d: getattr(args, d) for d in _SOLVER_FLAG_DESTS
                 if getattr(args, d) is not None}
    return SolverConfig(**overrides)


def _knn_config(args):
    return KnnConfig(k=args.k) if args.k is not None else KnnConfig()


def _standardize_flag(args):
    if args.standardize is None:
        return None
    return args.standardize == "on"


def _load_table(path, format):
    parser = parse_intel_berkeley if format == "intel" else parse_long_csv
    with open(path, "r", encoding="utf-8", newline="") as fh:
        return parser(fh)


def _write_text(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_reconstruct(args):
    _check_solver_flags(args)
    solver = _solver_config(args)
    knn = _knn_config(args)
    z_update = args.z_update or "exact"

    if args.format == "synth":
        data = parse_synth_spec(args.input)
        if args.algorithm in MATRIX_ALGORITHMS and data.ndim != 2:
            raise ValueError(f"{args.algorithm} needs a matrix input")
        native = np.ones(data.shape, bool)
        attrs = ("value",) if data.ndim == 2 else tuple(
            f"a{j}" for j in range(data.shape[-1]))
        nodes = slots = None
    else:
        table = _load_table(args.input, args.format)
        if args.attribute is not None:
            attrs = tuple(args.attribute)
        elif args.algorithm in MATRIX_ALGORITHMS:
            attrs = table.attributes[:1]
        else:
            attrs = table.attributes
        if args.algorithm in MATRIX_ALGORITHMS and len(attrs) != 1:
            raise ValueError(f"{args.algorithm} takes exactly one attribute")
        if len(attrs) == 1:
            data, native = pivot_matrix(table, attrs[0])
            nodes, slots = table.nodes, list(table.slots)
        else:
            data, native, _ = pivot_tensor(table, attrs, standardize=False)
            nodes, slots = table.nodes, list(table.slots)

    standardize = _standardize_flag(args)
    if standardize is None:
        standardize = data.ndim == 3
    if standardize:
        params = standardize_params(data, native, attrs)
        work = np.where(native, params.apply(data), 0.0)
    else:
        params = None
        work = data

    estimate, _, _, _ = solve_once(args.algorithm, work, native,
                                   solver=solver, knn=knn, z_update=z_update)
    if params is not None:
        estimate = params.invert(estimate)
    completed = np.where(native, data, estimate)

    if completed.ndim == 2:
        out_table = table_from_matrix(completed, attribute=attrs[0],
                                      nodes=nodes, slots=slots)
    else:
        out_table = table_from_tensor(completed, attributes=attrs,
                                      nodes=nodes, slots=slots)
    buf = io.StringIO()
    write_long_csv(out_table, buf)
    _write_text(buf.getvalue(), args.out)
    return 0


def _cmd_sweep(args):
    _check_solver_flags(args)
    if args.pattern == "random":
        if args.tail is not None:
            raise ValueError("--tail applies to the consecutive pattern; use --ratio")
        sweep = args.ratio
    else:
        if args.ratio is not None:
            raise ValueError("--ratio applies to the random pattern; use --tail")
        sweep = args.tail
    if sweep is None:
        sweep = tuple(round(0.1 * i, 1) for i in range(1, 10))

    if args.format == "synth":
        source = SynthSource(args.input)
    else:
        source = FileSource(args.input, args.format)
    spec = ExperimentSpec(
        source=source,
        algorithm=args.algorithm,
        pattern=args.pattern,
        sweep=tuple(sweep),
        attributes=tuple(args.attribute) if args.attribute else None,
        node_fraction=args.node_fraction,
        trials=args.trials,
        base_seed=args.seed,
        solver=_solver_config(args),
        knn=_knn_config(args),
        standardize=_standardize_flag(args),
        z_update=args.z_update or "exact",
    )
    try:
        report = run_experiment(spec)
    except ExperimentError as exc:
        _write_text(emit_report(exc.partial, args.out_format), args.out)
        raise
    _write_text(emit_report(report, args.out_format), args.out)
    return 0


def _cmd_synth(args):
    data = parse_synth_spec(args.input)
    if data.ndim == 2:
        table = table_from_matrix(data)
    elif data.ndim == 3:
        table = table_from_tensor(data)
    else:
        raise ValueError(f"cannot serialize a {data.ndim}-way array as long CSV")
    buf = io.StringIO()
    write_long_csv(table, buf)
    _write_text(buf.getvalue(), args.out)
    return 0


def _cmd_info(args):
    lines = []
    if args.format == "synth":
        data = parse_synth_spec(args.input)
        lines.append(f"synth spec: {args.input}")
        lines.append(f"shape: {'x'.join(str(s) for s in data.shape)}")
        lines.append(f"values: min={data.min():.6g} max={data.max():.6g} "
                     f"mean={data.mean():.6g} std={data.std():.6g}")
    else:
        table = _load_table(args.input, args.format)
        lines.append(f"records: {len(table)}")
        lines.append(f"nodes: {len(table.nodes)}")
        lines.append(f"slots: {table.slots.start}..{table.slots.stop - 1} "
                     f"({len(table.slots)} total)")
        lines.append(f"attributes: {', '.join(table.attributes)}")
        lines.append(f"malformed lines skipped: {table.malformed_lines}")
        lines.append(f"duplicate readings (last wins): {table.duplicate_count}")
        total = len(table.nodes) * len(table.slots)
        for attr in table.attributes:
            count = sum(1 for key in table.values if key[2] == attr)
            ratio = count / total if total else 0.0
            lines.append(f"native observation ratio [{attr}]: {ratio:.4f} "
                         f"({count} of {total}); gap ratio {1 - ratio:.4f}")
        try:
            matrix, native = pivot_matrix(table, table.attributes[0])
            rows, cols = densest_block(native)
            block = native[rows][:, cols]
            lines.append(
                f"densest block [{table.attributes[0]}]: {len(rows)} nodes x "
                f"{cols.stop - cols.start} slots, completeness "
                f"{sampling_ratio(block):.4f}")
        except ValueError:
            pass
    _write_text("\n".join(lines) + "\n", None)
    return 0


def main(argv=None):
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # single diagnostic line, nonzero exit
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
