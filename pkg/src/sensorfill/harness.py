"""Experiment driver: generate masks, solve, score, sweep, repeat.

The protocol per sweep value and trial: derive the trial seed as
base_seed + trial_index, draw an artificial missing mask, hide those
entries, reconstruct, and score the error ratio on the artificially hidden
(but natively observed) entries only, in original units.
"""

import csv
import io
import json
import time
from dataclasses import dataclass, field, replace

import numpy as np

from .config import SolverConfig, resolve_rho
from .datasets import (
    densest_block,
    parse_intel_berkeley,
    parse_long_csv,
    parse_synth_spec,
    pivot_matrix,
    pivot_tensor,
    standardize_params,
)
from .knn import KnnConfig, knn_impute
from .masks import ConsecutiveMissing, RandomMissing, generate_mask
from .metrics import error_ratio, sampling_ratio
from .solvers import (
    adrm_reconstruct,
    admac_reconstruct,
    halrtc_reconstruct,
    radmac_reconstruct,
)
from .solvers.radmac import Z_UPDATES

__all__ = [
    "ALGORITHMS",
    "MATRIX_ALGORITHMS",
    "PATTERNS",
    "FileSource",
    "SynthSource",
    "ExperimentSpec",
    "ExperimentReport",
    "ExperimentError",
    "TrialRow",
    "SweepAggregate",
    "run_experiment",
    "solve_once",
    "emit_report",
    "REPORT_COLUMNS",
]

ALGORITHMS = ("adrm", "admac", "halrtc", "radmac", "knn")
MATRIX_ALGORITHMS = ("adrm", "knn")
PATTERNS = ("random", "consecutive")

REPORT_COLUMNS = (
    "aggregate",
    "algorithm",
    "pattern",
    "sweep_value",
    "trial",
    "seed",
    "realized_sampling_ratio",
    "error_ratio",
    "error_ratio_std",
    "iterations",
    "converged",
    "rho",
    "wall_time_s",
)


@dataclass(frozen=True)
class FileSource:
    """A sensor log on disk; format is "intel" or "csv" (long format)."""

    path: str
    format: str

    def __post_init__(self):
        if self.format not in ("intel", "csv"):
            raise ValueError(f"format must be 'intel' or 'csv', got {self.format!r}")


@dataclass(frozen=True)
class SynthSource:
    """A synthetic instance described by a parse_synth_spec string."""

    spec: str


@dataclass
class ExperimentSpec:
    """Everything needed to reproduce one experiment.

    sweep values are sampling ratios for the random pattern and tail
    fractions for the consecutive pattern, each strictly inside (0, 1) so
    the held-out evaluation set is never empty.

    standardize None means "on for 3-way inputs, off for matrices".
    """

    source: object
    algorithm: str
    pattern: str = "random"
    sweep: tuple = (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9)
    attributes: tuple = None
    node_fraction: float = 0.1
    trials: int = 30
    base_seed: int = 0
    solver: SolverConfig = field(default_factory=SolverConfig)
    knn: KnnConfig = field(default_factory=KnnConfig)
    standardize: bool = None
    z_update: str = "exact"
    completeness_threshold: float = 0.95

    def __post_init__(self):
        if not isinstance(self.source, (FileSource, SynthSource)):
            raise ValueError("source must be a FileSource or SynthSource")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}")
        if self.pattern not in PATTERNS:
            raise ValueError(f"unknown pattern {self.pattern!r}")
        sweep = tuple(float(v) for v in self.sweep)
        if not sweep:
            raise ValueError("sweep must be nonempty")
        if any(not 0.0 < v < 1.0 for v in sweep):
            raise ValueError("sweep values must lie strictly in (0, 1)")
        self.sweep = sweep
        if self.attributes is not None:
            self.attributes = tuple(str(a) for a in self.attributes)
            if not self.attributes:
                raise ValueError("attributes, when given, must be nonempty")
        if not 0.0 < self.node_fraction <= 1.0:
            raise ValueError("node_fraction must lie in (0, 1]")
        if self.trials < 1:
            raise ValueError("trials must be at least 1")
        if self.z_update not in Z_UPDATES:
            raise ValueError(f"z_update must be one of {Z_UPDATES}")


@dataclass
class TrialRow:
    algorithm: str
    pattern: str
    sweep_value: float
    trial: int
    seed: int
    realized_sampling_ratio: float
    error_ratio: float
    iterations: int
    converged: bool
    rho: float
    wall_time_s: float


@dataclass
class SweepAggregate:
    algorithm: str
    pattern: str
    sweep_value: float
    realized_sampling_ratio: float
    error_ratio_mean: float
    error_ratio_std: float
    n_trials: int


@dataclass
class ExperimentReport:
    """Trial rows, per-sweep-point aggregates, and the full config echo."""

    rows: list = field(default_factory=list)
    aggregates: list = field(default_factory=list)
    config: dict = field(default_factory=dict)


class ExperimentError(RuntimeError):
    """A trial failed; .partial holds the rows completed so far."""

    def __init__(self, message, partial):
        super().__init__(message)
        self.partial = partial


@dataclass
class _Prepared:
    truth: np.ndarray
    native: np.ndarray
    attributes: tuple
    description: dict


def _load_table(source):
    parser = parse_intel_berkeley if source.format == "intel" else parse_long_csv
    with open(source.path, "r", encoding="utf-8", newline="") as fh:
        return parser(fh)


def _prepare(spec):
    """Load the source and cut it to the complete block used as truth."""
    if isinstance(spec.source, SynthSource):
        truth = parse_synth_spec(spec.source.spec)
        if spec.algorithm in MATRIX_ALGORITHMS and truth.ndim != 2:
            raise ValueError(
                f"{spec.algorithm} needs a matrix; synth spec gives {truth.ndim}-way data"
            )
        attrs = ("value",) if truth.ndim == 2 else tuple(
            f"a{j}" for j in range(truth.shape[-1])
        )
        desc = {"source": f"synth:{spec.source.spec}", "shape": list(truth.shape)}
        return _Prepared(truth, np.ones(truth.shape, bool), attrs, desc)

    table = _load_table(spec.source)
    if spec.attributes is not None:
        attrs = spec.attributes
    elif spec.algorithm in MATRIX_ALGORITHMS:
        attrs = table.attributes[:1]
    else:
        attrs = table.attributes
    if spec.algorithm in MATRIX_ALGORITHMS and len(attrs) != 1:
        raise ValueError(f"{spec.algorithm} takes exactly one attribute")

    desc = {
        "source": f"{spec.source.format}:{spec.source.path}",
        "attributes": list(attrs),
    }
    if len(attrs) == 1:
        matrix, native = pivot_matrix(table, attrs[0])
        node_rows, slot_cols = densest_block(native, spec.completeness_threshold)
        truth = matrix[node_rows][:, slot_cols]
        native = native[node_rows][:, slot_cols]
        desc["block_nodes"] = [table.nodes[i] for i in node_rows]
        desc["block_slots"] = [int(table.slots[slot_cols.start]),
                               int(table.slots[slot_cols.stop - 1])]
    else:
        tensor, native3, _ = pivot_tensor(table, attrs, standardize=False)
        completeness = native3.mean(axis=2).T
        node_rows, slot_cols = densest_block(completeness, spec.completeness_threshold)
        truth = tensor[slot_cols][:, node_rows, :]
        native = native3[slot_cols][:, node_rows, :]
        desc["block_nodes"] = [table.nodes[i] for i in node_rows]
        desc["block_slots"] = [int(table.slots[slot_cols.start]),
                               int(table.slots[slot_cols.stop - 1])]
    desc["shape"] = list(truth.shape)
    return _Prepared(truth, native, attrs, desc)


def _pattern_for(spec, value, seed, ndim):
    if spec.pattern == "random":
        return RandomMissing(sampling_ratio=value, seed=seed)
    node_axis, time_axis = (0, 1) if ndim == 2 else (1, 0)
    return ConsecutiveMissing(node_fraction=spec.node_fraction,
                              tail_fraction=value, seed=seed,
                              node_axis=node_axis, time_axis=time_axis)


def solve_once(algorithm, data, mask, solver=None, knn=None, z_update="exact"):
    """Dispatch one reconstruction by algorithm name.

    Returns (estimate, iterations, converged, rho); the last three are None
    for knn. For halrtc the lambda fields of `solver` are ignored per that
    algorithm's contract.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    if algorithm == "knn":
        cfg = knn if knn is not None else KnnConfig()
        return knn_impute(data, mask, cfg), None, None, None
    cfg = solver if solver is not None else SolverConfig()
    rho = resolve_rho(cfg.rho, np.where(mask, data, 0.0), np.asarray(mask, bool))
    if algorithm == "halrtc":
        res = halrtc_reconstruct(data, mask, rho=rho,
                                 max_iters=cfg.max_iters, tol=cfg.tol)
    else:
        cfg = replace(cfg, rho=rho)
        if algorithm == "adrm":
            res = adrm_reconstruct(data, mask, cfg)
        elif algorithm == "admac":
            res = admac_reconstruct(data, mask, cfg)
        else:
            res = radmac_reconstruct(data, mask, cfg, z_update=z_update)
    return res.estimate, res.iterations, res.converged, rho


def _run_trial(spec, prep, standardize, sweep_value, trial):
    seed = spec.base_seed + trial
    start = time.perf_counter()
    artificial = generate_mask(prep.truth.shape,
                               _pattern_for(spec, sweep_value, seed, prep.truth.ndim))
    observed = prep.native & artificial
    eval_set = prep.native & ~artificial

    if standardize:
        params = standardize_params(prep.truth, observed, prep.attributes)
        work = np.where(observed, params.apply(prep.truth), 0.0)
    else:
        params = None
        work = prep.truth

    estimate, iterations, converged, rho = solve_once(
        spec.algorithm, work, observed,
        solver=spec.solver, knn=spec.knn, z_update=spec.z_update)
    if params is not None:
        estimate = params.invert(estimate)
    err = error_ratio(prep.truth, estimate, eval_set)

    return TrialRow(
        algorithm=spec.algorithm,
        pattern=spec.pattern,
        sweep_value=sweep_value,
        trial=trial,
        seed=seed,
        realized_sampling_ratio=sampling_ratio(observed),
        error_ratio=err,
        iterations=iterations,
        converged=converged,
        rho=rho,
        wall_time_s=time.perf_counter() - start,
    )


def run_experiment(spec):
    """Run the full sweep x trials grid described by `spec`.

    Raises ExperimentError on the first failing trial, with the rows
    completed so far attached as .partial so callers can flush them.
    """
    prep = _prepare(spec)
    standardize = spec.standardize
    if standardize is None:
        standardize = prep.truth.ndim == 3

    config = {
        "algorithm": spec.algorithm,
        "pattern": spec.pattern,
        "sweep": list(spec.sweep),
        "node_fraction": spec.node_fraction,
        "trials": spec.trials,
        "base_seed": spec.base_seed,
        "standardize": standardize,
        "solver": {
            "lambda0": spec.solver.lambda0,
            "c_lambda": spec.solver.c_lambda,
            "lambda_min": spec.solver.lambda_min,
            "rho": spec.solver.rho,
            "max_iters": spec.solver.max_iters,
            "tol": spec.solver.tol,
        },
        **prep.description,
    }
    if spec.algorithm == "radmac":
        config["z_update"] = spec.z_update
    if spec.algorithm == "knn":
        config["knn"] = {"k": spec.knn.k, "min_overlap": spec.knn.min_overlap}

    report = ExperimentReport(config=config)
    for sweep_value in spec.sweep:
        errs = []
        realized = []
        for trial in range(spec.trials):
            try:
                row = _run_trial(spec, prep, standardize, sweep_value, trial)
            except Exception as exc:
                raise ExperimentError(
                    f"sweep value {sweep_value}, trial {trial}: {exc}", report
                ) from exc
            report.rows.append(row)
            errs.append(row.error_ratio)
            realized.append(row.realized_sampling_ratio)
        report.aggregates.append(SweepAggregate(
            algorithm=spec.algorithm,
            pattern=spec.pattern,
            sweep_value=sweep_value,
            realized_sampling_ratio=float(np.mean(realized)),
            error_ratio_mean=float(np.mean(errs)),
            error_ratio_std=float(np.std(errs)),
            n_trials=spec.trials,
        ))
    return report


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _row_record(row):
    return {
        "aggregate": "",
        "algorithm": row.algorithm,
        "pattern": row.pattern,
        "sweep_value": row.sweep_value,
        "trial": row.trial,
        "seed": row.seed,
        "realized_sampling_ratio": row.realized_sampling_ratio,
        "error_ratio": row.error_ratio,
        "error_ratio_std": None,
        "iterations": row.iterations,
        "converged": row.converged,
        "rho": row.rho,
        "wall_time_s": row.wall_time_s,
    }


def _aggregate_record(agg):
    return {
        "aggregate": "mean",
        "algorithm": agg.algorithm,
        "pattern": agg.pattern,
        "sweep_value": agg.sweep_value,
        "trial": None,
        "seed": None,
        "realized_sampling_ratio": agg.realized_sampling_ratio,
        "error_ratio": agg.error_ratio_mean,
        "error_ratio_std": agg.error_ratio_std,
        "iterations": None,
        "converged": None,
        "rho": None,
        "wall_time_s": None,
    }


def emit_report(report, format="csv"):
    """Serialize a report as text: "csv" or "jsonl".

    Both formats carry one record per trial row plus one per sweep
    aggregate, with identical keys (REPORT_COLUMNS); the `aggregate` column
    is "" for trials and "mean" for aggregates. The config echo appears as
    `# key=value` comment lines in csv and as a leading
    {"aggregate": "config", ...} object in jsonl.
    """
    records = [_row_record(r) for r in report.rows]
    records += [_aggregate_record(a) for a in report.aggregates]
    if format == "csv":
        buf = io.StringIO()
        for key in sorted(report.config):
            buf.write(f"# {key}={json.dumps(report.config[key])}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_COLUMNS)
        for rec in records:
            writer.writerow([_cell(rec[k]) for k in REPORT_COLUMNS])
        return buf.getvalue()
    if format == "jsonl":
        lines = [json.dumps({"aggregate": "config", "config": report.config})]
        lines += [json.dumps(rec) for rec in records]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")
