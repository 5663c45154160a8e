"""sensorfill: reconstruct missing sensor readings by low-rank completion.

Four ADMM-style solvers (one matrix, three tensor) plus a KNN baseline, a
seeded experiment harness, and dataset plumbing for sensor logs.
"""

from .config import ReconstructionResult, SolverConfig, resolve_rho
from .datasets import (
    INTEL_ATTRIBUTES,
    SensorTable,
    StandardizationParams,
    densest_block,
    parse_intel_berkeley,
    parse_long_csv,
    parse_synth_spec,
    pivot_matrix,
    pivot_tensor,
    standardize_params,
    synth_lowrank_matrix,
    synth_mixture_tensor,
    synth_tucker_tensor,
    table_from_matrix,
    table_from_tensor,
    write_long_csv,
)
from .estimators import (
    AdmacCompleter,
    AdrmCompleter,
    HalrtcCompleter,
    KnnCompleter,
    RadmacCompleter,
)
from .harness import (
    ALGORITHMS,
    ExperimentError,
    ExperimentReport,
    ExperimentSpec,
    FileSource,
    SynthSource,
    emit_report,
    run_experiment,
    solve_once,
)
from .knn import KnnConfig, knn_impute
from .masks import (
    ConsecutiveMissing,
    RandomMissing,
    generate_mask,
    realized_sampling_ratio,
)
from .metrics import error_ratio, sampling_ratio
from .shrinkage import nuclear_norm, numerical_rank, svd_factors, svt
from .solvers import (
    MixtureState,
    adrm_reconstruct,
    admac_reconstruct,
    halrtc_reconstruct,
    radmac_reconstruct,
)
from .tensor_ops import fold, frobenius_norm, unfold

__version__ = "0.1.0"

__all__ = [
    "SolverConfig",
    "ReconstructionResult",
    "resolve_rho",
    "adrm_reconstruct",
    "admac_reconstruct",
    "halrtc_reconstruct",
    "radmac_reconstruct",
    "MixtureState",
    "knn_impute",
    "KnnConfig",
    "error_ratio",
    "sampling_ratio",
    "generate_mask",
    "realized_sampling_ratio",
    "RandomMissing",
    "ConsecutiveMissing",
    "svt",
    "svd_factors",
    "nuclear_norm",
    "numerical_rank",
    "unfold",
    "fold",
    "frobenius_norm",
    "SensorTable",
    "StandardizationParams",
    "standardize_params",
    "INTEL_ATTRIBUTES",
    "parse_intel_berkeley",
    "parse_long_csv",
    "write_long_csv",
    "pivot_matrix",
    "pivot_tensor",
    "table_from_matrix",
    "table_from_tensor",
    "synth_lowrank_matrix",
    "synth_tucker_tensor",
    "synth_mixture_tensor",
    "parse_synth_spec",
    "densest_block",
    "AdrmCompleter",
    "AdmacCompleter",
    "HalrtcCompleter",
    "RadmacCompleter",
    "KnnCompleter",
    "ExperimentSpec",
    "ExperimentReport",
    "ExperimentError",
    "FileSource",
    "SynthSource",
    "run_experiment",
    "solve_once",
    "emit_report",
    "ALGORITHMS",
]
