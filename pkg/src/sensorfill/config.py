"""Shared configuration and result containers for the ADMM solvers."""

from dataclasses import dataclass, field

import numpy as np

from .tensor_ops import masked_std

__all__ = ["SolverConfig", "ReconstructionResult", "resolve_rho"]


@dataclass
class SolverConfig:
    """Knobs shared by the ADMM-style completion solvers.

    Parameters
    ----------
    lambda0 : float
        Initial data-fit weight. The solvers shrink it geometrically by
        ``c_lambda`` each iteration until it reaches ``lambda_min``, which
        anneals from heavy smoothing toward interpolation of the observed
        entries.
    c_lambda : float
        Continuation factor in (0, 1).
    lambda_min : float
        Floor for the continuation; convergence is only declared once the
        floor is reached.
    rho : float or None
        ADMM penalty. None means "derive from the data" as
        0.1 / std(observed values); that derivation fails on constant
        observations, in which case rho must be given explicitly.
    max_iters : int
        Hard iteration cap.
    tol : float
        Relative-change threshold on the primary iterate.
    mode_weights : sequence of float, optional
        Per-mode shrinkage weights alpha_i for the tensor solvers (mode i is
        thresholded at alpha_i / rho). None means all ones, which is what the
        solvers' reference formulations use.
    """

    lambda0: float = 1.0
    c_lambda: float = 0.25
    lambda_min: float = 1e-6
    rho: float | None = None
    max_iters: int = 500
    tol: float = 1e-6
    mode_weights: tuple | None = None

    def __post_init__(self):
        if not 0.0 < self.lambda0 <= 1.0:
            raise ValueError("lambda0 must lie in (0, 1]")
        if not 0.0 < self.c_lambda < 1.0:
            raise ValueError("c_lambda must lie in (0, 1)")
        if not 0.0 < self.lambda_min <= self.lambda0:
            raise ValueError("lambda_min must lie in (0, lambda0]")
        if self.rho is not None and self.rho <= 0:
            raise ValueError("rho must be positive when given")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.mode_weights is not None:
            w = tuple(float(v) for v in self.mode_weights)
            if any(v <= 0 for v in w):
                raise ValueError("mode_weights must be positive")
            object.__setattr__(self, "mode_weights", w)

    def weights_for(self, ndim):
        """Resolved per-mode weights for an ndim-way tensor."""
        if self.mode_weights is None:
            return (1.0,) * ndim
        if len(self.mode_weights) != ndim:
            raise ValueError(
                f"mode_weights has {len(self.mode_weights)} entries "
                f"for a {ndim}-way tensor"
            )
        return self.mode_weights


@dataclass
class ReconstructionResult:
    """Output of one solver run.

    Attributes
    ----------
    estimate : ndarray
        Completed array, same shape as the input.
    iterations : int
        Number of iterations performed.
    converged : bool
        Whether the stopping rule fired before the iteration cap.
    final_lambda : float or None
        Data-fit weight at exit; None for solvers without continuation.
    residual_trace : list of float
        Relative change of the primary iterate per iteration.
    objective_trace : list of float
        Surrogate objective value per iteration.
    lambda_trace : list of float
        Data-fit weight per iteration; empty when not applicable.
    """

    estimate: np.ndarray
    iterations: int
    converged: bool
    final_lambda: float | None = None
    residual_trace: list = field(default_factory=list)
    objective_trace: list = field(default_factory=list)
    lambda_trace: list = field(default_factory=list)


def resolve_rho(cfg_rho, data, mask):
    """Penalty parameter: explicit value, else 0.1 / std(observed entries).

    Raises ValueError when no explicit rho is given and the observed values
    have zero spread (std of 0 gives no scale to derive from).
    """
    if cfg_rho is not None:
        return float(cfg_rho)
    std = masked_std(data, mask)
    if std == 0.0 or not np.isfinite(std):
        raise ValueError(
            "cannot derive rho: observed entries have zero spread; "
            "pass rho explicitly"
        )
    return 0.1 / std
