"""Rank-minimization completion of a single-attribute sensor matrix.

Solves

    min_X  ||X||_*  +  (1 / 2 lambda) ||B o (X - M)||_F^2

by ADMM on the splitting X = Z, with lambda annealed geometrically toward
``lambda_min`` so the solution interpolates the observed entries ever more
tightly while staying low-rank.
"""

import numpy as np

from ..config import ReconstructionResult, SolverConfig, resolve_rho
from ..shrinkage import _svt, nuclear_norm
from ..tensor_ops import frobenius_norm
from ..validation import check_data_mask

__all__ = ["adrm_reconstruct"]


def _objective(w, m, mask, lam):
    """||W||_* + (1/2 lambda) ||B o (W - M)||_F^2 with M already zero-filled."""
    fit = frobenius_norm(np.where(mask, w, 0.0) - m)
    return nuclear_norm(w) + 0.5 / lam * fit * fit


def adrm_reconstruct(data, mask, cfg=None):
    """Complete a partially observed matrix by annealed ADMM rank minimization.

    Parameters
    ----------
    data : array_like of shape (n, t)
        Matrix with arbitrary values at unobserved positions.
    mask : array_like of shape (n, t)
        Boolean observation indicator; True marks an observed entry.
    cfg : SolverConfig, optional
        Solver parameters. Defaults are the reference settings.

    Returns
    -------
    ReconstructionResult
        The completed matrix plus per-iteration traces.

    Raises
    ------
    ValueError
        Empty mask, or rho underivable from constant observed data.
    numpy.linalg.LinAlgError
        If an SVD fails to converge.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    m, mask = check_data_mask(data, mask, ndim=2)
    rho = resolve_rho(cfg.rho, m, mask)

    lam = cfg.lambda0
    z = np.zeros_like(m)
    u = np.zeros_like(m)
    x_prev = np.zeros_like(m)
    residuals, objectives, lambdas = [], [], []
    x = x_prev
    converged = False
    iterations = 0

    for _ in range(cfg.max_iters):
        iterations += 1
        x, _ = _svt(z - u, 1.0 / rho)
        z = ((1.0 / lam) * m + rho * (x + u)) / ((1.0 / lam) * mask + rho)
        u = u + x - z

        rel = frobenius_norm(x - x_prev) / max(1.0, frobenius_norm(x_prev))
        residuals.append(rel)
        objectives.append(_objective(0.5 * (x + z), m, mask, lam))
        lambdas.append(lam)
        x_prev = x

        if rel < cfg.tol and lam <= cfg.lambda_min:
            converged = True
            break
        lam = max(cfg.c_lambda * lam, cfg.lambda_min)

    return ReconstructionResult(
        estimate=x,
        iterations=iterations,
        converged=converged,
        final_lambda=lambdas[-1],
        residual_trace=residuals,
        objective_trace=objectives,
        lambda_trace=lambdas,
    )
