"""Tensor completion assuming every mode unfolding is low rank.

Solves

    min_X  sum_i alpha_i ||X_(i)||_*  +  (1 / 2 lambda) ||B o (X - T)||_F^2

by ADMM with one auxiliary tensor Y_i per mode; the X-update averages the
per-mode variables against the data term elementwise.
"""

from collections import namedtuple

import numpy as np

from ..config import ReconstructionResult, SolverConfig, resolve_rho
from ..shrinkage import _svt
from ..tensor_ops import fold, frobenius_norm, unfold
from ..validation import check_data_mask

__all__ = ["admac_reconstruct", "admac_iterations"]

AdmacIteration = namedtuple("AdmacIteration", "x ys us lam rel objective")


def admac_iterations(m, mask, cfg, rho):
    """Yield AdmacIteration states forever; the caller decides when to stop.

    `m` must already be zero-filled on unobserved entries. Each yielded
    objective is a surrogate: the nuclear terms are evaluated at the Y_i
    (where they are free byproducts of the shrinkage) and the fit term at X.
    """
    ndim = m.ndim
    weights = cfg.weights_for(ndim)
    x = np.zeros_like(m)
    us = [np.zeros_like(m) for _ in range(ndim)]
    lam = cfg.lambda0
    x_prev = x

    while True:
        ys = []
        nuclear = 0.0
        for i in range(ndim):
            shrunk, sigma = _svt(unfold(x - us[i], i), weights[i] / rho)
            ys.append(fold(shrunk, i, m.shape))
            nuclear += weights[i] * sigma.sum()

        accum = sum(y + u for y, u in zip(ys, us))
        x = ((1.0 / lam) * m + rho * accum) / ((1.0 / lam) * mask + ndim * rho)
        us = [u + y - x for u, y in zip(us, ys)]

        rel = frobenius_norm(x - x_prev) / max(1.0, frobenius_norm(x_prev))
        fit = frobenius_norm(np.where(mask, x, 0.0) - m)
        yield AdmacIteration(x, tuple(ys), tuple(us), lam, rel,
                             nuclear + 0.5 / lam * fit * fit)
        lam = max(cfg.c_lambda * lam, cfg.lambda_min)
        x_prev = x


def admac_reconstruct(data, mask, cfg=None):
    """Complete a partially observed tensor jointly low-rank in all modes.

    Parameters
    ----------
    data : array_like, at least 2-way
        Tensor with arbitrary values at unobserved positions.
    mask : array_like, same shape
        Boolean observation indicator.
    cfg : SolverConfig, optional

    Returns
    -------
    ReconstructionResult
    """
    cfg = cfg if cfg is not None else SolverConfig()
    m, mask = check_data_mask(data, mask)
    if m.ndim < 2:
        raise ValueError("data must be at least 2-dimensional")
    rho = resolve_rho(cfg.rho, m, mask)

    residuals, objectives, lambdas = [], [], []
    converged = False
    state = None
    steps = admac_iterations(m, mask, cfg, rho)
    for _ in range(cfg.max_iters):
        state = next(steps)
        residuals.append(state.rel)
        objectives.append(state.objective)
        lambdas.append(state.lam)
        if state.rel < cfg.tol and state.lam <= cfg.lambda_min:
            converged = True
            break

    return ReconstructionResult(
        estimate=state.x,
        iterations=len(residuals),
        converged=converged,
        final_lambda=lambdas[-1],
        residual_trace=residuals,
        objective_trace=objectives,
        lambda_trace=lambdas,
    )
