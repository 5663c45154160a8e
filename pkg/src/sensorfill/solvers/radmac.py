"""Mixture-model tensor completion for tensors low-rank in only some modes.

The estimate is a sum of N component tensors, the i-th penalized for rank
only in its own mode:

    min_{X_1..X_N}  sum_i alpha_i ||X_i,(i)||_*
                    + (1 / 2 lambda) ||B o (sum_i X_i - T)||_F^2

ADMM in sharing form: because all per-mode dual variables coincide when
started from zero, a single scaled dual U and the consensus average Z-bar
suffice.
"""

from collections import namedtuple
from dataclasses import dataclass

import numpy as np

from ..config import ReconstructionResult, SolverConfig, resolve_rho
from ..shrinkage import _svt
from ..tensor_ops import fold, frobenius_norm, unfold
from ..validation import check_data_mask

__all__ = ["radmac_reconstruct", "radmac_iterations", "MixtureState", "Z_UPDATES"]

Z_UPDATES = ("exact", "paper")


@dataclass(frozen=True)
class MixtureState:
    """Solver state after one iteration.

    Attributes
    ----------
    components : tuple of ndarray
        The N component tensors X_i; the estimate is their sum.
    x_bar : ndarray
        Mode average of the components, (1/N) sum_i X_i.
    z_bar : ndarray
        Shared consensus variable.
    u : ndarray
        Single scaled dual variable.
    """

    components: tuple
    x_bar: np.ndarray
    z_bar: np.ndarray
    u: np.ndarray


RadmacIteration = namedtuple("RadmacIteration", "state lam rel objective")


def _z_bar_update(rule, m, mask, lam, rho, x_bar, u, ndim):
    if rule == "exact":
        left = (ndim / lam) * mask + rho
        right = rho * (x_bar + u) + (1.0 / lam) * m
    elif rule == "paper":
        left = (1.0 / lam) * mask + rho
        right = rho * (x_bar + u) + (1.0 / (ndim * lam)) * m
    else:
        raise ValueError(f"z_update must be one of {Z_UPDATES}, got {rule!r}")
    return right / left


def radmac_iterations(m, mask, cfg, rho, z_update="exact"):
    """Yield RadmacIteration records forever; caller decides when to stop.

    `m` must be zero-filled on unobserved entries. The yielded objective
    evaluates the nuclear terms exactly at the components (byproducts of the
    shrinkage) and the fit term at their sum, with the iteration's lambda.
    """
    if z_update not in Z_UPDATES:
        raise ValueError(f"z_update must be one of {Z_UPDATES}, got {z_update!r}")
    ndim = m.ndim
    weights = cfg.weights_for(ndim)
    xs = [np.zeros_like(m) for _ in range(ndim)]
    z_bar = np.zeros_like(m)
    u = np.zeros_like(m)
    lam = cfg.lambda0
    est_prev = np.zeros_like(m)

    while True:
        x_bar_old = sum(xs) / ndim
        nuclear = 0.0
        new_xs = []
        for i in range(ndim):
            operand = xs[i] - x_bar_old + z_bar - u
            shrunk, sigma = _svt(unfold(operand, i), weights[i] / rho)
            new_xs.append(fold(shrunk, i, m.shape))
            nuclear += weights[i] * sigma.sum()
        xs = new_xs

        x_bar = sum(xs) / ndim
        z_bar = _z_bar_update(z_update, m, mask, lam, rho, x_bar, u, ndim)
        u = u + x_bar - z_bar

        estimate = sum(xs)
        rel = frobenius_norm(estimate - est_prev) / max(1.0, frobenius_norm(est_prev))
        fit = frobenius_norm(np.where(mask, estimate, 0.0) - m)
        state = MixtureState(tuple(xs), x_bar, z_bar, u)
        yield RadmacIteration(state, lam, rel, nuclear + 0.5 / lam * fit * fit)
        lam = max(cfg.c_lambda * lam, cfg.lambda_min)
        est_prev = estimate


def radmac_reconstruct(data, mask, cfg=None, z_update="exact"):
    """Complete a tensor that is rank-deficient in only some of its modes.

    Parameters
    ----------
    data : array_like, at least 2-way
    mask : array_like, same shape
        Boolean observation indicator.
    cfg : SolverConfig, optional
    z_update : {"exact", "paper"}
        Which closed form to use for the consensus update. "exact" solves
        the averaged subproblem exactly; "paper" uses the reference variant,
        which differs by a factor N in the data term.

    Returns
    -------
    ReconstructionResult
        `estimate` is the sum of the N components.

    Notes
    -----
    Besides the usual relative-change test, convergence requires the
    consensus residual ||x_bar - z_bar||_F / max(1, ||z_bar||_F) to drop
    below ``tol``, so the sharing average and the consensus variable agree
    whenever ``converged`` is True.
    """
    cfg = cfg if cfg is not None else SolverConfig()
    m, mask = check_data_mask(data, mask)
    if m.ndim < 2:
        raise ValueError("data must be at least 2-dimensional")
    rho = resolve_rho(cfg.rho, m, mask)

    residuals, objectives, lambdas = [], [], []
    converged = False
    step = None
    steps = radmac_iterations(m, mask, cfg, rho, z_update)
    for _ in range(cfg.max_iters):
        step = next(steps)
        residuals.append(step.rel)
        objectives.append(step.objective)
        lambdas.append(step.lam)
        consensus = frobenius_norm(step.state.x_bar - step.state.z_bar) / max(
            1.0, frobenius_norm(step.state.z_bar)
        )
        if step.rel < cfg.tol and consensus < cfg.tol and step.lam <= cfg.lambda_min:
            converged = True
            break

    return ReconstructionResult(
        estimate=sum(step.state.components),
        iterations=len(residuals),
        converged=converged,
        final_lambda=lambdas[-1],
        residual_trace=residuals,
        objective_trace=objectives,
        lambda_trace=lambdas,
    )
