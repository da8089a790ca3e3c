"""Slack-constrained kernel SVM training by stochastic supergradient ascent.

The solver maximizes the margin subject to ||w|| <= 1 and a total slack
budget of n*nu, representing w through coefficients on the training points.
Each iteration finds the water level of the cached responses, samples a
covered point, bumps its coefficient, refreshes all responses with one
kernel row (n evaluations), and projects back to the unit ball. The
returned model is the averaged iterate rescaled by its own objective value.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .data import Dataset
from .model import SolverError, TrainedModel, score_batch
from .recording import RunRecord, geometric_schedule
from .waterfill import find_gamma, find_gamma_and_bias, support_set

RNG_IDENTITY = "numpy-pcg64"


@dataclass
class SbpConfig:
    nu: float
    iterations: int
    seed: int = 0
    use_bias: bool = False
    eta0_override: float | None = None
    norm_recompute_period: int = 1000

    def __post_init__(self):
        if not self.nu >= 0:
            raise ValueError("nu must be non-negative")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")
        if self.norm_recompute_period < 1:
            raise ValueError("norm_recompute_period must be positive")


@dataclass
class SbpState:
    alpha: np.ndarray
    responses: np.ndarray
    norm_sq: float
    alpha_sum: np.ndarray
    response_sum: np.ndarray
    t: int
    bias: float
    eta0: float


def sbp_init(dataset: Dataset, kernel, config: SbpConfig) -> SbpState:
    """Zero state; eta0 = 1/sqrt(max_i K(x_i, x_i)) (n kernel evaluations)
    unless overridden."""
    n = dataset.n
    if config.use_bias and (np.all(dataset.labels > 0) or np.all(dataset.labels < 0)):
        raise SolverError("bias mode requires both classes in the training set")
    if config.eta0_override is not None:
        eta0 = float(config.eta0_override)
    else:
        eta0 = 1.0 / math.sqrt(float(kernel.diag(dataset).max()))
    return SbpState(
        alpha=np.zeros(n),
        responses=np.zeros(n),
        norm_sq=0.0,
        alpha_sum=np.zeros(n),
        response_sum=np.zeros(n),
        t=0,
        bias=0.0,
        eta0=eta0,
    )


def _sample_covered(shifted, gamma, y, use_bias, rng):
    """Pick the update index from the water-covered set.

    Bias mode first flips a fair coin for the class, then samples uniformly
    within that class's covered basin, so the sampling distribution places
    equal mass on the two classes.
    """
    if not use_bias:
        idx = support_set(shifted, gamma)
        return int(idx[rng.integers(idx.size)])
    sign = 1.0 if rng.integers(2) == 0 else -1.0
    cls = np.flatnonzero(y == sign)
    tol = 1e-12 * max(1.0, abs(gamma.gamma))
    idx = cls[shifted[cls] < gamma.gamma - tol]
    if idx.size == 0:
        idx = cls[shifted[cls] <= gamma.gamma + tol]
    if idx.size == 0:
        # Basin entirely dry: fall back to the class argmin.
        idx = cls[shifted[cls] == shifted[cls].min()]
    return int(idx[rng.integers(idx.size)])


def sbp_step(state: SbpState, dataset: Dataset, kernel, config: SbpConfig, rng):
    """One full iteration; mutates state, costs exactly n kernel evaluations."""
    y = dataset.labels
    t = state.t + 1
    eta = state.eta0 / math.sqrt(t)
    volume = dataset.n * config.nu

    if config.use_bias:
        wlb = find_gamma_and_bias(state.responses, y, volume)
        state.bias = wlb.bias
        shifted = state.responses + y * wlb.bias
        i = _sample_covered(shifted, wlb, y, True, rng)
    else:
        wl = find_gamma(state.responses, volume)
        i = _sample_covered(state.responses, wl, y, False, rng)

    row = kernel.row(dataset, i)  # n evaluations
    c_old_i = state.responses[i]
    state.norm_sq += 2.0 * eta * c_old_i + eta * eta * row[i]
    state.alpha[i] += eta
    state.responses += eta * y[i] * y * row
    if state.norm_sq > 1.0:
        r = math.sqrt(state.norm_sq)
        state.alpha /= r
        state.responses /= r
        state.norm_sq = 1.0
    state.t = t
    if t % config.norm_recompute_period == 0:
        # Reset accumulated floating-point drift in the tracked norm.
        state.norm_sq = float(state.alpha @ state.responses)
    state.alpha_sum += state.alpha
    state.response_sum += state.responses
    return state


def _averaged_level(state: SbpState, y, volume, use_bias):
    cbar = state.response_sum / state.t
    if use_bias:
        wlb = find_gamma_and_bias(cbar, y, volume)
        return cbar, wlb.gamma, wlb.bias
    return cbar, find_gamma(cbar, volume).gamma, 0.0


def sbp_train(dataset: Dataset, kernel, config: SbpConfig,
              test_data: Dataset | None = None, eval_kernel=None,
              timing: bool = False, metadata: dict | None = None):
    """Run the full training loop; returns (TrainedModel, RunRecord)."""
    rng = np.random.default_rng(config.seed)
    start_evals = kernel.eval_count
    start_ns = time.perf_counter_ns()
    state = sbp_init(dataset, kernel, config)

    record = RunRecord(metadata={
        "solver": "sbp",
        "nu": config.nu,
        "iterations": config.iterations,
        "seed": config.seed,
        "use_bias": config.use_bias,
        "rng": RNG_IDENTITY,
        **(metadata or {}),
    })
    schedule = geometric_schedule(config.iterations)
    y = dataset.labels
    volume = dataset.n * config.nu

    for t in range(1, config.iterations + 1):
        sbp_step(state, dataset, kernel, config, rng)
        if t in schedule:
            cbar, gamma, bias = _averaged_level(state, y, volume, config.use_bias)
            hinge = math.nan
            test_err = math.nan
            if gamma > 0:
                margins = (cbar + y * bias) / gamma
                hinge = float(np.mean(np.maximum(0.0, 1.0 - margins)))
                if test_data is not None and eval_kernel is not None:
                    interim = TrainedModel(
                        alpha=state.alpha_sum / (t * gamma), bias=bias / gamma,
                        dataset=dataset, kernel_spec=kernel.spec_string,
                        use_bias=config.use_bias, kernel_evals=0)
                    scores = score_batch(interim, test_data, eval_kernel)
                    test_err = float(np.mean(test_data.labels * scores <= 0.0))
            record.add(
                iteration=t,
                train_kernel_evals=kernel.eval_count - start_evals,
                eval_kernel_evals=(eval_kernel.eval_count if eval_kernel else 0),
                empirical_hinge=hinge,
                test_zero_one=test_err,
                wall_clock_ns=(time.perf_counter_ns() - start_ns) if timing else 0,
            )

    cbar, gamma, bias = _averaged_level(state, y, volume, config.use_bias)
    if not gamma > 0:
        raise SolverError("no positive margin achieved; solution not rescalable")
    model = TrainedModel(
        alpha=state.alpha_sum / (config.iterations * gamma),
        bias=bias / gamma,
        dataset=dataset,
        kernel_spec=kernel.spec_string,
        use_bias=config.use_bias,
        kernel_evals=kernel.eval_count - start_evals,
        metadata=dict(record.metadata),
    )
    return model, record


@dataclass(frozen=True)
class RescaleReport:
    norm: float
    hinge: float
    norm_bound: float
    loss_bound: float
    norm_ok: bool
    loss_ok: bool


def rescale_check(model: TrainedModel, dataset: Dataset, kernel,
                  reference_norm: float, reference_loss: float,
                  eps_bar: float) -> RescaleReport:
    """Check the rescaled model against the suboptimality bounds
    ||w|| <= ||u||/(1 - eps*||u||), L(w) <= L(u)/(1 - eps*||u||).

    Computes the exact norm and empirical hinge loss of the model, costing
    n^2 kernel evaluations; test-only.
    """
    denom = 1.0 - eps_bar * reference_norm
    if denom <= 0:
        raise ValueError("eps_bar * reference_norm must be below 1")
    n = dataset.n
    gram = np.empty((n, n))
    for j in range(n):
        gram[:, j] = kernel.row(dataset, j)
    ay = model.alpha * dataset.labels
    norm = math.sqrt(max(0.0, float(ay @ gram @ ay)))
    margins = dataset.labels * (gram @ ay + model.bias)
    hinge = float(np.mean(np.maximum(0.0, 1.0 - margins)))
    norm_bound = reference_norm / denom
    loss_bound = reference_loss / denom
    return RescaleReport(
        norm=norm, hinge=hinge,
        norm_bound=norm_bound, loss_bound=loss_bound,
        norm_ok=norm <= norm_bound + 1e-12,
        loss_ok=hinge <= loss_bound + 1e-12,
    )
