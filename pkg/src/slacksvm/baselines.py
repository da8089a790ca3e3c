"""Comparison solvers on the same kernel-evaluation cost model.

Kernelized Pegasos (stochastic subgradient descent on the regularized
hinge objective, no projection step), stochastic dual coordinate ascent on
the regularized dual, and the single-pass online Perceptron.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .model import TrainedModel, score as _score
from .recording import RunRecord, geometric_schedule
from .sbp import RNG_IDENTITY


@dataclass
class PegasosConfig:
    lam: float
    iterations: int
    seed: int = 0
    average: bool = False

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")


@dataclass
class SdcaConfig:
    lam: float
    iterations: int
    seed: int = 0

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lambda must be positive")
        if self.iterations < 1:
            raise ValueError("iterations must be at least 1")


def predict(model: TrainedModel, example, kernel) -> float:
    """Score = sum_j alpha_j y_j K(x_j, x) + b; costs support_size evals."""
    return _score(model, example, kernel)


def _test_error(alpha, bias, dataset, kernel_spec, test_data, eval_kernel):
    if test_data is None or eval_kernel is None:
        return math.nan
    from .model import score_batch

    m = TrainedModel(alpha=alpha, bias=bias, dataset=dataset,
                     kernel_spec=kernel_spec, use_bias=False, kernel_evals=0)
    scores = score_batch(m, test_data, eval_kernel)
    return float(np.mean(test_data.labels * scores <= 0.0))


def pegasos_train(dataset: Dataset, kernel, config: PegasosConfig,
                  test_data: Dataset | None = None, eval_kernel=None,
                  timing: bool = False, metadata: dict | None = None):
    """Kernelized Pegasos without a projection step.

    Non-violation steps only rescale w, applied lazily through a scalar, so
    kernel rows (n evaluations) are spent on violation steps only.
    """
    n = dataset.n
    y = dataset.labels
    rng = np.random.default_rng(config.seed)
    start_evals = kernel.eval_count
    start_ns = time.perf_counter_ns()

    raw_alpha = np.zeros(n)
    raw_resp = np.zeros(n)  # effective responses are scale * raw_resp
    scale = 1.0
    alpha_sum = np.zeros(n) if config.average else None

    record = RunRecord(metadata={
        "solver": "pegasos", "lambda": config.lam,
        "iterations": config.iterations, "seed": config.seed,
        "average": config.average, "rng": RNG_IDENTITY,
        **(metadata or {}),
    })
    schedule = geometric_schedule(config.iterations)

    for t in range(1, config.iterations + 1):
        i = int(rng.integers(n))
        violation = scale * raw_resp[i] < 1.0
        if t > 1:
            scale *= 1.0 - 1.0 / t
        if violation:
            eta = 1.0 / (config.lam * t)
            row = kernel.row(dataset, i)  # n evaluations
            raw_alpha[i] += eta / scale
            raw_resp += (eta / scale) * y[i] * y * row
        if config.average:
            alpha_sum += scale * raw_alpha
        if t in schedule:
            c = scale * raw_resp
            hinge = float(np.mean(np.maximum(0.0, 1.0 - c)))
            record.add(
                iteration=t,
                train_kernel_evals=kernel.eval_count - start_evals,
                eval_kernel_evals=(eval_kernel.eval_count if eval_kernel else 0),
                empirical_hinge=hinge,
                test_zero_one=_test_error(scale * raw_alpha, 0.0, dataset,
                                          kernel.spec_string, test_data, eval_kernel),
                wall_clock_ns=(time.perf_counter_ns() - start_ns) if timing else 0,
            )

    if config.average:
        alpha = alpha_sum / config.iterations
    else:
        alpha = scale * raw_alpha
    model = TrainedModel(
        alpha=alpha, bias=0.0, dataset=dataset,
        kernel_spec=kernel.spec_string, use_bias=False,
        kernel_evals=kernel.eval_count - start_evals,
        metadata=dict(record.metadata),
    )
    return model, record


def sdca_dual_value(alpha, responses, lam) -> float:
    """Dual objective lambda * (sum alpha - ||w||^2 / 2), with
    ||w||^2 = sum_i alpha_i c_i from the cached responses."""
    return float(lam * (alpha.sum() - 0.5 * (alpha @ responses)))


def _sdca_loop(dataset, kernel, lam, rng, *, iterations=None, eval_budget=None,
               on_step=None):
    """Shared SDCA inner loop; stops at the iteration count or when the next
    step would exceed the kernel-evaluation budget."""
    n = dataset.n
    y = dataset.labels
    box = 1.0 / (lam * n)
    alpha = np.zeros(n)
    responses = np.zeros(n)
    start = kernel.eval_count
    t = 0
    while True:
        if iterations is not None and t >= iterations:
            break
        if eval_budget is not None and kernel.eval_count - start + n + 1 > eval_budget:
            break
        t += 1
        i = int(rng.integers(n))
        kii = kernel.pair(dataset.examples[i], dataset.examples[i])
        if kii == 0.0:
            delta = 0.0  # flat direction, skip
        else:
            delta = (1.0 - responses[i]) / kii
            delta = min(max(delta, -alpha[i]), box - alpha[i])
        if delta != 0.0:
            row = kernel.row(dataset, i)  # n evaluations
            alpha[i] += delta
            responses += delta * y[i] * y * row
        if on_step is not None:
            on_step(t, i, delta, alpha, responses)
    return alpha, responses, t


def sdca_train(dataset: Dataset, kernel, config: SdcaConfig,
               test_data: Dataset | None = None, eval_kernel=None,
               timing: bool = False, metadata: dict | None = None):
    """Stochastic dual coordinate ascent with exact coordinate maximization."""
    rng = np.random.default_rng(config.seed)
    start_evals = kernel.eval_count
    start_ns = time.perf_counter_ns()
    record = RunRecord(metadata={
        "solver": "sdca", "lambda": config.lam,
        "iterations": config.iterations, "seed": config.seed,
        "rng": RNG_IDENTITY, **(metadata or {}),
    })
    schedule = geometric_schedule(config.iterations)

    def on_step(t, i, delta, alpha, responses):
        if t in schedule:
            hinge = float(np.mean(np.maximum(0.0, 1.0 - responses)))
            record.add(
                iteration=t,
                train_kernel_evals=kernel.eval_count - start_evals,
                eval_kernel_evals=(eval_kernel.eval_count if eval_kernel else 0),
                empirical_hinge=hinge,
                test_zero_one=_test_error(alpha.copy(), 0.0, dataset,
                                          kernel.spec_string, test_data, eval_kernel),
                wall_clock_ns=(time.perf_counter_ns() - start_ns) if timing else 0,
            )

    alpha, responses, _ = _sdca_loop(dataset, kernel, config.lam, rng,
                                     iterations=config.iterations, on_step=on_step)
    model = TrainedModel(
        alpha=alpha, bias=0.0, dataset=dataset,
        kernel_spec=kernel.spec_string, use_bias=False,
        kernel_evals=kernel.eval_count - start_evals,
        metadata=dict(record.metadata),
    )
    return model, record


@dataclass
class PerceptronModel:
    """Mistake-driven integer coefficients; support size equals the
    mistake count."""

    alpha: np.ndarray
    mistake_count: int

    def to_trained_model(self, dataset, kernel_spec, kernel_evals=0) -> TrainedModel:
        return TrainedModel(
            alpha=self.alpha.astype(np.float64), bias=0.0, dataset=dataset,
            kernel_spec=kernel_spec, use_bias=False, kernel_evals=kernel_evals,
            metadata={"solver": "perceptron", "mistakes": self.mistake_count},
        )


def perceptron_train(dataset: Dataset, kernel, seed: int, passes: int = 1,
                     test_data: Dataset | None = None, eval_kernel=None,
                     timing: bool = False, metadata: dict | None = None):
    """Online Perceptron; the per-example score against the live support set
    costs exactly the current mistake count in kernel evaluations.

    Guarantees hold for a single pass; later passes are flagged in the
    record metadata since the predictor may then overfit.
    """
    if passes < 1:
        raise ValueError("passes must be at least 1")
    n = dataset.n
    y = dataset.labels
    rng = np.random.default_rng(seed)
    start_evals = kernel.eval_count
    start_ns = time.perf_counter_ns()

    alpha = np.zeros(n, dtype=np.int64)
    mistakes = 0
    total_steps = passes * n
    schedule = geometric_schedule(total_steps)
    record = RunRecord(metadata={
        "solver": "perceptron", "passes": passes, "seed": seed,
        "rng": RNG_IDENTITY, "single_pass_valid_through_iteration": n,
        "beyond_single_pass": passes > 1, **(metadata or {}),
    })

    step = 0
    for _ in range(passes):
        order = rng.permutation(n)
        for i in order:
            step += 1
            sv = np.flatnonzero(alpha)
            if sv.size:
                g = kernel.cross(dataset, sv, _single(dataset, int(i)))
                score_i = float((alpha[sv] * y[sv]) @ g[:, 0])
            else:
                score_i = 0.0
            if y[i] * score_i <= 0.0:  # sign(0) counts as a mistake
                alpha[i] += 1
                mistakes += 1
            if step in schedule:
                record.add(
                    iteration=step,
                    train_kernel_evals=kernel.eval_count - start_evals,
                    eval_kernel_evals=(eval_kernel.eval_count if eval_kernel else 0),
                    empirical_hinge=math.nan,
                    test_zero_one=_test_error(alpha.astype(np.float64), 0.0, dataset,
                                              kernel.spec_string, test_data, eval_kernel),
                    wall_clock_ns=(time.perf_counter_ns() - start_ns) if timing else 0,
                )

    model = PerceptronModel(alpha=alpha, mistake_count=mistakes)
    return model, record


def _single(dataset, i):
    """One-example view used for streaming scores (no data copies kept)."""
    return _SingleView(dataset, i)


class _SingleView:
    def __init__(self, dataset, i):
        self.examples = [dataset.examples[i]]
        self.labels = dataset.labels[i:i + 1]
        self.norms = dataset.norms[i:i + 1]
        self.dimension = dataset.dimension
        self.n = 1
        self._parent = dataset
        self._i = i

    @property
    def matrix(self):
        return self._parent.matrix[self._i:self._i + 1]
