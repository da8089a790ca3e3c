"""Benchmark harness: plan files, per-run/aggregate CSVs, nu calibration,
and the linearized-features cost comparison.

CSV bytes are deterministic: fixed column order, shortest round-trip float
formatting, LF line endings, runs keyed and sorted by (solver, seed).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from .baselines import (PegasosConfig, SdcaConfig, _sdca_loop, pegasos_train,
                        perceptron_train, sdca_dual_value, sdca_train)
from .data import DataError, Dataset, SyntheticSpec, generate, parse_libsvm
from .fourier import linearize, make_fourier_map
from .kernels import kernel_from_spec
from .model import SolverError, TrainedModel, score_batch
from .recording import RunRecord
from .sbp import SbpConfig, sbp_train

RUN_CSV_COLUMNS = ("iteration", "train_kernel_evals", "eval_kernel_evals",
                   "empirical_hinge", "test_zero_one", "wall_clock_ns")


def _fmt(value) -> str:
    """Shortest round-trip decimal for floats, plain decimal for ints."""
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return str(value)


def write_run_csv(record: RunRecord, path) -> None:
    lines = [",".join(RUN_CSV_COLUMNS)]
    for s in record.samples:
        lines.append(",".join((
            str(s.iteration),
            str(s.train_kernel_evals),
            str(s.eval_kernel_evals),
            _fmt(float(s.empirical_hinge)),
            _fmt(float(s.test_zero_one)),
            str(s.wall_clock_ns),
        )))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass
class SolverSpec:
    name: str       # unique id within the plan, e.g. "sbp" or "sbp_small_nu"
    kind: str       # one of sbp / pegasos / sdca / perceptron
    params: dict = field(default_factory=dict)


@dataclass
class BenchPlan:
    dataset: str                 # "file:PATH" or "synthetic:kind:k=v,..."
    kernel: str                  # kernel spec string
    solvers: list
    repeat: int = 1
    seed: int = 0
    test: str | None = None
    timing: bool = False
    out: str = "bench_out"
    positive_class: str | None = None

    def __post_init__(self):
        if self.repeat < 1:
            raise ValueError("repeat must be at least 1")
        if not self.solvers:
            raise ValueError("plan needs at least one solver")


def parse_plan(text: str) -> BenchPlan:
    """Parse the flat ``key = value`` plan format.

    Recognized keys: dataset, test, kernel, repeat, seed, timing, out,
    positive_class, and ``solver.NAME.KEY = VALUE`` entries where NAME is a
    per-plan solver id and KEY is ``kind`` or a config parameter.
    """
    top: dict = {}
    solver_params: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"plan line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key.startswith("solver."):
            parts = key.split(".")
            if len(parts) != 3:
                raise ValueError(f"plan line {lineno}: use solver.NAME.KEY")
            solver_params.setdefault(parts[1], {})[parts[2]] = value
        else:
            top[key] = value

    solvers = []
    for name in sorted(solver_params):
        params = dict(solver_params[name])
        kind = params.pop("kind", name)
        if kind not in ("sbp", "pegasos", "sdca", "perceptron"):
            raise ValueError(f"unknown solver kind {kind!r} for {name!r}")
        solvers.append(SolverSpec(name=name, kind=kind, params=params))

    if "dataset" not in top or "kernel" not in top:
        raise ValueError("plan must set dataset and kernel")
    return BenchPlan(
        dataset=top["dataset"],
        kernel=top["kernel"],
        solvers=solvers,
        repeat=int(top.get("repeat", "1")),
        seed=int(top.get("seed", "0")),
        test=top.get("test"),
        timing=top.get("timing", "0").strip().lower() in ("1", "true", "yes"),
        out=top.get("out", "bench_out"),
        positive_class=top.get("positive_class"),
    )


def load_dataset(spec: str, positive_class=None) -> Dataset:
    """Resolve ``file:PATH`` or ``synthetic:kind:k=v,...`` dataset specs."""
    if spec.startswith("file:"):
        with open(spec[5:]) as fh:
            return parse_libsvm(fh, positive_class=positive_class)
    if spec.startswith("synthetic:"):
        rest = spec.split(":", 1)[1]
        kind, _, kvs = rest.partition(":")
        kwargs = {}
        if kvs:
            for item in kvs.split(","):
                k, _, v = item.partition("=")
                k = k.strip()
                if k in ("n", "dimension", "seed"):
                    kwargs[k] = int(v)
                else:
                    kwargs[k] = float(v)
        return generate(SyntheticSpec(kind=kind, **kwargs))
    raise DataError(f"unknown dataset spec {spec!r}")


def _run_one(solver: SolverSpec, dataset, kernel_spec, seed, test_data, timing):
    kernel = kernel_from_spec(kernel_spec)
    eval_kernel = kernel_from_spec(kernel_spec) if test_data is not None else None
    p = solver.params
    meta = {"dataset_n": dataset.n}
    if solver.kind == "sbp":
        config = SbpConfig(
            nu=float(p.get("nu", "0.1")),
            iterations=int(p.get("iters", "1000")),
            seed=seed,
            use_bias=p.get("bias", "0").strip().lower() in ("1", "true", "yes"),
        )
        model, record = sbp_train(dataset, kernel, config, test_data=test_data,
                                  eval_kernel=eval_kernel, timing=timing,
                                  metadata=meta)
    elif solver.kind == "pegasos":
        config = PegasosConfig(
            lam=float(p.get("lambda", str(1.0 / dataset.n))),
            iterations=int(p.get("iters", "1000")),
            seed=seed,
            average=p.get("average", "0").strip().lower() in ("1", "true", "yes"),
        )
        model, record = pegasos_train(dataset, kernel, config, test_data=test_data,
                                      eval_kernel=eval_kernel, timing=timing,
                                      metadata=meta)
    elif solver.kind == "sdca":
        config = SdcaConfig(
            lam=float(p.get("lambda", str(1.0 / dataset.n))),
            iterations=int(p.get("iters", "1000")),
            seed=seed,
        )
        model, record = sdca_train(dataset, kernel, config, test_data=test_data,
                                   eval_kernel=eval_kernel, timing=timing,
                                   metadata=meta)
    elif solver.kind == "perceptron":
        model, record = perceptron_train(dataset, kernel, seed,
                                         passes=int(p.get("passes", "1")),
                                         test_data=test_data,
                                         eval_kernel=eval_kernel, timing=timing,
                                         metadata=meta)
    else:
        raise ValueError(f"unknown solver kind {solver.kind!r}")
    return model, record


def run_plan(plan: BenchPlan, out_dir=None) -> dict:
    """Execute every (solver, seed) pair; write one CSV per run plus
    aggregate.csv with per-sample-index median/IQR of test error.

    Solver failures are recorded in failures.txt and do not abort the plan.
    Returns {"runs": {...}, "failures": {...}, "out_dir": path}.
    """
    out = out_dir if out_dir is not None else plan.out
    os.makedirs(out, exist_ok=True)
    dataset = load_dataset(plan.dataset, positive_class=plan.positive_class)
    test_data = (load_dataset(plan.test, positive_class=plan.positive_class)
                 if plan.test else None)

    runs: dict = {}
    failures: dict = {}
    for solver in plan.solvers:
        for r in range(plan.repeat):
            seed = plan.seed + r
            key = (solver.name, seed)
            try:
                _, record = _run_one(solver, dataset, plan.kernel, seed,
                                     test_data, plan.timing)
            except (SolverError, DataError, ValueError) as exc:
                failures[key] = f"{type(exc).__name__}: {exc}"
                continue
            runs[key] = record
            write_run_csv(record, os.path.join(out, f"{solver.name}_seed{seed}.csv"))

    _write_aggregate(runs, os.path.join(out, "aggregate.csv"))
    if failures:
        with open(os.path.join(out, "failures.txt"), "w", newline="\n") as fh:
            for key in sorted(failures):
                fh.write(f"{key[0]} seed={key[1]} {failures[key]}\n")
    return {"runs": runs, "failures": failures, "out_dir": out}


def _write_aggregate(runs: dict, path) -> None:
    """Per (solver, sample_index): median train cost, median and quartiles of
    test error across repeats. Sorted output keeps the bytes independent of
    run execution order."""
    by_solver: dict = {}
    for (name, _seed), record in runs.items():
        by_solver.setdefault(name, []).append(record)
    lines = ["solver,sample_index,median_train_kernel_evals,"
             "median_test_zero_one,q25_test_zero_one,q75_test_zero_one"]
    for name in sorted(by_solver):
        records = by_solver[name]
        depth = min(len(r.samples) for r in records)
        for j in range(depth):
            evals = np.array([r.samples[j].train_kernel_evals for r in records],
                             dtype=np.float64)
            errs = np.array([r.samples[j].test_zero_one for r in records],
                            dtype=np.float64)
            lines.append(",".join((
                name, str(j),
                _fmt(float(np.median(evals))),
                _fmt(float(np.median(errs))),
                _fmt(float(np.quantile(errs, 0.25))),
                _fmt(float(np.quantile(errs, 0.75))),
            )))
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


@dataclass(frozen=True)
class NuCalibration:
    nu: float
    norm: float
    hinge: float
    dual_gap: float
    steps: int
    kernel_evals: int


def calibrate_nu(dataset: Dataset, kernel, lam: float, budget: int,
                 seed: int = 0) -> NuCalibration:
    """Derive the slack budget from a regularization weight.

    Runs the dual coordinate solver on the lambda-regularized objective
    until the next step would exceed the kernel-evaluation budget, then
    returns nu = L(w*) / ||w*|| for the approximate optimum, along with the
    primal-dual residual of the inner solve so calibration quality is
    visible.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if budget < dataset.n + 1:
        raise ValueError("budget too small for even one solver step")
    rng = np.random.default_rng(seed)
    start = kernel.eval_count
    alpha, responses, steps = _sdca_loop(dataset, kernel, lam, rng,
                                         eval_budget=budget)
    norm_sq = float(alpha @ responses)
    norm = math.sqrt(max(0.0, norm_sq))
    hinge = float(np.mean(np.maximum(0.0, 1.0 - responses)))
    if norm <= 1e-8:
        # All-slack optimum: the box [0, 1/(lambda n)] pins w at ~0.
        raise SolverError("lambda too large for calibration")
    primal = lam * norm_sq / 2.0 + hinge
    dual = sdca_dual_value(alpha, responses, lam)
    gap = primal - dual
    return NuCalibration(nu=hinge / norm, norm=norm, hinge=hinge,
                         dual_gap=float(gap), steps=steps,
                         kernel_evals=kernel.eval_count - start)


def fourier_plan(dataset: Dataset, sigma_sq: float, k_list, lam: float,
                 iterations: int, test_data: Dataset, seed: int = 0,
                 kernel_records=None) -> str:
    """CSV comparing linearized-feature training against kernel solvers on a
    shared cost axis of d-dimensional inner products.

    For each k: build the map, linearize train and test sets (k inner
    products per example), train linear Pegasos on the features, report
    held-out error. Kernel-solver curves passed via kernel_records are
    emitted in the same unit (one Gaussian kernel evaluation costs one inner
    product thanks to cached self-norms).
    """
    k_list = list(k_list)
    if not k_list:
        raise ValueError("k_list must be nonempty")
    if any(k < 1 for k in k_list):
        raise ValueError("every k must be positive")
    if not sigma_sq > 0:
        raise ValueError("fourier comparison requires a Gaussian kernel")

    lines = ["method,k,cost_inner_products,test_zero_one"]
    for k in k_list:
        fmap = make_fourier_map(int(k), dataset.dimension, sigma_sq, seed)
        lin_train = linearize(fmap, dataset)
        lin_test = linearize(fmap, test_data)
        lin_kernel = kernel_from_spec("linear")
        config = PegasosConfig(lam=lam, iterations=iterations, seed=seed)
        model, _ = pegasos_train(lin_train, lin_kernel, config)
        eval_kernel = kernel_from_spec("linear")
        scores = score_batch(model, lin_test, eval_kernel)
        err = float(np.mean(lin_test.labels * scores <= 0.0))
        lines.append(",".join((
            "fourier", str(int(k)),
            str(fmap.inner_product_count),
            _fmt(err),
        )))
    for name, record in (kernel_records or {}).items():
        for s in record.samples:
            lines.append(",".join((
                name, "0",
                str(s.train_kernel_evals),
                _fmt(float(s.test_zero_one)),
            )))
    return "\n".join(lines) + "\n"
