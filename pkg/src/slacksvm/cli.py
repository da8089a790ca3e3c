"""Command-line entry point.

Subcommands: train, bench, calibrate-nu, fourier. Exit codes: 0 success,
2 usage error, 3 data error, 4 solver error.
"""

from __future__ import annotations

import argparse
import os
import sys

from .baselines import PegasosConfig, SdcaConfig, pegasos_train, perceptron_train, sdca_train
from .bench import (calibrate_nu, fourier_plan, load_dataset, parse_plan,
                    run_plan, write_run_csv)
from .data import DataError, parse_libsvm
from .kernels import kernel_from_spec
from .model import SolverError, save_model
from .sbp import SbpConfig, sbp_train

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_SOLVER = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="slacksvm",
                     description="Kernel SVM solvers under kernel-evaluation budgets")
    sub = parser.add_subparsers(dest="command", required=True)

    train = sub.add_parser("train", help="train one solver on one dataset")
    train.add_argument("data", help="training set (LIBSVM text) or dataset spec")
    train.add_argument("--solver", choices=("sbp", "pegasos", "sdca", "perceptron"),
                       default="sbp")
    train.add_argument("--kernel", default="linear",
                       help="'linear' or 'gaussian:SIGMA2'")
    train.add_argument("--nu", type=float, default=0.1,
                       help="slack budget per example (sbp)")
    train.add_argument("--lambda", dest="lam", type=float, default=None,
                       help="regularization weight (pegasos/sdca); default 1/n")
    train.add_argument("--iters", type=int, default=1000)
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--bias", action="store_true",
                       help="learn an unregularized bias (sbp only)")
    train.add_argument("--test", metavar="FILE", default=None,
                       help="held-out set for test-error curves")
    train.add_argument("--positive-class", default=None, metavar="LABEL",
                       help="one-vs-rest mapping for non-binary labels")
    train.add_argument("--out", default=".", metavar="DIR")
    train.add_argument("--timing", action="store_true",
                       help="record wall-clock times (breaks byte-level determinism)")

    bench = sub.add_parser("bench", help="run a benchmark plan file")
    bench.add_argument("plan", help="flat key-value plan file")
    bench.add_argument("--out", default=None, metavar="DIR",
                       help="override the plan's output directory")

    cal = sub.add_parser("calibrate-nu",
                         help="derive a slack budget nu from a lambda")
    cal.add_argument("data")
    cal.add_argument("--kernel", default="linear")
    cal.add_argument("--lambda", dest="lam", type=float, required=True)
    cal.add_argument("--budget", type=int, default=10**6,
                     help="kernel-evaluation cap for the inner solve")
    cal.add_argument("--seed", type=int, default=0)
    cal.add_argument("--positive-class", default=None, metavar="LABEL")

    four = sub.add_parser("fourier",
                          help="feature-vs-kernel cost comparison CSV")
    four.add_argument("data")
    four.add_argument("--test", metavar="FILE", required=True)
    four.add_argument("--kernel", default="gaussian:1.0",
                      help="must be gaussian:SIGMA2")
    four.add_argument("--k-list", default="1,2,4,8,16,32,64,128",
                      help="comma-separated direction counts")
    four.add_argument("--lambda", dest="lam", type=float, default=None)
    four.add_argument("--iters", type=int, default=1000)
    four.add_argument("--seed", type=int, default=0)
    four.add_argument("--positive-class", default=None, metavar="LABEL")
    four.add_argument("--out", default=".", metavar="DIR")
    return parser


def _load(path_or_spec, positive_class):
    if path_or_spec.startswith(("file:", "synthetic:")):
        return load_dataset(path_or_spec, positive_class=positive_class)
    with open(path_or_spec) as fh:
        return parse_libsvm(fh, positive_class=positive_class)


def _cmd_train(args) -> int:
    dataset = _load(args.data, args.positive_class)
    kernel = kernel_from_spec(args.kernel)
    test_data = _load(args.test, args.positive_class) if args.test else None
    eval_kernel = kernel_from_spec(args.kernel) if test_data is not None else None
    lam = args.lam if args.lam is not None else 1.0 / dataset.n

    if args.bias and args.solver != "sbp":
        print("slacksvm: error: --bias is only supported by the sbp solver",
              file=sys.stderr)
        return EXIT_USAGE

    if args.solver == "sbp":
        config = SbpConfig(nu=args.nu, iterations=args.iters, seed=args.seed,
                           use_bias=args.bias)
        model, record = sbp_train(dataset, kernel, config, test_data=test_data,
                                  eval_kernel=eval_kernel, timing=args.timing)
    elif args.solver == "pegasos":
        config = PegasosConfig(lam=lam, iterations=args.iters, seed=args.seed)
        model, record = pegasos_train(dataset, kernel, config, test_data=test_data,
                                      eval_kernel=eval_kernel, timing=args.timing)
    elif args.solver == "sdca":
        config = SdcaConfig(lam=lam, iterations=args.iters, seed=args.seed)
        model, record = sdca_train(dataset, kernel, config, test_data=test_data,
                                   eval_kernel=eval_kernel, timing=args.timing)
    else:
        pmodel, record = perceptron_train(dataset, kernel, args.seed,
                                          test_data=test_data,
                                          eval_kernel=eval_kernel,
                                          timing=args.timing)
        model = pmodel.to_trained_model(dataset, kernel.spec_string,
                                        kernel_evals=kernel.eval_count)

    os.makedirs(args.out, exist_ok=True)
    model_path = os.path.join(args.out, f"{args.solver}_seed{args.seed}.model")
    csv_path = os.path.join(args.out, f"{args.solver}_seed{args.seed}.csv")
    save_model(model, model_path)
    write_run_csv(record, csv_path)
    print(f"model: {model_path}")
    print(f"run:   {csv_path}")
    print(f"kernel_evals: {kernel.eval_count}  support_size: {model.support_size}")
    return EXIT_OK


def _cmd_bench(args) -> int:
    with open(args.plan) as fh:
        plan = parse_plan(fh.read())
    result = run_plan(plan, out_dir=args.out)
    print(f"wrote {len(result['runs'])} run CSVs to {result['out_dir']}")
    if result["failures"]:
        for (name, seed), msg in sorted(result["failures"].items()):
            print(f"failed: {name} seed={seed}: {msg}", file=sys.stderr)
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    dataset = _load(args.data, args.positive_class)
    kernel = kernel_from_spec(args.kernel)
    result = calibrate_nu(dataset, kernel, args.lam, args.budget, seed=args.seed)
    print(f"nu: {result.nu!r}")
    print(f"norm: {result.norm!r}  hinge: {result.hinge!r}")
    print(f"dual_gap: {result.dual_gap!r}  steps: {result.steps}  "
          f"kernel_evals: {result.kernel_evals}")
    return EXIT_OK


def _cmd_fourier(args) -> int:
    if not args.kernel.startswith("gaussian:"):
        print("slacksvm: error: fourier comparison requires a Gaussian kernel",
              file=sys.stderr)
        return EXIT_USAGE
    sigma_sq = float(args.kernel.split(":", 1)[1])
    dataset = _load(args.data, args.positive_class)
    test_data = _load(args.test, args.positive_class)
    try:
        k_list = [int(tok) for tok in args.k_list.split(",") if tok.strip()]
    except ValueError:
        print("slacksvm: error: --k-list must be comma-separated integers",
              file=sys.stderr)
        return EXIT_USAGE
    lam = args.lam if args.lam is not None else 1.0 / dataset.n
    csv_text = fourier_plan(dataset, sigma_sq, k_list, lam, args.iters,
                            test_data, seed=args.seed)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "fourier.csv")
    with open(path, "w", newline="\n") as fh:
        fh.write(csv_text)
    print(f"wrote {path}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_USAGE
    try:
        if args.command == "train":
            return _cmd_train(args)
        if args.command == "bench":
            return _cmd_bench(args)
        if args.command == "calibrate-nu":
            return _cmd_calibrate(args)
        if args.command == "fourier":
            return _cmd_fourier(args)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"slacksvm: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DataError as exc:
        print(f"slacksvm: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except SolverError as exc:
        print(f"slacksvm: solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except ValueError as exc:
        print(f"slacksvm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
