"""Experiment command line.

Subcommands: gen-data, train, schedule, bound, grad-check, suite.
Exit codes: 0 success, 2 configuration error, 3 rank refusal,
4 divergence abort, 5 criterion/threshold failure.
"""

from __future__ import annotations

import argparse
import os
import sys

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_RANK = 3
EXIT_DIVERGED = 4
EXIT_CRITERION = 5


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layerbcd",
        description="Layer-wise block coordinate descent experiments")
    parser.add_argument("--threads", type=int, default=None,
                        help="cap the BLAS thread count (set before numpy loads)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate a teacher-student dataset CSV")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d-in", type=int, required=True)
    p.add_argument("--teacher-hidden", type=int, default=None)
    p.add_argument("--activation", default="leaky_relu:0.5")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--test-n", type=int, default=None,
                   help="also draw a test split of this size")
    p.add_argument("--test-out", default=None)

    p = sub.add_parser("train", help="run one training experiment")
    p.add_argument("--config", default=None, help="key = value config file")
    for flag, typ in (("--dataset", str), ("--mode", str), ("--activation", str),
                      ("--schedule", str), ("--out-dir", str)):
        p.add_argument(flag, type=typ, default=None)
    for flag in ("--n", "--d-in", "--teacher-hidden", "--L", "--r",
                 "--k-outer", "--k-v", "--k-w", "--seed"):
        p.add_argument(flag, type=int, default=None)
    for flag in ("--eta-v", "--eta-w1", "--eta-w2", "--gamma", "--epsilon",
                 ("--svb-s1"), ("--svb-s2")):
        p.add_argument(flag, type=float, default=None)
    p.add_argument("--svb", dest="svb", action="store_true", default=None)
    p.add_argument("--no-svb", dest="svb", action="store_false")
    p.add_argument("--strict-rank", dest="strict_rank", action="store_true", default=None)
    p.add_argument("--no-strict-rank", dest="strict_rank", action="store_false")
    p.add_argument("--sample-normalized", dest="sample_normalized",
                   action="store_true", default=None)

    p = sub.add_parser("schedule", help="print the certified schedule for a config")
    p.add_argument("--config", default=None)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("bound", help="generalization-gap bound for a checkpoint")
    p.add_argument("--checkpoint", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--test-dataset", default=None)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--b-x", type=float, default=None)
    p.add_argument("--b-y", type=float, default=None)

    p = sub.add_parser("grad-check", help="finite-difference gradient validation")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=100)

    p = sub.add_parser("suite", help="run a named acceptance experiment")
    p.add_argument("name")
    p.add_argument("--out-dir", default="out")
    p.add_argument("--seed", type=int, default=None)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.threads is not None:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(args.threads)
    try:
        return _dispatch(args)
    except BrokenPipeError:
        return EXIT_OK


def _dispatch(args) -> int:
    # Imports happen after the thread cap is in place.
    from .config import ConfigError
    from .data import DatasetParseError
    from .train_monotone import DivergenceError, RankError

    handler = {
        "gen-data": _cmd_gen_data,
        "train": _cmd_train,
        "schedule": _cmd_schedule,
        "bound": _cmd_bound,
        "grad-check": _cmd_grad_check,
        "suite": _cmd_suite,
    }[args.command]
    try:
        return handler(args)
    except (ConfigError, DatasetParseError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except RankError as exc:
        print(f"rank refusal: {exc}", file=sys.stderr)
        return EXIT_RANK
    except DivergenceError as exc:
        print(f"divergence: {exc}", file=sys.stderr)
        return EXIT_DIVERGED


def _cmd_gen_data(args) -> int:
    from .data import TeacherConfig, gen_teacher_data, write_dataset
    from .linalg import subseed

    hidden = args.teacher_hidden if args.teacher_hidden is not None else max(args.d_in // 4, 1)
    cfg = TeacherConfig(args.d_in, hidden, args.activation, seed=args.seed)
    ds = gen_teacher_data(args.n, cfg)
    write_dataset(args.out, ds)
    print(f"wrote {args.out} ({ds.n} samples, d_in={ds.d_in})")
    if args.test_n:
        test_out = args.test_out or _with_suffix(args.out, ".test")
        test = gen_teacher_data(args.test_n, cfg, x_seed=subseed(args.seed, 999))
        write_dataset(test_out, test)
        print(f"wrote {test_out} ({test.n} samples)")
    return EXIT_OK


def _with_suffix(path: str, tag: str) -> str:
    root, dot, ext = path.rpartition(".")
    return f"{root}{tag}.{ext}" if dot else f"{path}{tag}"


_TRAIN_OVERRIDES = {
    "dataset": "dataset", "n": "n", "d_in": "d_in", "teacher_hidden": "teacher_hidden",
    "L": "L", "r": "r", "activation": "activation", "mode": "mode",
    "schedule": "schedule", "eta_v": "eta_v", "eta_w1": "eta_w1", "eta_w2": "eta_w2",
    "k_outer": "k_outer", "k_v": "k_v", "k_w": "k_w", "gamma": "gamma",
    "epsilon": "epsilon", "seed": "seed", "out_dir": "out_dir", "svb": "svb",
    "svb_s1": "svb_s1", "svb_s2": "svb_s2", "strict_rank": "strict_rank",
    "sample_normalized": "sample_normalized",
}


def _load_run_config(args):
    from .config import RunConfig, apply_overrides, load_config

    config = load_config(args.config) if args.config else RunConfig()
    overrides = {field: getattr(args, attr, None) for attr, field in _TRAIN_OVERRIDES.items()}
    return apply_overrides(config, overrides)


def _cmd_train(args) -> int:
    from .runner import run_train

    config = _load_run_config(args)
    result = run_train(config, quiet=False)
    print(f"outputs in {result.out_dir}")
    return EXIT_OK


def _cmd_schedule(args) -> int:
    from .activations import parse_activation
    from .init import init_state_monotone, init_state_relu
    from .network import NetworkShape
    from .runner import resolve_bounds, resolve_dataset
    from .schedule import measure_stats, schedule_monotone, schedule_relu

    config = _load_run_config(args)
    config.validate()
    if config.mode == "relu_noskip":
        raise ValueError("relu_noskip has no certified schedule")
    ds = resolve_dataset(config)
    act = parse_activation(config.activation)
    shape = NetworkShape(ds.d_in, config.r, config.L, ds.n)
    bounds = resolve_bounds(config)
    if config.mode == "monotone":
        state = init_state_monotone(shape, ds.x, act, config.seed, bounds, config.svb)
        report = schedule_monotone(measure_stats(state, ds.x, ds.y, act,
                                                 config.gamma, config.epsilon))
    else:
        state, _ = init_state_relu(shape, ds.x, config.seed, bounds)
        report = schedule_relu(measure_stats(state, ds.x, ds.y, act,
                                             config.gamma, config.epsilon))
    s = report.schedule
    print("# certified schedule (paste into a config file)")
    print("schedule = explicit")
    for key in ("eta_v", "eta_w1", "eta_w2"):
        print(f"{key} = {getattr(s, key):.17g}")
    for key in ("k_outer", "k_v", "k_w"):
        print(f"{key} = {getattr(s, key)}")
    print(f"gamma = {s.gamma:.17g}")
    print(f"svb_s1 = {s.svb.s1:g}")
    print(f"svb_s2 = {s.svb.s2:g}")
    for key, val in report.metadata.items():
        print(f"# {key} = {val}")
    return EXIT_OK


def _cmd_bound(args) -> int:
    import numpy as np

    from .bounds import BoundInputs, generalization_gap_bound, verify_norm_premise
    from .data import read_dataset
    from .linalg import operator_norm
    from .network import load_checkpoint, predict_batch

    weights, act, skip = load_checkpoint(args.checkpoint)
    train_ds = read_dataset(args.dataset)
    b_x = args.b_x if args.b_x is not None else float(np.sqrt((train_ds.x ** 2).sum(axis=1).max()))
    b_y = args.b_y if args.b_y is not None else float(np.abs(train_ds.y).max())
    inputs = BoundInputs(
        x_norm=operator_norm(train_ds.x), n=train_ds.n, r=weights[0].shape[0],
        L=len(weights), d_in=train_ds.d_in, b_x=b_x, b_y=b_y, ell=act.ell,
        delta=args.delta)
    gap = generalization_gap_bound(inputs)
    premise = verify_norm_premise(weights)
    print(f"m = {gap.m:.6g}")
    print(f"r_f = {gap.r_f:.6g}")
    print(f"rademacher = {gap.rademacher:.6g}")
    print(f"gap_bound = {gap.bound:.6g}")
    print(f"delta = {gap.delta:g}")
    print(f"norm_premise_ok = {premise}")
    if args.test_dataset:
        test_ds = read_dataset(args.test_dataset)
        train_mse = float(np.mean((predict_batch(weights, train_ds.x, act, skip) - train_ds.y) ** 2))
        test_mse = float(np.mean((predict_batch(weights, test_ds.x, act, skip) - test_ds.y) ** 2))
        print(f"empirical_gap = {test_mse - train_mse:.6g}")
        print(f"gap_bound_covers = {test_mse - train_mse <= gap.bound}")
    return EXIT_OK


def _cmd_grad_check(args) -> int:
    from .gradcheck import run_grad_check

    report = run_grad_check(args.seed, args.trials)
    print("\n".join(report.lines()))
    return EXIT_OK if report.passed else EXIT_CRITERION


def _cmd_suite(args) -> int:
    from .suites import run_suite

    result = run_suite(args.name, args.out_dir, args.seed)
    print(result.report())
    return EXIT_OK if result.ok else EXIT_CRITERION


if __name__ == "__main__":
    sys.exit(main())
