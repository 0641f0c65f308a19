"""Experiment orchestration shared by the CLI and the acceptance suites."""

from __future__ import annotations

import time
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .activations import parse_activation
from .bounds import verify_norm_premise
from .config import ConfigError, RunConfig
from .data import Dataset, TeacherConfig, gen_teacher_data, read_dataset
from .init import (MONOTONE_BOUNDS, RELU_BOUNDS, SvbBounds,
                   init_state_monotone, init_state_relu)
from .network import NetworkShape, save_checkpoint
from .schedule import measure_stats, schedule_monotone, schedule_relu
from .trace import TraceRow, TraceWriter
from .train_monotone import TrainSchedule, train
from .train_relu import train_relu

TRACE_NAME = "trace.csv"
CHECKPOINT_NAME = "model.ckpt"
SUMMARY_NAME = "summary.txt"


@dataclass
class RunResult:
    config: RunConfig
    schedule: TrainSchedule
    trace: list[TraceRow]
    final_total: float
    norm_premise_ok: bool
    out_dir: Path
    wall_s: float


def resolve_dataset(config: RunConfig) -> Dataset:
    if config.dataset is not None:
        ds = read_dataset(config.dataset)
        if ds.d_in != config.d_in or ds.n != config.n:
            # Inline shape fields are defaults; the file wins.
            pass
        return ds
    hidden = config.teacher_hidden if config.teacher_hidden is not None else config.r
    teacher = TeacherConfig(config.d_in, hidden, config.activation, seed=config.seed)
    return gen_teacher_data(config.n, teacher)


def resolve_bounds(config: RunConfig) -> SvbBounds:
    if config.svb_s1 is not None:
        return SvbBounds(config.svb_s1, config.svb_s2)
    return MONOTONE_BOUNDS if config.mode == "monotone" else RELU_BOUNDS


def build_schedule(config: RunConfig, ds: Dataset) -> TrainSchedule:
    """Theorem schedule (with optional per-field overrides) or fully explicit."""
    bounds = resolve_bounds(config)
    act = parse_activation(config.activation)
    shape = NetworkShape(ds.d_in, config.r, config.L, ds.n)
    if config.schedule == "explicit":
        return TrainSchedule(config.eta_v, config.eta_w1, config.eta_w2,
                             config.k_outer, config.k_v, config.k_w,
                             config.gamma, bounds, config.sample_normalized)
    if config.mode == "monotone":
        probe = init_state_monotone(shape, ds.x, act, config.seed, bounds, config.svb)
        stats = measure_stats(probe, ds.x, ds.y, act, config.gamma, config.epsilon)
        sched = schedule_monotone(stats).schedule
    else:
        probe, _ = init_state_relu(shape, ds.x, config.seed, bounds)
        stats = measure_stats(probe, ds.x, ds.y, act, config.gamma, config.epsilon)
        sched = schedule_relu(stats).schedule
    overrides = {name: getattr(config, name)
                 for name in ("eta_v", "eta_w1", "eta_w2", "k_outer", "k_v", "k_w")
                 if getattr(config, name) is not None}
    overrides["svb"] = bounds
    overrides["sample_normalized"] = config.sample_normalized
    return replace(sched, **overrides)


def run_train(config: RunConfig, quiet: bool = True) -> RunResult:
    """Full training run: data, schedule, training, and output files."""
    config.validate()
    ds = resolve_dataset(config)
    act = parse_activation(config.activation)
    shape = NetworkShape(ds.d_in, config.r, config.L, ds.n)
    schedule = build_schedule(config, ds)
    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    algo = {"monotone": "monotone", "relu_skip": "relu_skip", "relu_noskip": "relu_noskip"}[config.mode]
    t0 = time.perf_counter()
    with TraceWriter(out_dir / TRACE_NAME, algo, shape.L - 1) as tw:
        if config.mode == "relu_skip":
            state, trace, _ = train_relu(ds.x, ds.y, shape, schedule, config.seed,
                                         strict_rank=config.strict_rank, on_row=tw.write)
        else:
            # relu_noskip deliberately reuses the plain trainer with relu.
            state, trace = train(ds.x, ds.y, shape, schedule, act, config.seed,
                                 strict_rank=config.strict_rank, use_svb=config.svb,
                                 on_row=tw.write)
    wall_s = time.perf_counter() - t0

    save_checkpoint(out_dir / CHECKPOINT_NAME, state.weights, act,
                    skip=config.mode == "relu_skip")
    premise_ok = verify_norm_premise(state.weights)
    final = trace[-1].loss if trace else None
    summary = _summary_lines(config, schedule, trace, premise_ok, wall_s)
    (out_dir / SUMMARY_NAME).write_text("\n".join(summary) + "\n")
    if not quiet:
        print("\n".join(summary))
    return RunResult(config, schedule, trace, final.total if final else float("nan"),
                     premise_ok, out_dir, wall_s)


def _summary_lines(config: RunConfig, schedule: TrainSchedule, trace: list[TraceRow],
                   premise_ok: bool, wall_s: float) -> list[str]:
    final = trace[-1].loss
    lines = [
        f"mode = {config.mode}",
        f"activation = {config.activation}",
        f"L = {config.L}",
        f"r = {config.r}",
        f"seed = {config.seed}",
        f"svb = {config.svb}",
        f"eta_v = {schedule.eta_v:.17g}",
        f"eta_w1 = {schedule.eta_w1:.17g}",
        f"eta_w2 = {schedule.eta_w2:.17g}",
        f"k_outer = {schedule.k_outer}",
        f"k_v = {schedule.k_v}",
        f"k_w = {schedule.k_w}",
        f"gamma = {schedule.gamma:.17g}",
        f"svb_bounds = ({schedule.svb.s1:g}, {schedule.svb.s2:g})",
        f"sample_normalized = {schedule.sample_normalized}",
        f"final_total = {final.total:.17g}",
        f"final_output = {final.output:.17g}",
    ]
    lines += [f"final_hidden_{j + 1} = {h:.17g}" for j, h in enumerate(final.hidden)]
    lines += [
        f"norm_premise_ok = {premise_ok}",
        f"wall_s = {wall_s:.3f}",
    ]
    return lines
