"""Block coordinate descent trainer for ReLU networks with skip connections.

Differences from the monotone trainer: the output row is frozen for the
whole run, every auxiliary update is followed by an element-wise projection
onto the non-negative orthant, hidden residuals carry the skip term, and
the first-layer inner loop drops the activation (its targets are already
non-negative, so the linear system is the right subproblem).
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import gradients as g
from .activations import relu
from .init import init_state_relu
from .network import LossBreakdown, NetworkShape, NetworkState, loss_relu_skip
from .train_monotone import (DivergenceError, TrainSchedule, _guard,
                             check_strict_rank)
from .trace import TraceRow

_RELU = relu()


def project_nonneg(v: np.ndarray) -> np.ndarray:
    """Element-wise max with zero."""
    return np.maximum(v, 0.0)


@dataclass(frozen=True)
class OutputRowStats:
    """Positive/negative mass split of the fixed output row."""

    w_plus_sq: float
    w_minus_sq: float
    w_min_sq: float
    mixed_sign: bool


def output_row_stats(w_l: np.ndarray) -> OutputRowStats:
    w = np.asarray(w_l, dtype=np.float64).ravel()
    plus = float(np.sum(np.square(np.maximum(w, 0.0))))
    minus = float(np.sum(np.square(np.minimum(w, 0.0))))
    return OutputRowStats(plus, minus, min(plus, minus), plus > 0.0 and minus > 0.0)


def solve_nonneg_output(w_l: np.ndarray, y: float) -> np.ndarray:
    """A non-negative v with w_l @ v == y, for mixed-sign rows.

    Puts y / w_p on the first positive entry when y >= 0, y / w_q on the
    first negative entry when y < 0, zeros elsewhere.
    """
    w = np.asarray(w_l, dtype=np.float64).ravel()
    stats = output_row_stats(w)
    if not stats.mixed_sign:
        raise ValueError("output row must contain both positive and negative entries")
    v = np.zeros_like(w)
    if y == 0.0:
        return v
    idx = int(np.argmax(w > 0.0)) if y > 0.0 else int(np.argmax(w < 0.0))
    v[idx] = y / w[idx]
    return v


def update_output_aux_projected(state: NetworkState, y, eta_v: float) -> NetworkState:
    """One projected gradient step per sample on V_{L-1,i}; W_L untouched."""
    y = np.asarray(y, dtype=np.float64).ravel()
    v = state.aux[-1]
    v -= eta_v * g.grad_output_aux(state.weights[-1], v, y)
    np.maximum(v, 0.0, out=v)
    return state


def update_hidden_weights_skip(state: NetworkState, j: int, eta_w1: float, gamma: float) -> NetworkState:
    """One step on W_j against the layer-j skip reconstruction loss."""
    _check_hidden_layer(state, j)
    prev = state.aux[j - 2]
    state.weights[j - 1] = state.weights[j - 1] - gamma * eta_w1 * g.grad_hidden_weights_skip(
        state.weights[j - 1], prev, state.aux[j - 1], _RELU)
    return state


def update_hidden_aux_skip(state: NetworkState, j: int, i: int, eta_v: float, gamma: float,
                           k_v: int) -> NetworkState:
    """k_v projected steps on sample i's V_{j-1} against the skip loss."""
    _check_hidden_layer(state, j)
    w = state.weights[j - 1]
    tgt = state.aux[j - 1][:, i : i + 1]
    v = state.aux[j - 2][:, i : i + 1].copy()
    step = gamma * eta_v
    for _ in range(k_v):
        v -= step * g.grad_hidden_aux_skip(w, v, tgt, _RELU)
        np.maximum(v, 0.0, out=v)
    state.aux[j - 2][:, i] = v[:, 0]
    return state


def hidden_aux_sweep_skip(state: NetworkState, j: int, eta_v: float, gamma: float,
                          k_v: int) -> NetworkState:
    """All-samples version of update_hidden_aux_skip."""
    _check_hidden_layer(state, j)
    w = state.weights[j - 1]
    tgt = state.aux[j - 1]
    v = state.aux[j - 2]
    step2 = 2.0 * gamma * eta_v
    wt = w.T
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(k_v):
            s, d = g.act_forward(_RELU, w @ v)
            resid = s + v - tgt
            v -= step2 * (wt @ (d * resid) + resid)
            np.maximum(v, 0.0, out=v)
    return state


def update_first_weights_linear(state: NetworkState, x, eta_w2: float, gamma: float,
                                k_w: int) -> NetworkState:
    """k_w steps on W_1 against the activation-free least-squares loss."""
    xt = np.asarray(x, dtype=np.float64).T
    w1 = state.weights[0].copy()
    v1 = state.aux[0]
    x_step = (2.0 * gamma * eta_w2) * xt.T
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(k_w):
            w1 -= (w1 @ xt - v1) @ x_step
    state.weights[0] = w1
    return state


def outer_step_relu(state: NetworkState, x, y, schedule: TrainSchedule,
                    outer_iter: int = 0) -> tuple[NetworkState, LossBreakdown]:
    """One full outer iteration of the skip-connection algorithm."""
    sched = schedule.effective(state.shape.n)
    update_output_aux_projected(state, y, sched.eta_v)
    _guard(state.aux[-1], "output aux sweep", outer_iter)
    for j in range(state.shape.L - 1, 1, -1):
        update_hidden_weights_skip(state, j, sched.eta_w1, sched.gamma)
        _guard(state.weights[j - 1], f"hidden weights W_{j}", outer_iter)
        hidden_aux_sweep_skip(state, j, sched.eta_v, sched.gamma, sched.k_v)
        _guard(state.aux[j - 2], f"hidden aux sweep V_{j - 1}", outer_iter)
    update_first_weights_linear(state, x, sched.eta_w2, sched.gamma, sched.k_w)
    _guard(state.weights[0], "first-layer weights", outer_iter)
    loss = loss_relu_skip(state, x, y, sched.gamma, _RELU)
    if not loss.is_finite or loss.total > 1e12:
        raise DivergenceError("total loss", outer_iter, f"total={loss.total:.3e}")
    return state, loss


def train_relu(x, y, shape: NetworkShape, schedule: TrainSchedule, seed: int,
               strict_rank: bool = True, on_iteration=None, on_row=None
               ) -> tuple[NetworkState, list[TraceRow], int]:
    """Initialize (redrawing single-signed output rows) and run k_outer steps."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if strict_rank:
        check_strict_rank(x)
    state, redraws = init_state_relu(shape, x, seed, schedule.svb)
    trace: list[TraceRow] = []
    for k in range(1, schedule.k_outer + 1):
        t0 = time.perf_counter()
        state, loss = outer_step_relu(state, x, y, schedule, outer_iter=k)
        wall_ms = (time.perf_counter() - t0) * 1e3
        row = TraceRow(k, loss, wall_ms)
        trace.append(row)
        if on_row is not None:
            on_row(row)
        if on_iteration is not None:
            on_iteration(k, state, loss)
    return state, trace, redraws


def _check_hidden_layer(state: NetworkState, j: int) -> None:
    if not 2 <= j <= state.shape.L - 1:
        raise ValueError(f"hidden layer index must satisfy 2 <= j <= L-1, got j={j} with L={state.shape.L}")
