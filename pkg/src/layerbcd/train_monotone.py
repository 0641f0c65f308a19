"""Block coordinate descent trainer for strictly monotone activations.

One outer iteration performs, in this exact order:

1. one gradient step on the output weights;
2. one gradient step on each sample's last auxiliary vector;
3. for layers j = L-1 down to 2: one gradient step on W_j, then k_v
   gradient steps on each sample's V_{j-1};
4. k_w gradient steps on the first-layer weights.

Weight gradients sum over samples; auxiliary updates act on per-sample
local losses only. Auxiliary sweeps are vectorized across samples (the
per-sample updates are independent), which is the package's deterministic
stand-in for sample-level parallelism.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, replace

import numpy as np

from . import gradients as g
from .activations import ActivationSpec
from .init import SvbBounds, MONOTONE_BOUNDS, init_state_monotone
from .linalg import min_singular_value, operator_norm
from .network import LossBreakdown, NetworkShape, NetworkState, loss_monotone
from .trace import TraceRow

LOSS_CEILING = 1e12


class DivergenceError(RuntimeError):
    def __init__(self, block: str, outer_iter: int, detail: str = ""):
        self.block = block
        self.outer_iter = outer_iter
        msg = f"training diverged in block '{block}' at outer iteration {outer_iter}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class RankError(RuntimeError):
    def __init__(self, smallest: float, n: int, d_in: int):
        self.smallest = smallest
        super().__init__(
            f"data matrix fails the full-row-rank requirement "
            f"(n={n}, d_in={d_in}, smallest singular value {smallest:.3e})"
        )


@dataclass(frozen=True)
class TrainSchedule:
    """Step sizes and iteration counts for one training run.

    With sample_normalized=True the three weight step sizes are divided by
    the sample count before use (a mean-over-samples convention for the
    weight blocks); auxiliary steps are per-sample and never rescaled.
    """

    eta_v: float
    eta_w1: float
    eta_w2: float
    k_outer: int
    k_v: int
    k_w: int
    gamma: float
    svb: SvbBounds = MONOTONE_BOUNDS
    sample_normalized: bool = False

    def __post_init__(self):
        if min(self.eta_v, self.eta_w1, self.eta_w2) <= 0:
            raise ValueError("all step sizes must be positive")
        if min(self.k_outer, self.k_v, self.k_w) < 1:
            raise ValueError("all iteration counts must be at least 1")
        if self.gamma <= 0:
            raise ValueError("gamma must be positive")

    def effective(self, n: int) -> "TrainSchedule":
        if not self.sample_normalized:
            return self
        return replace(self, eta_w1=self.eta_w1 / n, eta_w2=self.eta_w2 / n,
                       sample_normalized=False)


def update_output_weights(state: NetworkState, y, eta_w1: float) -> NetworkState:
    """One step on the output row against the summed output loss."""
    y = np.asarray(y, dtype=np.float64).ravel()
    state.weights[-1] = state.weights[-1] - eta_w1 * g.grad_output_weights(
        state.weights[-1], state.aux[-1], y)
    return state


def update_output_aux(state: NetworkState, y, eta_v: float) -> NetworkState:
    """One step per sample on V_{L-1,i} against its own output residual."""
    y = np.asarray(y, dtype=np.float64).ravel()
    state.aux[-1] = state.aux[-1] - eta_v * g.grad_output_aux(
        state.weights[-1], state.aux[-1], y)
    return state


def update_hidden_weights(state: NetworkState, j: int, eta_w1: float, gamma: float,
                          act: ActivationSpec) -> NetworkState:
    """One step on W_j (2 <= j <= L-1) against the layer-j reconstruction loss."""
    _check_hidden_layer(state, j)
    prev = state.aux[j - 2]
    state.weights[j - 1] = state.weights[j - 1] - gamma * eta_w1 * g.grad_hidden_weights(
        state.weights[j - 1], prev, state.aux[j - 1], act)
    return state


def update_hidden_aux(state: NetworkState, j: int, i: int, eta_v: float, gamma: float,
                      k_v: int, act: ActivationSpec) -> NetworkState:
    """k_v steps on sample i's V_{j-1} against layer j's local loss."""
    _check_hidden_layer(state, j)
    w = state.weights[j - 1]
    tgt = state.aux[j - 1][:, i : i + 1]
    v = state.aux[j - 2][:, i : i + 1].copy()
    step = gamma * eta_v
    for _ in range(k_v):
        v -= step * g.grad_hidden_aux(w, v, tgt, act)
    state.aux[j - 2][:, i] = v[:, 0]
    return state


def hidden_aux_sweep(state: NetworkState, j: int, eta_v: float, gamma: float,
                     k_v: int, act: ActivationSpec) -> NetworkState:
    """All-samples version of update_hidden_aux (columns evolve independently).

    Equivalent to the per-sample op on every column; the step scaling and
    transpose are hoisted out of the inner loop.
    """
    _check_hidden_layer(state, j)
    w = state.weights[j - 1]
    tgt = state.aux[j - 1]
    v = state.aux[j - 2]
    wt_step = (2.0 * gamma * eta_v) * w.T
    # Overflow in a diverging sweep is tolerated here; the caller's guard
    # turns the resulting non-finite block into a diagnostic.
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(k_v):
            s, d = g.act_forward(act, w @ v)
            v -= wt_step @ (d * (s - tgt))
    return state


def update_first_weights(state: NetworkState, x, eta_w2: float, gamma: float,
                         k_w: int, act: ActivationSpec) -> NetworkState:
    """k_w steps on W_1 against the first-layer reconstruction loss."""
    xt = np.asarray(x, dtype=np.float64).T
    w1 = state.weights[0].copy()
    v1 = state.aux[0]
    x_step = (2.0 * gamma * eta_w2) * xt.T
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(k_w):
            s, d = g.act_forward(act, w1 @ xt)
            w1 -= (d * (s - v1)) @ x_step
    state.weights[0] = w1
    return state


def outer_step(state: NetworkState, x, y, schedule: TrainSchedule, act: ActivationSpec,
               outer_iter: int = 0) -> tuple[NetworkState, LossBreakdown]:
    """One full outer iteration; returns the post-step loss breakdown."""
    sched = schedule.effective(state.shape.n)
    update_output_weights(state, y, sched.eta_w1)
    _guard(state.weights[-1], "output weights", outer_iter)
    update_output_aux(state, y, sched.eta_v)
    _guard(state.aux[-1], "output aux sweep", outer_iter)
    for j in range(state.shape.L - 1, 1, -1):
        update_hidden_weights(state, j, sched.eta_w1, sched.gamma, act)
        _guard(state.weights[j - 1], f"hidden weights W_{j}", outer_iter)
        hidden_aux_sweep(state, j, sched.eta_v, sched.gamma, sched.k_v, act)
        _guard(state.aux[j - 2], f"hidden aux sweep V_{j - 1}", outer_iter)
    update_first_weights(state, x, sched.eta_w2, sched.gamma, sched.k_w, act)
    _guard(state.weights[0], "first-layer weights", outer_iter)
    loss = loss_monotone(state, x, y, sched.gamma, act)
    if not loss.is_finite or loss.total > LOSS_CEILING:
        raise DivergenceError("total loss", outer_iter, f"total={loss.total:.3e}")
    return state, loss


def check_strict_rank(x: np.ndarray) -> None:
    """Raise RankError unless x has numerically full row rank with n <= d_in."""
    x = np.asarray(x, dtype=np.float64)
    n, d_in = x.shape
    smallest = min_singular_value(x)
    if n > d_in or smallest <= 1e-10 * operator_norm(x):
        raise RankError(smallest, n, d_in)


def train(x, y, shape: NetworkShape, schedule: TrainSchedule, act: ActivationSpec,
          seed: int, strict_rank: bool = True, use_svb: bool = True,
          on_iteration=None, on_row=None) -> tuple[NetworkState, list[TraceRow]]:
    """Initialize and run k_outer iterations, recording one trace row each.

    on_iteration, when given, is called with (outer_iter, state, loss) after
    every outer step; exceptions from it propagate (tests use it to probe
    spectra mid-run). on_row receives each TraceRow as it is produced, so
    callers can stream the trace to disk.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if strict_rank:
        check_strict_rank(x)
    state = init_state_monotone(shape, x, act, seed, schedule.svb, use_svb)
    trace: list[TraceRow] = []
    for k in range(1, schedule.k_outer + 1):
        t0 = time.perf_counter()
        state, loss = outer_step(state, x, y, schedule, act, outer_iter=k)
        wall_ms = (time.perf_counter() - t0) * 1e3
        row = TraceRow(k, loss, wall_ms)
        trace.append(row)
        if on_row is not None:
            on_row(row)
        if on_iteration is not None:
            on_iteration(k, state, loss)
    return state, trace


def _check_hidden_layer(state: NetworkState, j: int) -> None:
    if not 2 <= j <= state.shape.L - 1:
        raise ValueError(f"hidden layer index must satisfy 2 <= j <= L-1, got j={j} with L={state.shape.L}")


def _guard(block: np.ndarray, name: str, outer_iter: int) -> None:
    if not np.isfinite(block).all():
        raise DivergenceError(name, outer_iter, "non-finite entries")
