"""Network iterate: weight matrices, per-sample auxiliary vectors, losses.

Shapes follow a single convention throughout the package:

* weights[0] is r x d_in, weights[1..L-2] are r x r, weights[L-1] is 1 x r;
* aux[j-1] holds the layer-j auxiliary vectors as an r x n matrix whose
  column i belongs to sample i (aux[0] approximates layer 1's output);
* data matrices X are n x d_in with one sample per row, labels y are (n,).

The training objective splits into an output term (W_L V_{L-1,i} - y_i)^2
summed over samples plus gamma-weighted per-layer reconstruction terms; the
skip variant inserts the previous layer's vector into each hidden residual
from layer 2 on.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field

import numpy as np

from .activations import ActivationSpec, apply, parse_activation


class ShapeError(ValueError):
    """Inconsistent dimensions between state, data, and labels."""


@dataclass(frozen=True)
class NetworkShape:
    d_in: int
    r: int
    L: int
    n: int
    d_out: int = 1

    def __post_init__(self):
        if self.L < 2:
            raise ShapeError(f"need at least 2 layers, got L={self.L}")
        if self.d_out != 1:
            raise ShapeError("only single-output networks are supported")
        if min(self.d_in, self.r, self.n) < 1:
            raise ShapeError(f"degenerate shape {self}")

    def weight_dims(self) -> list[tuple[int, int]]:
        dims = [(self.r, self.d_in)]
        dims += [(self.r, self.r)] * (self.L - 2)
        dims.append((1, self.r))
        return dims


@dataclass
class NetworkState:
    """Mutable training iterate; single-writer (the trainer that owns it)."""

    weights: list[np.ndarray]
    aux: list[np.ndarray]
    shape: NetworkShape

    def validate(self) -> None:
        dims = self.shape.weight_dims()
        if len(self.weights) != self.shape.L:
            raise ShapeError(f"expected {self.shape.L} weight matrices, got {len(self.weights)}")
        for j, (w, d) in enumerate(zip(self.weights, dims), start=1):
            if w.shape != d:
                raise ShapeError(f"W_{j} has shape {w.shape}, expected {d}")
        if len(self.aux) != self.shape.L - 1:
            raise ShapeError(f"expected {self.shape.L - 1} aux blocks, got {len(self.aux)}")
        for j, v in enumerate(self.aux, start=1):
            if v.shape != (self.shape.r, self.shape.n):
                raise ShapeError(f"aux block {j} has shape {v.shape}, expected {(self.shape.r, self.shape.n)}")

    def copy(self) -> "NetworkState":
        return NetworkState(
            [w.copy() for w in self.weights],
            [v.copy() for v in self.aux],
            self.shape,
        )


@dataclass(frozen=True)
class LossBreakdown:
    """Objective value split into output and per-layer hidden terms."""

    total: float
    output: float
    hidden: tuple[float, ...]
    gamma: float

    @property
    def is_finite(self) -> bool:
        return np.isfinite(self.total)


def _check_data(state: NetworkState, x: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != (state.shape.n, state.shape.d_in):
        raise ShapeError(f"data matrix has shape {x.shape}, expected {(state.shape.n, state.shape.d_in)}")
    if y.shape != (state.shape.n,):
        raise ShapeError(f"labels have shape {y.shape}, expected {(state.shape.n,)}")
    return x, y


def output_residuals(state: NetworkState, y: np.ndarray) -> np.ndarray:
    """Per-sample output residuals W_L V_{L-1,i} - y_i as a length-n vector."""
    return (state.weights[-1] @ state.aux[-1]).ravel() - np.asarray(y, dtype=np.float64).ravel()


def loss_monotone(state: NetworkState, x, y, gamma: float, act: ActivationSpec) -> LossBreakdown:
    """Objective of the plain (no-skip) formulation."""
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    x, y = _check_data(state, x, y)
    state.validate()
    prev = x.T
    hidden = []
    for j in range(state.shape.L - 1):
        resid = apply(act, state.weights[j] @ prev) - state.aux[j]
        hidden.append(gamma * float(np.sum(resid * resid)))
        prev = state.aux[j]
    r = output_residuals(state, y)
    output = float(r @ r)
    return LossBreakdown(output + sum(hidden), output, tuple(hidden), gamma)


def loss_relu_skip(state: NetworkState, x, y, gamma: float, act: ActivationSpec) -> LossBreakdown:
    """Objective of the skip-connection formulation (ReLU training).

    Layer 1 keeps the plain reconstruction residual; layers 2..L-1 add the
    previous auxiliary vector inside the residual.
    """
    if act.kind != "relu":
        raise ValueError(f"skip objective is defined for relu, got {act.tag}")
    if gamma <= 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    x, y = _check_data(state, x, y)
    state.validate()
    hidden = []
    resid = apply(act, state.weights[0] @ x.T) - state.aux[0]
    hidden.append(gamma * float(np.sum(resid * resid)))
    for j in range(1, state.shape.L - 1):
        resid = apply(act, state.weights[j] @ state.aux[j - 1]) + state.aux[j - 1] - state.aux[j]
        hidden.append(gamma * float(np.sum(resid * resid)))
    r = output_residuals(state, y)
    output = float(r @ r)
    return LossBreakdown(output + sum(hidden), output, tuple(hidden), gamma)


def predict(weights: list[np.ndarray], x_new, act: ActivationSpec, skip: bool = False) -> float:
    """Forward pass through the weights alone (auxiliary variables unused)."""
    v = np.asarray(x_new, dtype=np.float64).reshape(-1, 1)
    v = apply(act, weights[0] @ v)
    for w in weights[1:-1]:
        if skip:
            v = apply(act, w @ v) + v
        else:
            v = apply(act, w @ v)
    return float((weights[-1] @ v).item())


def predict_batch(weights: list[np.ndarray], x, act: ActivationSpec, skip: bool = False) -> np.ndarray:
    """Forward pass for an n x d_in batch; returns a length-n vector."""
    v = apply(act, weights[0] @ np.asarray(x, dtype=np.float64).T)
    for w in weights[1:-1]:
        v = apply(act, w @ v) + v if skip else apply(act, w @ v)
    return (weights[-1] @ v).ravel()


# ---------------------------------------------------------------------------
# Checkpoint format (v1, textual, stable):
#   line 1:  layerbcd-checkpoint v1
#   line 2:  d_in=<int> r=<int> L=<int> activation=<tag> skip=<0|1>
#   then per layer j = 1..L: a line "layer <j> <rows> <cols>" followed by
#   <rows> lines of <cols> floats printed with 17 significant digits.
# Auxiliary variables are not checkpointed; they are training state only.
# ---------------------------------------------------------------------------

_MAGIC = "layerbcd-checkpoint v1"


def save_checkpoint(path, weights: list[np.ndarray], act: ActivationSpec, skip: bool) -> None:
    buf = io.StringIO()
    r, d_in = weights[0].shape
    buf.write(f"{_MAGIC}\n")
    buf.write(f"d_in={d_in} r={r} L={len(weights)} activation={act.tag} skip={int(skip)}\n")
    for j, w in enumerate(weights, start=1):
        buf.write(f"layer {j} {w.shape[0]} {w.shape[1]}\n")
        for row in w:
            buf.write(" ".join(f"{v:.17g}" for v in row) + "\n")
    with open(path, "w") as fh:
        fh.write(buf.getvalue())


def load_checkpoint(path) -> tuple[list[np.ndarray], ActivationSpec, bool]:
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0] != _MAGIC:
        raise ValueError(f"{path}: not a layerbcd checkpoint")
    header = dict(kv.split("=", 1) for kv in lines[1].split())
    act = parse_activation(header["activation"])
    skip = bool(int(header["skip"]))
    weights = []
    pos = 2
    for _ in range(int(header["L"])):
        tag, _j, rows, cols = lines[pos].split()
        if tag != "layer":
            raise ValueError(f"{path}: malformed layer header at line {pos + 1}")
        rows, cols = int(rows), int(cols)
        w = np.array([line.split() for line in lines[pos + 1 : pos + 1 + rows]], dtype=np.float64)
        if w.shape != (rows, cols):
            raise ValueError(f"{path}: layer block at line {pos + 1} has wrong shape")
        weights.append(w)
        pos += 1 + rows
    return weights, act, skip
