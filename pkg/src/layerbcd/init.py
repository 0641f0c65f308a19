"""Initialization: Gaussian weights, singular value bounding, exact aux fill.

Weight entries are drawn N(0, 1/d_in) for the first layer and N(0, 1/r) for
the rest; layers 2..L are then passed through singular value bounding (SVD,
clip each singular value into [s1, s2], reconstruct). The first layer is
deliberately left unclipped. Auxiliary variables start at the exact forward
values so every hidden loss is exactly zero at iteration 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .activations import ActivationSpec, apply
from .linalg import gaussian_matrix, subseed, svd
from .network import NetworkShape, NetworkState


@dataclass(frozen=True)
class SvbBounds:
    s1: float
    s2: float

    def __post_init__(self):
        if not 0.0 <= self.s1 <= self.s2:
            raise ValueError(f"need 0 <= s1 <= s2, got ({self.s1}, {self.s2})")


MONOTONE_BOUNDS = SvbBounds(0.75, 1.25)
RELU_BOUNDS = SvbBounds(0.0, 0.25)


def svb(w: np.ndarray, bounds: SvbBounds) -> np.ndarray:
    """Clip every singular value of w into [s1, s2] via decompose-reconstruct."""
    u, sigma, vt = svd(w)
    clipped = np.clip(sigma, bounds.s1, bounds.s2)
    return (u * clipped) @ vt


# Tags for deriving independent Philox streams from one run seed. Weight
# layers use tags 1..L; redraws of the output row offset by 100 + attempt.
_LAYER_TAG_BASE = 0
_REDRAW_TAG_BASE = 100


def init_weights(shape: NetworkShape, seed: int, bounds: SvbBounds) -> list[np.ndarray]:
    """Gaussian init with SVB applied to layers 2..L (first layer untouched)."""
    weights = []
    for j, (rows, cols) in enumerate(shape.weight_dims(), start=1):
        variance = 1.0 / shape.d_in if j == 1 else 1.0 / shape.r
        w = gaussian_matrix(rows, cols, variance, subseed(seed, _LAYER_TAG_BASE + j))
        if j >= 2:
            w = svb(w, bounds)
        weights.append(w)
    return weights


def redraw_output_weights(shape: NetworkShape, seed: int, bounds: SvbBounds, attempt: int) -> np.ndarray:
    """Fresh output row for mixed-sign retries, stream-separated per attempt."""
    w = gaussian_matrix(1, shape.r, 1.0 / shape.r, subseed(seed, _REDRAW_TAG_BASE + attempt))
    return svb(w, bounds)


def init_aux_monotone(weights: list[np.ndarray], x: np.ndarray, act: ActivationSpec) -> list[np.ndarray]:
    """V_j = sigma(W_j V_{j-1}) with V_0 the inputs; zero hidden loss."""
    aux = []
    prev = np.asarray(x, dtype=np.float64).T
    for w in weights[:-1]:
        prev = apply(act, w @ prev)
        aux.append(prev)
    return aux


def init_aux_relu(weights: list[np.ndarray], x: np.ndarray) -> list[np.ndarray]:
    """Skip-form fill: V_1 = relu(W_1 x), then V_j = relu(W_j V_{j-1}) + V_{j-1}."""
    from .activations import relu

    act = relu()
    aux = []
    prev = apply(act, weights[0] @ np.asarray(x, dtype=np.float64).T)
    aux.append(prev)
    for w in weights[1:-1]:
        prev = apply(act, w @ prev) + prev
        aux.append(prev)
    return aux


def init_state_monotone(shape: NetworkShape, x, act: ActivationSpec, seed: int,
                        bounds: SvbBounds = MONOTONE_BOUNDS, use_svb: bool = True) -> NetworkState:
    """Full monotone-variant init; use_svb=False skips the clipping (ablation)."""
    if use_svb:
        weights = init_weights(shape, seed, bounds)
    else:
        weights = _raw_weights(shape, seed)
    state = NetworkState(weights, init_aux_monotone(weights, x, act), shape)
    state.validate()
    return state


def init_state_relu(shape: NetworkShape, x, seed: int,
                    bounds: SvbBounds = RELU_BOUNDS, max_redraws: int = 32) -> tuple[NetworkState, int]:
    """ReLU-variant init; redraws the output row until it has mixed signs.

    Returns (state, redraw count). Raises if max_redraws fresh rows all
    come out single-signed, since the output aux subproblem is unsolvable
    for such rows under the non-negativity constraint.
    """
    weights = init_weights(shape, seed, bounds)
    redraws = 0
    while not _mixed_sign(weights[-1]):
        redraws += 1
        if redraws > max_redraws:
            raise RuntimeError(
                f"output row still single-signed after {max_redraws} redraws; "
                "a mixed-sign output row is required for solvability"
            )
        weights[-1] = redraw_output_weights(shape, seed, bounds, redraws)
    state = NetworkState(weights, init_aux_relu(weights, x), shape)
    state.validate()
    return state, redraws


def _raw_weights(shape: NetworkShape, seed: int) -> list[np.ndarray]:
    weights = []
    for j, (rows, cols) in enumerate(shape.weight_dims(), start=1):
        variance = 1.0 / shape.d_in if j == 1 else 1.0 / shape.r
        weights.append(gaussian_matrix(rows, cols, variance, subseed(seed, _LAYER_TAG_BASE + j)))
    return weights


def _mixed_sign(w_l: np.ndarray) -> bool:
    return bool((w_l > 0).any() and (w_l < 0).any())
