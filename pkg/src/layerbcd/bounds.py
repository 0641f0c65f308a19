"""Generalization-gap bound from spectrally-bounded Rademacher complexity.

All logarithms are natural. The printed complexity bound carries a
log(1/sqrt(n)) factor that is negative for n > 1 and would make the
"bound" negative; the default here uses log(sqrt(n)) so the quantity stays
an upper bound, with the printed sign available behind a flag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import operator_norm

NORM_PREMISE_CAP = 2.0
_NORM_SLACK = 1e-9


@dataclass(frozen=True)
class BoundInputs:
    x_norm: float   # operator norm of the n x d_in data matrix
    n: int
    r: int
    L: int
    d_in: int
    b_x: float      # almost-sure bound on ||x||
    b_y: float      # almost-sure bound on |y|
    ell: float      # activation Lipschitz constant
    delta: float    # failure probability

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")
        if min(self.x_norm, self.b_x, self.b_y, self.ell) < 0:
            raise ValueError("norm bounds must be non-negative")
        if min(self.n, self.r, self.L, self.d_in) < 1:
            raise ValueError("counts must be positive")


def capacity_r_f(inputs: BoundInputs) -> float:
    """Capacity constant d_in (2r)^L L^3 ||X||^2 log(2 r^2) log(n)."""
    if inputs.n < 2:
        raise ValueError("need n >= 2 (log n must be positive)")
    return (inputs.d_in * (2.0 * inputs.r) ** inputs.L * inputs.L ** 3
            * inputs.x_norm ** 2 * math.log(2.0 * inputs.r ** 2) * math.log(inputs.n))


def rademacher_bound(inputs: BoundInputs, printed_sign: bool = False) -> float:
    """Complexity bound 4/(n sqrt(n)) + log(sqrt(n)) * 12 sqrt(R_F) / n.

    printed_sign=True evaluates the log factor as log(1/sqrt(n)) instead,
    reproducing the (sign-broken) printed form.
    """
    r_f = capacity_r_f(inputs)
    n = inputs.n
    log_factor = math.log(1.0 / math.sqrt(n)) if printed_sign else math.log(math.sqrt(n))
    return 4.0 / (n * math.sqrt(n)) + log_factor * 12.0 * math.sqrt(r_f) / n


def output_range_m(inputs: BoundInputs) -> float:
    """Prediction-error range B_Y + 2^L ell^(L-1) B_X (needs ||W_j||_op <= 2)."""
    return inputs.b_y + 2.0 ** inputs.L * inputs.ell ** (inputs.L - 1) * inputs.b_x


@dataclass(frozen=True)
class GapBound:
    bound: float
    m: float
    r_f: float
    rademacher: float
    delta: float


def generalization_gap_bound(inputs: BoundInputs) -> GapBound:
    """High-probability gap bound 2 M R(F) + 3 M^2 sqrt(log(2/delta) / (2n))."""
    m = output_range_m(inputs)
    r_f = capacity_r_f(inputs)
    rad = rademacher_bound(inputs)
    bound = 2.0 * m * rad + 3.0 * m * m * math.sqrt(math.log(2.0 / inputs.delta) / (2.0 * inputs.n))
    return GapBound(bound, m, r_f, rad, inputs.delta)


def verify_norm_premise(weights: list[np.ndarray]) -> bool:
    """True iff every layer's operator norm is at most 2 (within 1e-9)."""
    return all(operator_norm(w) <= NORM_PREMISE_CAP + _NORM_SLACK for w in weights)
