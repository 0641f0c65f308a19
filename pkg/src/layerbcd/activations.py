"""Element-wise activation functions and their derivative-bound certificates.

Shipped kinds are piecewise linear: leaky ReLU (slope a on the negative
side), plain ReLU, and identity. Each carries its derivative lower bound
``alpha`` and Lipschitz constant ``ell``; the training theory requires
0 < alpha < 2, which ReLU deliberately fails.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class ActivationSpec:
    """Descriptor for one activation kind.

    kind: "leaky_relu", "relu", or "identity".
    slope: negative-side slope (leaky_relu only; 0 for relu, 1 for identity).
    """

    kind: str
    slope: float

    @property
    def alpha(self) -> float:
        return self.slope

    @property
    def ell(self) -> float:
        return 1.0

    @property
    def tag(self) -> str:
        if self.kind == "leaky_relu":
            return f"leaky_relu:{self.slope:g}"
        return self.kind


def leaky_relu(slope: float) -> ActivationSpec:
    if not 0.0 < slope < 1.0:
        raise ValueError(f"leaky_relu slope must be in (0, 1), got {slope}")
    return ActivationSpec("leaky_relu", slope)


def relu() -> ActivationSpec:
    return ActivationSpec("relu", 0.0)


def identity() -> ActivationSpec:
    return ActivationSpec("identity", 1.0)


def parse_activation(tag: str) -> ActivationSpec:
    """Parse a config tag: ``leaky_relu:<slope>``, ``relu``, or ``identity``."""
    tag = tag.strip()
    if tag == "relu":
        return relu()
    if tag == "identity":
        return identity()
    if tag.startswith("leaky_relu:"):
        return leaky_relu(float(tag.split(":", 1)[1]))
    raise ValueError(f"unknown activation tag {tag!r}")


def apply(spec: ActivationSpec, x: np.ndarray) -> np.ndarray:
    """Element-wise sigma(x); preserves shape, sigma(0) = 0 exactly."""
    if spec.kind == "identity":
        return np.array(x, dtype=np.float64, copy=True)
    x = np.asarray(x, dtype=np.float64)
    return np.where(x >= 0.0, x, spec.slope * x)


def derivative(spec: ActivationSpec, x: np.ndarray) -> np.ndarray:
    """Element-wise sigma'(x); the kink at 0 resolves to 1."""
    x = np.asarray(x, dtype=np.float64)
    if spec.kind == "identity":
        return np.ones_like(x)
    return np.where(x >= 0.0, 1.0, spec.slope)


def apply_and_derivative(spec: ActivationSpec, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """(sigma(x), sigma'(x)) sharing one sign test; hot path of the trainers.

    For the piecewise-linear kinds sigma(x) = x * sigma'(x) exactly, so the
    value reuses the derivative array.
    """
    x = np.asarray(x, dtype=np.float64)
    if spec.kind == "identity":
        return x.copy(), np.ones_like(x)
    d = np.where(x >= 0.0, 1.0, spec.slope)
    return x * d, d


def check_assumption(spec: ActivationSpec) -> tuple[bool, float, float]:
    """Certificate that the strict-monotonicity assumption holds.

    Returns (ok, alpha, ell); ok requires 0 < alpha < 2 with finite ell
    (sigma(0) = 0 holds for every shipped kind by construction).
    """
    ok = 0.0 < spec.alpha < 2.0 and np.isfinite(spec.ell)
    return ok, spec.alpha, spec.ell
