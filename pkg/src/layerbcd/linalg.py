"""Dense matrix primitives: SVD, spectral quantities, seeded Gaussian draws.

All matrices are 2-D float64 numpy arrays in C (row-major) order. Every
function here is pure; callers that need to mutate copy first.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

# Singular values below RANK_RTOL * sigma_max count as zero in rank checks.
RANK_RTOL = 1e-12


class SvdError(RuntimeError):
    """Raised when the underlying SVD iteration fails to converge."""


class SvdResult(NamedTuple):
    u: np.ndarray
    sigma: np.ndarray
    vt: np.ndarray


def as_matrix(a, *, name: str = "matrix") -> np.ndarray:
    """Validate and convert to a 2-D float64 C-contiguous array."""
    m = np.ascontiguousarray(a, dtype=np.float64)
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if m.size and not np.isfinite(m).all():
        raise ValueError(f"{name} contains non-finite entries")
    return m


def svd(a) -> SvdResult:
    """Reduced SVD with singular values sorted descending.

    Satisfies u @ diag(sigma) @ vt == a to within 1e-10 relative Frobenius
    error, with orthonormal columns of u and rows of vt.
    """
    m = as_matrix(a)
    if min(m.shape) < 1:
        raise ValueError(f"svd needs a non-empty matrix, got shape {m.shape}")
    try:
        u, sigma, vt = np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise SvdError(f"SVD did not converge for {m.shape[0]}x{m.shape[1]} matrix") from exc
    return SvdResult(u, sigma, vt)


def operator_norm(a) -> float:
    """Largest singular value; 0.0 for an all-zero matrix."""
    return float(svd(a).sigma[0])


def min_singular_value(a) -> float:
    """Smallest of the min(rows, cols) singular values."""
    return float(svd(a).sigma[-1])


def gaussian_matrix(rows: int, cols: int, variance: float, seed: int) -> np.ndarray:
    """i.i.d. zero-mean Gaussian matrix, bit-reproducible under the seed.

    This is the single Gaussian sampling point for the whole package: a
    counter-based Philox stream keyed by the seed, ziggurat normals scaled
    to the requested variance.
    """
    if variance <= 0:
        raise ValueError(f"variance must be positive, got {variance}")
    gen = np.random.Generator(np.random.Philox(key=seed))
    return gen.standard_normal((rows, cols)) * math.sqrt(variance)


def subseed(seed: int, tag: int) -> int:
    """Derive a per-use stream key from a run seed and a small integer tag."""
    return (seed * 0x9E3779B97F4A7C15 + tag) % (1 << 128)
