"""Teacher-student synthetic regression data and dataset file I/O.

Inputs are standard Gaussian vectors; labels come from a fixed one-hidden-
layer teacher network sharing the student's activation. Files are CSV with
one sample per row (d_in feature columns then the label), floats at 17
significant digits so a write/read round trip is bit exact; generator
metadata rides along as leading ``# key=value`` comment lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .activations import ActivationSpec, apply, parse_activation
from .linalg import gaussian_matrix, min_singular_value, operator_norm, subseed

_TEACHER_TAG = 11
_INPUT_TAG = 12


@dataclass(frozen=True)
class TeacherConfig:
    d_in: int
    hidden: int
    activation: str
    weight_scale: float = 1.0
    seed: int = 0

    def __post_init__(self):
        if self.hidden < 1:
            raise ValueError(f"teacher hidden width must be >= 1, got {self.hidden}")


@dataclass
class Dataset:
    x: np.ndarray          # n x d_in
    y: np.ndarray          # (n,)
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.x.shape[0]

    @property
    def d_in(self) -> int:
        return self.x.shape[1]


def teacher_weights(cfg: TeacherConfig) -> tuple[np.ndarray, np.ndarray]:
    """The teacher's two layers; variances follow the 1/fan-in convention."""
    if cfg.weight_scale == 0.0:
        return np.zeros((cfg.hidden, cfg.d_in)), np.zeros((1, cfg.hidden))
    scale_sq = cfg.weight_scale ** 2
    w1 = gaussian_matrix(cfg.hidden, cfg.d_in, scale_sq / cfg.d_in, subseed(cfg.seed, _TEACHER_TAG))
    w2 = gaussian_matrix(1, cfg.hidden, scale_sq / cfg.hidden, subseed(cfg.seed, _TEACHER_TAG + 1))
    return w1, w2


def teacher_forward(cfg: TeacherConfig, x: np.ndarray) -> np.ndarray:
    w1, w2 = teacher_weights(cfg)
    act = parse_activation(cfg.activation)
    return (w2 @ apply(act, w1 @ np.asarray(x, dtype=np.float64).T)).ravel()


def gen_teacher_data(n: int, cfg: TeacherConfig, x_seed: int | None = None) -> Dataset:
    """Draw n standard-Gaussian inputs and label them with the teacher.

    The teacher's weights depend only on cfg.seed; x_seed (defaulting to a
    stream derived from cfg.seed) controls the input draw, so fresh inputs
    can be generated against the same teacher.
    """
    if x_seed is None:
        x_seed = subseed(cfg.seed, _INPUT_TAG)
    x = gaussian_matrix(n, cfg.d_in, 1.0, x_seed)
    y = teacher_forward(cfg, x)
    meta = {
        "teacher_seed": cfg.seed,
        "teacher_hidden": cfg.hidden,
        "activation": cfg.activation,
        "weight_scale": cfg.weight_scale,
        "d_in": cfg.d_in,
    }
    return Dataset(x, y, meta)


def check_full_rank(x) -> tuple[bool, float]:
    """Numerical full-row-rank check: n <= d_in and sigma_min above tolerance."""
    x = np.asarray(x, dtype=np.float64)
    n, d_in = x.shape
    smallest = min_singular_value(x)
    ok = n <= d_in and smallest > 1e-10 * operator_norm(x)
    return ok, smallest


def write_dataset(path, ds: Dataset) -> None:
    with open(path, "w") as fh:
        for key, val in sorted(ds.meta.items()):
            fh.write(f"# {key}={val}\n")
        header = [f"f{j}" for j in range(ds.d_in)] + ["y"]
        fh.write(",".join(header) + "\n")
        for xi, yi in zip(ds.x, ds.y):
            fh.write(",".join(f"{v:.17g}" for v in (*xi, yi)) + "\n")


class DatasetParseError(ValueError):
    pass


def read_dataset(path) -> Dataset:
    meta: dict = {}
    header: list[str] | None = None
    rows: list[list[float]] = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#"):
                body = line.lstrip("# ").strip()
                if "=" in body:
                    key, val = body.split("=", 1)
                    meta[key.strip()] = _parse_meta_value(val.strip())
                continue
            if header is None:
                header = line.split(",")
                if header[-1] != "y":
                    raise DatasetParseError(f"{path}:{lineno}: header must end with a 'y' column")
                continue
            cells = line.split(",")
            if len(cells) != len(header):
                raise DatasetParseError(
                    f"{path}:{lineno}: expected {len(header)} columns, got {len(cells)}")
            try:
                rows.append([float(c) for c in cells])
            except ValueError as exc:
                raise DatasetParseError(f"{path}:{lineno}: {exc}") from exc
    if header is None or not rows:
        raise DatasetParseError(f"{path}: empty dataset")
    arr = np.array(rows, dtype=np.float64)
    return Dataset(arr[:, :-1], arr[:, -1], meta)


def _parse_meta_value(text: str):
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text
