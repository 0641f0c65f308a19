"""Layer-wise block coordinate descent for deep feedforward regression.

Two trainers (strictly monotone activations; ReLU with skip connections and
non-negative projections), certified hyperparameter schedules, a
Rademacher-complexity generalization-bound calculator, teacher-student data
generation, and an experiment CLI.
"""

from .activations import ActivationSpec, identity, leaky_relu, parse_activation, relu
from .init import MONOTONE_BOUNDS, RELU_BOUNDS, SvbBounds, svb
from .network import LossBreakdown, NetworkShape, NetworkState, loss_monotone, loss_relu_skip, predict
from .train_monotone import TrainSchedule, train
from .train_relu import train_relu

__all__ = [
    "ActivationSpec",
    "LossBreakdown",
    "MONOTONE_BOUNDS",
    "NetworkShape",
    "NetworkState",
    "RELU_BOUNDS",
    "SvbBounds",
    "TrainSchedule",
    "identity",
    "leaky_relu",
    "loss_monotone",
    "loss_relu_skip",
    "parse_activation",
    "predict",
    "relu",
    "svb",
    "train",
    "train_relu",
]
