import numpy as np
import pytest

from layerbcd.activations import leaky_relu
from layerbcd.data import TeacherConfig, gen_teacher_data
from layerbcd.init import init_state_monotone
from layerbcd.network import NetworkShape

TINY = dict(n=8, d_in=16, r=6, L=3)


@pytest.fixture(scope="session")
def tiny_dataset():
    cfg = TeacherConfig(d_in=TINY["d_in"], hidden=TINY["r"],
                        activation="leaky_relu:0.5", seed=7)
    return gen_teacher_data(TINY["n"], cfg)


@pytest.fixture(scope="session")
def tiny_shape():
    return NetworkShape(TINY["d_in"], TINY["r"], TINY["L"], TINY["n"])


@pytest.fixture()
def tiny_state(tiny_dataset, tiny_shape):
    return init_state_monotone(tiny_shape, tiny_dataset.x, leaky_relu(0.5), seed=7)


def rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=seed))
