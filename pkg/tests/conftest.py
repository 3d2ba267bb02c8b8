import math

import numpy as np
import pytest

from bitorus import AtomicTorusMeasure, PlanarAtomicMeasure


@pytest.fixture
def rng():
    return np.random.default_rng(20260826)


def random_torus_prob(rng, dim=2, n_atoms=4) -> AtomicTorusMeasure:
    thetas = rng.uniform(-math.pi, math.pi, size=(n_atoms, dim))
    w = rng.uniform(0.1, 1.0, size=n_atoms)
    w = w / w.sum()
    return AtomicTorusMeasure(dim, list(zip(map(tuple, thetas), w)))


def random_torus_levy(rng, dim=2, n_atoms=4) -> AtomicTorusMeasure:
    thetas = rng.uniform(0.1, math.pi, size=(n_atoms, dim))
    w = rng.uniform(0.1, 1.0, size=n_atoms)
    return AtomicTorusMeasure(dim, list(zip(map(tuple, thetas), w)), mode="levy")


def random_planar_levy(rng, dim=2, n_atoms=4) -> PlanarAtomicMeasure:
    xs = rng.uniform(0.1, 2.0, size=(n_atoms, dim))
    w = rng.uniform(0.1, 1.0, size=n_atoms)
    return PlanarAtomicMeasure(dim, list(zip(map(tuple, xs), w)), mode="levy")
