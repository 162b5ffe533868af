"""Shared fixtures: small deterministic datasets used across the suite."""

import numpy as np
import pytest

from pbda.data import generate_moons, pair, rotate


@pytest.fixture(scope="session")
def small_source():
    return generate_moons(10, 0.05, seed=1)


@pytest.fixture(scope="session")
def small_paired(small_source):
    target = rotate(generate_moons(10, 0.05, seed=2), 30.0).unlabeled()
    return pair(small_source, target, seed=3)


@pytest.fixture(scope="session")
def probe_w():
    return np.array([0.4, -0.9])
