"""Shared fixtures: the two exact toy datasets and a seeded random deck."""

from pathlib import Path

import numpy as np
import pytest

from moransar.spatial_data import (
    RawSizeVector,
    spatial_lag,
    standardize,
    weights_from_distances,
)
from moransar.verification import random_instance

FIXTURES_DIR = Path(__file__).resolve().parent.parent / "fixtures"

# two sites at distance 2, sizes 1 and 3: I = -1, rho = -2, R2 = 1
TWO_SITE_SIZES = [1.0, 3.0]
TWO_SITE_DIST = [[0.0, 2.0], [2.0, 0.0]]

# three sites on a line, unit spacing, sizes 1, 2, 3: I = -0.3, rho = -10
CHAIN_SIZES = [1.0, 2.0, 3.0]
CHAIN_DIST = [[0.0, 1.0, 2.0], [1.0, 0.0, 1.0], [2.0, 1.0, 0.0]]


def prepare(raw, distances):
    """Standardize and normalize one instance; returns (z, weights, lag)."""
    z = standardize(raw)
    weights = weights_from_distances(np.asarray(distances, dtype=float))
    lag = spatial_lag(weights, z)
    return z, weights, lag


@pytest.fixture
def two_site():
    return RawSizeVector.from_values(TWO_SITE_SIZES), np.array(TWO_SITE_DIST)


@pytest.fixture
def chain():
    return RawSizeVector.from_values(CHAIN_SIZES), np.array(CHAIN_DIST)


@pytest.fixture
def fixtures_dir():
    return FIXTURES_DIR


@pytest.fixture(scope="session")
def deck():
    """First 30 instances of the seed-0 random deck, precomputed."""
    return [random_instance(0, k) for k in range(30)]
