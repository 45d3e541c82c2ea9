"""Shared fixtures: a small grid for unit tests, the default-size grid for
acceptance runs, and a seeded random polynomial factory."""

import numpy as np
import pytest

from opa import BoundaryGrid, Polynomial


@pytest.fixture
def grid():
    # small power-of-two grid; keeps unit tests fast
    return BoundaryGrid(256)


@pytest.fixture(scope="session")
def big_grid():
    return BoundaryGrid(4096)


def random_poly(rng: np.random.Generator, max_deg: int = 4,
                f0_floor: float = 0.2) -> Polynomial:
    """Random complex polynomial with |f(0)| bounded away from zero.

    The constant term keeps its phase when pushed out to the floor, so the
    draw stays a measurable function of the generator state.
    """
    deg = int(rng.integers(1, max_deg + 1))
    c = 0.5 * (rng.standard_normal(deg + 1) + 1j * rng.standard_normal(deg + 1))
    if abs(c[0]) < f0_floor:
        phase = c[0] / abs(c[0]) if abs(c[0]) > 0 else 1.0
        c[0] = f0_floor * phase
    return Polynomial(c)
