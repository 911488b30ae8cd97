"""Shared fixtures: grids and kernels are expensive, build them once."""

import numpy as np
import pytest

from halfline import hardy, spectral


@pytest.fixture(scope="session")
def packet_grids():
    """Wave-packet transform pair (k <= 16, r <= 160)."""
    return spectral.transform_grids(16.0, 160.0)


@pytest.fixture(scope="session")
def hardy_pair():
    """Hardy round-trip transform pair (k <= 10, r <= 600)."""
    return spectral.transform_grids(10.0, 600.0)


@pytest.fixture(scope="session")
def line_grid():
    """The certified default full-line grid (N = 2^22)."""
    return hardy.default_line_grid()


@pytest.fixture(scope="session")
def small_line_grid():
    """Cheap full-line grid for algebraic identities that do not depend on
    the sampling floor of rational atoms."""
    return hardy.LineGrid.make(2**16, 2048.0)


@pytest.fixture()
def rng():
    return np.random.default_rng(340282366920938463463374607431768211456 % 2**31)
