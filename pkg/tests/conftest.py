"""
Pytest configuration and fixtures for omegapy test suite.

This module provides common fixtures and configuration for all omegapy tests.
"""

import pytest
import sys
import os
import numpy as np

# Add src directory to path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src'))

from omegapy import build_f, build_g, build_h, cantor_fn, from_breakpoints, identity_fn  # noqa: E402


@pytest.fixture
def f_fn():
    """The nondecreasing function on [0, 7] with the Cantor block on [2, 3]."""
    return build_f()


@pytest.fixture
def g_fn():
    """f with the Cantor block replaced by the identity."""
    return build_g()


@pytest.fixture
def h_fn():
    """The non-monotone function on [0, 2]."""
    return build_h()


@pytest.fixture
def cantor():
    """The Cantor function f1 as a PiecewiseFn on [0, 1]."""
    return cantor_fn()


@pytest.fixture
def identity():
    """The identity on [0, 1]."""
    return identity_fn()


@pytest.fixture
def sawtooth():
    """
    Fixture providing the tent (0,0) -> (0.5,1) -> (1,0).

    Lipschitz constant 2, not monotone.
    """
    return from_breakpoints([0.0, 0.5, 1.0], [0.0, 1.0, 0.0], name="sawtooth")


@pytest.fixture
def constant():
    """A constant piecewise-linear function on [0, 1]."""
    return from_breakpoints([0.0, 1.0], [0.25, 0.25], name="constant")


@pytest.fixture
def rng():
    """Seeded generator; every test gets the same stream."""
    return np.random.default_rng(42)


@pytest.fixture
def small_config():
    """
    Fixture providing a RunConfig sized for quick tests.

    Grids sit at the 1000-point floor; samples and trials are reduced.
    """
    from omegapy.cli import RunConfig
    return RunConfig(grid_n=2001, samples=2000, h_grid_n=1001, lipschitz_grid_n=1001,
                     ac_trials=20)
