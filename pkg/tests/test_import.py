"""
Basic import and module tests for omegapy.

These tests verify that omegapy can be imported and basic module
structure is available.
"""

import pytest
import os


def test_import_omegapy():
    """Test that omegapy can be imported."""
    import omegapy
    assert omegapy is not None


def test_omegapy_version():
    """Test that omegapy has a version attribute."""
    import omegapy
    assert isinstance(omegapy.__version__, str)


def test_import_submodules():
    """Test that every submodule imports on its own."""
    from omegapy import analysis, cli, errors, modulus, real_fn
    for module in (analysis, cli, errors, modulus, real_fn):
        assert module.__doc__


def test_import_core_types():
    """Test that core types are exported."""
    import omegapy

    for name in ('Interval', 'Piece', 'PiecewiseFn', 'ModulusTable', 'CriticalSet',
                 'CoverFamily', 'VerificationReport', 'SparseTable'):
        assert hasattr(omegapy, name), f"{name} not found"


def test_public_names_resolve():
    """Test that __all__ only lists names that exist."""
    import omegapy
    missing = [name for name in omegapy.__all__ if not hasattr(omegapy, name)]
    assert missing == []


def test_error_hierarchy():
    """Test that every package error is an OmegaError and a builtin error."""
    from omegapy import ConfigError, ConsistencyError, DomainError, OmegaError, PreconditionError

    assert issubclass(DomainError, OmegaError) and issubclass(DomainError, ValueError)
    assert issubclass(PreconditionError, ValueError)
    assert issubclass(ConfigError, ValueError)
    assert issubclass(ConsistencyError, ArithmeticError)


def test_numpy_available():
    """Test that numpy is available (required dependency)."""
    import numpy as np
    arr = np.array([1.0, 2.0, 3.0])
    assert arr.shape == (3,)


def test_scipy_available():
    """Test that scipy.optimize.bisect is available (delta* bisection)."""
    from scipy.optimize import bisect
    assert bisect(lambda t: t - 0.5, 0.0, 1.0) == pytest.approx(0.5)


def test_prettytable_available():
    """Test that prettytable is available (for output formatting)."""
    import prettytable
    assert prettytable.PrettyTable is not None


def test_module_file_location():
    """Test that we can determine where omegapy is installed."""
    import omegapy
    assert os.path.exists(os.path.dirname(omegapy.__file__))


@pytest.mark.api
def test_alpha_constant():
    """Test that ALPHA is log 2 / log 3."""
    import math
    import omegapy
    assert omegapy.ALPHA == pytest.approx(math.log(2) / math.log(3), rel=1e-15)
