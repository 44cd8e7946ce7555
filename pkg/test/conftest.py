import pytest
import numpy as np

from nonlocal_momentum import (
    AxisSpectrum,
    Domain,
    IntervalSpectrum,
    Parameters,
    Potential,
    Quadrature,
    Resolvent,
    RootFinder,
)


@pytest.fixture
def parameters():
    PARAMS = {
        "quadrature_panels": 32,
        "quadrature_points": 8,
        "oracle_n": 512,
    }
    return Parameters(PARAMS, validate=False)


@pytest.fixture
def trapezoid_parameters():
    PARAMS = {
        "quadrature_rule": "trapezoid",
        "quadrature_panels": 64,
        "quadrature_points": 16,
    }
    return Parameters(PARAMS, validate=False)


@pytest.fixture
def quadrature(parameters):
    return Quadrature(parameters.quadrature)


@pytest.fixture
def root_finder(parameters):
    return RootFinder(parameters)


@pytest.fixture
def resolvent(parameters):
    return Resolvent(parameters)


@pytest.fixture
def axis_spectrum(parameters):
    return AxisSpectrum(parameters)


@pytest.fixture
def interval_spectrum(parameters):
    return IntervalSpectrum(parameters)


@pytest.fixture
def interval_pair():
    """Two overlapping steps on [0, 1] whose operator difference is nonzero"""
    v1 = Potential.constant(1.0, (0.0, 0.5))
    v2 = Potential.constant(0.5j, (0.3, 1.0))
    return v1, v2


@pytest.fixture
def axis_pair():
    v1 = Potential.constant(0.8 - 0.3j, (-1.0, 0.5), Domain.AXIS)
    v2 = Potential.exponential(0.6j, -1.0 + 0.4j, -0.5, 1.5)
    return v1, v2


@pytest.fixture
def offaxis_grid():
    """Interior points of [0, 1] kept clear of 0.3 and 0.5"""
    return np.array([0.05, 0.17, 0.41, 0.66, 0.78, 0.93])
