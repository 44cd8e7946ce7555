import numpy as np
import pytest
from numpy.testing import assert_allclose

from nonlocal_momentum import DiscreteOperator, Domain, Potential
from nonlocal_momentum.DiscreteOperator import (
    discretize_interval,
    free_discrete_eigenvalues,
    oracle_eigenvalues,
)
from nonlocal_momentum.errors import TruncationError, ValidationError


def test_free_scheme_matches_its_exact_eigenvalues(parameters):
    alpha = 0.3
    zero = Potential.zero()
    D = DiscreteOperator.interval(zero, zero, alpha, 256, parameters)
    assert D.size == 257
    found = D.eigenvalues((-30.0, 30.0))
    expected = free_discrete_eigenvalues(alpha, 256, (-30.0, 30.0))
    assert len(found) == len(expected) == 9
    assert_allclose(found, expected, atol=1e-8)
    # and both sit close to the lattice -alpha + 2 pi n
    assert_allclose(expected, -alpha + 2 * np.pi * np.arange(-4, 5), atol=0.05)


def test_second_order_convergence(parameters, interval_spectrum):
    one, zero = Potential.constant(1.0), Potential.zero()
    window = (-10.0, 10.0)
    exact = np.array([e.lam for e in interval_spectrum.eigenvalues_general(
        one, zero, np.pi, window)])
    errors = []
    for N in [256, 512]:
        found = np.array(oracle_eigenvalues(
            discretize_interval(one, zero, np.pi, N, parameters), window))
        assert len(found) == len(exact)
        errors.append(np.max(np.abs(found - exact)))
    assert errors[1] < 1e-2
    assert errors[0] / errors[1] > 3.0


def test_functional_rows_integrate_exactly_for_constants(parameters):
    v = Potential.constant(1.0j)
    D = DiscreteOperator.interval(v, Potential.zero(), 0.0, 64, parameters)
    l1, _ = D.operator.functionals()
    row = D.functional_row(l1)
    # psi(0) - (i/2) <psi, v> with psi = 1
    assert row.sum() == pytest.approx(0.5)


def test_axis_discretisation(parameters):
    v = Potential.constant(1.0, (-1.0, 1.0), Domain.AXIS)
    D = DiscreteOperator.axis(v, 0.3, 4.0, 128, parameters)
    assert D.n_nodes == 130
    assert D.size == D.n_nodes + len(D.terms) == 132
    assert D.meta == {"model": "axis", "N": 128, "L": 4.0, "alpha": 0.3}


def test_axis_oracle_finds_the_localised_eigenvalue(parameters):
    alpha, gamma = 0.7, 0.5
    v = Potential.exp_decay(2j * np.exp(1j * alpha), gamma)
    D = DiscreteOperator.axis(v, alpha, 20.0, 1024, parameters)
    found = np.array(D.eigenvalues((-2.0, 2.0)))
    assert np.min(np.abs(found - gamma)) < 1e-2


def test_axis_oracle_reproduces_the_worked_examples(parameters, axis_spectrum):
    alpha = 0.7
    cases = [
        (Potential.constant(2j * np.exp(1j * alpha), (0.0, 1.0), Domain.AXIS), alpha),
        (Potential.sign_exp(), 0.0),
    ]
    for v, a in cases:
        exact = [e.lam for e in axis_spectrum.scan(v, a, (-2.0, 2.0))]
        assert len(exact) >= 1
        found = np.array(DiscreteOperator.axis(v, a, 16.0, 1024, parameters)
                         .eigenvalues((-2.0, 2.0)))
        for lam in exact:
            assert np.min(np.abs(found - lam)) < 5e-3


def test_free_axis_has_no_localised_modes(parameters):
    D = DiscreteOperator.axis(Potential.zero(Domain.AXIS), 0.4, 20.0, 512, parameters)
    assert D.eigenvalues((-5.0, 5.0)) == []


def test_errors(parameters):
    zero = Potential.zero()
    with pytest.raises(ValidationError):
        DiscreteOperator.interval(zero, zero, 0.0, 32, parameters)
    with pytest.raises(TruncationError):
        DiscreteOperator.axis(Potential.exp_decay(1.0, 0.0), 0.0, 5.0, 128, parameters)
    D = DiscreteOperator.interval(zero, zero, 0.0, 64, parameters)
    with pytest.raises(ValidationError):
        D.eigenvalues((1.0, -1.0))
