import numpy as np
import pytest
from numpy.testing import assert_allclose
from pytest import approx

from nonlocal_momentum import ComplexFunction, Domain, Potential, PotentialForm
from nonlocal_momentum.Potential import ExponentialPiece
from nonlocal_momentum.errors import DomainMismatchError
from nonlocal_momentum.transforms import (
    combine,
    hat_v,
    inner_product,
    tilde_v,
    vanishing_difference,
)
from nonlocal_momentum.utility import phi2


def test_inner_product_closed_form_and_quadrature(quadrature):
    one = Potential.constant(1.0)
    v = Potential.constant(2j, (0.25, 1.0))
    assert inner_product(one, v) == approx(-2j * 0.75)

    psi = ComplexFunction(lambda x, side: x + 0j, Domain.INTERVAL, (0.0, 1.0))
    assert inner_product(psi, v, quadrature.spec) == approx(
        -2j * (1.0 - 0.25 ** 2) / 2.0
    )
    assert inner_product(psi, Potential.zero()) == 0.0


def test_inner_product_of_exponentials():
    a = Potential.exponential(1.0, -1.0 + 2j, 0.0, 5.0)
    b = Potential.exponential(1j, -0.5, -1.0, 3.0)
    # int_0^3 e^{(-1 + 2i) x} (-i) e^{-x/2} dx
    rate = -1.5 + 2j
    assert inner_product(a, b) == approx(-1j * (np.exp(3 * rate) - 1.0) / rate)


def test_domains_cannot_mix():
    with pytest.raises(DomainMismatchError):
        inner_product(Potential.constant(1.0), Potential.sign_exp())
    with pytest.raises(DomainMismatchError):
        tilde_v(Potential.sign_exp(), 1.0)
    with pytest.raises(DomainMismatchError):
        combine(Potential.constant(1.0), Potential.sign_exp(), 0.0)


def test_tilde_v():
    V = 1.0 - 0.5j
    v = Potential.constant(V)
    assert tilde_v(v, 0.0) == approx(V)
    lam = 2.7
    assert tilde_v(v, lam) == approx(V * (np.exp(1j * lam) - 1.0) / (1j * lam))
    assert tilde_v(v, np.array([0.0, lam])).shape == (2,)


def test_hat_v_closed_form_agrees_with_quadrature(quadrature):
    V = 0.4 + 1.1j
    constant = Potential.constant(V)
    piecewise = Potential(
        Domain.INTERVAL, PotentialForm.PIECEWISE, [ExponentialPiece(V, 0.0, 0.0, 1.0)]
    )
    assert hat_v(constant, 0.0) == approx(abs(V) ** 2 / 2)
    for lam in [-4.0, 0.3, 9.0]:
        expected = abs(V) ** 2 * complex(phi2(-1j * lam))
        assert hat_v(constant, lam) == approx(expected, rel=1e-14)
        assert hat_v(piecewise, lam, quadrature.spec) == approx(expected, rel=1e-10)
    assert hat_v(Potential.zero(), 1.0) == 0.0


def test_combine_is_exact_for_closed_forms():
    v1, v2 = Potential.constant(1.0), Potential.constant(1.0)
    assert combine(v1, v2, np.pi).is_zero
    both = combine(v1, v2, 0.0)
    assert both.constant_value() == approx(2.0)
    assert combine(Potential.zero(), v2, np.pi / 2).constant_value() == approx(1j)
    assert combine(v1, Potential.zero(), 1.0) is v1


def test_combine_resamples_sampled_operands():
    grid = np.linspace(0.0, 1.0, 11)
    sampled = Potential.sampled(grid, np.ones(11))
    with pytest.warns(UserWarning):
        v = combine(sampled, Potential.constant(1.0, (0.0, 0.5)), 0.0)
    assert v.form is PotentialForm.SAMPLED
    assert v(0.25) == approx(2.0)
    assert v(0.75) == approx(1.0)


def test_vanishing_difference():
    one = Potential.constant(1.0)
    assert vanishing_difference(one, one, 0.0)
    assert vanishing_difference(one, Potential.zero(), 0.7)
    assert vanishing_difference(Potential.zero(), Potential.zero(), 0.7)
    # u = e^{i alpha} v2 must be a real multiple of v1
    assert not vanishing_difference(one, Potential.constant(1j), 0.0)
    assert vanishing_difference(one, Potential.constant(1j), -np.pi / 2)
    assert not vanishing_difference(
        Potential.constant(1.0, (0.0, 0.5)), Potential.constant(1.0, (0.5, 1.0)), 0.0
    )


def test_combine_keeps_the_closed_form_support():
    grid = np.linspace(0.0, 0.5, 11)
    sampled = Potential.sampled(grid, np.ones(11))
    with pytest.warns(UserWarning):
        v = combine(sampled, Potential.constant(1.0j, (0.0, 1.0)), np.pi / 2)
    assert v.support == (0.0, 1.0)
    assert v(0.25) == approx(0.0, abs=1e-14)
    assert v(0.8) == approx(-1.0)


def test_inner_product_is_conjugate_symmetric(quadrature):
    a = Potential.exponential(1.0 - 0.5j, -0.3 + 2j, 0.0, 0.8, Domain.INTERVAL)
    b = Potential.constant(0.4 + 1.2j, (0.2, 1.0))
    assert inner_product(a, b) == approx(np.conj(inner_product(b, a)), rel=1e-14)
    psi = ComplexFunction(lambda x, side: np.exp(1j * x) * x, Domain.INTERVAL, (0.0, 1.0))
    assert inner_product(psi, b, quadrature.spec) == approx(
        np.conj(inner_product(b, psi, quadrature.spec)), rel=1e-12
    )
    assert inner_product(a, a).imag == approx(0.0, abs=1e-15)


def test_combine_is_linear():
    v1 = Potential.exponential(1.0, -1.0 + 1j, 0.0, 0.6, Domain.INTERVAL)
    v2 = Potential.constant(0.5 - 2j, (0.3, 1.0))
    alpha, c = 0.9, 1.5 - 0.5j
    x = np.array([0.05, 0.15, 0.45, 0.55, 0.7, 0.85, 0.95])
    direct = combine(v1, v2, alpha)
    assert_allclose(direct(x), v1(x) + np.exp(1j * alpha) * v2(x), rtol=1e-13)
    assert_allclose(
        combine(v1.scaled(c), v2.scaled(c), alpha)(x), c * direct(x), rtol=1e-13
    )
    w1 = Potential.constant(0.25j, (0.0, 0.5))
    w2 = Potential.exponential(2.0, 0.5j, 0.1, 0.9, Domain.INTERVAL)
    summed = combine(
        combine(v1, w1, 0.0), combine(v2, w2, 0.0), alpha
    )
    assert_allclose(summed(x), direct(x) + combine(w1, w2, alpha)(x), rtol=1e-13)
