import numpy as np
import pytest
from numpy.testing import assert_allclose
from pytest import approx

from nonlocal_momentum import DiscreteOperator, NonlocalOperator, Potential
from nonlocal_momentum.IntervalSpectrum import (
    F,
    chi_const,
    eigenvalue_asymptotic,
    eigenvalues_const,
    s_zero_family,
)
from nonlocal_momentum.errors import DomainMismatchError, PoleError, ValidationError

# 2 u for the first two positive roots of tan u = u
RESONANT_LAMBDA = 8.986818
SECOND_LAMBDA = 15.450505


def test_spectral_characteristic(interval_spectrum):
    sc = interval_spectrum.spectral_characteristic(2j)
    assert sc.S == approx(1.0)
    assert sc.resonant
    assert sc.inverse == approx(1.0)
    for V in [4j, 0.0]:
        sc = interval_spectrum.spectral_characteristic(V)
        assert sc.S == 0.0
        assert sc.inverse is None
    for V in s_zero_family(np.linspace(0.0, np.pi, 17)):
        assert interval_spectrum.spectral_characteristic(V).S == approx(0.0, abs=1e-14)
    assert interval_spectrum.spectral_characteristic(2.0).S == approx(-1.0)


def test_F():
    assert F(0.0) == approx(1.0)
    assert F(1.0) == approx(4.0 / np.pi)
    xi = np.array([0.3, 1.7, 5.5])
    assert_allclose(F(xi), F(-xi))
    with pytest.raises(PoleError):
        F(2.0)
    with pytest.raises(PoleError):
        F(np.array([0.0, -6.0]))


def test_chi_const_factorises():
    lam = np.linspace(-12.0, 12.0, 49)
    for V in [0.0, 2j, 1.0 - 0.5j, 3.0 + 2.0j]:
        S = V.imag - abs(V) ** 2 / 4 if isinstance(V, complex) else 0.0
        secular = np.cos(lam / 2) - S * np.sinc(lam / (2 * np.pi))
        assert_allclose(chi_const(lam, V), 4.0 * np.exp(-0.5j * lam) * secular,
                        atol=1e-12)
    # free case: 2 (1 + e^{-i lam}) vanishes at odd multiples of pi
    assert chi_const(np.pi, 0.0) == approx(0.0, abs=1e-14)


def test_general_chi_reduces_to_the_constant_one(interval_spectrum):
    for V in [1.0 - 0.5j, 2j]:
        v = Potential.constant(V)
        for lam in [-3.1, 0.4, 7.0]:
            chi = interval_spectrum.chi_general(lam, v, np.pi).chi
            assert chi == approx(1j * complex(chi_const(lam, V)), rel=1e-10, abs=1e-10)


def test_general_chi_of_the_free_operator(interval_spectrum):
    alpha = 0.8
    for lam in [-2.0, 0.5, 4.0]:
        chi = interval_spectrum.chi_general(lam, Potential.zero(), alpha).chi
        assert chi == approx(2j * (np.exp(-1j * lam) - np.exp(1j * alpha)))
    with pytest.raises(DomainMismatchError):
        interval_spectrum.chi_general(1.0, Potential.sign_exp(), alpha)


def test_resonance(interval_spectrum):
    eigen = interval_spectrum.eigenvalues_const(2j, (-1.0, 12.0))
    assert [e.lam for e in eigen] == approx([0.0, RESONANT_LAMBDA], abs=1e-5)
    zero = eigen[0]
    assert zero.multiplicity == 2
    assert zero.method == "resonance"
    x = np.linspace(0.0, 1.0, 5)
    assert_allclose(zero.sample(x)[0], np.ones(5))
    assert_allclose(zero.sample(x)[1], x - 0.5)
    assert eigen[1].method == "secular equation"
    assert abs(eigen[1].lam - interval_spectrum.eigenvalue_asymptotic(2j, 1)) < 0.02


def test_eigenvalue_asymptotics(interval_spectrum):
    assert eigenvalue_asymptotic(2j, 1) == approx(3 * np.pi - 4 / (3 * np.pi))
    # 1/S = -1
    assert eigenvalue_asymptotic(2.0, 4) == approx(7 * np.pi + 4 / (7 * np.pi))
    lams = [e.lam for e in eigenvalues_const(2.0, (0.0, 25.0))]
    assert len(lams) == 4
    assert lams[-1] == approx(eigenvalue_asymptotic(2.0, 4), abs=0.01)
    assert eigenvalue_asymptotic(4j, 2) == approx(3 * np.pi)
    with pytest.raises(ValidationError):
        eigenvalue_asymptotic(2j, 0)


@pytest.mark.parametrize("V", [2j, 2.0, 1.0 + 1.0j, 4.0])
def test_eigenvalue_gap_shrinks_like_n_cubed(interval_spectrum, V):
    positive = np.array([e.lam for e in interval_spectrum.eigenvalues_const(V, (0.0, 70.0))])
    gaps = []
    for n in range(3, 11):
        asymptotic = interval_spectrum.eigenvalue_asymptotic(V, n)
        lam = positive[np.argmin(np.abs(positive - asymptotic))]
        gaps.append(n**3 * (lam - asymptotic))
    gaps = np.array(gaps)
    assert np.all(np.sign(gaps) == np.sign(gaps[0]))
    assert np.max(np.abs(gaps)) < 3.0 * np.min(np.abs(gaps))


def test_s_zero_potentials_share_the_free_spectrum(interval_spectrum):
    free = [e.lam for e in interval_spectrum.eigenvalues_const(0.0, (-10.0, 10.0))]
    assert free == approx([-3 * np.pi, -np.pi, np.pi, 3 * np.pi])
    same = [e.lam for e in interval_spectrum.eigenvalues_const(4j, (-10.0, 10.0))]
    assert same == approx(free, abs=1e-12)
    wide = [e.lam for e in interval_spectrum.eigenvalues_const(0.0, (-20.0, 20.0))]
    assert len(wide) == 6
    assert [e.lam for e in interval_spectrum.eigenvalues_const(4j, (-20.0, 20.0))] == approx(
        wide, abs=1e-10
    )


def test_spectrum_is_symmetric_for_constants(interval_spectrum):
    lams = np.array([e.lam for e in interval_spectrum.eigenvalues_const(1.0 + 1.0j,
                                                                        (-20.0, 20.0))])
    assert_allclose(np.sort(-lams), lams, atol=1e-10)
    for e in interval_spectrum.eigenvalues_const(1.0 + 1.0j, (-20.0, 20.0)):
        assert max(e.residuals) < 1e-9


def test_characteristic_roots_match_the_secular_equation(interval_spectrum):
    V = 1.0
    general = interval_spectrum.characteristic_roots(Potential.constant(V), np.pi,
                                                     (-20.0, 20.0))
    const = interval_spectrum.eigenvalues_const(V, (-20.0, 20.0))
    assert [e.lam for e in general] == approx([e.lam for e in const], abs=1e-8)
    assert all(e.method == "characteristic" for e in general)


def test_characteristic_eigenfunctions_are_eigenfunctions(interval_spectrum):
    alpha = 0.4
    v = Potential.constant(1.0 + 0.5j, (0.2, 0.7))
    found = interval_spectrum.eigenvalues_general(v, Potential.zero(), alpha, (-10.0, 10.0))
    assert len(found) >= 2
    A = NonlocalOperator.interval_two(v, Potential.zero(), alpha)
    for e in found:
        psi = e.eigenfunctions[0]
        assert interval_spectrum.relative_residual(psi, e.lam, A) < 1e-6
        assert abs(A.boundary_defect(psi)) < 1e-8 * np.max(np.abs(psi(np.linspace(0, 1, 9))))


def test_vanishing_difference_uses_the_combined_potential(interval_spectrum):
    one = Potential.constant(1.0)
    lams = [e.lam for e in interval_spectrum.eigenvalues_general(one, one, 0.0,
                                                                 (-10.0, 10.0))]
    expected = [e.lam for e in interval_spectrum.characteristic_roots(
        Potential.constant(2.0), 0.0, (-10.0, 10.0))]
    assert lams == approx(expected)
    assert len(lams) >= 2

    D = DiscreteOperator.interval(one, one, 0.0, 1024)
    discrete = np.array(D.eigenvalues((-10.5, 10.5)))
    for lam in lams:
        assert np.min(np.abs(discrete - lam)) < 1e-3


def test_nonvanishing_difference_falls_back_to_the_oracle(interval_spectrum, interval_pair):
    v1, v2 = interval_pair
    with pytest.warns(UserWarning):
        found = interval_spectrum.eigenvalues_general(v1, v2, 0.5, (-10.0, 10.0))
    assert len(found) >= 2
    for e in found:
        assert e.method == "oracle"
        assert abs(e.lam - e.diagnostics["oracle_lambda"]) < 0.02
        assert max(e.residuals) < 1e-6
        assert "chi_combined" in e.as_dict()["diagnostics"]


def test_figure_data(interval_spectrum):
    data = interval_spectrum.figure1_data(2j, (-12.0, 12.0), 241)
    assert data.inverse == approx(1.0)
    assert_allclose(data.poles, [-10.0, -6.0, -2.0, 2.0, 6.0, 10.0])
    assert np.isnan(data.F[np.argmin(np.abs(data.xi - 2.0))])
    positive = [2 * RESONANT_LAMBDA / np.pi, 2 * SECOND_LAMBDA / np.pi]
    expected = [-positive[1], -positive[0], 0.0] + positive
    assert data.intersections == approx(expected, abs=1e-5)
    finite = ~np.isnan(data.F)
    assert np.all(data.F[finite] == F(data.xi[finite]))

    with pytest.raises(ValidationError):
        interval_spectrum.figure1_data(2j, (1.0, -1.0))
    with pytest.raises(ValidationError):
        interval_spectrum.figure1_data(2j, samples=1)


@pytest.mark.parametrize("V", [2j, 4.0, 1.0 + 1.0j])
def test_figure_crossings_match_the_secular_roots(interval_spectrum, V):
    data = interval_spectrum.figure1_data(V, (-12.0, 12.0), 241)
    eigen = interval_spectrum.eigenvalues_const(V, (-6.0 * np.pi, 6.0 * np.pi))
    expected = [2.0 * e.lam / np.pi for e in eigen]
    assert len(data.intersections) == len(expected)
    assert_allclose(data.intersections, expected, atol=1e-8)
    level = data.inverse
    for x in data.intersections:
        if x != 0.0:
            assert F(x) == approx(level, rel=1e-8)


def test_figure_crossings_without_a_level(interval_spectrum):
    data = interval_spectrum.figure1_data(4j, (-12.0, 12.0), 241)
    assert data.inverse is None
    assert_allclose(data.intersections, data.poles)
    eigen = interval_spectrum.eigenvalues_const(4j, (-6.0 * np.pi, 6.0 * np.pi))
    assert_allclose(data.intersections, [2.0 * e.lam / np.pi for e in eigen], atol=1e-10)
