import numpy as np
import pytest
from numpy.testing import assert_allclose
from pytest import approx

from nonlocal_momentum import (
    Domain,
    FreeAxisGreen,
    GammaVariant,
    IntervalGreen,
    Potential,
    Resolvent,
    SpectralPoint,
)
from nonlocal_momentum.NonlocalOperator import residual_grid
from nonlocal_momentum.Resolvent import (
    difference_terms,
    expansion_rows,
    interval_f22,
    operator_difference_K,
)
from nonlocal_momentum.Verifier import c_column_defect
from nonlocal_momentum.errors import VariantUnavailableError
from nonlocal_momentum.transforms import combine, inner_product
from nonlocal_momentum.utility import numerical_rank

Z_VALUES = [0.4 + 1.2j, -1.3 - 0.5j]


def _cases(interval_pair, axis_pair):
    v1, v2 = interval_pair
    w1, w2 = axis_pair
    return [
        (GammaVariant.AXIS_SINGLE_A, w1, w2, 0.9, Domain.AXIS),
        (GammaVariant.AXIS_SINGLE_B, w1, w2, 0.9, Domain.AXIS),
        (GammaVariant.AXIS_TWO, w1, w2, 0.9, Domain.AXIS),
        (GammaVariant.INTERVAL_TWO, v1, v2, 0.9, Domain.INTERVAL),
        (GammaVariant.INTERVAL_SINGLE_F, v1, v2, 0.9, Domain.INTERVAL),
    ]


def _grids(domain, n):
    j = np.arange(n)
    if domain is Domain.INTERVAL:
        return (j + 0.25) / n, (j + 0.75) / n
    return -2.0 + 4.0 * (j + 0.25) / n, -2.0 + 4.0 * (j + 0.75) / n


@pytest.mark.parametrize("z", Z_VALUES)
def test_gamma_is_hermitian_in_z(resolvent, interval_pair, axis_pair, z):
    zp = SpectralPoint(z)
    for variant, v1, v2, alpha, _ in _cases(interval_pair, axis_pair):
        gamma = resolvent.kernel(variant, zp, v1, v2, alpha).gamma
        mirrored = resolvent.kernel(variant, zp.conjugate(), v1, v2, alpha).gamma
        assert gamma.hermitian_defect(mirrored) < 1e-11, str(variant)
        assert abs(np.linalg.det(gamma.system) - gamma.det) < 1e-12 * max(
            1.0, abs(gamma.det)
        )


@pytest.mark.parametrize("z", Z_VALUES)
def test_kernel_swap_symmetry(resolvent, interval_pair, axis_pair, z):
    zp = SpectralPoint(z)
    for variant, v1, v2, alpha, domain in _cases(interval_pair, axis_pair):
        K = resolvent.kernel(variant, zp, v1, v2, alpha)
        Kc = resolvent.kernel(variant, zp.conjugate(), v1, v2, alpha)
        xs, ys = _grids(domain, 6)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        assert_allclose(K.evaluate(X, Y), np.conj(Kc.evaluate(Y, X)), atol=1e-10)


def test_correction_has_rank_two(resolvent, interval_pair, axis_pair):
    for variant, v1, v2, alpha, domain in _cases(interval_pair, axis_pair):
        K = resolvent.kernel(variant, 0.4 + 1.2j, v1, v2, alpha)
        xs, ys = _grids(domain, 32)
        X, Y = np.meshgrid(xs, ys, indexing="ij")
        assert numerical_rank(K.perturbation(X, Y)) <= 2, str(variant)


def test_interval_and_axis_kernels_differ_from_free_by_low_rank(resolvent, axis_pair):
    z, alpha = 0.4 + 1.2j, 0.9
    xs, ys = _grids(Domain.INTERVAL, 32)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    difference = IntervalGreen(z, alpha).evaluate(X, Y) - FreeAxisGreen(z).evaluate(X, Y)
    assert numerical_rank(difference) == 1

    K = resolvent.kernel_axis_two(z, *axis_pair, alpha)
    xs, ys = _grids(Domain.AXIS, 32)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    assert numerical_rank(K.evaluate(X, Y) - FreeAxisGreen(z).evaluate(X, Y)) <= 3


@pytest.mark.parametrize("z", Z_VALUES)
def test_resolvent_solves_the_equation(resolvent, parameters, interval_pair,
                                       axis_pair, z):
    q = parameters.quadrature
    for variant, v1, v2, alpha, domain in _cases(interval_pair, axis_pair):
        K = resolvent.kernel(variant, z, v1, v2, alpha)
        h = Potential.constant(1.0, (0.0, 1.0), domain)
        psi, intermediates = resolvent.apply_resolvent(K, h)
        breakpoints = np.concatenate([h.breakpoints, v1.breakpoints, v2.breakpoints])
        grid = residual_grid(domain, 40, breakpoints, radius=3.0)
        residual = K.operator.residual(psi, z, h, grid, q)
        assert np.max(np.abs(residual)) < 1e-6, str(variant)
        assert abs(K.operator.boundary_defect(psi, q)) < 1e-8, str(variant)
        assert intermediates.system_defect < 1e-9, str(variant)


def test_system_solution_matches_the_resolvent(resolvent, interval_pair):
    v1, v2 = interval_pair
    K = resolvent.kernel_interval(0.4 + 1.2j, v1, v2, 0.9)
    h = Potential.constant(1.0 - 2.0j, (0.1, 0.6))
    psi, intermediates = resolvent.apply_resolvent(K, h)
    unknowns = resolvent.solve_system(K, h)
    assert unknowns[0] == approx(intermediates.psi1, rel=1e-9)
    assert unknowns[1] == approx(intermediates.psi2, rel=1e-9)


def test_rank_two_update_recovers_the_two_potential_resolvent(
    resolvent, parameters, interval_pair, offaxis_grid
):
    q = parameters.quadrature
    v1, v2 = interval_pair
    z, alpha = 0.4 + 1.2j, 0.9
    h = Potential.constant(1.0)
    combined = resolvent.kernel_interval_single(z, combine(v1, v2, alpha), alpha)
    psi = resolvent.rank_two_update(
        lambda f: combined.apply(f, q), difference_terms(v1, v2, alpha), h
    )
    direct = resolvent.kernel_interval(z, v1, v2, alpha).apply(h, q)
    assert_allclose(psi(offaxis_grid), direct(offaxis_grid), rtol=1e-8)


def test_operator_difference(interval_pair, offaxis_grid):
    v1, v2 = interval_pair
    alpha = 0.9
    psi = Potential.constant(1.0)
    K_psi = operator_difference_K(v1, v2, alpha, psi)
    total = sum(
        u(offaxis_grid) * inner_product(psi, w)
        for u, w in difference_terms(v1, v2, alpha)
    )
    assert_allclose(K_psi(offaxis_grid), total, atol=1e-14)

    # the difference vanishes when e^{i alpha} v2 is a real multiple of v1
    same = Potential.constant(1.0)
    K_psi = operator_difference_K(same, same.scaled(np.exp(-0.9j)), alpha, psi)
    assert_allclose(K_psi(offaxis_grid), 0.0, atol=1e-14)


@pytest.mark.parametrize("domain", [Domain.AXIS, Domain.INTERVAL])
def test_c_matrix_first_column(resolvent, interval_pair, axis_pair, domain):
    v1, v2 = interval_pair if domain is Domain.INTERVAL else axis_pair
    alpha = 2.1
    C = resolvent.c_matrix(-0.3 + 0.8j, v1, v2, alpha, domain)
    assert c_column_defect(C, expansion_rows(alpha, domain)) < 1e-12


def test_variant_b_needs_alpha_away_from_pi(resolvent, axis_pair):
    with pytest.raises(VariantUnavailableError):
        resolvent.gamma_axis_single(1j, axis_pair[0], np.pi, "B")
    with pytest.raises(VariantUnavailableError):
        resolvent.gamma_axis_single(1j, axis_pair[0], 0.0, "C")


def test_interval_f22_far_from_the_axis():
    alpha = 0.6
    assert interval_f22(300j, alpha) == approx(0.5j)
    assert interval_f22(-300j, alpha) == approx(-0.5j)
    z = 0.2 + 0.5j
    phase = np.exp(1j * alpha)
    direct = 0.5j * (np.exp(-1j * z) + phase) / (np.exp(-1j * z) - phase)
    assert interval_f22(z, alpha) == approx(direct)


def test_gamma_limits(parameters):
    v = Potential.constant(np.exp(0.4j))
    w = Potential.constant(np.exp(0.4j), (0.0, 1.0), Domain.AXIS)
    resolvent = Resolvent(parameters)
    alpha = 0.9
    gamma = resolvent.gamma_interval(1000j, v, v.scaled(0.5), alpha)
    assert gamma.det == approx(-4.0, abs=0.1)
    gamma = resolvent.gamma_axis_single(1000j, w, alpha, "A")
    assert gamma.det == approx(-1.0, abs=0.1)
    gamma = resolvent.gamma_axis_single(1000j, w, alpha, "B")
    assert gamma.det == approx(-2.0 / (1.0 + np.exp(-1j * alpha)), abs=0.1)

    # at z = 100i
    unit = Potential.constant(1.0, (0.0, 1.0), Domain.AXIS)
    for u in [unit, w]:
        assert abs(resolvent.gamma_axis_single(100j, u, alpha, "A").det + 1.0) < 0.05


@pytest.mark.parametrize("domain", [Domain.INTERVAL, Domain.AXIS])
def test_gamma_gap_decays_like_one_over_im_z(parameters, domain):
    # unit potentials sit above 0.1 at 100i; Im z times the gap stays bounded
    resolvent = Resolvent(parameters)
    v = Potential.constant(1.0, (0.0, 1.0), domain)
    alpha = 0.9
    scaled = []
    for y in [50.0, 100.0, 200.0]:
        if domain is Domain.INTERVAL:
            gamma = resolvent.gamma_interval(1j * y, v, v, alpha)
        else:
            gamma = resolvent.gamma_axis_two(1j * y, v, v, alpha)
        scaled.append(y * abs(gamma.det + 4.0))
    assert max(scaled) < 25.0
    assert 0.3 < scaled[-1] / scaled[0] < 3.0


def test_axis_single_variants_agree(resolvent, axis_pair):
    v = axis_pair[0]
    xs = np.array([-1.7, -0.6, -0.2, 0.35, 0.9, 1.6])
    ys = np.array([-1.3, -0.45, 0.15, 0.6, 1.2, 1.9])
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    for z in Z_VALUES:
        A = resolvent.kernel_axis_single(z, v, 0.3, "A")
        B = resolvent.kernel_axis_single(z, v, 0.3, "B")
        assert_allclose(A.evaluate(X, Y), B.evaluate(X, Y), atol=1e-10)


def test_axis_two_reduces_to_the_single_potential_kernel(resolvent, axis_pair):
    v = axis_pair[1]
    alpha = 1.3
    xs = np.array([-1.1, -0.3, 0.2, 0.7, 1.4])
    ys = np.array([-0.8, -0.1, 0.45, 1.05, 1.8])
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    single = resolvent.kernel_axis_single(0.4 + 1.2j, v, alpha)
    two = resolvent.kernel_axis_two(
        0.4 + 1.2j, v.scaled(0.5), v.scaled(0.5 * np.exp(-1j * alpha)), alpha
    )
    assert_allclose(two.evaluate(X, Y), single.evaluate(X, Y), atol=1e-10)


def test_zero_potential_gamma():
    gamma = Resolvent().gamma_axis_single(-2.0j, Potential.zero(Domain.AXIS), 0.4)
    assert gamma[1, 1] == 0.0
    assert gamma[1, 2] == approx(1.0)
    assert gamma[2, 1] == approx(1.0)
    assert gamma[2, 2] == approx(0.5j)
    assert gamma.det == approx(-1.0)
