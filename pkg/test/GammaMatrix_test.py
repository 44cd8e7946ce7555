import numpy as np
from numpy.testing import assert_allclose
from pytest import approx

from nonlocal_momentum import GammaMatrix, GammaVariant


def test_from_system_is_the_adjugate():
    a = np.array([[1.0, 2.0j], [3.0, 4.0 - 1.0j]])
    gamma = GammaMatrix.from_system(a, GammaVariant.INTERVAL_TWO, 1j)
    assert_allclose(gamma.entries @ a, gamma.det * np.eye(2), atol=1e-14)
    assert gamma.det == approx(np.linalg.det(a))
    assert gamma[1, 2] == -2.0j
    assert gamma[2, 1] == -3.0
    assert gamma.det_defect() == 0.0


def test_hermitian_defect():
    g = np.array([[1.0j, 2.0 + 1.0j], [0.5, -3.0j]])
    gamma = GammaMatrix(g, GammaVariant.AXIS_TWO, 1j)
    mirrored = GammaMatrix(np.conj(g).T, GammaVariant.AXIS_TWO, -1j)
    assert gamma.hermitian_defect(mirrored) == 0.0
    assert gamma.hermitian_defect(gamma) > 1.0


def test_c_matrix():
    g = np.array([[1.0, 2.0j], [-1.0j, 0.5]])
    gamma = GammaMatrix(g, GammaVariant.INTERVAL_TWO, 1j)
    L = np.array([[-2.0j, 1.0, 0.0], [2.0j, 0.0, 1.0]])
    C = gamma.c_matrix(L)
    assert C.shape == (3, 3)
    # the lower right block is Gamma itself
    assert_allclose(C[1:, 1:], g)
    assert_allclose(C[:, 0], np.conj(L[0, 0]) * C[:, 1] + np.conj(L[1, 0]) * C[:, 2])


def test_names_and_serialisation():
    assert [str(v) for v in GammaVariant] == GammaVariant.names()
    gamma = GammaMatrix(np.eye(2), GammaVariant.AXIS_SINGLE_B, 2j)
    record = gamma.as_dict()
    assert record["variant"] == "axis-single-B"
    assert record["entries"][0][0] == [1.0, 0.0]
    assert record["det"] == [1.0, 0.0]
