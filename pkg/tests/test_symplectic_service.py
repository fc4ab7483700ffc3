import numpy as np
import pytest
from numpy.testing import assert_allclose

from app.core.exceptions import (
    AsymmetricShearError,
    InvalidBogoliubovError,
    InvalidModePairError,
    NonSymplecticError,
    NonUnitaryError,
)
from app.models.matrix_model import BogoliubovPair, ComplexUnitary, ShearMatrix, SymplecticMap
from app.services.symplectic_service import (
    bogoliubov_to_symplectic,
    bs_symplectic,
    check_bogoliubov,
    check_shear,
    check_symplectic,
    check_unitary,
    embed_two_mode,
    foursplitter_matrix,
    phase_symplectic,
    random_bogoliubov,
    random_shear,
    random_unitary,
    shear_symplectic,
    squeeze_symplectic,
    symplectic_form,
    symplectic_to_bogoliubov,
    unitary_to_symplectic,
)


def test_symplectic_form_shape():
    omega = symplectic_form(2)
    assert_allclose(omega, [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]])


@pytest.mark.parametrize("modes", [1, 3, 6])
def test_random_unitary_is_symplectic_and_orthogonal(modes):
    S = unitary_to_symplectic(random_unitary(modes, seed=modes)).entries
    assert check_symplectic(S) < 1e-12
    assert_allclose(S @ S.T, np.eye(2 * modes), atol=1e-12)


def test_non_unitary_rejected():
    with pytest.raises(NonUnitaryError) as excinfo:
        check_unitary(ComplexUnitary(dim=2, entries=[[1, 1], [0, 1]]))
    assert excinfo.value.max_deviation == pytest.approx(1.0)
    assert excinfo.value.exit_code == 1


def test_non_symplectic_rejected():
    with pytest.raises(NonSymplecticError):
        check_symplectic(np.diag([2.0, 1.0, 1.0, 1.0]))


def test_phase_matches_single_mode_unitary():
    theta = 0.37
    expected = unitary_to_symplectic(ComplexUnitary(dim=1, entries=[[np.exp(1j * theta)]]))
    assert_allclose(phase_symplectic(theta, 0, 1).entries, expected.entries, atol=1e-15)


def test_squeezer_matches_single_mode_bogoliubov():
    r = 0.8
    pair = BogoliubovPair(modes=1, matA=[[np.cosh(r)]], matB=[[np.sinh(r)]])
    assert_allclose(bogoliubov_to_symplectic(pair).entries, squeeze_symplectic(r, 0, 1).entries, atol=1e-12)


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_random_bogoliubov_is_valid(seed):
    pair = random_bogoliubov(4, seed, max_r=1.0)
    assert check_bogoliubov(pair) < 1e-10
    S = bogoliubov_to_symplectic(pair)
    assert check_symplectic(S) < 1e-9


def test_bogoliubov_read_back():
    pair = random_bogoliubov(3, seed=5, max_r=0.7)
    back = symplectic_to_bogoliubov(bogoliubov_to_symplectic(pair))
    assert_allclose(back.matA, pair.matA, atol=1e-12)
    assert_allclose(back.matB, pair.matB, atol=1e-12)


def test_invalid_bogoliubov_rejected():
    pair = BogoliubovPair(modes=1, matA=[[1.0]], matB=[[0.5]])
    with pytest.raises(InvalidBogoliubovError):
        check_bogoliubov(pair)


def test_beamsplitter_mixes_both_quadratures():
    S = bs_symplectic(np.pi / 4, 0, 2, 3).entries
    assert_allclose(S[0, 0], np.cos(np.pi / 4))
    assert_allclose(S[0, 2], -np.sin(np.pi / 4))
    assert_allclose(S[3, 5], -np.sin(np.pi / 4))
    assert check_symplectic(S) < 1e-12


@pytest.mark.parametrize("j,k", [(0, 0), (0, 3), (-1, 1)])
def test_invalid_mode_pair(j, k):
    with pytest.raises(InvalidModePairError):
        bs_symplectic(0.1, j, k, 3)


def test_embed_two_mode_places_blocks():
    G = np.arange(16, dtype=float).reshape(4, 4)
    S = embed_two_mode(G, 2, 0, 3)
    idx = [2, 0, 5, 3]
    assert_allclose(S[np.ix_(idx, idx)], G)
    assert S[1, 1] == 1.0 and S[4, 4] == 1.0


def test_shear_symplectic():
    K = random_shear(3, seed=2)
    assert check_shear(K) < 1e-15
    S = shear_symplectic(K).entries
    assert check_symplectic(S) < 1e-12
    assert_allclose(S[3:, :3], K.entries)


def test_asymmetric_shear_rejected():
    with pytest.raises(AsymmetricShearError):
        check_shear(ShearMatrix(modes=2, entries=[[0.0, 1.0], [0.0, 0.0]]))


def test_foursplitter_factorisation():
    first = 0.5 * np.array([[1, 0, -1, 0], [0, 1, 0, -1], [1, 0, 1, 0], [0, 1, 0, 1]])
    second = np.array([[1, 1, 0, 0], [-1, 1, 0, 0], [0, 0, 1, 1], [0, 0, -1, 1]])
    B = foursplitter_matrix()
    assert_allclose(first @ second, B)
    assert_allclose(B @ B.T, np.eye(4), atol=1e-15)


def test_matrix_json_codecs():
    U = random_unitary(3, seed=1)
    assert_allclose(ComplexUnitary.from_json_dict(U.to_json_dict()).entries, U.entries)
    S = SymplecticMap.from_array(np.eye(4))
    assert SymplecticMap.from_json_dict(S.to_json_dict()).modes == 2
    pair = random_bogoliubov(2, seed=3, max_r=0.5)
    assert_allclose(BogoliubovPair.from_json_dict(pair.to_json_dict()).matB, pair.matB)
