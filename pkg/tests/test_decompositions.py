import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairschmidt import states
from pairschmidt.decompositions import decompose, degenerate_pair_rotation
from pairschmidt.errors import DegeneracyError, NormalizationError
from pairschmidt.linalg import unitarity_defect
from pairschmidt.measures import analyze, brute_force_oracle
from pairschmidt.states import BosonState, DistinguishableState, Family, FermionState

R2 = 1 / np.sqrt(2)


def test_schmidt_product_state():
    d = decompose(DistinguishableState(np.diag([1.0, 0.0])))
    np.testing.assert_allclose(d.coefficients, [1, 0])
    assert d.rank == 1


def test_schmidt_bell_state():
    d = decompose(DistinguishableState(np.diag([R2, R2])))
    np.testing.assert_allclose(d.coefficients, [R2, R2])
    assert d.rank == 2


def test_schmidt_matches_oracle_spectrum():
    s = states.random_state("distinguishable", (3, 5), seed=3)
    rho_a, _ = brute_force_oracle(s)
    np.testing.assert_allclose(decompose(s).coefficients ** 2, rho_a.spectrum, atol=1e-14)


def test_schmidt_rectangular_conventions():
    s = states.random_state("distinguishable", (4, 2), seed=4)
    d = decompose(s)
    assert d.u.shape == (4, 4) and d.v.shape == (2, 2)
    np.testing.assert_allclose(d.reconstruct(), s.c, atol=1e-14)
    # the stored unitaries are basis changes that bring the state to canonical form
    canon = states.transform_basis(s, d.u, d.v).c
    np.testing.assert_allclose(canon, d.canonical_matrix(), atol=1e-14)


def test_slater_two_modes():
    d = decompose(FermionState(np.array([[0, 0.5], [-0.5, 0]])))
    np.testing.assert_allclose(d.coefficients, [0.5])
    assert d.rank == 1
    assert not analyze(FermionState(np.array([[0, 0.5], [-0.5, 0]]))).correlated


def test_slater_minimal_correlated():
    z = np.full(2, 1 / np.sqrt(8))
    from pairschmidt.linalg import youla_block_matrix

    s = FermionState(youla_block_matrix(z, 4))
    d = decompose(s)
    assert d.rank == 2
    assert analyze(s).correlated


def test_slater_trace_identity():
    s = states.random_state("fermion", 6, seed=5)
    d = decompose(s)
    assert abs(2 * np.sum(d.coefficients**2) - np.vdot(s.omega, s.omega).real) < 1e-12
    canon = states.transform_basis(s, d.u).omega
    np.testing.assert_allclose(canon, d.canonical_matrix(), atol=1e-14)


def test_boson_single_mode_and_split_pair():
    d = decompose(BosonState(np.diag([R2, 0])))
    np.testing.assert_allclose(d.coefficients, [R2, 0])
    assert d.rank == 1
    d = decompose(BosonState(np.array([[0, 0.5], [0.5, 0]])))
    np.testing.assert_allclose(d.coefficients, [0.5, 0.5])
    assert d.rank == 2


def test_boson_requested_rank():
    assert decompose(states.random_state("boson", 5, rank=3, seed=6)).rank == 3


@pytest.mark.parametrize("family", list(Family))
def test_decompose_requires_normalization(family):
    with pytest.raises(NormalizationError):
        decompose(states.make_state(family, np.array([[0, 1], [1 if family is Family.BOSON else -1, 0]])))


@pytest.mark.parametrize("family", list(Family))
def test_coefficient_array_length_is_fixed(family):
    dims = (5, 3) if family is Family.DISTINGUISHABLE else (5,)
    d = decompose(states.random_state(family, dims, rank=1, seed=0))
    assert d.coefficients.size == states.max_rank(family, dims)
    assert np.all(d.coefficients[1:] == 0)


@settings(max_examples=60, deadline=None)
@given(family=st.sampled_from(list(Family)), n=st.integers(2, 9), m=st.integers(1, 9), seed=st.integers(0, 2**32 - 1))
def test_decomposition_invariants(family, n, m, seed):
    dims = (n, m) if family is Family.DISTINGUISHABLE else (n,)
    s = states.random_state(family, dims, seed=seed)
    d = decompose(s)
    scale = np.linalg.norm(s.matrix)
    assert np.linalg.norm(d.reconstruct() - s.matrix) <= 1e-10 * scale
    assert unitarity_defect(d.u) <= 1e-11 * n
    if d.v is not None:
        assert unitarity_defect(d.v) <= 1e-11 * m
    c = d.coefficients
    assert np.all(c >= 0) and np.all(np.diff(c) <= 0)
    assert abs(d.weights().sum() - 1) < 1e-12
    assert abs(d.density_spectrum().sum() - 1) < 1e-12


def test_decomposition_is_deterministic():
    s = states.random_state("boson", 6, seed=8)
    a, b = decompose(s), decompose(BosonState(s.beta.copy()))
    assert np.array_equal(a.u, b.u) and np.array_equal(a.coefficients, b.coefficients)


# -- degenerate pair rotation ------------------------------------------------


def test_pair_rotation_real():
    rot, out = degenerate_pair_rotation(BosonState(np.diag([0.5, 0.5])), 0, 1)
    np.testing.assert_allclose(out.beta, [[0, 0.5], [0.5, 0]], atol=1e-15)
    assert unitarity_defect(rot) < 1e-15
    np.testing.assert_allclose(rot @ out.beta @ rot.T, np.diag([0.5, 0.5]), atol=1e-15)


def test_pair_rotation_with_phases():
    phi = np.pi / 3
    beta = np.diag([0.5 * np.exp(1j * phi), 0.5 * np.exp(-1j * phi)])
    _, out = degenerate_pair_rotation(BosonState(beta), 0, 1)
    assert abs(out.beta[0, 0]) < 1e-15 and abs(out.beta[1, 1]) < 1e-15
    np.testing.assert_allclose(np.abs(out.beta[[0, 1], [1, 0]]), [0.5, 0.5], atol=1e-15)


def test_pair_rotation_embedded_leaves_rest_alone():
    beta = np.diag([0.3, 0.4j, 0.0, 0.4 * np.exp(0.7j)])
    beta *= np.sqrt(0.5 / np.sum(np.abs(beta) ** 2))
    s = BosonState(beta)
    _, out = degenerate_pair_rotation(s, 1, 3)
    keep = [0, 2]
    np.testing.assert_array_equal(out.beta[np.ix_(keep, keep)], s.beta[np.ix_(keep, keep)])
    assert abs(analyze(out).entropy - analyze(s).entropy) < 1e-12


def test_pair_rotation_rejects_nondegenerate():
    with pytest.raises(DegeneracyError, match="0.6"):
        degenerate_pair_rotation(BosonState(np.diag([0.6, 0.37])), 0, 1)


def test_pair_rotation_rejects_coupled_modes():
    with pytest.raises(ValueError, match="coupled"):
        degenerate_pair_rotation(BosonState(np.array([[0.4, 0.1], [0.1, 0.4]])), 0, 1)
    with pytest.raises(ValueError):
        degenerate_pair_rotation(BosonState(np.diag([0.5, 0.5])), 0, 0)
