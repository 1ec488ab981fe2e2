import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pairschmidt import states
from pairschmidt.decompositions import decompose
from pairschmidt.errors import NormalizationError, RankError, SymmetryError, UnitarityError
from pairschmidt.linalg import numeric_rank, unitarity_defect
from pairschmidt.measures import analyze
from pairschmidt.states import BosonState, DistinguishableState, Family, FermionState

R2 = 1 / np.sqrt(2)


def test_normalize_examples():
    b = states.normalize(BosonState(np.diag([1.0, 0.0])))
    np.testing.assert_allclose(b.beta, np.diag([R2, 0]))
    f = states.normalize(FermionState(np.array([[0, 1], [-1, 0]])))
    np.testing.assert_allclose(f.omega, [[0, 0.5], [-0.5, 0]])
    d = states.normalize(DistinguishableState(np.array([[2, 0], [0, 0]])))
    np.testing.assert_allclose(d.c, np.diag([1, 0]))


@pytest.mark.parametrize("family", list(Family))
def test_normalize_rejects_zero(family):
    with pytest.raises(NormalizationError):
        states.normalize(states.make_state(family, np.zeros((2, 2))))


def test_require_normalized_tolerance():
    s = BosonState(np.diag([R2, 0]) * (1 + 4e-7))
    states.require_normalized(s)
    with pytest.raises(NormalizationError):
        states.require_normalized(BosonState(np.diag([R2, 0]) * 1.001))


def test_ingest_projection_and_rejection():
    noisy = np.array([[0, 0.5], [-0.5 + 1e-12, 0]])
    assert np.array_equal(FermionState(noisy).omega, -FermionState(noisy).omega.T)
    with pytest.raises(SymmetryError) as info:
        BosonState(np.array([[0.5, 0.2], [0.1, 0.5]]))
    assert info.value.deviation == pytest.approx(0.1)


def test_states_are_immutable():
    s = BosonState(np.diag([R2, 0]))
    with pytest.raises(ValueError):
        s.beta[0, 0] = 1
    source = np.diag([R2, 0.0])
    t = BosonState(source)
    source[0, 0] = 0
    assert t.beta[0, 0] == R2


def test_fermion_needs_two_modes():
    with pytest.raises(ValueError):
        FermionState(np.zeros((1, 1)))


def test_transform_identity_is_exact():
    s = states.random_state("fermion", 5, seed=1)
    assert np.array_equal(states.transform_basis(s, np.eye(5)).omega, s.omega)
    d = states.random_state("distinguishable", (2, 3), seed=1)
    assert np.array_equal(states.transform_basis(d, np.eye(2), np.eye(3)).c, d.c)


def test_transform_swap_relabels():
    s = BosonState(np.diag([R2, 0]))
    swap = np.array([[0, 1], [1, 0]])
    np.testing.assert_array_equal(states.transform_basis(s, swap).beta, np.diag([0, R2]))


def test_transform_rejects_non_unitary():
    s = BosonState(np.diag([R2, 0]))
    with pytest.raises(UnitarityError) as info:
        states.transform_basis(s, np.diag([1, 1.01]))
    assert info.value.deviation > 0
    with pytest.raises(ValueError):
        states.transform_basis(s, np.eye(2), np.eye(2))


def test_transform_preserves_entropy():
    s = states.random_state("boson", 6, seed=2)
    t = states.transform_basis(s, states.haar_unitary(6, 3))
    assert abs(analyze(t).entropy - analyze(s).entropy) < 1e-9
    assert np.array_equal(t.beta, t.beta.T)
    assert states.is_normalized(t, 1e-12)


def test_distinguishable_transform_matches_operator_picture():
    # a_i^+ = sum_k conj(u_ik) a'_k^+ gives C' = u^H C conj(v), i.e. C = u C' v^T
    rng = np.random.default_rng(4)
    c = states.random_state("distinguishable", (3, 2), seed=5).c
    u, v = states.haar_unitary(3, rng), states.haar_unitary(2, rng)
    t = states.transform_basis(DistinguishableState(c), u, v).c
    np.testing.assert_allclose(u @ t @ v.T, c, atol=1e-15)


def test_haar_scalar_and_unitarity():
    u1 = states.haar_unitary(1, 0)
    assert u1.shape == (1, 1) and abs(abs(u1[0, 0]) - 1) < 1e-15
    assert unitarity_defect(states.haar_unitary(4, 9)) < 1e-12


def test_haar_first_moment():
    rng = np.random.default_rng(11)
    vals = [abs(states.haar_unitary(2, rng)[0, 0]) ** 2 for _ in range(1000)]
    assert abs(np.mean(vals) - 0.5) < 0.05


def test_haar_phase_distribution_is_uniform():
    # without the phase correction diag(R) > 0 biases the diagonal phases
    rng = np.random.default_rng(12)
    phases = np.array([np.angle(states.haar_unitary(3, rng)[0, 0]) for _ in range(4000)])
    assert abs(np.mean(np.cos(phases))) < 0.05
    assert abs(np.mean(np.sin(phases))) < 0.05


def test_random_state_rank_examples():
    with pytest.raises(RankError) as info:
        states.random_state("fermion", 3, rank=2)
    assert info.value.maximum == 1
    b = states.random_state("boson", 4, rank=1, seed=7)
    assert analyze(b).rank == 1 and abs(analyze(b).entropy) < 1e-12
    d = states.random_state("distinguishable", (4, 4), rank=3, seed=1)
    assert numeric_rank(np.linalg.svd(d.c, compute_uv=False)) == 3


def test_random_state_bad_dims():
    with pytest.raises(ValueError):
        states.random_state("distinguishable", 3)
    with pytest.raises(ValueError):
        states.random_state("boson", (0,))


def test_random_state_deterministic():
    a = states.random_state("fermion", 6, seed=42)
    b = states.random_state("fermion", 6, seed=42)
    assert np.array_equal(a.omega, b.omega)


@settings(max_examples=50, deadline=None)
@given(family=st.sampled_from(list(Family)), n=st.integers(2, 7), m=st.integers(1, 7), data=st.data())
def test_random_state_hits_requested_rank(family, n, m, data):
    dims = (n, m) if family is Family.DISTINGUISHABLE else (n,)
    top = states.max_rank(family, dims)
    rank = data.draw(st.integers(1, top))
    s = states.random_state(family, dims, rank=rank, seed=data.draw(st.integers(0, 2**32 - 1)))
    assert states.is_normalized(s, 1e-12)
    assert decompose(s).rank == rank
