"""Pure states of two particles, stored as coefficient matrices.

===============  =======================================  ===============
family           state                                    normalization
===============  =======================================  ===============
distinguishable  sum_ij C_ij a_i^+ b_j^+ |0>              tr(C^H C) = 1
fermion          sum_ij w_ij f_i^+ f_j^+ |0>, w^T = -w    tr(w^H w) = 1/2
boson            sum_ij B_ij b_i^+ b_j^+ |0>, B^T = B     tr(B^H B) = 1/2
===============  =======================================  ===============

Fermion and boson constructors project their input onto the required
symmetry class (tolerating relative round-off up to ``TAU_SYM``) so the
stored matrix satisfies it exactly.  Normalization is *not* enforced at
construction; :func:`normalize` and :meth:`is_normalized` handle it.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import ClassVar, Union

import numpy as np

from .errors import NormalizationError, RankError, UnitarityError
from .linalg import TAU_UNIT, as_complex_matrix, project_symmetry, unitarity_defect, youla_block_matrix

TAU_NORM = 1e-6


class Family(str, Enum):
    DISTINGUISHABLE = "distinguishable"
    FERMION = "fermion"
    BOSON = "boson"


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class DistinguishableState:
    """Two distinguishable particles; ``c`` is N x M."""

    c: np.ndarray
    family: ClassVar[Family] = Family.DISTINGUISHABLE
    norm_target: ClassVar[float] = 1.0

    def __post_init__(self):
        object.__setattr__(self, "c", _frozen(as_complex_matrix(self.c, "C")))

    @property
    def matrix(self) -> np.ndarray:
        return self.c

    @property
    def dims(self) -> tuple[int, int]:
        return self.c.shape


@dataclass(frozen=True, eq=False)
class FermionState:
    """Two identical fermions; ``omega`` is N x N antisymmetric."""

    omega: np.ndarray
    family: ClassVar[Family] = Family.FERMION
    norm_target: ClassVar[float] = 0.5

    def __post_init__(self):
        w = project_symmetry(self.omega, -1, name="omega")
        if w.shape[0] < 2:
            raise ValueError("a two-fermion state needs N >= 2 modes")
        object.__setattr__(self, "omega", _frozen(w))

    @property
    def matrix(self) -> np.ndarray:
        return self.omega

    @property
    def dims(self) -> tuple[int]:
        return (self.omega.shape[0],)


@dataclass(frozen=True, eq=False)
class BosonState:
    """Two identical bosons; ``beta`` is N x N symmetric."""

    beta: np.ndarray
    family: ClassVar[Family] = Family.BOSON
    norm_target: ClassVar[float] = 0.5

    def __post_init__(self):
        object.__setattr__(self, "beta", _frozen(project_symmetry(self.beta, +1, name="beta")))

    @property
    def matrix(self) -> np.ndarray:
        return self.beta

    @property
    def dims(self) -> tuple[int]:
        return (self.beta.shape[0],)


State = Union[DistinguishableState, FermionState, BosonState]

_CLASSES = {
    Family.DISTINGUISHABLE: DistinguishableState,
    Family.FERMION: FermionState,
    Family.BOSON: BosonState,
}


def make_state(family, matrix) -> State:
    """Build a state of the named family from a raw coefficient matrix."""
    return _CLASSES[Family(family)](matrix)


def norm(state: State) -> float:
    """``tr(M^H M)`` for the coefficient matrix ``M``."""
    m = state.matrix
    return float(np.vdot(m, m).real)


def is_normalized(state: State, tol: float = TAU_NORM) -> bool:
    return abs(norm(state) - state.norm_target) <= tol * state.norm_target


def require_normalized(state: State, tol: float = TAU_NORM) -> None:
    if not is_normalized(state, tol):
        raise NormalizationError(
            f"{state.family.value} state has tr(M^H M) = {norm(state):.12g}, "
            f"expected {state.norm_target:g}"
        )


def normalize(state: State) -> State:
    """Rescale the coefficient matrix so the family normalization holds."""
    n = norm(state)
    if n == 0:
        raise NormalizationError("the zero matrix does not describe a state")
    return type(state)(state.matrix * np.sqrt(state.norm_target / n))


def _check_unitary(u, n: int, name: str) -> np.ndarray:
    u = as_complex_matrix(u, name)
    if u.shape != (n, n):
        raise ValueError(f"{name} must be {n} x {n}, got {u.shape}")
    dev = unitarity_defect(u)
    if dev > TAU_UNIT * n:
        raise UnitarityError(f"{name} is not unitary: ||U^H U - I||_F = {dev:.3e}", dev)
    return u


def transform_basis(state: State, u, v=None) -> State:
    """Express the same physical state in a rotated single-particle basis.

    With operators transforming as ``a_i = sum_j u_ij a'_j``, identical
    particles map ``M -> u^H M conj(u)``.  Distinguishable particles use
    ``u`` on particle A and ``v`` (default identity) on particle B:
    ``C -> u^H C conj(v)``.
    """
    m = state.matrix
    u = _check_unitary(u, m.shape[0], "u")
    if isinstance(state, DistinguishableState):
        v = np.eye(m.shape[1]) if v is None else _check_unitary(v, m.shape[1], "v")
        return DistinguishableState(u.conj().T @ m @ v.conj())
    if v is not None:
        raise ValueError("identical-particle states take a single unitary")
    return type(state)(u.conj().T @ m @ u.conj())


def haar_unitary(n: int, seed=None) -> np.ndarray:
    """Haar-distributed ``n x n`` unitary.

    QR of a complex Ginibre matrix with the phases of ``diag(R)`` moved into
    ``Q`` (Mezzadri's correction).  ``seed`` may be an int or a
    ``numpy.random.Generator``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def max_rank(family, dims) -> int:
    """Largest canonical rank for the family (Slater blocks for fermions)."""
    family = Family(family)
    if family is Family.DISTINGUISHABLE:
        return min(dims)
    if family is Family.FERMION:
        return dims[0] // 2
    return dims[0]


def _normalize_dims(family: Family, dims) -> tuple[int, ...]:
    dims = (int(dims),) if np.isscalar(dims) else tuple(int(d) for d in dims)
    want = 2 if family is Family.DISTINGUISHABLE else 1
    if len(dims) != want:
        raise ValueError(f"{family.value} states take {want} dimension(s), got {dims}")
    if min(dims) < 1:
        raise ValueError(f"dimensions must be positive, got {dims}")
    if family is Family.FERMION and dims[0] < 2:
        raise ValueError("a two-fermion state needs N >= 2 modes")
    return dims


_MIN_WEIGHT = 1e-6


def random_state(family, dims, rank: int | None = None, seed=None) -> State:
    """Random normalized state of exactly the requested canonical rank.

    Canonical weights are drawn uniformly from the simplex (redrawn if any
    falls below ``1e-6`` so the rank is unambiguous), placed in canonical
    form and rotated by Haar unitaries.  ``rank`` defaults to the family
    maximum; for fermions it counts Slater blocks.
    """
    family = Family(family)
    dims = _normalize_dims(family, dims)
    top = max_rank(family, dims)
    if rank is None:
        rank = top
    if not 1 <= rank <= top:
        raise RankError(
            f"rank {rank} is infeasible for a {family.value} state with dims {list(dims)}; maximum is {top}",
            top,
        )
    rng = np.random.default_rng(seed)
    while True:
        w = rng.dirichlet(np.ones(rank))
        if w.min() >= _MIN_WEIGHT:
            break
    if family is Family.DISTINGUISHABLE:
        n, m = dims
        ua, ub = haar_unitary(n, rng), haar_unitary(m, rng)
        c = (ua[:, :rank] * np.sqrt(w)) @ ub[:, :rank].T
        return normalize(DistinguishableState(c))
    n = dims[0]
    u = haar_unitary(n, rng)
    if family is Family.FERMION:
        z = np.sqrt(w / 4)
        return normalize(FermionState(u @ youla_block_matrix(z, n) @ u.T))
    b = np.sqrt(w / 2)
    return normalize(BosonState((u[:, :rank] * b) @ u[:, :rank].T))
