"""Canonical (Schmidt / Slater) forms of two-particle states.

Conventions
-----------
The unitaries stored in :class:`CanonicalDecomposition` are basis changes
in the sense of :func:`~pairschmidt.states.transform_basis`: applying them
to the state returns the canonical coefficient matrix.  Equivalently the
original matrix is rebuilt as

* distinguishable: ``C = u @ D @ v.T`` (so ``U = u.T``, ``V = v.T`` give the
  textbook ``C = U^T D V``),
* fermion: ``omega = u @ J(z) @ u.T``,
* boson: ``beta = u @ diag(B) @ u.T``.

Coefficients are nonnegative and sorted nonincreasing; phases live in the
unitaries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .errors import DegeneracyError
from .linalg import EPS_CLUSTER, TAU_REC, ZERO_CUTOFF, numeric_rank
from .states import BosonState, DistinguishableState, Family, FermionState, State, require_normalized, transform_basis


@dataclass(frozen=True, eq=False)
class CanonicalDecomposition:
    family: Family
    u: np.ndarray
    coefficients: np.ndarray
    rank: int
    v: np.ndarray | None = None

    @property
    def shape(self) -> tuple[int, int]:
        n = self.u.shape[0]
        return (n, self.v.shape[0]) if self.v is not None else (n, n)

    def canonical_matrix(self) -> np.ndarray:
        """Coefficient matrix of the state in the canonical basis."""
        n, m = self.shape
        if self.family is Family.FERMION:
            return linalg.youla_block_matrix(self.coefficients, n)
        out = np.zeros((n, m), dtype=np.complex128)
        k = self.coefficients.size
        out[np.arange(k), np.arange(k)] = self.coefficients
        return out

    def reconstruct(self) -> np.ndarray:
        right = self.v if self.v is not None else self.u
        return self.u @ self.canonical_matrix() @ right.T

    def weights(self) -> np.ndarray:
        """Pair-weight distribution: ``D_k^2``, ``4 z_k^2`` or ``2 B_k^2`` (sums to 1)."""
        c2 = self.coefficients**2
        if self.family is Family.FERMION:
            return 4 * c2
        if self.family is Family.BOSON:
            return 2 * c2
        return c2

    def density_spectrum(self) -> np.ndarray:
        """Spectrum of the reduced single-particle density implied by the canonical form.

        Fermion blocks contribute the doubly degenerate pair ``2 z_k^2``.
        """
        if self.family is Family.FERMION:
            return np.repeat(2 * self.coefficients**2, 2)
        return self.weights()


def schmidt_distinguishable(state: DistinguishableState) -> CanonicalDecomposition:
    """Schmidt decomposition from the SVD ``C = W diag(D) X^H``.

    The basis change is ``u = W``, ``v = conj(X)``.  Singular values at or
    below ``ZERO_CUTOFF`` times the largest are set to exactly zero, as in
    the Takagi and Youla factorizations.
    """
    require_normalized(state)
    res = linalg.svd(state.c)
    d = res.sigma.copy()
    d[d <= ZERO_CUTOFF * d.max()] = 0.0
    return CanonicalDecomposition(
        family=Family.DISTINGUISHABLE,
        u=res.u,
        v=res.v.conj(),
        coefficients=d,
        rank=numeric_rank(d),
    )


def slater_fermion(state: FermionState) -> CanonicalDecomposition:
    """Slater decomposition via the Youla form; ``rank`` is the Slater rank."""
    require_normalized(state)
    res = linalg.youla(state.omega)
    return CanonicalDecomposition(
        family=Family.FERMION, u=res.u, coefficients=res.z, rank=numeric_rank(res.z)
    )


def schmidt_boson(state: BosonState) -> CanonicalDecomposition:
    require_normalized(state)
    res = linalg.takagi(state.beta)
    return CanonicalDecomposition(
        family=Family.BOSON, u=res.u, coefficients=res.b, rank=numeric_rank(res.b)
    )


_DISPATCH = {
    Family.DISTINGUISHABLE: schmidt_distinguishable,
    Family.FERMION: slater_fermion,
    Family.BOSON: schmidt_boson,
}


def decompose(state: State) -> CanonicalDecomposition:
    """Canonical decomposition for any state family."""
    return _DISPATCH[state.family](state)


# maps b_1^+ b_1^+ + b_2^+ b_2^+ onto 2 b_1^+ b_2^+ (up to the moduli)
_PAIR_TO_PRODUCT = np.array([[1, 1], [1j, -1j]]) / np.sqrt(2)


def degenerate_pair_rotation(state: BosonState, k1: int, k2: int):
    """Turn a degenerate pair of doubly occupied modes into a two-mode product.

    ``state`` must be diagonal on rows/columns ``k1`` and ``k2`` with
    ``|beta[k1, k1]| == |beta[k2, k2]|``.  Returns ``(rotation, result)``
    where ``result = transform_basis(state, rotation)`` carries the block
    ``[[0, |B|], [|B|, 0]]`` on ``(k1, k2)`` and is untouched elsewhere.

    The rotation strips the phases of the two diagonal entries and then
    applies the fixed 2 x 2 unitary ``W`` with ``W^H conj(W) = [[0, 1], [1, 0]]``.
    """
    beta = state.beta
    n = beta.shape[0]
    if not (0 <= k1 < n and 0 <= k2 < n) or k1 == k2:
        raise ValueError(f"need two distinct mode indices in [0, {n}), got {k1}, {k2}")
    scale = max(float(np.abs(beta).max()), 1e-300)
    for k in (k1, k2):
        off = np.abs(np.concatenate([np.delete(beta[k], k), np.delete(beta[:, k], k)]))
        if off.size and off.max() > TAU_REC * scale:
            raise ValueError(f"mode {k} is coupled to other modes; state is not in canonical form")
    b1, b2 = beta[k1, k1], beta[k2, k2]
    m1, m2 = abs(b1), abs(b2)
    if abs(m1 - m2) > EPS_CLUSTER * max(m1, m2, 1e-300):
        raise DegeneracyError(f"modes {k1}, {k2} are not degenerate: |B| = {m1:.12g} vs {m2:.12g}")
    phases = np.diag([np.exp(0.5j * np.angle(b1)), np.exp(0.5j * np.angle(b2))])
    block = phases @ _PAIR_TO_PRODUCT
    rot = np.eye(n, dtype=np.complex128)
    idx = np.ix_([k1, k2], [k1, k2])
    rot[idx] = block
    return rot, transform_basis(state, rot)
