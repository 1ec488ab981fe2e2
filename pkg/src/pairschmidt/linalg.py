"""Dense complex-matrix kernels.

Everything above this module works with plain ``numpy.ndarray`` objects of
dtype ``complex128``.  The factorizations here return small frozen
dataclasses so the factors travel together with the routine that checks
them (``reconstruct``).

Two factorizations are specific to two-particle states:

* Takagi: a complex symmetric ``m`` is written ``u @ diag(b) @ u.T`` with a
  single unitary ``u`` and ``b >= 0``.
* Youla: a complex antisymmetric ``m`` is written ``u @ J(z) @ u.T`` where
  ``J(z)`` is block diagonal with blocks ``[[0, z_k], [-z_k, 0]]``.

Both are computed from Hermitian eigenproblems of a doubled real
representation of the antilinear map ``x -> m @ conj(x)``.  Working there
keeps the factor accurate even when singular values are nearly (or
exactly) repeated; a plain SVD leaves a phase ambiguity inside every
cluster that has to be repaired after the fact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SymmetryError

TAU_REC = 1e-10
TAU_UNIT = 1e-11  # per dimension
TAU_HERM = 1e-10
TAU_SYM = 1e-8
EPS_RANK = 1e-9
EPS_CLUSTER = 1e-8
ZERO_CUTOFF = 1e-13  # relative; canonical values below this are exact zeros


def as_complex_matrix(m, name: str = "matrix") -> np.ndarray:
    """Return ``m`` as a finite 2-D complex128 array (a copy)."""
    a = np.array(m, dtype=np.complex128)
    if a.ndim == 0:
        a = a.reshape(1, 1)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"{name} must be a non-empty 2-D array, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        bad = np.argwhere(~np.isfinite(a))[0]
        raise ValueError(f"{name} has a non-finite entry at {tuple(int(i) for i in bad)}")
    return a


def _require_square(a: np.ndarray, name: str) -> None:
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")


def unitarity_defect(u) -> float:
    """Frobenius norm of ``u^H u - I``."""
    u = np.asarray(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[1])))


def symmetry_defect(m, sign: int = 1) -> float:
    """Largest entry of ``|m - sign * m.T|``; ``sign=-1`` tests antisymmetry."""
    m = np.asarray(m)
    if m.size == 0:
        return 0.0
    return float(np.max(np.abs(m - sign * m.T)))


def project_symmetry(m, sign: int, tol: float = TAU_SYM, name: str = "matrix") -> np.ndarray:
    """Project a square matrix onto the (anti)symmetric class.

    The projection ``(m + sign * m.T) / 2`` is accepted only when it moves
    ``m`` by less than ``tol`` relative to its Frobenius norm; otherwise a
    :class:`SymmetryError` reporting the largest asymmetry is raised.
    """
    a = as_complex_matrix(m, name)
    _require_square(a, name)
    p = (a + sign * a.T) / 2
    scale = np.linalg.norm(a)
    if scale > 0 and np.linalg.norm(a - p) > tol * scale:
        kind = "symmetric" if sign == 1 else "antisymmetric"
        dev = symmetry_defect(a, sign)
        raise SymmetryError(f"{name} is not {kind}: max |m - {'' if sign == 1 else '-'}m^T| = {dev:.3e}", dev)
    return p


def _phase_of_pivot(col: np.ndarray) -> complex:
    """Unit phase of the largest-modulus entry (first one on ties)."""
    k = int(np.argmax(np.abs(col)))
    z = col[k]
    return z / abs(z) if z != 0 else 1.0


def _rotate_to_pivot(col: np.ndarray) -> complex:
    """Divide ``col`` in place by its pivot phase, leaving the pivot exactly real.

    Returns the phase removed.
    """
    k = int(np.argmax(np.abs(col)))
    ph = _phase_of_pivot(col)
    col /= ph
    col[k] = abs(col[k])
    return ph


def _fix_column_phases(u: np.ndarray) -> np.ndarray:
    # largest-modulus entry of every column becomes real positive
    u = u.copy()
    for k in range(u.shape[1]):
        _rotate_to_pivot(u[:, k])
    return u


def _fix_column_signs(u: np.ndarray) -> np.ndarray:
    # Takagi columns only admit +-1; make the pivot point into Re > 0
    u = u.copy()
    for k in range(u.shape[1]):
        z = u[int(np.argmax(np.abs(u[:, k]))), k]
        if z.real < 0 or (z.real == 0 and z.imag < 0):
            u[:, k] = -u[:, k]
    return u


def _reorthonormalize(u: np.ndarray) -> np.ndarray:
    """Gram-Schmidt (twice) in column order.

    Columns arrive sorted by decreasing canonical value, so the small
    corrections land on the columns with the smallest weight in the
    reconstruction.
    """
    u = u.copy()
    for k in range(u.shape[1]):
        for _ in range(2):
            u[:, k] -= u[:, :k] @ (u[:, :k].conj().T @ u[:, k])
        u[:, k] /= np.linalg.norm(u[:, k])
    return u


def _complete_basis(cols: np.ndarray, n: int) -> np.ndarray:
    if cols.shape[1] == n:
        return cols
    if cols.shape[1] == 0:
        return np.eye(n, dtype=np.complex128)
    rest = scipy.linalg.null_space(cols.conj().T)
    return np.hstack([cols, _fix_column_phases(rest)])


def _real_form(a: np.ndarray) -> np.ndarray:
    # real 2n x 2n matrix of x -> a @ conj(x) acting on [Re x; Im x]
    return np.block([[a.real, a.imag], [a.imag, -a.real]])


@dataclass(frozen=True, eq=False)
class SvdResult:
    """``m = u @ diag(sigma) @ v^H`` with full unitary ``u`` and ``v``."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def reconstruct(self) -> np.ndarray:
        k = self.sigma.size
        return (self.u[:, :k] * self.sigma) @ self.v[:, :k].conj().T


@dataclass(frozen=True, eq=False)
class TakagiResult:
    u: np.ndarray
    b: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.b) @ self.u.T


@dataclass(frozen=True, eq=False)
class YoulaResult:
    u: np.ndarray
    z: np.ndarray
    has_zero_tail: bool

    def reconstruct(self) -> np.ndarray:
        return self.u @ youla_block_matrix(self.z, self.u.shape[0]) @ self.u.T


def youla_block_matrix(z, n: int) -> np.ndarray:
    """Block-diagonal ``J(z)`` of size ``n`` with trailing zeros."""
    z = np.asarray(z, dtype=float)
    if 2 * z.size > n:
        raise ValueError(f"{z.size} blocks do not fit in dimension {n}")
    j = np.zeros((n, n), dtype=np.complex128)
    idx = np.arange(z.size)
    j[2 * idx, 2 * idx + 1] = z
    j[2 * idx + 1, 2 * idx] = -z
    return j


def svd(m) -> SvdResult:
    """Full singular value decomposition with a fixed phase convention.

    The pivot (largest-modulus) entry of every left singular vector is made
    real positive and the matching right vector gets the same phase, so two
    calls on the same input return identical arrays.
    """
    a = as_complex_matrix(m)
    u, s, vh = np.linalg.svd(a, full_matrices=True)
    v = vh.conj().T
    k = s.size
    for j in range(k):
        v[:, j] /= _rotate_to_pivot(u[:, j])
    u[:, k:] = _fix_column_phases(u[:, k:])
    v[:, k:] = _fix_column_phases(v[:, k:])
    return SvdResult(u=u, sigma=s, v=v)


def hermitian_eig(m):
    """Eigen-decomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : ndarray
        Real, nonincreasing.
    eigenvectors : ndarray
        Unitary; column ``k`` belongs to ``eigenvalues[k]``.

    Raises
    ------
    SymmetryError
        If ``m`` deviates from Hermitian by more than ``TAU_HERM`` relative
        to its norm.
    """
    a = as_complex_matrix(m)
    _require_square(a, "matrix")
    dev = np.linalg.norm(a - a.conj().T)
    if dev > TAU_HERM * max(np.linalg.norm(a), 1.0):
        raise SymmetryError(f"matrix is not Hermitian: ||m - m^H||_F = {dev:.3e}", float(dev))
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    return w[::-1].copy(), _fix_column_phases(v[:, ::-1])


def takagi(m) -> TakagiResult:
    """Takagi factorization ``m = u @ diag(b) @ u.T`` of a complex symmetric matrix.

    For ``m = B + iC`` the real symmetric matrix ``[[B, C], [C, -B]]`` has
    eigenvalues ``+-b_k``; an eigenvector ``[x; y]`` of ``+b_k`` gives the
    Takagi vector ``x + iy``.  Eigenvalues at or below ``ZERO_CUTOFF`` times
    the largest one are treated as zero and their columns are an arbitrary
    orthonormal completion.
    """
    a = project_symmetry(m, +1)
    n = a.shape[0]
    lam, w = np.linalg.eigh(_real_form(a))
    lam = lam[::-1][:n]
    w = w[:, ::-1][:, :n]
    top = lam[0]
    if top <= 0:
        return TakagiResult(u=np.eye(n, dtype=np.complex128), b=np.zeros(n))
    k = int(np.count_nonzero(lam > ZERO_CUTOFF * top))
    cols = _reorthonormalize(w[:n, :k] + 1j * w[n:, :k])
    u = _complete_basis(_fix_column_signs(cols), n)
    b = np.zeros(n)
    b[:k] = lam[:k]
    return TakagiResult(u=u, b=b)


def youla(m) -> YoulaResult:
    """Youla canonical form ``m = u @ J(z) @ u.T`` of a complex antisymmetric matrix.

    The antilinear map ``x -> m @ conj(x)`` is real-antisymmetric on
    ``R^{2n}``; ``i`` times it is Hermitian with eigenvalues ``+-z_k``, each
    twice.  The two eigenvectors of ``+z_k`` belonging to one block are
    related by the antiunitary ``T(g) = I conj(g)`` (``I`` the real form of
    multiplication by ``i``), so each accepted eigenvector is projected
    against both ``g`` and ``T(g)`` of the previously accepted ones.  An
    accepted ``g = p + iq`` yields the pair ``(sqrt2 p, -sqrt2 q)`` read back
    as complex ``n``-vectors.
    """
    a = project_symmetry(m, -1)
    n = a.shape[0]
    nblocks = n // 2
    lam, g = np.linalg.eigh(1j * _real_form(a))
    lam = lam[::-1]
    g = g[:, ::-1]
    top = lam[0]
    if top <= 0:
        return YoulaResult(u=np.eye(n, dtype=np.complex128), z=np.zeros(nblocks), has_zero_tail=True)

    def partner(v):
        return np.concatenate([-v[n:].conj(), v[:n].conj()])

    basis = np.zeros((2 * n, 0), dtype=np.complex128)
    z = []
    for j in range(2 * n):
        if lam[j] <= ZERO_CUTOFF * top or len(z) == nblocks:
            break
        h = g[:, j]
        for _ in range(2):
            h = h - basis @ (basis.conj().T @ h)
        r = np.linalg.norm(h)
        if r < 0.5:
            continue
        h = h / r
        basis = np.column_stack([basis, h, partner(h)])
        z.append(lam[j])

    cols = np.zeros((n, 2 * len(z)), dtype=np.complex128)
    for k in range(len(z)):
        h = basis[:, 2 * k] * np.sqrt(2)
        p, q = h.real, h.imag
        u1 = p[:n] + 1j * p[n:]
        u2 = -(q[:n] + 1j * q[n:])
        ph = _phase_of_pivot(u1)
        cols[:, 2 * k] = u1 / ph
        cols[:, 2 * k + 1] = u2 * ph
    u = _complete_basis(_reorthonormalize(cols), n)
    zz = np.zeros(nblocks)
    zz[: len(z)] = z
    return YoulaResult(u=u, z=zz, has_zero_tail=2 * len(z) < n)


def numeric_rank(sigma, scale: float | None = None) -> int:
    """Number of entries of ``sigma`` above ``EPS_RANK * max(scale, 1)``.

    ``scale`` defaults to the largest entry.
    """
    s = np.asarray(sigma, dtype=float)
    if s.size == 0:
        return 0
    if scale is None:
        scale = float(s.max())
    return int(np.count_nonzero(s > EPS_RANK * max(scale, 1.0)))
