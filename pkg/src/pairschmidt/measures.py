"""Correlation measures for two-particle pure states.

All measures derive from the reduced single-particle density matrix.  With
index convention ``rho[nu, mu] = <a_mu^+ a_nu> / <N>`` the closed forms are

* distinguishable: ``rho_A = C C^H``, ``rho_B = (C^H C)^T``
* fermion: ``rho = 2 (omega^H omega)^T``
* boson: ``rho = 2 (beta^H beta)^T``

Each is divided by its trace, which is what the ratio ``<a^+ a> / <N>``
amounts to and is 1 for a normalized state.  Entropies are in nats.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .decompositions import CanonicalDecomposition, decompose
from .linalg import hermitian_eig
from .states import DistinguishableState, Family, State, require_normalized

CLAMP = 1e-12
ORACLE_MAX_ENTRIES = 64


class Side(str, Enum):
    A = "A"
    B = "B"
    IDENTICAL = "identical"


@dataclass(frozen=True, eq=False)
class ReducedDensity:
    matrix: np.ndarray
    spectrum: np.ndarray
    side: Side

    @classmethod
    def from_matrix(cls, matrix, side=Side.IDENTICAL) -> "ReducedDensity":
        evals, _ = hermitian_eig(matrix)
        if evals.size and evals[-1] < -CLAMP:
            raise ValueError(f"density matrix has a negative eigenvalue {evals[-1]:.3e}")
        return cls(matrix=np.asarray(matrix), spectrum=np.clip(evals, 0.0, None), side=Side(side))

    @property
    def purity(self) -> float:
        return float(np.vdot(self.matrix, self.matrix).real)


def _unit_trace(m: np.ndarray) -> np.ndarray:
    return m / np.trace(m).real


def reduced_density(state: State):
    """Reduced single-particle density matrix from the closed-form expressions.

    Returns a ``(rho_A, rho_B)`` pair for distinguishable particles and a
    single :class:`ReducedDensity` for identical ones.
    """
    m = state.matrix
    if isinstance(state, DistinguishableState):
        rho_a = _unit_trace(m @ m.conj().T)
        rho_b = _unit_trace((m.conj().T @ m).T)
        return ReducedDensity.from_matrix(rho_a, Side.A), ReducedDensity.from_matrix(rho_b, Side.B)
    return ReducedDensity.from_matrix(_unit_trace(2 * (m.conj().T @ m).T))


def brute_force_oracle(state: State):
    """Reduced densities by explicit first-quantized partial trace.

    Every term ``M_ij x_i^+ y_j^+ |0>`` is expanded into product kets:
    ``|i>|j>`` for distinguishable particles, ``|i>|j> - |j>|i>`` for
    fermions and ``|i>|j> + |j>|i>`` for bosons.  For ``i == j`` the boson
    image is ``2 |i>|i>``, matching the Fock norm of ``b_i^+ b_i^+ |0>``
    being ``sqrt(2)``.  The amplitude tensor is normalized and one particle
    is traced out index by index.
    """
    m = np.asarray(state.matrix)
    n, k = m.shape
    if n * k > ORACLE_MAX_ENTRIES:
        raise ValueError(f"oracle is limited to {ORACLE_MAX_ENTRIES} amplitudes, state has {n * k}")
    sign = {Family.DISTINGUISHABLE: 0, Family.FERMION: -1, Family.BOSON: +1}[state.family]
    psi = np.zeros((n, k), dtype=np.complex128)
    for i in range(n):
        for j in range(k):
            psi[i, j] += m[i, j]
            if sign:
                psi[j, i] += sign * m[i, j]
    total = 0.0
    for i in range(n):
        for j in range(k):
            total += abs(psi[i, j]) ** 2
    psi /= np.sqrt(total)

    def trace_second(t):
        rows, cols = t.shape
        rho = np.zeros((rows, rows), dtype=np.complex128)
        for nu in range(rows):
            for mu in range(rows):
                acc = 0j
                for b in range(cols):
                    acc += t[nu, b] * np.conj(t[mu, b])
                rho[nu, mu] = acc
        return rho

    if sign == 0:
        return (
            ReducedDensity.from_matrix(trace_second(psi), Side.A),
            ReducedDensity.from_matrix(trace_second(psi.T.copy()), Side.B),
        )
    return ReducedDensity.from_matrix(trace_second(psi))


def von_neumann_entropy(rho) -> float:
    """``-sum p ln p`` over the spectrum, with ``0 ln 0 = 0``.

    ``rho`` is a :class:`ReducedDensity` or a 1-D spectrum.
    """
    p = rho.spectrum if isinstance(rho, ReducedDensity) else np.asarray(rho, dtype=float)
    if p.size and p.min() < -CLAMP:
        raise ValueError(f"spectrum has a negative entry {p.min():.3e}")
    p = p[p > 0]
    return float(-np.sum(p * np.log(p)))


def entropy_closed_form(decomp: CanonicalDecomposition) -> float:
    """Entropy written directly in the canonical coefficients."""
    c2 = decomp.coefficients**2
    c2 = c2[c2 > 0]
    if decomp.family is Family.FERMION:
        return float(-np.log(2) - 4 * np.sum(c2 * np.log(c2)))
    if decomp.family is Family.BOSON:
        w = 2 * c2
        return float(-np.sum(w * np.log(w)))
    return float(-np.sum(c2 * np.log(c2)))


def grobe_k(decomp: CanonicalDecomposition, rho: ReducedDensity | None = None) -> tuple[float, float]:
    """Inverse-purity correlation numbers ``(k_slater, k_density)``.

    ``k_slater`` is taken over the pair-weight distribution and equals 1
    exactly for a single canonical term.  ``k_density`` is ``1 / tr(rho^2)``
    of the reduced density itself; for fermions it is twice ``k_slater``
    because every Slater block puts the same weight on two orbitals.
    """
    w = decomp.weights()
    k_slater = 1.0 / float(np.sum(w**2))
    if rho is None:
        k_density = 1.0 / float(np.sum(decomp.density_spectrum() ** 2))
    else:
        k_density = 1.0 / rho.purity
    return k_slater, k_density


def det_measure(decomp: CanonicalDecomposition) -> float:
    """Product of the nonzero canonical weights ``xi_k = |coefficient_k|^2``.

    This is the modulus of the determinant of the nonzero sub-block of the
    canonical weight matrix; it compares states of equal rank only.
    """
    if decomp.rank == 0:
        return 0.0
    return float(np.prod(decomp.coefficients[: decomp.rank] ** 2))


def largest_even(n: int) -> int:
    return n - (n % 2)


def entropy_bounds(family, dims) -> tuple[float, float]:
    """``(floor, ceiling)`` of the entropy for the family and dimensions."""
    family = Family(family)
    if family is Family.DISTINGUISHABLE:
        return 0.0, float(np.log(min(dims)))
    if family is Family.FERMION:
        return float(np.log(2)), float(np.log(largest_even(dims[0])))
    return 0.0, float(np.log(dims[0]))


@dataclass(frozen=True, eq=False)
class CorrelationReport:
    family: Family
    dims: tuple[int, ...]
    rank: int
    entropy: float
    entropy_floor: float
    entropy_ceiling: float
    grobe_k: float
    k_density: float
    det_measure: float
    correlated: bool
    decomposition: CanonicalDecomposition


def analyze(state: State) -> CorrelationReport:
    """Full correlation report for a normalized state.

    The verdict is ``correlated = rank > 1``; for fermions the rank is the
    Slater rank, so a single determinant is uncorrelated even though its
    entropy is ``ln 2``.
    """
    require_normalized(state)
    decomp = decompose(state)
    rho = reduced_density(state)
    if isinstance(rho, tuple):
        rho = rho[0]
    floor, ceiling = entropy_bounds(state.family, state.dims)
    k_slater, k_density = grobe_k(decomp, rho)
    return CorrelationReport(
        family=state.family,
        dims=tuple(state.dims),
        rank=decomp.rank,
        entropy=von_neumann_entropy(rho),
        entropy_floor=floor,
        entropy_ceiling=ceiling,
        grobe_k=k_slater,
        k_density=k_density,
        det_measure=det_measure(decomp),
        correlated=decomp.rank > 1,
        decomposition=decomp,
    )


# ---------------------------------------------------------------------------
# Determinant maximization under the normalization constraint

GRADIENT_TOL = 1e-10
HESSIAN_TOL = -1e-12


@dataclass(frozen=True, eq=False)
class DetMaxRecord:
    """Outcome of :func:`verify_det_maximum`.

    The functional is ``F(xi_2..xi_n) = (1/2 - sum xi_j) * prod xi_j``,
    i.e. ``prod xi_k`` with ``xi_1`` eliminated by ``sum xi_k = 1/2``.
    """

    n: int
    uniform_xi: float
    uniform_value: float
    gradient: np.ndarray
    hessian: np.ndarray
    hessian_eigenvalues: np.ndarray
    probes: int
    probe_max: float
    probes_exceeding: int

    @property
    def gradient_max(self) -> float:
        return float(np.max(np.abs(self.gradient)))

    @property
    def gradient_ok(self) -> bool:
        return self.gradient_max <= GRADIENT_TOL

    @property
    def hessian_ok(self) -> bool:
        return bool(np.all(self.hessian_eigenvalues <= HESSIAN_TOL))

    @property
    def probe_ok(self) -> bool:
        return self.probes_exceeding == 0

    @property
    def confirmed(self) -> bool:
        return self.gradient_ok and self.hessian_ok and self.probe_ok


def _reduced_functional(x: np.ndarray) -> float:
    return (0.5 - np.sum(x)) * np.prod(x)


def _reduced_gradient(x: np.ndarray) -> np.ndarray:
    first = 0.5 - np.sum(x)
    full = np.prod(x)
    g = np.empty_like(x)
    for j in range(x.size):
        g[j] = -full + first * np.prod(np.delete(x, j))
    return g


def _fd_hessian(f, x: np.ndarray, h: float) -> np.ndarray:
    # central differences; exact up to rounding because f is at most
    # quadratic in every single variable
    d = x.size
    hess = np.empty((d, d))
    e = np.eye(d) * h
    f0 = f(x)
    for i in range(d):
        hess[i, i] = (f(x + e[i]) - 2 * f0 + f(x - e[i])) / h**2
        for j in range(i + 1, d):
            val = (f(x + e[i] + e[j]) - f(x + e[i] - e[j]) - f(x - e[i] + e[j]) + f(x - e[i] - e[j])) / (4 * h**2)
            hess[i, j] = hess[j, i] = val
    return hess


def verify_det_maximum(n: int, probes: int = 10_000, seed=0) -> DetMaxRecord:
    """Check that equal weights ``xi_k = 1/(2n)`` maximize ``prod xi_k``.

    Three independent checks: the analytic gradient of the reduced
    functional vanishes at the uniform point, the finite-difference Hessian
    there is negative definite, and no random feasible weight vector
    (uniform on the scaled simplex) beats the uniform value.
    """
    if not 2 <= n <= 8:
        raise ValueError(f"n must be in [2, 8], got {n}")
    if probes < 1:
        raise ValueError(f"probes must be >= 1, got {probes}")
    c = 1.0 / (2 * n)
    x0 = np.full(n - 1, c)
    hess = _fd_hessian(_reduced_functional, x0, c / 64)
    rng = np.random.default_rng(seed)
    xi = rng.dirichlet(np.ones(n), size=probes) / 2
    values = np.prod(xi, axis=1)
    uniform = c**n
    return DetMaxRecord(
        n=n,
        uniform_xi=c,
        uniform_value=uniform,
        gradient=_reduced_gradient(x0),
        hessian=hess,
        hessian_eigenvalues=np.linalg.eigvalsh(hess)[::-1].copy(),
        probes=probes,
        probe_max=float(values.max()),
        probes_exceeding=int(np.count_nonzero(values > uniform)),
    )
