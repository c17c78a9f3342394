"""Chain Hamiltonians as Pauli-term sums with matrix-free state-vector action.

Conventions used throughout the package:

* Basis index bit ``i`` is the sigma_z eigenvalue of qubit ``i``; bit 0 is
  qubit 0 and the least significant bit.  ``sigma_z |0> = +|0>``.
* Term coefficients are the literal matrix prefactors.  The leading minus
  signs of the initial and problem Hamiltonians are folded into the stored
  coefficients at build time, so ``H = sum_k coeff_k * P_k`` with ``P_k`` a
  bare Pauli string.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problems import Schedule, SpinProblem

#: Eigenvalue gaps below this are treated as degenerate.
DEGENERACY_TOL = 1e-8

#: Largest size diagonalized densely; above this an iterative low-end solver is used.
DENSE_DIAG_MAX_N = 10

VALID_AXES = ("z", "x", "zz", "xx")


class DegenerateTargetError(RuntimeError):
    """Ground space is degenerate and the reference-state projection vanishes."""


@dataclass(frozen=True)
class PauliTerm:
    coeff: float
    axes: str  # "z" | "x" | "zz" | "xx"
    sites: tuple[int, ...]

    def __post_init__(self):
        if self.axes not in VALID_AXES:
            raise ValueError(f"unsupported axes {self.axes!r}")
        if len(self.sites) != len(self.axes):
            raise ValueError("axes/sites arity mismatch")
        if len(self.sites) == 2 and abs(self.sites[0] - self.sites[1]) != 1:
            raise ValueError("two-site terms must act on adjacent sites")
        if not np.isfinite(self.coeff):
            raise ValueError("non-finite coefficient")


class PauliOperator:
    """A sum of 1- and 2-local Pauli terms on ``n`` qubits.

    Provides matrix-free application to state vectors (cost O(terms * 2^n))
    and dense materialization for diagnostics and small-system oracles.
    """

    def __init__(self, n: int, terms):
        self.n = int(n)
        self.terms = tuple(terms)
        for t in self.terms:
            if any(q < 0 or q >= self.n for q in t.sites):
                raise ValueError(f"term {t} outside 0..{self.n - 1}")
        self._diag = None
        self._flips = None

    @property
    def dim(self) -> int:
        return 1 << self.n

    def _compile(self):
        """Split terms into one accumulated diagonal plus a list of bit-flip actions."""
        if self._diag is not None:
            return
        dim = self.dim
        idx = np.arange(dim)
        diag = np.zeros(dim)
        flips = []
        for t in self.terms:
            if t.axes in ("z", "zz"):
                sign = np.ones(dim)
                for q in t.sites:
                    sign *= 1.0 - 2.0 * ((idx >> q) & 1)
                diag += t.coeff * sign
            else:
                mask = 0
                for q in t.sites:
                    mask |= 1 << q
                flips.append((t.coeff, idx ^ mask))
        self._diag = diag
        self._flips = flips

    def apply(self, psi: np.ndarray) -> np.ndarray:
        """Return H @ psi without materializing H."""
        if psi.shape != (self.dim,):
            raise ValueError(f"state has shape {psi.shape}, expected ({self.dim},)")
        self._compile()
        out = self._diag * psi
        for coeff, perm in self._flips:
            out += coeff * psi[perm]
        return out

    def dense(self) -> np.ndarray:
        """Materialize the full 2^n x 2^n matrix (real symmetric for these terms)."""
        self._compile()
        dim = self.dim
        idx = np.arange(dim)
        h = np.diag(self._diag.astype(complex))
        for coeff, perm in self._flips:
            h[idx, perm] += coeff
        return h


def apply_hamiltonian(h: PauliOperator, psi: np.ndarray) -> np.ndarray:
    return h.apply(psi)


def build_h_initial(n: int, b_x_init: float = 2.0) -> PauliOperator:
    """Uniform transverse-field Hamiltonian; ground state |+>^n for b_x_init > 0."""
    if n < 2:
        raise ValueError("need at least two sites")
    return PauliOperator(n, [PauliTerm(-b_x_init, "x", (i,)) for i in range(n)])


def build_h_problem(p: SpinProblem) -> PauliOperator:
    """Problem Hamiltonian with fields and nearest-neighbour zz/xx couplings.

    Zero-coefficient terms are omitted.
    """
    terms = []
    for b in range(p.n - 1):
        if p.j_zz[b] != 0.0:
            terms.append(PauliTerm(-p.j_zz[b], "zz", (b, b + 1)))
    for b in range(p.n - 1):
        if p.j_xx[b] != 0.0:
            terms.append(PauliTerm(-p.j_xx[b], "xx", (b, b + 1)))
    for i in range(p.n):
        if p.b_z[i] != 0.0:
            terms.append(PauliTerm(-p.b_z[i], "z", (i,)))
    for i in range(p.n):
        if p.b_x[i] != 0.0:
            terms.append(PauliTerm(-p.b_x[i], "x", (i,)))
    return PauliOperator(p.n, terms)


def interpolated_hamiltonian(p: SpinProblem, sched: Schedule, s: float) -> PauliOperator:
    """H(s) = s * H_problem + (1 - s) * H_initial, combined term-wise."""
    if not 0.0 <= s <= 1.0:
        raise ValueError(f"s must lie in [0, 1], got {s}")
    terms = []
    for b in range(p.n - 1):
        c = -s * p.j_zz[b]
        if c != 0.0:
            terms.append(PauliTerm(c, "zz", (b, b + 1)))
    for b in range(p.n - 1):
        c = -s * p.j_xx[b]
        if c != 0.0:
            terms.append(PauliTerm(c, "xx", (b, b + 1)))
    for i in range(p.n):
        c = -s * p.b_z[i]
        if c != 0.0:
            terms.append(PauliTerm(c, "z", (i,)))
    for i in range(p.n):
        c = -(1.0 - s) * sched.b_x_init - s * p.b_x[i]
        if c != 0.0:
            terms.append(PauliTerm(c, "x", (i,)))
    return PauliOperator(p.n, terms)


def plus_state(n: int) -> np.ndarray:
    """|+>^n, the ground state of the initial Hamiltonian."""
    dim = 1 << n
    return np.full(dim, 1.0 / np.sqrt(dim), dtype=complex)


def basis_state(n: int, index: int) -> np.ndarray:
    psi = np.zeros(1 << n, dtype=complex)
    psi[index] = 1.0
    return psi


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues in ascending order, with optional eigenvectors as columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray | None
    degeneracy_tol: float = DEGENERACY_TOL

    def ground_degeneracy(self) -> int:
        e0 = self.eigenvalues[0]
        return int(np.sum(self.eigenvalues - e0 <= self.degeneracy_tol))


def diagonalize(h: PauliOperator, want_vectors: bool = True) -> Spectrum:
    """Eigendecomposition: dense for n <= 10, iterative lowest-k above that."""
    if h.n <= DENSE_DIAG_MAX_N:
        mat = h.dense()
        herm_defect = np.max(np.abs(mat - mat.conj().T))
        if herm_defect > 1e-12 * max(1.0, np.max(np.abs(mat))):
            raise ValueError(f"non-Hermitian operator (defect {herm_defect:.2e})")
        if want_vectors:
            w, v = np.linalg.eigh(mat)
            return Spectrum(w, v)
        return Spectrum(np.linalg.eigvalsh(mat), None)
    from scipy.sparse.linalg import LinearOperator, eigsh

    op = LinearOperator(
        (h.dim, h.dim), matvec=h.apply, rmatvec=h.apply, dtype=complex
    )
    k = min(6, h.dim - 2)
    v0 = np.full(h.dim, 1.0 / np.sqrt(h.dim))
    w, v = eigsh(op, k=k, which="SA", v0=v0)
    order = np.argsort(w)
    return Spectrum(w[order], v[:, order] if want_vectors else None)


def target_state(p: SpinProblem) -> np.ndarray:
    """Ground state of the problem Hamiltonian, the infinite-time reference.

    For a unique ground state the eigenvector is returned with its
    largest-magnitude amplitude made real positive.  For a degenerate ground
    space the normalized projection of |+>^n onto that space is returned:
    this is the state an ideal infinitely slow ramp reaches when the
    degeneracy is protected by symmetry (the ferromagnetic chain ends in the
    corresponding cat state).
    """
    spec = diagonalize(build_h_problem(p), want_vectors=True)
    w, v = spec.eigenvalues, spec.eigenvectors
    deg = spec.ground_degeneracy()
    if deg == 1:
        ground = v[:, 0]
        k = int(np.argmax(np.abs(ground)))
        ground = ground * np.exp(-1j * np.angle(ground[k]))
        return ground.astype(complex)
    basis = v[:, :deg]
    proj = basis @ (basis.conj().T @ plus_state(p.n))
    norm = np.linalg.norm(proj)
    if norm < 1e-6:
        raise DegenerateTargetError(
            f"ground space is {deg}-fold degenerate and the |+>^n projection "
            f"has norm {norm:.2e}; the reference state is ill-defined"
        )
    return proj / norm


def gap_above_ground(eigenvalues: np.ndarray, tol: float = DEGENERACY_TOL) -> float:
    """Energy of the first level distinctly above the (possibly degenerate) ground level."""
    e0 = eigenvalues[0]
    above = eigenvalues[eigenvalues - e0 > tol]
    if above.size == 0:
        return 0.0
    return float(above[0] - e0)


def min_gap(p: SpinProblem, sched: Schedule, grid_points: int = 101) -> tuple[float, float]:
    """Minimum spectral gap of H(s) over a uniform s-grid; returns (gap, s_at_min)."""
    if grid_points < 3:
        raise ValueError("grid_points must be >= 3")
    best = np.inf
    best_s = 0.0
    for s in np.linspace(0.0, 1.0, grid_points):
        w = diagonalize(interpolated_hamiltonian(p, sched, s), want_vectors=False).eigenvalues
        g = gap_above_ground(w)
        if g < best:
            best, best_s = g, float(s)
    return float(best), best_s
