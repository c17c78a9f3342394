"""Figures of merit: fidelities, distribution overlap, kink statistics,
residual energy, correlations, power-law fits, and resource estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .evolution import schedule_terms
from .hamiltonian import (
    DEGENERACY_TOL,
    build_h_initial,
    build_h_problem,
    diagonalize,
    interpolated_hamiltonian,
    min_gap,
)
from .problems import Schedule, SpinProblem

DISTRIBUTION_TOL = 1e-9


def state_probabilities(psi: np.ndarray) -> np.ndarray:
    """Computational-basis outcome distribution of a pure state."""
    return np.abs(psi) ** 2


def as_distribution(p: np.ndarray) -> np.ndarray:
    """Clamp tiny negatives and renormalize; reject anything further off."""
    p = np.asarray(p, dtype=float)
    if np.any(p < -1e-12):
        raise ValueError("distribution has significantly negative entries")
    p = np.clip(p, 0.0, None)
    total = p.sum()
    if abs(total - 1.0) > 1e-6:
        raise ValueError(f"distribution sums to {total}, not 1")
    return p / total


def fidelity_pure(psi1: np.ndarray, psi2: np.ndarray) -> float:
    """|<psi1|psi2>|^2; symmetric and global-phase invariant."""
    if psi1.shape != psi2.shape:
        raise ValueError("dimension mismatch")
    return float(abs(np.vdot(psi1, psi2)) ** 2)


def success_measure(p_ideal: np.ndarray, p: np.ndarray) -> float:
    """Squared Bhattacharyya coefficient |sum_k sqrt(p_ideal_k p_k)|^2.

    Equals the state fidelity to first order and upper-bounds it.
    """
    p_ideal = np.asarray(p_ideal, dtype=float)
    p = np.asarray(p, dtype=float)
    if p_ideal.shape != p.shape:
        raise ValueError("dimension mismatch")
    bc = np.sum(np.sqrt(np.clip(p_ideal, 0.0, None) * np.clip(p, 0.0, None)))
    return float(bc**2)


def uniform_baseline(n: int) -> np.ndarray:
    return np.full(1 << n, 2.0 ** (-n))


@dataclass(frozen=True)
class KinkProfile:
    """Distribution over the number of violated bonds, 0 .. n-1."""

    likelihood: np.ndarray
    expected_kinks: float


def kink_counts(p: SpinProblem) -> np.ndarray:
    """Number of violated bonds for every basis state.

    A bond is violated when adjacent bits disagree for a ferromagnetic
    coupling (j_zz > 0) or agree for an antiferromagnetic one (j_zz < 0).
    """
    if np.any(p.j_zz == 0.0):
        raise ValueError("kinks are undefined on a bond with zero j_zz")
    idx = np.arange(1 << p.n)
    counts = np.zeros(1 << p.n, dtype=int)
    for b in range(p.n - 1):
        differ = ((idx >> b) & 1) != ((idx >> (b + 1)) & 1)
        counts += np.where(p.j_zz[b] > 0, differ, ~differ)
    return counts


def kink_profile(distribution: np.ndarray, p: SpinProblem) -> KinkProfile:
    dist = as_distribution(distribution)
    if dist.shape != (1 << p.n,):
        raise ValueError("distribution size does not match the problem")
    counts = kink_counts(p)
    likelihood = np.bincount(counts, weights=dist, minlength=p.n)[: p.n]
    expected = float(np.sum(counts * dist))
    return KinkProfile(likelihood=likelihood, expected_kinks=expected)


def residual_energy(psi: np.ndarray, p: SpinProblem) -> float:
    """<H_problem> minus the ground energy; clamped at zero."""
    h = build_h_problem(p)
    energy = float(np.real(np.vdot(psi, h.apply(psi))))
    e0 = float(diagonalize(h, want_vectors=False).eigenvalues[0])
    res = energy - e0
    if res < -1e-9:
        raise ValueError(f"energy below ground energy by {-res:.2e}")
    return max(res, 0.0)


def magnetization(psi: np.ndarray, i: int) -> float:
    """<sigma_z^i> in the given state."""
    dim = psi.shape[0]
    n = dim.bit_length() - 1
    if not 0 <= i < n:
        raise IndexError(f"site {i} outside 0..{n - 1}")
    idx = np.arange(dim)
    sign = 1.0 - 2.0 * ((idx >> i) & 1)
    return float(np.sum(sign * np.abs(psi) ** 2))


def parity_correlation(psi: np.ndarray, i: int, d: int) -> float:
    """<sigma_z^i sigma_z^{i+d}>."""
    dim = psi.shape[0]
    n = dim.bit_length() - 1
    if d < 1 or i < 0 or i + d >= n:
        raise IndexError(f"pair ({i}, {i + d}) outside 0..{n - 1}")
    idx = np.arange(dim)
    sign = (1.0 - 2.0 * ((idx >> i) & 1)) * (1.0 - 2.0 * ((idx >> (i + d)) & 1))
    return float(np.sum(sign * np.abs(psi) ** 2))


def fit_power_law(points, t_min: float, t_max: float) -> tuple[float, float, tuple[float, float]]:
    """Least-squares fit of E = amplitude * T^(-eta) on log-log axes.

    ``points`` is a sequence of (T, value) pairs; only those with
    t_min <= T <= t_max enter the fit.  Returns (eta, amplitude, window).
    """
    sel = [(t, v) for t, v in points if t_min <= t <= t_max]
    if len(sel) < 4:
        raise ValueError(f"need at least 4 points in the window, have {len(sel)}")
    ts = np.array([t for t, _ in sel])
    vs = np.array([v for _, v in sel])
    if np.any(ts <= 0) or np.any(vs <= 0):
        raise ValueError("power-law fit requires positive times and values")
    slope, intercept = np.polyfit(np.log(ts), np.log(vs), 1)
    return float(-slope), float(np.exp(intercept)), (t_min, t_max)


@dataclass(frozen=True)
class ResourceEstimate:
    """Order-of-magnitude adiabatic resource estimates (all constants set to 1)."""

    time_bound: float
    steps: float
    gate_count: float
    gap: float
    drive_strength: float  # max |<1;s| dH/ds |0;s>| over the grid
    a_max: float
    term_count: int
    locality: int
    epsilon: float


def estimate_resources(
    p: SpinProblem,
    sched: Schedule,
    epsilon: float,
    gamma: float | None = None,
    grid_points: int = 101,
) -> ResourceEstimate:
    """Adiabatic-theorem time bound T ~ D / gamma^2 with D the peak
    ground-to-excited matrix element of dH/ds, then M ~ T^2 a_max^2 L^2 / eps
    and gate count ~ M * L * k.

    H is linear in s, so dH/ds = H_problem - H_initial exactly.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if gamma is None:
        gamma, _ = min_gap(p, sched, grid_points)
    terms = schedule_terms(p, sched)
    L = len(terms)
    a_max = max(max(abs(t.coeff_initial), abs(t.coeff_problem)) for t in terms)
    k = 2

    dh = build_h_problem(p).dense() - build_h_initial(p.n, sched.b_x_init).dense()
    drive = 0.0
    for s in np.linspace(0.0, 1.0, grid_points):
        spec = diagonalize(interpolated_hamiltonian(p, sched, s), want_vectors=True)
        w, v = spec.eigenvalues, spec.eigenvectors
        excited = np.nonzero(w - w[0] > DEGENERACY_TOL)[0]
        if excited.size == 0:
            continue
        elem = abs(np.vdot(v[:, excited[0]], dh @ v[:, 0]))
        drive = max(drive, float(elem))

    if gamma < 1e-10:
        t_bound = steps = gates = math.inf
    else:
        t_bound = drive / gamma**2
        steps = t_bound**2 * a_max**2 * L**2 / epsilon
        gates = steps * L * k
    return ResourceEstimate(
        time_bound=t_bound,
        steps=steps,
        gate_count=gates,
        gap=float(gamma),
        drive_strength=drive,
        a_max=float(a_max),
        term_count=L,
        locality=k,
        epsilon=epsilon,
    )
