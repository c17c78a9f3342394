"""Shared dense-matrix oracles, built independently of the package internals.

Everything here constructs operators by explicit Kronecker products and
evolves by dense matrix exponentials, so package results can be checked
against a second, structurally different implementation.
"""

from __future__ import annotations

import numpy as np
import pytest
from scipy.linalg import expm

SX = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SY = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SZ = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
ID2 = np.eye(2, dtype=complex)


def kron_embed(n: int, ops: dict[int, np.ndarray]) -> np.ndarray:
    """Embed single-site operators into the n-qubit space.

    Qubit 0 is the least significant bit, so it sits rightmost in the
    Kronecker chain.
    """
    mat = np.array([[1.0]], dtype=complex)
    for q in range(n - 1, -1, -1):
        mat = np.kron(mat, ops.get(q, ID2))
    return mat


def dense_hamiltonian(p, s: float, b_x_init: float = 2.0) -> np.ndarray:
    """H(s) = s*H_problem + (1-s)*H_initial from raw problem fields."""
    n = p.n
    h = np.zeros((1 << n, 1 << n), dtype=complex)
    for b in range(n - 1):
        h += -s * p.j_zz[b] * kron_embed(n, {b: SZ, b + 1: SZ})
        h += -s * p.j_xx[b] * kron_embed(n, {b: SX, b + 1: SX})
    for i in range(n):
        h += -s * p.b_z[i] * kron_embed(n, {i: SZ})
        h += (-s * p.b_x[i] - (1.0 - s) * b_x_init) * kron_embed(n, {i: SX})
    return h


def plus_state_oracle(n: int) -> np.ndarray:
    return np.full(1 << n, 1.0 / np.sqrt(1 << n), dtype=complex)


def expm_ramp_evolution(p, total_time: float, b_x_init: float = 2.0, steps: int = 4000):
    """Time-ordered product of midpoint-sampled dense exponentials."""
    psi = plus_state_oracle(p.n)
    if total_time == 0.0:
        return psi
    h = total_time / steps
    for k in range(steps):
        s_mid = (k + 0.5) * h / total_time
        psi = expm(-1j * h * dense_hamiltonian(p, s_mid, b_x_init)) @ psi
    return psi / np.linalg.norm(psi)


def sequence_unitary(seq) -> np.ndarray:
    """Dense matrix of a gate sequence, column by column via the simulator."""
    from daqsim.gates import simulate_gates
    from daqsim.hamiltonian import basis_state

    dim = 1 << seq.n
    cols = [simulate_gates(seq, basis_state(seq.n, k)) for k in range(dim)]
    return np.column_stack(cols)


def assert_unitaries_equal_up_to_phase(u: np.ndarray, v: np.ndarray, tol: float):
    """Assert u = e^{i alpha} v for some real alpha."""
    overlap = np.trace(u.conj().T @ v)
    assert abs(overlap) > 1e-12, "unitaries are orthogonal"
    phase = overlap / abs(overlap)
    assert np.max(np.abs(u * phase - v)) < tol


def assert_states_equal_up_to_phase(a: np.ndarray, b: np.ndarray, tol: float):
    overlap = np.vdot(a, b)
    assert abs(overlap) > 1e-12, "states are orthogonal"
    phase = overlap / abs(overlap)
    assert np.max(np.abs(a * phase - b)) < tol


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    psi = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return psi / np.linalg.norm(psi)


@pytest.fixture
def rng():
    return np.random.default_rng(20260808)
