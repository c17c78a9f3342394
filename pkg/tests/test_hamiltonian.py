"""Hamiltonian engine vs independent dense oracles."""

import numpy as np
import pytest

from daqsim.hamiltonian import (
    DegenerateTargetError,
    PauliOperator,
    PauliTerm,
    apply_hamiltonian,
    basis_state,
    build_h_initial,
    build_h_problem,
    diagonalize,
    interpolated_hamiltonian,
    min_gap,
    plus_state,
    target_state,
)
from daqsim.problems import Schedule, SpinProblem, builtin_instance, generate_random_problem

from conftest import (
    SX,
    SZ,
    dense_hamiltonian,
    kron_embed,
    random_state,
)


def ferro(n, j=2.0):
    return SpinProblem(n=n, b_z=np.zeros(n), b_x=np.zeros(n),
                       j_zz=np.full(n - 1, j), j_xx=np.zeros(n - 1))


def antiferro(n, j):
    return SpinProblem(n=n, b_z=np.zeros(n), b_x=np.zeros(n),
                       j_zz=np.full(n - 1, j), j_xx=np.zeros(n - 1))


class TestBuilders:
    def test_initial_ground_state(self):
        h = build_h_initial(2, 2.0)
        spec = diagonalize(h)
        assert spec.eigenvalues[0] == pytest.approx(-4.0)
        overlap = abs(np.vdot(spec.eigenvectors[:, 0], plus_state(2))) ** 2
        assert overlap == pytest.approx(1.0, abs=1e-12)

    def test_initial_single_flip_gap(self):
        # Each flipped spin costs 2 * b_x_init.
        w = diagonalize(build_h_initial(2, 2.0), want_vectors=False).eigenvalues
        np.testing.assert_allclose(w, [-4.0, 0.0, 0.0, 4.0], atol=1e-12)

    def test_initial_expectation(self):
        h = build_h_initial(4, 2.0)
        plus = plus_state(4)
        assert np.vdot(plus, h.apply(plus)).real == pytest.approx(-8.0)

    def test_problem_ferro_ground(self):
        spec = diagonalize(build_h_problem(ferro(4, 2.0)))
        assert spec.eigenvalues[0] == pytest.approx(-6.0)
        assert spec.ground_degeneracy() == 2
        # Ground space spanned by |0000> and |1111>.
        sub = spec.eigenvectors[:, :2]
        for idx in (0, 15):
            amp = np.linalg.norm(sub.conj().T @ basis_state(4, idx))
            assert amp == pytest.approx(1.0, abs=1e-9)

    def test_problem_vs_dense_oracle(self):
        p = builtin_instance("s4-3q-stoq")
        ours = build_h_problem(p).dense()
        oracle = dense_hamiltonian(p, s=1.0, b_x_init=0.0)
        np.testing.assert_allclose(ours, oracle, atol=1e-12)

    def test_problem_ground_energy_oracle(self):
        p = builtin_instance("s4-3q-stoq")
        w = diagonalize(build_h_problem(p), want_vectors=False).eigenvalues
        oracle = np.linalg.eigvalsh(dense_hamiltonian(p, 1.0, b_x_init=0.0))
        np.testing.assert_allclose(w, oracle, atol=1e-10)

    def test_antiferro_degenerate_neel_states(self):
        spec = diagonalize(build_h_problem(antiferro(5, -1.25)))
        assert spec.ground_degeneracy() == 2
        # |01010> and |10101> with qubit i at bit i.
        neel_a = sum(1 << q for q in (1, 3))
        neel_b = sum(1 << q for q in (0, 2, 4))
        sub = spec.eigenvectors[:, :2]
        for idx in (neel_a, neel_b):
            amp = np.linalg.norm(sub.conj().T @ basis_state(5, idx))
            assert amp == pytest.approx(1.0, abs=1e-9)

    def test_zero_coefficients_omitted(self):
        p = ferro(3, 2.0)
        h = build_h_problem(p)
        assert all(t.coeff != 0.0 for t in h.terms)
        assert len(h.terms) == 2  # two bonds only


class TestInterpolation:
    def test_endpoints(self):
        p = builtin_instance("s5-3q-nonstoq")
        sched = Schedule(total_time=1.0, steps=1)
        h0 = interpolated_hamiltonian(p, sched, 0.0).dense()
        np.testing.assert_allclose(h0, build_h_initial(3, sched.b_x_init).dense(), atol=1e-14)
        h1 = interpolated_hamiltonian(p, sched, 1.0).dense()
        np.testing.assert_allclose(h1, build_h_problem(p).dense(), atol=1e-14)

    def test_midpoint_coefficients(self):
        p = ferro(2, 2.0)
        sched = Schedule(total_time=1.0, steps=1)
        h = interpolated_hamiltonian(p, sched, 0.5).dense()
        expect = -1.0 * kron_embed(2, {0: SZ, 1: SZ})
        expect += -1.0 * (kron_embed(2, {0: SX}) + kron_embed(2, {1: SX}))
        np.testing.assert_allclose(h, expect, atol=1e-14)

    def test_out_of_range_s(self):
        p = ferro(2)
        sched = Schedule(total_time=1.0, steps=1)
        with pytest.raises(ValueError):
            interpolated_hamiltonian(p, sched, 1.5)

    def test_linearity_property(self, rng):
        p = generate_random_problem(4, "non-stoquastic", 11)
        sched = Schedule(total_time=1.0, steps=1)
        hp = build_h_problem(p)
        hi = build_h_initial(4, sched.b_x_init)
        psi = random_state(4, rng)
        for s in (0.0, 0.25, 0.7, 1.0):
            lhs = interpolated_hamiltonian(p, sched, s).apply(psi)
            rhs = s * hp.apply(psi) + (1.0 - s) * hi.apply(psi)
            assert np.max(np.abs(lhs - rhs)) < 1e-12


class TestApply:
    def test_z_convention(self):
        h = PauliOperator(3, [PauliTerm(1.0, "z", (0,))])
        psi = basis_state(3, 0)
        np.testing.assert_allclose(h.apply(psi), psi)

    def test_x_bit_convention(self):
        h = PauliOperator(2, [PauliTerm(1.0, "x", (0,))])
        np.testing.assert_allclose(h.apply(basis_state(2, 0)), basis_state(2, 1))

    def test_module_level_apply(self, rng):
        h = build_h_initial(3, 2.0)
        psi = random_state(3, rng)
        np.testing.assert_allclose(apply_hamiltonian(h, psi), h.apply(psi))

    def test_quadratic_form_vs_dense(self, rng):
        p = generate_random_problem(3, "non-stoquastic", 3)
        h = build_h_problem(p)
        dense = dense_hamiltonian(p, 1.0, b_x_init=0.0)
        for _ in range(20):
            psi = random_state(3, rng)
            ours = np.vdot(psi, h.apply(psi))
            oracle = np.vdot(psi, dense @ psi)
            assert abs(ours - oracle) < 1e-12

    def test_dimension_mismatch(self):
        h = build_h_initial(3, 2.0)
        with pytest.raises(ValueError):
            h.apply(np.zeros(4, dtype=complex))


class TestDiagonalize:
    def test_initial_spectrum(self):
        w = diagonalize(build_h_initial(3, 2.0), want_vectors=False).eigenvalues
        np.testing.assert_allclose(w, [-6, -2, -2, -2, 2, 2, 2, 6], atol=1e-12)

    def test_single_bond_spectrum(self):
        w = diagonalize(build_h_problem(ferro(2, 2.0)), want_vectors=False).eigenvalues
        np.testing.assert_allclose(w, [-2, -2, 2, 2], atol=1e-12)

    def test_eigen_residuals(self):
        p = builtin_instance("s4-3q-stoq")
        h = build_h_problem(p)
        spec = diagonalize(h)
        dense = h.dense()
        norm = np.linalg.norm(dense, 2)
        for k in range(len(spec.eigenvalues)):
            v = spec.eigenvectors[:, k]
            resid = np.linalg.norm(dense @ v - spec.eigenvalues[k] * v)
            assert resid <= 1e-9 * max(norm, 1.0)


class TestTargetState:
    def test_ghz_for_ferro_chain(self):
        tgt = target_state(ferro(4, 2.0))
        ghz = (basis_state(4, 0) + basis_state(4, 15)) / np.sqrt(2)
        assert abs(np.vdot(ghz, tgt)) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_antiferro_symmetric_projection(self):
        tgt = target_state(antiferro(5, -1.25))
        neel = (basis_state(5, 0b01010) + basis_state(5, 0b10101)) / np.sqrt(2)
        assert abs(np.vdot(neel, tgt)) ** 2 == pytest.approx(1.0, abs=1e-12)

    def test_unique_ground_vs_oracle(self):
        p = builtin_instance("s4-3q-stoq")
        tgt = target_state(p)
        w, v = np.linalg.eigh(dense_hamiltonian(p, 1.0, b_x_init=0.0))
        assert w[1] - w[0] > 1e-8
        assert abs(np.vdot(v[:, 0], tgt)) ** 2 == pytest.approx(1.0, abs=1e-10)

    def test_phase_fix_largest_amplitude_real(self):
        tgt = target_state(builtin_instance("s4-3q-stoq"))
        k = np.argmax(np.abs(tgt))
        assert tgt[k].imag == pytest.approx(0.0, abs=1e-12)
        assert tgt[k].real > 0

    def test_degenerate_orthogonal_projection_raises(self):
        # Pure xx coupling with j_xx = -1: ground space of +XX is spanned by
        # the two antisymmetric combinations, both orthogonal to |+>^2.
        p = SpinProblem(n=2, b_z=[0, 0], b_x=[0, 0], j_zz=[0.0], j_xx=[-1.0])
        with pytest.raises(DegenerateTargetError):
            target_state(p)


class TestMinGap:
    def test_matches_dense_sweep_oracle(self):
        p = ferro(2, 2.0)
        sched = Schedule(total_time=1.0, steps=1)
        gamma, s_at = min_gap(p, sched, 101)
        gaps = []
        for s in np.linspace(0, 1, 101):
            w = np.linalg.eigvalsh(dense_hamiltonian(p, s))
            above = w[w - w[0] > 1e-8]
            gaps.append(above[0] - w[0])
        assert gamma == pytest.approx(min(gaps), abs=1e-9)
        assert s_at == pytest.approx(np.linspace(0, 1, 101)[int(np.argmin(gaps))])

    def test_gap_at_s0(self):
        w = np.linalg.eigvalsh(dense_hamiltonian(ferro(4, 2.0), 0.0))
        assert w[1] - w[0] == pytest.approx(4.0, abs=1e-12)

    def test_grid_refinement_consistency(self):
        p = builtin_instance("s4-3q-stoq")
        sched = Schedule(total_time=1.0, steps=1)
        coarse, _ = min_gap(p, sched, 101)
        fine, _ = min_gap(p, sched, 1001)
        # Refinement can only lower the located minimum, and by no more than
        # the coarse grid's curvature allows.
        gaps = []
        for s in np.linspace(0, 1, 101):
            w = np.linalg.eigvalsh(dense_hamiltonian(p, s))
            above = w[w - w[0] > 1e-8]
            gaps.append(above[0] - w[0])
        curvature = np.max(np.abs(np.diff(gaps, 2)))
        assert fine <= coarse + 1e-12
        assert coarse - fine <= max(curvature, 1e-6)

    def test_grid_too_small(self):
        with pytest.raises(ValueError):
            min_gap(ferro(2), Schedule(total_time=1.0, steps=1), 2)


class TestProperties:
    def test_hermiticity(self):
        for seed in range(5):
            p = generate_random_problem(4, "non-stoquastic", seed)
            h = build_h_problem(p).dense()
            assert np.max(np.abs(h - h.conj().T)) < 1e-12

    def test_spin_flip_symmetry(self, rng):
        # b_z = 0 and j_xx = 0: H commutes with the global X flip.
        n = 4
        p = SpinProblem(n=n, b_z=np.zeros(n), b_x=rng.uniform(-2, 2, n),
                        j_zz=rng.uniform(0.5, 2, n - 1), j_xx=np.zeros(n - 1))
        h = build_h_problem(p)
        flip = kron_embed(n, {q: SX for q in range(n)})
        psi = random_state(n, rng)
        comm = h.apply(flip @ psi) - flip @ h.apply(psi)
        assert np.linalg.norm(comm) < 1e-10

    def test_dense_oracle_equivalence_small_n(self, rng):
        for seed in range(4):
            p = generate_random_problem(3, "non-stoquastic", 100 + seed)
            sched = Schedule(total_time=1.0, steps=1)
            for s in (0.0, 0.3, 1.0):
                ours = interpolated_hamiltonian(p, sched, s)
                oracle = dense_hamiltonian(p, s, sched.b_x_init)
                np.testing.assert_allclose(ours.dense(), oracle, atol=1e-10)
                psi = random_state(3, rng)
                np.testing.assert_allclose(ours.apply(psi), oracle @ psi, atol=1e-10)
