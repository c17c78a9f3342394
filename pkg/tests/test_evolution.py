"""Continuous and digital evolutions vs matrix-exponential oracles."""

import numpy as np
import pytest
from scipy.linalg import expm

from daqsim.evolution import (
    ConvergenceError,
    IntegratorConfig,
    evolve_continuous,
    evolve_digital,
    schedule_terms,
    step_unitary,
)
from daqsim.hamiltonian import plus_state
from daqsim.metrics import fidelity_pure, state_probabilities
from daqsim.problems import Schedule, SpinProblem, builtin_instance, generate_random_problem

from conftest import dense_hamiltonian, expm_ramp_evolution


def ferro(n, j=2.0):
    return SpinProblem(n=n, b_z=np.zeros(n), b_x=np.zeros(n),
                       j_zz=np.full(n - 1, j), j_xx=np.zeros(n - 1))


class TestContinuous:
    def test_zero_time_is_identity(self):
        p = ferro(3)
        res = evolve_continuous(p, Schedule(total_time=0.0, steps=1))
        np.testing.assert_allclose(res.final_state, plus_state(3), atol=1e-14)

    def test_constant_hamiltonian_vs_expm(self):
        # Uniform x field everywhere makes H(s) time independent, so the
        # integrator must match a single dense exponential.
        n = 3
        b = 1.3
        p = SpinProblem(n=n, b_z=np.zeros(n), b_x=np.full(n, b),
                        j_zz=np.zeros(n - 1), j_xx=np.zeros(n - 1))
        sched = Schedule(total_time=2.0, steps=1, b_x_init=b)
        res = evolve_continuous(p, sched)
        h = dense_hamiltonian(p, 1.0, b_x_init=b)
        oracle = expm(-1j * sched.total_time * h) @ plus_state(n)
        assert np.max(np.abs(res.final_state - oracle)) < 1e-7

    def test_ramp_vs_time_ordered_expm_oracle(self):
        p = builtin_instance("s4-3q-stoq")
        sched = Schedule(total_time=1.0, steps=1)
        res = evolve_continuous(p, sched)
        oracle = expm_ramp_evolution(p, 1.0, sched.b_x_init, steps=6000)
        assert fidelity_pure(res.final_state, oracle) > 1 - 1e-10

    def test_final_norm(self):
        p = generate_random_problem(5, "non-stoquastic", 2)
        res = evolve_continuous(p, Schedule(total_time=2.0, steps=1))
        assert abs(np.linalg.norm(res.final_state) - 1.0) < 1e-12

    def test_checkpoints(self):
        p = ferro(3)
        res = evolve_continuous(
            p, Schedule(total_time=1.0, steps=1), checkpoints=[0.0, 0.5, 1.0]
        )
        ss = [s for s, _ in res.trajectory]
        assert ss == [0.0, 0.5, 1.0]
        np.testing.assert_allclose(res.trajectory[0][1], plus_state(3), atol=1e-14)
        np.testing.assert_allclose(
            res.trajectory[-1][1], res.final_state, atol=1e-9
        )
        for _, st in res.trajectory:
            assert abs(np.linalg.norm(st) - 1.0) < 1e-8

    def test_convergence_failure_raises(self):
        p = ferro(4)
        cfg = IntegratorConfig(base_step=1.0, max_step_halvings=0)
        with pytest.raises(ConvergenceError):
            evolve_continuous(p, Schedule(total_time=3.0, steps=1), cfg)


class TestDigital:
    def test_zero_time_is_identity(self):
        p = ferro(4)
        res = evolve_digital(p, Schedule(total_time=1e-9, steps=1))
        assert np.max(np.abs(res.final_state - plus_state(4))) < 1e-8

    def test_norm_preserved_exactly(self):
        p = generate_random_problem(5, "non-stoquastic", 9)
        res = evolve_digital(p, Schedule(total_time=3.0, steps=5))
        assert abs(np.linalg.norm(res.final_state) - 1.0) < 1e-12

    def test_matches_step_unitary_product(self):
        p = builtin_instance("s5-3q-nonstoq")
        sched = Schedule(total_time=3.0, steps=4)
        psi = plus_state(3)
        for m in range(1, sched.steps + 1):
            psi = step_unitary(p, sched, m) @ psi
        res = evolve_digital(p, sched)
        assert fidelity_pure(psi, res.final_state) > 1 - 1e-12

    def test_record_steps(self):
        p = ferro(4)
        sched = Schedule(total_time=3.0, steps=5)
        res = evolve_digital(p, sched, record_steps=True)
        assert [s for s, _ in res.trajectory] == [m / 5 for m in range(6)]
        np.testing.assert_allclose(res.trajectory[-1][1], res.final_state, atol=1e-14)

    def test_complement_symmetry(self, rng):
        # b_z = 0, j_xx = 0: outcome distribution is invariant under global
        # bit complement, in both evolution modes.
        n = 4
        p = SpinProblem(n=n, b_z=np.zeros(n), b_x=rng.uniform(-2, 2, n),
                        j_zz=rng.uniform(0.5, 2, n - 1), j_xx=np.zeros(n - 1))
        sched = Schedule(total_time=2.0, steps=4)
        for mode in (evolve_digital, evolve_continuous):
            probs = state_probabilities(mode(p, sched).final_state)
            flipped = probs[::-1]  # complement maps index k to 2^n-1-k
            assert np.max(np.abs(probs - flipped)) < 1e-10

    def test_term_order_groups(self):
        p = builtin_instance("s7-6q-nonstoq")
        sched = Schedule(total_time=1.0, steps=1)
        axes = [t.axes for t in schedule_terms(p, sched)]
        boundaries = [axes.index(a) for a in ("zz", "z", "xx", "x")]
        assert boundaries == sorted(boundaries)


class TestStepUnitary:
    def test_unitarity(self):
        p = builtin_instance("s5-3q-nonstoq")
        sched = Schedule(total_time=3.0, steps=5)
        u = step_unitary(p, sched, 3)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(8), atol=1e-10)

    def test_single_bond_vs_oracle(self):
        p = ferro(2, 2.0)
        sched = Schedule(total_time=1.0, steps=2, sampling="endpoint")
        m = 1
        s = sched.effective_s(m)
        dt = sched.dt
        from conftest import SX, SZ, kron_embed

        zz = kron_embed(2, {0: SZ, 1: SZ})
        x0 = kron_embed(2, {0: SX})
        x1 = kron_embed(2, {1: SX})
        oracle = (
            expm(-1j * dt * (-(1 - s) * 2.0) * x1)
            @ expm(-1j * dt * (-(1 - s) * 2.0) * x0)
            @ expm(-1j * dt * (-s * 2.0) * zz)
        )
        np.testing.assert_allclose(step_unitary(p, sched, m), oracle, atol=1e-12)

    def test_last_endpoint_step_has_no_x_factor(self):
        # At s_M = 1 with endpoint sampling and b_x = 0, only diagonal terms
        # survive, so the step unitary is diagonal.
        p = builtin_instance("s4-3q-stoq")
        p = SpinProblem(n=3, b_z=p.b_z, b_x=np.zeros(3), j_zz=p.j_zz, j_xx=p.j_xx)
        sched = Schedule(total_time=1.0, steps=2, sampling="endpoint")
        u = step_unitary(p, sched, 2)
        off_diag = u - np.diag(np.diag(u))
        assert np.max(np.abs(off_diag)) < 1e-12

    def test_rejects_large_n(self):
        p = ferro(5)
        with pytest.raises(ValueError):
            step_unitary(p, Schedule(total_time=1.0, steps=1), 1)


class TestTrotterConvergence:
    @pytest.mark.parametrize("name", ["s4-3q-stoq", "s6-6q-stoq"])
    def test_infidelity_decreases_with_doubling(self, name):
        p = builtin_instance(name)
        sched0 = Schedule(total_time=3.0, steps=1)
        cont = evolve_continuous(p, sched0).final_state
        infid = {}
        for M in (4, 8, 16, 32, 64):
            dig = evolve_digital(p, Schedule(total_time=3.0, steps=M)).final_state
            infid[M] = 1.0 - fidelity_pure(dig, cont)
        for M in (4, 8, 16, 32):
            assert infid[2 * M] < infid[M]
        # Report the fitted first-order bound constant C with infid <= C / M.
        c_fit = max(m * v for m, v in infid.items())
        print(f"{name}: infidelity*M max (bound constant C) = {c_fit:.4f}")

    def test_sampling_mode_comparison_logged(self):
        # Window-averaged coefficients vs endpoint sampling; logged per
        # instance, not asserted (tightness is instance dependent).
        for name in ("s4-3q-stoq", "s6-6q-stoq"):
            p = builtin_instance(name)
            cont = evolve_continuous(p, Schedule(total_time=3.0, steps=1)).final_state
            for M in (8, 16):
                inf = {}
                for mode in ("integral", "endpoint"):
                    dig = evolve_digital(
                        p, Schedule(total_time=3.0, steps=M, sampling=mode)
                    ).final_state
                    inf[mode] = 1.0 - fidelity_pure(dig, cont)
                flag = "ok" if inf["integral"] <= inf["endpoint"] else "VIOLATED"
                print(
                    f"{name} M={M}: integral {inf['integral']:.3e} "
                    f"vs endpoint {inf['endpoint']:.3e} [{flag}]"
                )
