"""Ideal continuous and ideal digital (Trotterized) annealing evolutions.

Both evolutions start from |+>^n and ramp H(s) = s*H_problem + (1-s)*H_initial
linearly over total time T.  The digital evolution applies, for each of M
steps, the exact exponential of every Hamiltonian term, in a fixed order:
zz bonds, local z fields, xx bonds, local x fields (diagonal terms first).
That order reproduces the bundled reference fidelities and is configurable
for sensitivity studies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hamiltonian import PauliOperator, PauliTerm, plus_state
from .problems import Schedule, SpinProblem

#: Group order in which term exponentials act on the state within one step.
TROTTER_ORDER = ("zz", "z", "xx", "x")

#: Two integrator runs at step h and h/2 must agree to this 2-norm distance.
STABILITY_TOL = 1e-7


class ConvergenceError(RuntimeError):
    """Step-halving budget exhausted without meeting the convergence criteria."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step RK4 settings; ``base_step=None`` picks a coefficient-scaled start."""

    base_step: float | None = None
    norm_tolerance: float = 1e-8
    max_step_halvings: int = 16

    def __post_init__(self):
        if self.base_step is not None and not self.base_step > 0:
            raise ValueError("base_step must be positive")
        if not self.norm_tolerance > 0:
            raise ValueError("norm_tolerance must be positive")


@dataclass
class EvolutionResult:
    final_state: np.ndarray
    mode: str  # "continuous" | "digital" | "gate"
    total_time: float
    steps: int | None
    sampling: str
    trajectory: list[tuple[float, np.ndarray]] | None = None


@dataclass(frozen=True)
class ScheduleTerm:
    """One Hamiltonian term with its ramp endpoints: a(s) = (1-s)*c_init + s*c_problem."""

    axes: str
    sites: tuple[int, ...]
    coeff_initial: float
    coeff_problem: float

    def coeff(self, s: float) -> float:
        return (1.0 - s) * self.coeff_initial + s * self.coeff_problem


def schedule_terms(p: SpinProblem, sched: Schedule, term_order=TROTTER_ORDER) -> list[ScheduleTerm]:
    """Structural term list of the annealed Hamiltonian, in application order.

    Used by both the digital evolution and the gate compiler so they stay in
    exact correspondence.  Terms identically zero along the whole ramp are
    dropped.
    """
    groups = {
        "zz": [
            ScheduleTerm("zz", (b, b + 1), 0.0, -p.j_zz[b])
            for b in range(p.n - 1)
            if p.j_zz[b] != 0.0
        ],
        "xx": [
            ScheduleTerm("xx", (b, b + 1), 0.0, -p.j_xx[b])
            for b in range(p.n - 1)
            if p.j_xx[b] != 0.0
        ],
        "z": [
            ScheduleTerm("z", (i,), 0.0, -p.b_z[i]) for i in range(p.n) if p.b_z[i] != 0.0
        ],
        "x": [
            ScheduleTerm("x", (i,), -sched.b_x_init, -p.b_x[i])
            for i in range(p.n)
            if sched.b_x_init != 0.0 or p.b_x[i] != 0.0
        ],
    }
    out: list[ScheduleTerm] = []
    for g in term_order:
        out.extend(groups[g])
    return out


def _zsign(n: int, sites) -> np.ndarray:
    idx = np.arange(1 << n)
    sign = np.ones(1 << n)
    for q in sites:
        sign *= 1.0 - 2.0 * ((idx >> q) & 1)
    return sign


def apply_term_exponential(psi: np.ndarray, n: int, axes: str, sites, angle: float) -> np.ndarray:
    """Apply exp(-i * angle * P) for a single Pauli string P, exactly."""
    if axes in ("z", "zz"):
        return psi * np.exp(-1j * angle * _zsign(n, sites))
    mask = 0
    for q in sites:
        mask |= 1 << q
    perm = np.arange(1 << n) ^ mask
    return np.cos(angle) * psi - 1j * np.sin(angle) * psi[perm]


def evolve_digital(
    p: SpinProblem,
    sched: Schedule,
    record_steps: bool = False,
    term_order=TROTTER_ORDER,
) -> EvolutionResult:
    """Trotterized evolution: M steps of exact per-term exponentials.

    Step m uses coefficients sampled at the schedule position selected by
    ``sched.sampling``; every exponential is an exact 1- or 2-qubit rotation,
    so the norm is preserved to machine precision.
    """
    terms = schedule_terms(p, sched, term_order)
    dt = sched.dt
    psi = plus_state(p.n)
    trajectory = [(0.0, psi.copy())] if record_steps else None
    for m in range(1, sched.steps + 1):
        s_eff = sched.effective_s(m)
        for t in terms:
            angle = dt * t.coeff(s_eff)
            if angle != 0.0:
                psi = apply_term_exponential(psi, p.n, t.axes, t.sites, angle)
        if record_steps:
            trajectory.append((m / sched.steps, psi.copy()))
    return EvolutionResult(
        final_state=psi,
        mode="digital",
        total_time=sched.total_time,
        steps=sched.steps,
        sampling=sched.sampling,
        trajectory=trajectory,
    )


class _RampAction:
    """Fast matrix-free action of H(s): one merged diagonal plus bit-flip terms."""

    def __init__(self, p: SpinProblem, sched: Schedule):
        self.n = p.n
        dim = 1 << p.n
        idx = np.arange(dim)
        diag_i = np.zeros(dim)
        diag_p = np.zeros(dim)
        flips = []  # (coeff_initial, coeff_problem, permutation)
        for t in schedule_terms(p, sched):
            if t.axes in ("z", "zz"):
                sign = _zsign(p.n, t.sites)
                diag_i += t.coeff_initial * sign
                diag_p += t.coeff_problem * sign
            else:
                mask = 0
                for q in t.sites:
                    mask |= 1 << q
                flips.append((t.coeff_initial, t.coeff_problem, idx ^ mask))
        self.diag_i, self.diag_p, self.flips = diag_i, diag_p, flips

    def coeff_scale(self) -> float:
        scale = float(np.max(np.abs(self.diag_i)) + np.max(np.abs(self.diag_p)))
        for ci, cp, _ in self.flips:
            scale += abs(ci) + abs(cp)
        return max(scale, 1e-12)

    def schrodinger_rhs(self, s: float, psi: np.ndarray) -> np.ndarray:
        """-i H(s) psi."""
        out = ((1.0 - s) * self.diag_i + s * self.diag_p) * psi
        for ci, cp, perm in self.flips:
            c = (1.0 - s) * ci + s * cp
            if c != 0.0:
                out += c * psi[perm]
        return -1j * out


def evolve_continuous(
    p: SpinProblem,
    sched: Schedule,
    cfg: IntegratorConfig | None = None,
    checkpoints=None,
) -> EvolutionResult:
    """Schroedinger evolution under the linear ramp, via fixed-step RK4.

    The step is halved until the final norm deviates from 1 by less than
    ``cfg.norm_tolerance`` and the state is stable to ``STABILITY_TOL``
    under one further halving; the state is renormalized once at the end.
    ``checkpoints`` is an optional list of s values at which intermediate
    states are recorded (snapshotted at the nearest step boundary at or
    after the requested s).
    """
    cfg = cfg or IntegratorConfig()
    T = sched.total_time
    if T == 0.0:
        psi0 = plus_state(p.n)
        traj = [(s, psi0.copy()) for s in checkpoints] if checkpoints else None
        return EvolutionResult(psi0, "continuous", 0.0, None, sched.sampling, traj)

    action = _RampAction(p, sched)
    rhs = action.schrodinger_rhs

    def run(num_steps: int, record=None):
        h = T / num_steps
        psi = plus_state(p.n)
        targets = sorted(record) if record is not None else []
        recorded = []
        ti = 0
        if targets and targets[0] <= 0.0:
            while ti < len(targets) and targets[ti] <= 0.0:
                recorded.append((targets[ti], psi.copy()))
                ti += 1
        for k in range(num_steps):
            t = k * h
            k1 = rhs(t / T, psi)
            half = psi + (0.5 * h) * k1
            k2 = rhs((t + 0.5 * h) / T, half)
            k3 = rhs((t + 0.5 * h) / T, psi + (0.5 * h) * k2)
            k4 = rhs((t + h) / T, psi + h * k3)
            psi = psi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            s_now = (k + 1) / num_steps
            while ti < len(targets) and targets[ti] <= s_now + 1e-12:
                recorded.append((targets[ti], psi.copy()))
                ti += 1
        return psi, recorded

    if cfg.base_step is not None:
        steps = max(1, int(np.ceil(T / cfg.base_step)))
    else:
        steps = max(32, int(np.ceil(2.0 * T * action.coeff_scale())))

    psi_prev, _ = run(steps)
    converged = False
    for _ in range(cfg.max_step_halvings):
        steps *= 2
        psi_fine, _ = run(steps)
        norm = np.linalg.norm(psi_fine)
        if (
            np.linalg.norm(psi_fine - psi_prev) < STABILITY_TOL
            and abs(norm - 1.0) < cfg.norm_tolerance
        ):
            converged = True
            break
        psi_prev = psi_fine
    if not converged:
        raise ConvergenceError(
            f"integrator did not converge after {cfg.max_step_halvings} halvings "
            f"(last step count {steps})"
        )

    trajectory = None
    if checkpoints:
        _, trajectory = run(steps, record=list(checkpoints))
        trajectory = [(s, st / np.linalg.norm(st)) for s, st in trajectory]
    return EvolutionResult(
        final_state=psi_fine / np.linalg.norm(psi_fine),
        mode="continuous",
        total_time=T,
        steps=None,
        sampling=sched.sampling,
        trajectory=trajectory,
    )


def step_unitary(p: SpinProblem, sched: Schedule, m: int) -> np.ndarray:
    """Dense unitary of Trotter step m (n <= 4 only); compiler-verification oracle.

    Built from dense matrix exponentials of the individual term matrices, a
    deliberately independent route from the vectorized rotations used in
    ``evolve_digital``.
    """
    if p.n > 4:
        raise ValueError("step_unitary is limited to n <= 4")
    from scipy.linalg import expm

    s_eff = sched.effective_s(m)
    dt = sched.dt
    dim = 1 << p.n
    u = np.eye(dim, dtype=complex)
    for t in schedule_terms(p, sched):
        coeff = t.coeff(s_eff)
        if coeff == 0.0:
            continue
        term = PauliOperator(p.n, [PauliTerm(1.0, t.axes, t.sites)]).dense()
        u = expm(-1j * dt * coeff * term) @ u
    return u
