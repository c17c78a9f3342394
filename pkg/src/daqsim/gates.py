"""Compilation of Trotter steps into RX/RY/RZ/CZPHI gate sequences.

The two-qubit primitive is a tunable conditional-phase gate CZPHI(phi) =
diag(1, 1, 1, e^{i phi}).  zz rotations compile to one CZPHI plus local z
rotations; in hardware-constrained mode the conditional phase must satisfy
phase_min <= |phi| <= phase_max (after mod-2pi reduction), and out-of-range
angles are synthesized as an echo pair: a second CZPHI conjugated by X
rotations on both qubits, which relocates its conditional phase so the pair
combines to the requested zz angle.  xx rotations are zz rotations in a
rotated basis (RY(+-pi/2) on both qubits).

Single-qubit rotation angles are canonicalized to (-pi, pi]; all equivalence
statements are modulo global phase.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .evolution import TROTTER_ORDER, schedule_terms
from .problems import Schedule, SpinProblem

GATE_KINDS = ("RX", "RY", "RZ", "CZPHI")

#: Angles smaller than this compile to nothing.
ANGLE_EPS = 1e-12


class CompileError(RuntimeError):
    """Constrained synthesis could not place the required conditional phase."""


class GateFormatError(ValueError):
    """A gate file line could not be parsed."""


def wrap_angle(a: float) -> float:
    """Reduce an angle to the canonical interval (-pi, pi]."""
    w = math.fmod(a + math.pi, 2.0 * math.pi)
    if w <= 0.0:
        w += 2.0 * math.pi
    return w - math.pi


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        want = 2 if self.kind == "CZPHI" else 1
        if len(self.qubits) != want:
            raise ValueError(f"{self.kind} takes {want} qubit(s), got {self.qubits}")
        if self.kind == "CZPHI" and abs(self.qubits[0] - self.qubits[1]) != 1:
            raise ValueError("CZPHI acts on adjacent qubits only")


@dataclass
class GateSequence:
    n: int
    gates: list[Gate] = field(default_factory=list)
    step_markers: list[int] = field(default_factory=list)

    def __post_init__(self):
        for g in self.gates:
            if any(q < 0 or q >= self.n for q in g.qubits):
                raise ValueError(f"gate {g} outside 0..{self.n - 1}")
        if self.step_markers != sorted(set(self.step_markers)):
            raise ValueError("step markers must be strictly increasing")


@dataclass(frozen=True)
class CompilerConfig:
    phase_min: float = 0.5
    phase_max: float = 4.5
    constrained: bool = False

    def __post_init__(self):
        if not 0.0 < self.phase_min < self.phase_max:
            raise ValueError("require 0 < phase_min < phase_max")


@dataclass(frozen=True)
class GateCountReport:
    entangling_count: int
    single_qubit_count: int
    per_step: tuple  # (label, entangling, single) per block

    @classmethod
    def from_sequence(cls, seq: GateSequence) -> "GateCountReport":
        bounds = [0] + list(seq.step_markers) + [len(seq.gates)]
        labels = ["init"] + [f"step{i}" for i in range(1, len(bounds) - 1)]
        per_step = []
        for label, lo, hi in zip(labels, bounds, bounds[1:]):
            chunk = seq.gates[lo:hi]
            ent = sum(1 for g in chunk if g.kind == "CZPHI")
            per_step.append((label, ent, len(chunk) - ent))
        ent_total = sum(e for _, e, _ in per_step)
        single_total = sum(s for _, _, s in per_step)
        return cls(ent_total, single_total, tuple(per_step))


def _append_rotation(gates: list[Gate], kind: str, qubit: int, angle: float):
    angle = wrap_angle(angle)
    if abs(angle) > ANGLE_EPS:
        gates.append(Gate(kind, (qubit,), angle))


def _split_echo_phases(target_sum: float, cfg: CompilerConfig) -> tuple[float, float]:
    """Two conditional phases, each inside the allowed window, summing to
    target_sum modulo 2pi."""
    two_pi = 2.0 * math.pi
    lo, hi = cfg.phase_min, cfg.phase_max

    def in_range(phi: float) -> bool:
        return lo - 1e-12 <= abs(phi) <= hi + 1e-12

    for k in (0, 1, -1, 2, -2):
        total = target_sum + two_pi * k
        candidates = [total / 2.0]
        for first in (lo, -lo, hi, -hi):
            candidates.append(first)
        for phi1 in candidates:
            phi2 = total - phi1
            if in_range(phi1) and in_range(phi2):
                return phi1, phi2
    raise CompileError(
        f"cannot synthesize conditional phase {target_sum:.6f} within "
        f"[{cfg.phase_min}, {cfg.phase_max}]"
    )


def _emit_zz(gates: list[Gate], q0: int, q1: int, theta: float, cfg: CompilerConfig):
    """Append gates realizing exp(-i * theta * Z x Z) on (q0, q1), up to global phase.

    The required conditional phase is -4*theta (mod 2pi); the local parts are
    RZ(2*theta) on each qubit.
    """
    chi = wrap_angle(-4.0 * theta)
    rz = 2.0 * theta
    if abs(chi) <= ANGLE_EPS:
        _append_rotation(gates, "RZ", q0, rz)
        _append_rotation(gates, "RZ", q1, rz)
        return
    if not cfg.constrained:
        gates.append(Gate("CZPHI", (q0, q1), -4.0 * theta))
        _append_rotation(gates, "RZ", q0, rz)
        _append_rotation(gates, "RZ", q1, rz)
        return
    if cfg.phase_min <= abs(chi) <= cfg.phase_max:
        gates.append(Gate("CZPHI", (q0, q1), chi))
        _append_rotation(gates, "RZ", q0, rz)
        _append_rotation(gates, "RZ", q1, rz)
        return
    phi1, phi2 = _split_echo_phases(chi, cfg)
    gates.append(Gate("CZPHI", (q0, q1), phi1))
    _append_rotation(gates, "RX", q0, math.pi)
    _append_rotation(gates, "RX", q1, math.pi)
    gates.append(Gate("CZPHI", (q0, q1), phi2))
    _append_rotation(gates, "RX", q0, math.pi)
    _append_rotation(gates, "RX", q1, math.pi)
    _append_rotation(gates, "RZ", q0, rz + phi2)
    _append_rotation(gates, "RZ", q1, rz + phi2)


def _emit_xx(gates: list[Gate], q0: int, q1: int, theta: float, cfg: CompilerConfig):
    """exp(-i * theta * X x X) = basis rotation to z, zz core, rotate back."""
    if abs(wrap_angle(-4.0 * theta)) <= ANGLE_EPS and abs(wrap_angle(2.0 * theta)) <= ANGLE_EPS:
        return
    _append_rotation(gates, "RY", q0, -math.pi / 2.0)
    _append_rotation(gates, "RY", q1, -math.pi / 2.0)
    _emit_zz(gates, q0, q1, theta, cfg)
    _append_rotation(gates, "RY", q0, math.pi / 2.0)
    _append_rotation(gates, "RY", q1, math.pi / 2.0)


def compile_zz(theta: float, cfg: CompilerConfig | None = None) -> GateSequence:
    """Two-qubit sequence equal to exp(-i theta Z x Z) up to global phase."""
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    cfg = cfg or CompilerConfig()
    gates: list[Gate] = []
    _emit_zz(gates, 0, 1, theta, cfg)
    return GateSequence(n=2, gates=gates)


def compile_xx(theta: float, cfg: CompilerConfig | None = None) -> GateSequence:
    """Two-qubit sequence equal to exp(-i theta X x X) up to global phase."""
    if not np.isfinite(theta):
        raise ValueError("theta must be finite")
    cfg = cfg or CompilerConfig()
    gates: list[Gate] = []
    _emit_xx(gates, 0, 1, theta, cfg)
    return GateSequence(n=2, gates=gates)


def compile_step(
    p: SpinProblem,
    sched: Schedule,
    m: int,
    cfg: CompilerConfig | None = None,
    term_order=TROTTER_ORDER,
) -> GateSequence:
    """Gate sequence for Trotter step m, mirroring the digital evolution's term order."""
    cfg = cfg or CompilerConfig()
    s_eff = sched.effective_s(m)
    dt = sched.dt
    gates: list[Gate] = []
    for t in schedule_terms(p, sched, term_order):
        angle = dt * t.coeff(s_eff)
        if t.axes == "zz":
            _emit_zz(gates, t.sites[0], t.sites[1], angle, cfg)
        elif t.axes == "xx":
            _emit_xx(gates, t.sites[0], t.sites[1], angle, cfg)
        elif t.axes == "z":
            _append_rotation(gates, "RZ", t.sites[0], 2.0 * angle)
        else:
            _append_rotation(gates, "RX", t.sites[0], 2.0 * angle)
    return GateSequence(n=p.n, gates=gates)


def compile_schedule(
    p: SpinProblem,
    sched: Schedule,
    cfg: CompilerConfig | None = None,
    term_order=TROTTER_ORDER,
) -> tuple[GateSequence, GateCountReport]:
    """Full algorithm: |+>^n preparation (RY(pi/2) per qubit) plus all M steps."""
    cfg = cfg or CompilerConfig()
    gates = [Gate("RY", (q,), math.pi / 2.0) for q in range(p.n)]
    markers = []
    for m in range(1, sched.steps + 1):
        markers.append(len(gates))
        gates.extend(compile_step(p, sched, m, cfg, term_order).gates)
    seq = GateSequence(n=p.n, gates=gates, step_markers=markers)
    return seq, GateCountReport.from_sequence(seq)


def simulate_gates(seq: GateSequence, initial: np.ndarray | None = None) -> np.ndarray:
    """Apply a gate sequence to a state (default |0...0>) by exact updates."""
    dim = 1 << seq.n
    if initial is None:
        psi = np.zeros(dim, dtype=complex)
        psi[0] = 1.0
    else:
        if initial.shape != (dim,):
            raise ValueError(f"initial state has shape {initial.shape}, expected ({dim},)")
        psi = initial.astype(complex, copy=True)
    idx = np.arange(dim)
    for g in seq.gates:
        if g.kind == "CZPHI":
            both = ((idx >> g.qubits[0]) & 1) & ((idx >> g.qubits[1]) & 1)
            phase = np.where(both == 1, np.exp(1j * g.angle), 1.0)
            psi = psi * phase
            continue
        q = g.qubits[0]
        half = 0.5 * g.angle
        bit = (idx >> q) & 1
        if g.kind == "RZ":
            psi = psi * np.exp(-1j * half * (1.0 - 2.0 * bit))
            continue
        perm = idx ^ (1 << q)
        if g.kind == "RX":
            psi = np.cos(half) * psi - 1j * np.sin(half) * psi[perm]
        else:  # RY
            sign = 2.0 * bit - 1.0
            psi = np.cos(half) * psi + np.sin(half) * sign * psi[perm]
    return psi


def serialize_sequence(seq: GateSequence) -> str:
    """Gate file: '#' comments, STEP markers, one gate per line, full-precision angles."""
    lines = [f"# qubits {seq.n}"]
    marker_at = {pos: i + 1 for i, pos in enumerate(seq.step_markers)}
    for pos, g in enumerate(seq.gates):
        if pos in marker_at:
            lines.append(f"STEP {marker_at[pos]}")
        qubits = " ".join(str(q) for q in g.qubits)
        lines.append(f"{g.kind} {qubits} {g.angle!r}")
    if len(seq.gates) in marker_at:
        lines.append(f"STEP {marker_at[len(seq.gates)]}")
    return "\n".join(lines) + "\n"


def parse_sequence(text: str) -> GateSequence:
    gates: list[Gate] = []
    markers: list[int] = []
    n_decl = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            fields = line[1:].split()
            if len(fields) == 2 and fields[0] == "qubits":
                n_decl = int(fields[1])
            continue
        fields = line.split()
        if fields[0] == "STEP":
            if len(fields) != 2 or not fields[1].isdigit():
                raise GateFormatError(f"line {lineno}: malformed STEP marker {line!r}")
            markers.append(len(gates))
            continue
        kind = fields[0]
        if kind not in GATE_KINDS:
            raise GateFormatError(f"line {lineno}: unknown gate {kind!r}")
        want = 2 if kind == "CZPHI" else 1
        if len(fields) != want + 2:
            raise GateFormatError(
                f"line {lineno}: {kind} expects {want} qubit(s) and an angle"
            )
        try:
            qubits = tuple(int(f) for f in fields[1:-1])
            angle = float(fields[-1])
        except ValueError:
            raise GateFormatError(f"line {lineno}: bad qubit index or angle in {line!r}") from None
        gates.append(Gate(kind, qubits, angle))
    if n_decl is None:
        n_decl = 1 + max((max(g.qubits) for g in gates), default=0)
    return GateSequence(n=n_decl, gates=gates, step_markers=markers)
