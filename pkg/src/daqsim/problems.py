"""Spin-chain problem definitions, random instance generation, and (de)serialization.

A problem is an open 1-D chain of ``n`` spins with per-site fields (``b_z``,
``b_x``) and per-bond couplings (``j_zz``, ``j_xx``).  A problem is *stoquastic*
iff every ``j_xx`` entry is exactly zero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable

import numpy as np

MIN_SITES = 2
MAX_SITES = 12

SAMPLING_MODES = ("endpoint", "midpoint", "integral")

#: Tag recorded alongside generated instance sets.  Bump whenever the draw
#: order or the generator itself changes, so stored seeds stay reproducible.
GENERATOR_VERSION = "pcg64-v1"


class ProblemFormatError(ValueError):
    """Raised when a problem document cannot be parsed or validated."""


@dataclass(frozen=True)
class Schedule:
    """Annealing schedule: linear ramp s(t) = t/T over total time T, M Trotter steps.

    ``sampling`` selects how Trotter-step coefficients sample the ramp:
    ``endpoint`` uses s_m = m/M, ``midpoint`` uses (m - 1/2)/M, and
    ``integral`` replaces each coefficient by its exact average over the
    step window.  For the linear ramp the window average coincides with the
    midpoint value; the modes are kept distinct to make the choice explicit.
    ``midpoint`` is the default: it is the mode that reproduces the bundled
    reference fidelities (see the acceptance suite).
    """

    total_time: float
    steps: int
    b_x_init: float = 2.0
    sampling: str = "midpoint"

    def __post_init__(self):
        if not self.total_time >= 0:
            raise ValueError(f"total_time must be >= 0, got {self.total_time}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.sampling not in SAMPLING_MODES:
            raise ValueError(
                f"sampling must be one of {SAMPLING_MODES}, got {self.sampling!r}"
            )

    @property
    def dt(self) -> float:
        return self.total_time / self.steps

    def effective_s(self, m: int) -> float:
        """Schedule position sampled by Trotter step m (1-based)."""
        if not 1 <= m <= self.steps:
            raise ValueError(f"step index {m} outside 1..{self.steps}")
        if self.sampling == "endpoint":
            return m / self.steps
        # Midpoint of the step window; for a linear ramp this equals the
        # exact integral average required by the "integral" mode.
        return (m - 0.5) / self.steps


def _as_float_array(values, name: str) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ProblemFormatError(f"{name} must be a flat array")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class SpinProblem:
    """Couplings and fields of one spin-chain problem instance."""

    n: int
    b_z: np.ndarray
    b_x: np.ndarray
    j_zz: np.ndarray
    j_xx: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "b_z", _as_float_array(self.b_z, "b_z"))
        object.__setattr__(self, "b_x", _as_float_array(self.b_x, "b_x"))
        object.__setattr__(self, "j_zz", _as_float_array(self.j_zz, "j_zz"))
        object.__setattr__(self, "j_xx", _as_float_array(self.j_xx, "j_xx"))
        problems = validate_problem(self)
        if problems:
            raise ProblemFormatError("; ".join(problems))

    @property
    def stoquastic(self) -> bool:
        return bool(np.all(self.j_xx == 0.0))

    @property
    def kind(self) -> str:
        return "stoquastic" if self.stoquastic else "non-stoquastic"

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpinProblem):
            return NotImplemented
        return self.n == other.n and all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("b_z", "b_x", "j_zz", "j_xx")
        )


def _validate_arrays(n, b_z, b_x, j_zz, j_xx) -> list[str]:
    violations = []
    if n < MIN_SITES:
        violations.append(f"site count below {MIN_SITES} (n={n})")
    if n > MAX_SITES:
        violations.append(f"site count above {MAX_SITES} (n={n})")
    for name, arr, want in (
        ("b_z", b_z, n),
        ("b_x", b_x, n),
        ("j_zz", j_zz, n - 1),
        ("j_xx", j_xx, n - 1),
    ):
        if len(arr) != want:
            kind = "bond" if name.startswith("j") else "site"
            violations.append(
                f"{kind} array length: {name} has {len(arr)} entries, expected {want}"
            )
        if not np.all(np.isfinite(arr)):
            violations.append(f"non-finite entry in {name}")
    return violations


def validate_problem(p) -> list[str]:
    """Return a list of violations (empty list means the problem is well formed)."""
    return _validate_arrays(p.n, p.b_z, p.b_x, p.j_zz, p.j_xx)


def generate_random_problem(n: int, kind: str, seed: int) -> SpinProblem:
    """Draw a random instance: fields uniform on [-2, 2], couplings with
    magnitude uniform on [0.5, 2] and an independent fair sign.

    ``kind`` is "stoquastic" (j_xx = 0) or "non-stoquastic" (j_xx drawn like
    j_zz).  Deterministic for fixed (n, kind, seed): the generator is numpy's
    PCG64 seeded with ``seed`` and the draw order is fixed as
    b_z, b_x, |j_zz|, sign(j_zz), then |j_xx|, sign(j_xx).
    """
    if not MIN_SITES <= n <= MAX_SITES:
        raise ValueError(f"n must be in [{MIN_SITES}, {MAX_SITES}], got {n}")
    if kind not in ("stoquastic", "non-stoquastic"):
        raise ValueError(f"kind must be 'stoquastic' or 'non-stoquastic', got {kind!r}")
    rng = np.random.Generator(np.random.PCG64(seed))
    b_z = rng.uniform(-2.0, 2.0, n)
    b_x = rng.uniform(-2.0, 2.0, n)

    def draw_couplings():
        magnitude = rng.uniform(0.5, 2.0, n - 1)
        sign = rng.integers(0, 2, n - 1) * 2 - 1
        return magnitude * sign

    j_zz = draw_couplings()
    j_xx = draw_couplings() if kind == "non-stoquastic" else np.zeros(n - 1)
    return SpinProblem(n=n, b_z=b_z, b_x=b_x, j_zz=j_zz, j_xx=j_xx)


@dataclass(frozen=True)
class ProblemInstanceSet:
    """A reproducible batch of random instances with their seeds."""

    instances: tuple
    generator_version: str = GENERATOR_VERSION

    @classmethod
    def generate(cls, n: int, kind: str, seeds: Iterable[int]) -> "ProblemInstanceSet":
        seeds = list(seeds)
        if len(set(seeds)) != len(seeds):
            raise ValueError("seeds must be distinct")
        instances = tuple(
            (generate_random_problem(n, kind, s), s, kind) for s in seeds
        )
        return cls(instances=instances)


# Bundled reference instances.  Values are verbatim from the published
# parameter tables for these chains; names are stable identifiers used by the
# CLI and the acceptance suite.
_FIXTURES = {
    "s3-9q-stoq": dict(
        b_x=(1.437, 0.749, 0.912, 1.153, 1.523, 1.670, 1.621, 1.930, -0.899),
        b_z=(-0.559, -1.078, -1.822, -0.407, 0.652, 1.675, 1.362, 0.302, -0.187),
        j_zz=(-0.781, -1.672, 0.520, 0.635, 0.812, -0.816, 1.162, 0.639),
        j_xx=None,
    ),
    "s4-3q-stoq": dict(
        b_x=(-0.159, 1.22, -1.93),
        b_z=(-1.29, -1.45, -0.772),
        j_zz=(-1.09, 1.16),
        j_xx=None,
    ),
    "s5-3q-nonstoq": dict(
        b_x=(-1.18, -1.71, 1.02),
        b_z=(-0.875, 0.781, -0.428),
        j_zz=(-0.757, 1.32),
        j_xx=(-0.841, 1.02),
    ),
    "s6-6q-stoq": dict(
        b_x=(0.155, -1.238, 1.789, 0.899, -1.501, -1.309),
        b_z=(0.468, -1.577, -1.183, -0.665, -0.928, -1.265),
        j_zz=(1.476, -0.740, -0.765, -0.535, -0.966),
        j_xx=None,
    ),
    "s7-6q-nonstoq": dict(
        b_x=(-0.255, 0.606, -1.735, 0.732, 1.586, -0.305),
        b_z=(-1.672, -1.282, -1.532, -1.433, 1.282, -1.765),
        j_zz=(-1.491, 1.349, 0.628, 1.287, 1.919),
        j_xx=(0.577, -1.954, -1.616, -1.517, -1.896),
    ),
    "s8-7q-nonstoq": dict(
        b_x=(-1.335, 0.760, -1.261, -0.221, -0.892, -1.321, 0.133),
        b_z=(-1.026, -1.896, 0.116, -0.619, -0.493, -1.316, -1.872),
        j_zz=(-1.455, -0.588, -0.582, 1.223, -0.635, 0.614),
        j_xx=(1.891, 1.517, 1.568, 0.748, 1.419, -0.839),
    ),
}

#: Reference schedule (T, M) each bundled instance was originally run with.
FIXTURE_SCHEDULES = {
    "s3-9q-stoq": (1.0, 2),
    "s4-3q-stoq": (3.0, 5),
    "s5-3q-nonstoq": (3.0, 5),
    "s6-6q-stoq": (3.0, 5),
    "s7-6q-nonstoq": (3.0, 5),
    "s8-7q-nonstoq": (1.0, 2),
}

FIXTURE_NAMES = tuple(sorted(_FIXTURES))


def builtin_instance(name: str) -> SpinProblem:
    """Return one of the bundled reference instances by name."""
    try:
        spec = _FIXTURES[name]
    except KeyError:
        raise KeyError(
            f"unknown instance {name!r}; valid names: {', '.join(FIXTURE_NAMES)}"
        ) from None
    n = len(spec["b_x"])
    j_xx = spec["j_xx"] if spec["j_xx"] is not None else np.zeros(n - 1)
    return SpinProblem(n=n, b_z=spec["b_z"], b_x=spec["b_x"], j_zz=spec["j_zz"], j_xx=j_xx)


def fixture_schedule(name: str, **overrides) -> Schedule:
    """Reference schedule for a bundled instance, with optional overrides."""
    if name not in FIXTURE_SCHEDULES:
        raise KeyError(
            f"unknown instance {name!r}; valid names: {', '.join(FIXTURE_NAMES)}"
        )
    total_time, steps = FIXTURE_SCHEDULES[name]
    params = dict(total_time=total_time, steps=steps)
    params.update(overrides)
    return Schedule(**params)


def save_problem(p: SpinProblem, schedule: Schedule | None = None) -> str:
    """Serialize a problem (and optional schedule) to a JSON document.

    Floats are written at full precision so load(save(p)) == p exactly.
    """
    doc = {
        "n": p.n,
        "b_z": list(p.b_z),
        "b_x": list(p.b_x),
        "j_zz": list(p.j_zz),
        "j_xx": list(p.j_xx),
    }
    if schedule is not None:
        doc["schedule"] = {
            "T": schedule.total_time,
            "M": schedule.steps,
            "b_x_init": schedule.b_x_init,
            "sampling": schedule.sampling,
        }
    return json.dumps(doc, indent=2)


def load_problem(text: str) -> tuple[SpinProblem, Schedule | None]:
    """Parse a problem document; returns (problem, schedule-or-None)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"not valid JSON: line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ProblemFormatError("top-level document must be an object")
    for key in ("n", "b_z", "b_x", "j_zz", "j_xx"):
        if key not in doc:
            raise ProblemFormatError(f"missing required field {key!r}")
    try:
        n = int(doc["n"])
    except (TypeError, ValueError):
        raise ProblemFormatError("field 'n' must be an integer") from None
    violations = _validate_arrays(
        n,
        np.asarray(doc["b_z"], dtype=float),
        np.asarray(doc["b_x"], dtype=float),
        np.asarray(doc["j_zz"], dtype=float),
        np.asarray(doc["j_xx"], dtype=float),
    )
    if violations:
        raise ProblemFormatError("; ".join(violations))
    problem = SpinProblem(
        n=n, b_z=doc["b_z"], b_x=doc["b_x"], j_zz=doc["j_zz"], j_xx=doc["j_xx"]
    )
    schedule = None
    if "schedule" in doc:
        sd = doc["schedule"]
        for key in ("T", "M"):
            if key not in sd:
                raise ProblemFormatError(f"schedule block missing field {key!r}")
        try:
            schedule = Schedule(
                total_time=float(sd["T"]),
                steps=int(sd["M"]),
                b_x_init=float(sd.get("b_x_init", 2.0)),
                sampling=str(sd.get("sampling", "midpoint")),
            )
        except ValueError as exc:
            raise ProblemFormatError(f"bad schedule: {exc}") from exc
    return problem, schedule
