"""Command-line harness: single evolutions, experiment presets, gate
compilation, gap sweeps, and resource estimates, all emitting CSV/JSON.

Exit codes: 0 success, 2 input error, 3 numerical-convergence failure.
The environment variable DAQSIM_THREADS caps batch worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .evolution import ConvergenceError, evolve_continuous, evolve_digital
from .gates import (
    CompilerConfig,
    compile_schedule,
    serialize_sequence,
    simulate_gates,
)
from .hamiltonian import (
    diagonalize,
    gap_above_ground,
    interpolated_hamiltonian,
    min_gap,
    target_state,
)
from .metrics import (
    estimate_resources,
    fidelity_pure,
    kink_profile,
    magnetization,
    parity_correlation,
    residual_energy,
    state_probabilities,
    success_measure,
    uniform_baseline,
)
from .problems import (
    FIXTURE_NAMES,
    ProblemFormatError,
    Schedule,
    SpinProblem,
    builtin_instance,
    fixture_schedule,
    generate_random_problem,
    load_problem,
)

PRESET_NAMES = (
    "ghz-fig2",
    "scaling-fig3",
    "degeneracy-fig4",
    "random-fig5",
    "instances-tableS10",
)

#: (n, kind, instance count) cells of the random-ensemble preset.
RANDOM_ENSEMBLE_CELLS = tuple(
    [(3, kind, 100) for kind in ("stoquastic", "non-stoquastic")]
    + [(n, kind, 250) for n in (6, 7, 8, 9) for kind in ("stoquastic", "non-stoquastic")]
)

#: Reference schedules by chain length for random problems.
RANDOM_SCHEDULES = {3: (3.0, 5), 6: (3.0, 5), 7: (1.0, 2), 8: (1.0, 2), 9: (1.0, 2)}


class InputError(Exception):
    """User-input problem; maps to exit code 2."""


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(x) for x in row) for row in rows)
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def worker_count() -> int:
    env = os.environ.get("DAQSIM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise InputError(f"DAQSIM_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def ferro_chain(n: int, j: float = 2.0) -> SpinProblem:
    return SpinProblem(
        n=n, b_z=np.zeros(n), b_x=np.zeros(n), j_zz=np.full(n - 1, j), j_xx=np.zeros(n - 1)
    )


def antiferro_chain(n: int, j: float, b_z_middle: float) -> SpinProblem:
    b_z = np.zeros(n)
    b_z[n // 2] = b_z_middle
    return SpinProblem(
        n=n, b_z=b_z, b_x=np.zeros(n), j_zz=np.full(n - 1, j), j_xx=np.zeros(n - 1)
    )


def bitstring(index: int, n: int) -> str:
    """Qubit 0 leftmost, matching the site order of the chain."""
    return "".join(str((index >> q) & 1) for q in range(n))


def _resolve_problem(args) -> tuple[SpinProblem, Schedule, str]:
    """Build (problem, schedule, instance_id) from --problem/--fixture plus overrides."""
    if getattr(args, "fixture", None):
        name = args.fixture
        if name not in FIXTURE_NAMES:
            raise InputError(
                f"unknown fixture {name!r}; valid names: {', '.join(FIXTURE_NAMES)}"
            )
        problem = builtin_instance(name)
        schedule = fixture_schedule(name)
        instance_id = name
    elif getattr(args, "problem", None):
        path = Path(args.problem)
        if not path.exists():
            raise InputError(f"problem file not found: {path}")
        try:
            problem, schedule = load_problem(path.read_text(encoding="utf-8"))
        except ProblemFormatError as exc:
            raise InputError(f"{path}: {exc}") from exc
        if schedule is None:
            schedule = Schedule(total_time=3.0, steps=5)
        instance_id = path.stem
    else:
        raise InputError("one of --problem FILE or --fixture NAME is required")

    overrides = {}
    if getattr(args, "T", None) is not None:
        overrides["total_time"] = args.T
    if getattr(args, "steps", None) is not None:
        overrides["steps"] = args.steps
    if getattr(args, "sampling", None):
        overrides["sampling"] = args.sampling
    if getattr(args, "b_x_init", None) is not None:
        overrides["b_x_init"] = args.b_x_init
    if overrides:
        schedule = Schedule(
            total_time=overrides.get("total_time", schedule.total_time),
            steps=overrides.get("steps", schedule.steps),
            b_x_init=overrides.get("b_x_init", schedule.b_x_init),
            sampling=overrides.get("sampling", schedule.sampling),
        )
    return problem, schedule, instance_id


def _write_manifest(out: Path, command: str, parameters: dict, outputs, seeds=None):
    manifest = {
        "tool": "daqsim",
        "version": __version__,
        "command": command,
        "parameters": parameters,
        "seeds": seeds,
        "outputs": sorted(str(o) for o in outputs),
        "generated_utc": datetime.now(timezone.utc).isoformat(),
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")


def _metric_rows(instance_id, seed, kind, n, sched, mode, values: dict):
    rows = []
    for metric, value in values.items():
        rows.append(
            (instance_id, seed, kind, n, sched.total_time, sched.steps, mode, metric, value)
        )
    return rows


METRICS_HEADER = ("instance_id", "seed", "kind", "n", "T", "M", "mode", "metric", "value")


def cmd_evolve(args) -> int:
    problem, sched, instance_id = _resolve_problem(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    mode = args.mode

    outputs = []
    if mode == "continuous":
        result = evolve_continuous(problem, sched)
        final = result.final_state
    elif mode == "digital":
        result = evolve_digital(problem, sched)
        final = result.final_state
    else:  # gates
        cfg = CompilerConfig(constrained=args.constrained)
        seq, report = compile_schedule(problem, sched, cfg)
        gate_path = out / "gates.txt"
        gate_path.write_text(serialize_sequence(seq), encoding="utf-8")
        outputs.append(gate_path)
        counts_path = out / "gate_counts.csv"
        write_csv(
            counts_path,
            ("block", "entangling", "single_qubit"),
            list(report.per_step)
            + [("total", report.entangling_count, report.single_qubit_count)],
        )
        outputs.append(counts_path)
        final = simulate_gates(seq)

    target = target_state(problem)
    probs = state_probabilities(final)
    dist_path = out / "distribution.csv"
    write_csv(
        dist_path,
        ("index", "bitstring", "probability"),
        [(k, bitstring(k, problem.n), probs[k]) for k in range(probs.size)],
    )
    outputs.append(dist_path)

    values = {
        "fidelity_vs_target": fidelity_pure(final, target),
        "success_vs_target": success_measure(state_probabilities(target), probs),
        "residual_energy": residual_energy(final, problem),
    }
    if np.all(problem.j_zz != 0.0):
        values["expected_kinks"] = kink_profile(probs, problem).expected_kinks
    metrics_path = out / "metrics.csv"
    write_csv(
        metrics_path,
        METRICS_HEADER,
        _metric_rows(instance_id, "", problem.kind, problem.n, sched, mode, values),
    )
    outputs.append(metrics_path)
    _write_manifest(
        out,
        "evolve",
        {
            "instance": instance_id,
            "mode": mode,
            "T": sched.total_time,
            "M": sched.steps,
            "sampling": sched.sampling,
            "b_x_init": sched.b_x_init,
            "constrained": bool(getattr(args, "constrained", False)),
        },
        outputs,
    )
    return 0


def cmd_compile(args) -> int:
    problem, sched, instance_id = _resolve_problem(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = CompilerConfig(constrained=args.constrained)
    seq, report = compile_schedule(problem, sched, cfg)
    gate_path = out / "gates.txt"
    gate_path.write_text(serialize_sequence(seq), encoding="utf-8")
    counts_path = out / "gate_counts.csv"
    write_csv(
        counts_path,
        ("block", "entangling", "single_qubit"),
        list(report.per_step) + [("total", report.entangling_count, report.single_qubit_count)],
    )
    _write_manifest(
        out,
        "compile",
        {
            "instance": instance_id,
            "T": sched.total_time,
            "M": sched.steps,
            "sampling": sched.sampling,
            "constrained": cfg.constrained,
        },
        [gate_path, counts_path],
    )
    print(
        f"{instance_id}: {report.entangling_count} entangling, "
        f"{report.single_qubit_count} single-qubit gates"
    )
    return 0


def cmd_gap(args) -> int:
    problem, sched, instance_id = _resolve_problem(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    gap_rows = []
    spectrum_rows = []
    for s in np.linspace(0.0, 1.0, args.grid):
        w = diagonalize(interpolated_hamiltonian(problem, sched, s), want_vectors=False)
        gap_rows.append((s, gap_above_ground(w.eigenvalues)))
        for level, energy in enumerate(w.eigenvalues):
            spectrum_rows.append((s, level, float(energy)))
    gamma, s_at = min_gap(problem, sched, args.grid)
    gap_path = out / "gap.csv"
    write_csv(gap_path, ("s", "gap"), gap_rows)
    spectrum_path = out / "spectrum.csv"
    write_csv(spectrum_path, ("s", "level", "energy"), spectrum_rows)
    summary_path = out / "gap_summary.csv"
    write_csv(summary_path, ("min_gap", "s_at_min", "grid_points"), [(gamma, s_at, args.grid)])
    _write_manifest(
        out,
        "gap",
        {"instance": instance_id, "grid": args.grid},
        [gap_path, spectrum_path, summary_path],
    )
    print(f"{instance_id}: min gap {gamma:.6g} at s = {s_at:.6g}")
    return 0


def cmd_resources(args) -> int:
    problem, sched, instance_id = _resolve_problem(args)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    est = estimate_resources(problem, sched, args.epsilon, grid_points=args.grid)
    path = out / "resources.csv"
    write_csv(
        path,
        (
            "epsilon",
            "gap",
            "drive_strength",
            "a_max",
            "term_count",
            "locality",
            "time_bound",
            "steps",
            "gate_count",
        ),
        [
            (
                est.epsilon,
                est.gap,
                est.drive_strength,
                est.a_max,
                est.term_count,
                est.locality,
                est.time_bound,
                est.steps,
                est.gate_count,
            )
        ],
    )
    _write_manifest(
        out,
        "resources",
        {"instance": instance_id, "epsilon": args.epsilon, "grid": args.grid},
        [path],
    )
    print(
        f"{instance_id}: T ~ {est.time_bound:.4g}, M ~ {est.steps:.4g}, "
        f"gates ~ {est.gate_count:.4g}"
    )
    return 0


# --------------------------------------------------------------------------
# Presets
# --------------------------------------------------------------------------

def _preset_ghz(out: Path, args) -> list[Path]:
    problem = ferro_chain(4, 2.0)
    sched = Schedule(
        total_time=args.T if args.T is not None else 3.0,
        steps=args.steps if args.steps is not None else 5,
        sampling=args.sampling or "midpoint",
    )
    checkpoints = [m / sched.steps for m in range(sched.steps + 1)]
    digital = evolve_digital(problem, sched, record_steps=True)
    continuous = evolve_continuous(problem, sched, checkpoints=checkpoints)
    target = target_state(problem)

    amp_rows = []

    def add_state(label, s, psi):
        for k in range(psi.size):
            amp_rows.append(
                (label, s, k, bitstring(k, problem.n),
                 float(psi[k].real), float(psi[k].imag), float(abs(psi[k]) ** 2))
            )

    for m, (s, psi) in enumerate(digital.trajectory):
        add_state(f"digital-step-{m}", s, psi)
    for s, psi in continuous.trajectory:
        add_state(f"continuous-s-{_fmt(s)}", s, psi)
    add_state("target", 1.0, target)
    amp_path = out / "amplitudes.csv"
    write_csv(
        amp_path,
        ("state", "s", "basis_index", "bitstring", "re", "im", "probability"),
        amp_rows,
    )

    rows = []
    for m, (s, psi) in enumerate(digital.trajectory):
        rows += _metric_rows(
            "ghz-4q", "", "stoquastic", 4, sched, "digital",
            {f"fidelity_vs_target_step_{m}": fidelity_pure(psi, target)},
        )
    pairs = {
        "fidelity_digital_vs_target": fidelity_pure(digital.final_state, target),
        "fidelity_digital_vs_continuous": fidelity_pure(
            digital.final_state, continuous.final_state
        ),
        "fidelity_continuous_vs_target": fidelity_pure(continuous.final_state, target),
    }
    rows += _metric_rows("ghz-4q", "", "stoquastic", 4, sched, "summary", pairs)
    metrics_path = out / "metrics.csv"
    write_csv(metrics_path, METRICS_HEADER, rows)
    return [amp_path, metrics_path]


def _preset_scaling(out: Path, args) -> list[Path]:
    j = 2.0
    scaled_times = [0.25 * i for i in range(13)]  # |J|T in [0, 3]
    residual_rows = []
    kink_rows = []
    for n in range(2, 10):
        steps = args.steps if args.steps is not None else (5 if n <= 6 else 2)
        problem = ferro_chain(n, j)
        for jt in scaled_times:
            T = jt / j
            sched = Schedule(total_time=T, steps=steps, sampling=args.sampling or "midpoint")
            for mode, runner in (
                ("continuous", evolve_continuous),
                ("digital", evolve_digital),
            ):
                psi = runner(problem, sched).final_state
                probs = state_probabilities(psi)
                profile = kink_profile(probs, problem)
                residual_rows.append(
                    (n, jt, T, steps, mode,
                     residual_energy(psi, problem), profile.expected_kinks)
                )
                for count, likelihood in enumerate(profile.likelihood):
                    kink_rows.append((n, jt, T, steps, mode, count, likelihood))
    residual_path = out / "residual.csv"
    write_csv(
        residual_path,
        ("n", "scaled_time", "T", "M", "mode", "residual_energy", "expected_kinks"),
        residual_rows,
    )
    kinks_path = out / "kinks.csv"
    write_csv(
        kinks_path,
        ("n", "scaled_time", "T", "M", "mode", "kink_count", "likelihood"),
        kink_rows,
    )
    return [residual_path, kinks_path]


def _preset_degeneracy(out: Path, args) -> list[Path]:
    n = 5
    j = -1.25
    sched = Schedule(
        total_time=args.T if args.T is not None else 2.5,
        steps=args.steps if args.steps is not None else 4,
        sampling=args.sampling or "midpoint",
    )
    sweep = [-3.0 + 0.5 * i for i in range(13)]
    mag_rows = []
    parity_rows = []
    per_d_values = {d: [] for d in range(1, n)}
    for b_z in sweep:
        problem = antiferro_chain(n, j, b_z)
        psi = evolve_digital(problem, sched).final_state
        for site in range(n):
            mag_rows.append((b_z, site, magnetization(psi, site)))
        for d in range(1, n):
            vals = [parity_correlation(psi, i, d) for i in range(n - d)]
            mean_d = float(np.mean(vals))
            parity_rows.append((b_z, d, mean_d))
            per_d_values[d].append(mean_d)
    mag_path = out / "magnetization.csv"
    write_csv(mag_path, ("b_z", "site", "sigma_z"), mag_rows)
    parity_path = out / "parity.csv"
    write_csv(parity_path, ("b_z", "distance", "parity"), parity_rows)
    mean_rows = []
    for d, vals in per_d_values.items():
        signed = float(np.mean(vals))
        mean_rows.append((d, signed, abs(signed), float(np.mean(np.abs(vals)))))
    parity_mean_path = out / "parity_mean.csv"
    write_csv(
        parity_mean_path,
        ("distance", "mean_parity", "abs_mean_parity", "mean_abs_parity"),
        mean_rows,
    )
    return [mag_path, parity_path, parity_mean_path]


def ensemble_instance_metrics(task) -> tuple:
    """Worker for one random-ensemble instance; returns a metrics mapping.

    Top-level so process pools can pickle it.
    """
    n, kind, seed, T, M, sampling = task
    problem = generate_random_problem(n, kind, seed)
    sched = Schedule(total_time=T, steps=M, sampling=sampling)
    digital = evolve_digital(problem, sched).final_state
    continuous = evolve_continuous(problem, sched).final_state
    target = target_state(problem)
    p_dig = state_probabilities(digital)
    p_cont = state_probabilities(continuous)
    p_tgt = state_probabilities(target)
    p_uni = uniform_baseline(n)
    values = {
        "fidelity_digital_vs_continuous": fidelity_pure(digital, continuous),
        "fidelity_digital_vs_target": fidelity_pure(digital, target),
        "fidelity_continuous_vs_target": fidelity_pure(continuous, target),
        "success_digital_vs_continuous": success_measure(p_cont, p_dig),
        "success_digital_vs_target": success_measure(p_tgt, p_dig),
        "success_continuous_vs_target": success_measure(p_tgt, p_cont),
        "success_uniform_vs_target": success_measure(p_tgt, p_uni),
    }
    instance_id = f"{kind}-{n}q-seed{seed}"
    return (instance_id, seed, kind, n, T, M, values)


def run_ensemble(cells, seed_base: int, sampling: str = "midpoint", workers: int | None = None):
    """Evaluate random-instance cells; deterministic output order."""
    tasks = []
    for n, kind, count in cells:
        T, M = RANDOM_SCHEDULES[n]
        for i in range(count):
            seed = seed_base + 10_000 * n + (50_000 if kind == "non-stoquastic" else 0) + i
            tasks.append((n, kind, seed, T, M, sampling))
    workers = workers if workers is not None else worker_count()
    if workers <= 1:
        results = [ensemble_instance_metrics(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(ensemble_instance_metrics, tasks, chunksize=4))
    results.sort(key=lambda r: (r[3], r[2], r[0]))
    return results


def _preset_random(out: Path, args) -> tuple[list[Path], list[int]]:
    cells = [
        (n, kind, args.count if args.count is not None else default)
        for n, kind, default in RANDOM_ENSEMBLE_CELLS
    ]
    results = run_ensemble(cells, args.seed, sampling=args.sampling or "midpoint")
    rows = []
    for instance_id, seed, kind, n, T, M, values in results:
        sched = Schedule(total_time=T, steps=M)
        rows += _metric_rows(instance_id, seed, kind, n, sched, "ensemble", values)
    metrics_path = out / "metrics.csv"
    write_csv(metrics_path, METRICS_HEADER, rows)

    hist_rows = []
    edges = np.linspace(0.0, 1.0, 21)
    for n, kind, _count in cells:
        subset = [r for r in results if r[3] == n and r[2] == kind]
        if not subset:
            continue
        for metric in sorted(subset[0][6]):
            vals = np.array([r[6][metric] for r in subset])
            density, _ = np.histogram(vals, bins=edges, density=True)
            for lo, hi, dens in zip(edges, edges[1:], density):
                hist_rows.append((n, kind, metric, lo, hi, dens))
    hist_path = out / "histogram.csv"
    write_csv(
        hist_path,
        ("n", "kind", "metric", "bin_left", "bin_right", "density"),
        hist_rows,
    )
    seeds = [r[1] for r in results]
    return [metrics_path, hist_path], seeds


def _preset_instances(out: Path, args) -> list[Path]:
    rows = []
    for name in FIXTURE_NAMES:
        problem = builtin_instance(name)
        sched = fixture_schedule(name, sampling=args.sampling or "midpoint")
        digital = evolve_digital(problem, sched).final_state
        continuous = evolve_continuous(problem, sched).final_state
        target = target_state(problem)
        p = {
            "digital": state_probabilities(digital),
            "continuous": state_probabilities(continuous),
            "target": state_probabilities(target),
        }
        states = {"digital": digital, "continuous": continuous, "target": target}
        for a, b in (
            ("digital", "continuous"),
            ("digital", "target"),
            ("continuous", "target"),
        ):
            rows.append(
                (name, problem.kind, problem.n, sched.total_time, sched.steps,
                 "fidelity", f"{a}_vs_{b}", fidelity_pure(states[a], states[b]))
            )
            rows.append(
                (name, problem.kind, problem.n, sched.total_time, sched.steps,
                 "success", f"{a}_vs_{b}", success_measure(p[b], p[a]))
            )
    path = out / "matrix.csv"
    write_csv(path, ("instance", "kind", "n", "T", "M", "metric", "pair", "value"), rows)
    return [path]


def cmd_preset(args) -> int:
    if args.name not in PRESET_NAMES:
        raise InputError(
            f"unknown preset {args.name!r}; valid presets: {', '.join(PRESET_NAMES)}"
        )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    seeds = None
    if args.name == "ghz-fig2":
        outputs = _preset_ghz(out, args)
    elif args.name == "scaling-fig3":
        outputs = _preset_scaling(out, args)
    elif args.name == "degeneracy-fig4":
        outputs = _preset_degeneracy(out, args)
    elif args.name == "random-fig5":
        outputs, seeds = _preset_random(out, args)
    else:
        outputs = _preset_instances(out, args)
    _write_manifest(
        out,
        f"preset {args.name}",
        {
            "seed": args.seed,
            "count": args.count,
            "T": args.T,
            "steps": args.steps,
            "sampling": args.sampling,
        },
        outputs,
        seeds=seeds,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="daqsim",
        description="Simulate and compile digitized adiabatic evolutions of spin chains.",
    )
    parser.add_argument("--version", action="version", version=f"daqsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_problem_args(p):
        p.add_argument("--problem", help="problem JSON file")
        p.add_argument("--fixture", help=f"bundled instance ({', '.join(FIXTURE_NAMES)})")
        p.add_argument("--T", type=float, help="total annealing time")
        p.add_argument("--steps", type=int, help="Trotter step count")
        p.add_argument(
            "--sampling", choices=("endpoint", "midpoint", "integral"), default=None
        )
        p.add_argument("--b-x-init", dest="b_x_init", type=float, help="initial field")
        p.add_argument("--out", default="out", help="output directory")

    p_evolve = sub.add_parser("evolve", help="run one evolution and write metrics")
    add_problem_args(p_evolve)
    p_evolve.add_argument(
        "--mode", choices=("continuous", "digital", "gates"), default="digital"
    )
    p_evolve.add_argument("--constrained", action="store_true")
    p_evolve.set_defaults(func=cmd_evolve)

    p_preset = sub.add_parser("preset", help="run a named experiment preset")
    p_preset.add_argument("name", help=f"one of: {', '.join(PRESET_NAMES)}")
    p_preset.add_argument("--seed", type=int, default=1)
    p_preset.add_argument("--count", type=int, help="override instances per cell")
    p_preset.add_argument("--T", type=float)
    p_preset.add_argument("--steps", type=int)
    p_preset.add_argument(
        "--sampling", choices=("endpoint", "midpoint", "integral"), default=None
    )
    p_preset.add_argument("--out", default="out")
    p_preset.set_defaults(func=cmd_preset)

    p_compile = sub.add_parser("compile", help="compile a schedule to a gate file")
    add_problem_args(p_compile)
    p_compile.add_argument("--constrained", action="store_true")
    p_compile.set_defaults(func=cmd_compile)

    p_gap = sub.add_parser("gap", help="sweep the spectral gap over the ramp")
    add_problem_args(p_gap)
    p_gap.add_argument("--grid", type=int, default=101)
    p_gap.set_defaults(func=cmd_gap)

    p_res = sub.add_parser("resources", help="order-of-magnitude resource estimates")
    add_problem_args(p_res)
    p_res.add_argument("--grid", type=int, default=101)
    p_res.add_argument("--epsilon", type=float, default=0.1)
    p_res.set_defaults(func=cmd_resources)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ProblemFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
