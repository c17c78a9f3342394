"""Render simulation CSV outputs as figures.

Consumes only the daqsim CSV schemas (never the library API), and never
reinterprets values: no smoothing, no renormalization beyond the declared
histogram density.  Output is PNG via the Agg backend, deterministic for
identical inputs.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

FIGURE_KINDS = (
    "ghz-bars",
    "scaling-curves",
    "magnetization-map",
    "parity-decay",
    "fidelity-hist",
    "sorted-probs",
)

#: Columns each figure kind requires in its primary input.
REQUIRED_COLUMNS = {
    "ghz-bars": ("state", "basis_index", "probability"),
    "scaling-curves": ("n", "scaled_time", "mode", "residual_energy"),
    "magnetization-map": ("b_z", "site", "sigma_z"),
    "parity-decay": ("distance", "mean_parity", "abs_mean_parity"),
    "fidelity-hist": ("metric", "value"),
    "sorted-probs": ("index", "probability"),
}


class PlotError(ValueError):
    """Bad plot specification or malformed/empty input data."""


@dataclass(frozen=True)
class PlotSpec:
    kind: str
    input_csv: Path
    output_image: Path
    second_csv: Path | None = None

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise PlotError(
                f"unknown figure kind {self.kind!r}; valid: {', '.join(FIGURE_KINDS)}"
            )


def read_rows(path: Path, required: tuple[str, ...]) -> list[dict]:
    if not Path(path).exists():
        raise PlotError(f"input not found: {path}")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise PlotError(f"{path}: missing required columns {missing}")
        rows = list(reader)
    if not rows:
        raise PlotError(f"{path}: no data rows")
    return rows


def _save(fig, out: Path):
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, format="png", dpi=120)
    plt.close(fig)


def _ghz_bars(rows, spec):
    states = sorted({r["state"] for r in rows})
    # Show the last digital step when present, else the first state listed.
    digital = [s for s in states if s.startswith("digital-step-")]
    main = max(digital, key=lambda s: int(s.rsplit("-", 1)[1])) if digital else states[0]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    sel = sorted(
        (int(r["basis_index"]), float(r["probability"]))
        for r in rows
        if r["state"] == main
    )
    idx = [k for k, _ in sel]
    ax.bar(idx, [v for _, v in sel], width=0.8, label=main, color="#cc3311")
    if "target" in states:
        tgt = sorted(
            (int(r["basis_index"]), float(r["probability"]))
            for r in rows
            if r["state"] == "target"
        )
        ax.step(
            [k - 0.5 for k, _ in tgt] + [tgt[-1][0] + 0.5],
            [v for _, v in tgt] + [tgt[-1][1]],
            where="post", color="black", linewidth=1.0, label="target",
        )
    ax.set_xlabel("basis state index")
    ax.set_ylabel("probability")
    ax.legend(frameon=False)
    _save(fig, spec.output_image)


def _scaling_curves(rows, spec):
    fig, ax = plt.subplots(figsize=(6, 4))
    ns = sorted({int(r["n"]) for r in rows})
    modes = sorted({r["mode"] for r in rows})
    cmap = plt.get_cmap("viridis")
    for n in ns:
        for mode in modes:
            pts = sorted(
                (float(r["scaled_time"]), float(r["residual_energy"]))
                for r in rows
                if int(r["n"]) == n and r["mode"] == mode
            )
            xs = [t for t, _ in pts if t > 0]
            ys = [v for t, v in pts if t > 0]
            ax.plot(
                xs, ys,
                linestyle="-" if mode == modes[0] else "--",
                color=cmap((n - ns[0]) / max(len(ns) - 1, 1)),
                label=f"n={n} {mode}",
            )
    ax.set_xscale("log")
    ax.set_xlabel("scaled time")
    ax.set_ylabel("residual energy")
    ax.legend(frameon=False, fontsize=6, ncol=2)
    _save(fig, spec.output_image)


def _magnetization_map(rows, spec):
    b_values = sorted({float(r["b_z"]) for r in rows})
    sites = sorted({int(r["site"]) for r in rows})
    grid = np.full((len(sites), len(b_values)), np.nan)
    for r in rows:
        grid[sites.index(int(r["site"])), b_values.index(float(r["b_z"]))] = float(
            r["sigma_z"]
        )
    if np.any(np.isnan(grid)):
        raise PlotError("magnetization grid has holes (site x b_z not complete)")
    fig, ax = plt.subplots(figsize=(6, 3.2))
    im = ax.imshow(
        grid, aspect="auto", origin="lower", cmap="RdBu_r", vmin=-1, vmax=1,
        extent=(min(b_values), max(b_values), sites[0] - 0.5, sites[-1] + 0.5),
    )
    fig.colorbar(im, ax=ax, label="magnetization")
    ax.set_xlabel("local field")
    ax.set_ylabel("site")
    _save(fig, spec.output_image)


def _parity_decay(rows, spec):
    pts = sorted(
        (int(r["distance"]), float(r["mean_parity"]), float(r["abs_mean_parity"]))
        for r in rows
    )
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.plot([d for d, _, _ in pts], [s for _, s, _ in pts], "o-", label="signed mean")
    ax.plot([d for d, _, _ in pts], [a for _, _, a in pts], "s--", label="absolute mean")
    ax.axhline(0.0, color="gray", linewidth=0.6)
    ax.set_xlabel("distance")
    ax.set_ylabel("spin parity correlation")
    ax.legend(frameon=False)
    _save(fig, spec.output_image)


def _fidelity_hist(rows, spec, rows2=None):
    metrics = sorted({r["metric"] for r in rows})
    ncols = min(3, len(metrics))
    nrows = (len(metrics) + ncols - 1) // ncols
    fig, axes = plt.subplots(
        nrows, ncols, figsize=(3.2 * ncols, 2.6 * nrows), squeeze=False
    )
    edges = np.linspace(0.0, 1.0, 21)
    for k, metric in enumerate(metrics):
        ax = axes[k // ncols][k % ncols]
        vals = [float(r["value"]) for r in rows if r["metric"] == metric]
        ax.hist(vals, bins=edges, density=True, alpha=0.7, color="#0077bb")
        if rows2 is not None:
            vals2 = [float(r["value"]) for r in rows2 if r["metric"] == metric]
            if vals2:
                ax.hist(
                    vals2, bins=edges, density=True, histtype="step", color="gray"
                )
        ax.set_title(metric, fontsize=7)
        ax.set_xlim(0, 1)
    for k in range(len(metrics), nrows * ncols):
        axes[k // ncols][k % ncols].axis("off")
    fig.tight_layout()
    _save(fig, spec.output_image)


def _sorted_probs(rows, spec, rows2=None):
    ref = sorted(
        ((int(r["index"]), float(r["probability"])) for r in rows),
        key=lambda kv: -kv[1],
    )
    order = [k for k, _ in ref]
    fig, ax = plt.subplots(figsize=(7, 3.2))
    ax.bar(range(len(order)), [v for _, v in ref], width=1.0, color="0.7",
           label="reference")
    if rows2 is not None:
        lookup = {int(r["index"]): float(r["probability"]) for r in rows2}
        missing = [k for k in order if k not in lookup]
        if missing:
            raise PlotError(f"second input lacks indices {missing[:5]}")
        ax.bar(range(len(order)), [lookup[k] for k in order], width=0.5,
               color="#cc3311", label="compared")
    ax.set_xlabel("basis states (sorted by reference probability)")
    ax.set_ylabel("probability")
    ax.legend(frameon=False)
    _save(fig, spec.output_image)


def render(spec: PlotSpec) -> Path:
    """Render one figure; raises PlotError before writing anything on bad input."""
    rows = read_rows(spec.input_csv, REQUIRED_COLUMNS[spec.kind])
    rows2 = None
    if spec.second_csv is not None:
        rows2 = read_rows(spec.second_csv, REQUIRED_COLUMNS[spec.kind])
    if spec.kind == "ghz-bars":
        _ghz_bars(rows, spec)
    elif spec.kind == "scaling-curves":
        _scaling_curves(rows, spec)
    elif spec.kind == "magnetization-map":
        _magnetization_map(rows, spec)
    elif spec.kind == "parity-decay":
        _parity_decay(rows, spec)
    elif spec.kind == "fidelity-hist":
        _fidelity_hist(rows, spec, rows2)
    else:
        _sorted_probs(rows, spec, rows2)
    return Path(spec.output_image)
