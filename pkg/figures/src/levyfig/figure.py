"""Eight-panel histogram figure from pooled-spectrum CSV files.

The producer writes one histogram CSV per tail index plus a JSON
manifest describing panel scaling and overlay payloads.  This module
loads that bundle, validates it row by row (errors carry file name and
line number), and draws a 2 x 4 grid in ascending tail-index order.

Bars are drawn directly from the CSV density column: no rebinning, no
resampling, heights equal the file values exactly.  Overlays come in
two kinds: the analytic semicircle for the finite-variance panel, and a
resolvent-smoothed density proxy for the rescaled-kernel panels, which
is labeled as a proxy in the legend since it is a Cauchy-kernel
smoothing of the pooled eigenvalues rather than an exact limit density.
"""

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SCHEMA = "levyspec-figure1/1"
CSV_HEADER = ["bin_left", "bin_right", "count", "density"]
GRID_ROWS, GRID_COLS = 2, 4


class FigureError(Exception):
    """Bad or missing input; message carries file name and, where there
    is one, the offending line number."""

    def __init__(self, path, message, line=None):
        self.path = str(path)
        self.line = line
        where = f"{self.path}:{line}" if line is not None else self.path
        super().__init__(f"{where}: {message}")


@dataclass(frozen=True)
class PanelSpec:
    """One panel: histogram rows plus overlay and axis bookkeeping."""

    alpha: float
    csv_path: str
    overlay: dict
    scaling: str
    kept: int
    total: int
    bin_left: np.ndarray = field(repr=False)
    bin_right: np.ndarray = field(repr=False)
    count: np.ndarray = field(repr=False)
    density: np.ndarray = field(repr=False)
    xlim: tuple[float, float] = (0.0, 1.0)


def _read_histogram(path):
    """Parse one histogram CSV, validating every row."""
    if not os.path.exists(path):
        raise FigureError(path, "file does not exist")
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise FigureError(path, f"expected header {CSV_HEADER}, got {header}", 1)
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 4:
                raise FigureError(path, f"expected 4 fields, got {len(row)}", lineno)
            try:
                left, right = float(row[0]), float(row[1])
                count, dens = int(row[2]), float(row[3])
            except ValueError as exc:
                raise FigureError(path, f"unreadable value ({exc})", lineno) from None
            if not (math.isfinite(left) and math.isfinite(right) and math.isfinite(dens)):
                raise FigureError(path, "non-finite value", lineno)
            if right <= left:
                raise FigureError(path, f"bin edges out of order: {left} >= {right}", lineno)
            if count < 0 or dens < 0.0:
                raise FigureError(path, "negative count or density", lineno)
            rows.append((left, right, count, dens))
    if not rows:
        raise FigureError(path, "no histogram rows")
    arr = np.array(rows)
    return arr[:, 0], arr[:, 1], arr[:, 2].astype(int), arr[:, 3]


def _check_overlay(overlay, path, lo, hi):
    kind = overlay.get("kind")
    if kind == "none":
        return
    if kind == "semicircle":
        s2 = overlay.get("sigma2")
        if not isinstance(s2, (int, float)) or s2 <= 0.0:
            raise FigureError(path, f"semicircle overlay needs sigma2 > 0, got {s2!r}")
        return
    if kind == "rde_proxy":
        x = overlay.get("x")
        y = overlay.get("density")
        if not x or not y or len(x) != len(y):
            raise FigureError(path, "proxy overlay needs matching x/density arrays")
        # The curve must span the histogram, else the panel lies by omission.
        if min(x) > lo or max(x) < hi:
            raise FigureError(
                path,
                f"proxy overlay [{min(x):.4g}, {max(x):.4g}] does not cover "
                f"histogram support [{lo:.4g}, {hi:.4g}]",
            )
        return
    raise FigureError(path, f"unknown overlay kind {kind!r}")


def load_manifest(manifest_path):
    """Read the manifest and all referenced CSVs into PanelSpec objects,
    sorted by ascending tail index."""
    if not os.path.exists(manifest_path):
        raise FigureError(manifest_path, "file does not exist")
    try:
        with open(manifest_path) as fh:
            manifest = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FigureError(manifest_path, f"invalid JSON ({exc.msg})", exc.lineno) from None
    if manifest.get("schema") != SCHEMA:
        raise FigureError(
            manifest_path,
            f"expected schema {SCHEMA!r}, got {manifest.get('schema')!r}",
        )
    panels_meta = manifest.get("panels")
    if not isinstance(panels_meta, list) or not panels_meta:
        raise FigureError(manifest_path, "manifest has no panels")

    base = os.path.dirname(os.path.abspath(manifest_path))
    panels = []
    for meta in panels_meta:
        for key in ("alpha", "csv", "overlay", "scaling", "kept", "total"):
            if key not in meta:
                raise FigureError(manifest_path, f"panel missing {key!r}: {meta}")
        csv_path = os.path.join(base, meta["csv"])
        left, right, count, dens = _read_histogram(csv_path)
        lo, hi = float(left.min()), float(right.max())
        _check_overlay(meta["overlay"], csv_path, lo, hi)
        panels.append(
            PanelSpec(
                alpha=float(meta["alpha"]),
                csv_path=csv_path,
                overlay=meta["overlay"],
                scaling=str(meta["scaling"]),
                kept=int(meta["kept"]),
                total=int(meta["total"]),
                bin_left=left,
                bin_right=right,
                count=count,
                density=dens,
                xlim=(lo, hi),
            )
        )
    panels.sort(key=lambda p: p.alpha)
    return panels


def _semicircle_curve(sigma2, lo, hi):
    """Analytic density sqrt(4 s^2 - x^2) / (2 pi s^2), zero off its arc,
    sampled over the union of the arc and the histogram support."""
    edge = 2.0 * math.sqrt(sigma2)
    x = np.linspace(min(lo, -edge), max(hi, edge), 801)
    y = np.sqrt(np.clip(4.0 * sigma2 - x * x, 0.0, None)) / (2.0 * math.pi * sigma2)
    return x, y


def _draw_panel(ax, panel):
    widths = panel.bin_right - panel.bin_left
    ax.bar(
        panel.bin_left,
        panel.density,
        width=widths,
        align="edge",
        color="#9db8d9",
        edgecolor="#41608a",
        linewidth=0.4,
        label="pooled spectrum",
    )
    overlay = panel.overlay
    if overlay["kind"] == "semicircle":
        x, y = _semicircle_curve(overlay["sigma2"], *panel.xlim)
        ax.plot(x, y, color="#b0413e", linewidth=1.6, label="semicircle")
    elif overlay["kind"] == "rde_proxy":
        t = overlay.get("t", 0.0)
        ax.plot(
            overlay["x"],
            overlay["density"],
            color="#b0413e",
            linewidth=1.4,
            label=f"smoothed-resolvent proxy (t = {t:g})",
        )
        solver = overlay.get("solver_density_at_zero")
        if solver is not None:
            ax.plot(
                [0.0], [solver], marker="o", markersize=4.5,
                color="#2a6041", linestyle="none", label="solver value at 0",
            )
    ax.set_title(f"alpha = {panel.alpha:g}   [{panel.scaling}]", fontsize=10)
    ax.set_xlim(panel.xlim)
    ax.tick_params(labelsize=8)
    if overlay["kind"] != "none":
        ax.legend(fontsize=7, frameon=False)


def build_figure(panels):
    """Lay the panels out on the 2 x 4 grid in the given (ascending) order."""
    if len(panels) != GRID_ROWS * GRID_COLS:
        raise FigureError(
            panels[0].csv_path if panels else "<manifest>",
            f"need exactly {GRID_ROWS * GRID_COLS} panels, got {len(panels)}",
        )
    fig, axes = plt.subplots(
        GRID_ROWS, GRID_COLS, figsize=(16.0, 7.2), dpi=110, constrained_layout=True
    )
    for ax, panel in zip(axes.ravel(), panels):
        _draw_panel(ax, panel)
    seq = ", ".join(f"{p.alpha:g}" for p in panels)
    fig.suptitle(
        "Scaled spectral histograms of the heavy-tailed kernel, "
        f"alpha = {seq} (left to right, top to bottom)",
        fontsize=12,
    )
    return fig


def render(manifest_path, out_path):
    """Load the manifest bundle, draw the grid, write one image file.

    The output is byte-stable for fixed inputs: no timestamps or
    software tags are embedded.
    """
    panels = load_manifest(manifest_path)
    fig = build_figure(panels)
    try:
        fig.savefig(out_path, metadata={"Software": None})
    finally:
        plt.close(fig)
    return panels


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="levyfig",
        description="Render the eight-panel scaled-ESD figure from a "
        "figure1 manifest.",
    )
    parser.add_argument("--manifest", required=True, help="path to figure1_manifest.json")
    parser.add_argument("--out", required=True, help="output image path (.png)")
    args = parser.parse_args(argv)
    try:
        panels = render(args.manifest, args.out)
    except FigureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {args.out} ({len(panels)} panels, "
          f"alpha {panels[0].alpha:g} .. {panels[-1].alpha:g})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
