"""Render replication CSVs into figure images.

This package consumes only the CSV files written by the solver toolkit's
replication presets; it embeds no model logic and never imports the solver
package.  Each figure id maps to one CSV schema and one panel layout:

  fig2      two panels: normalized losses vs w2, bias vs w2
  fig3      bias_ratio vs w2, one line per rho
  fig4      inflation equivalent vs w2, one line per rho
  lp_alpha  two panels: commitment and optimized-rule losses vs alpha,
            one line per alpha_star
  lp_phi    optimal index weight vs alpha, one line per alpha_star
  lp_w2     bias vs w2, one line per w2_star

Rendering is idempotent: embedded dates are disabled and the SVG hash salt
is pinned, so the same inputs always produce the same bytes.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "stabias-figures"

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

FORMATS = ("png", "svg")


class SchemaMismatchError(Exception):
    """Input CSV lacks required columns."""

    def __init__(self, path: str, missing: list[str]):
        super().__init__(f"{path}: missing columns {', '.join(missing)}")
        self.missing = missing


# figure id -> (csv filename, required columns)
FIGURE_INPUTS: dict[str, list[tuple[str, tuple[str, ...]]]] = {
    "fig2": [
        ("fig2_losses.csv", ("w2", "loss_commitment", "loss_discretion", "loss_rule", "phi_opt")),
        ("fig2_bias.csv", ("w2", "bias", "bias_ratio")),
    ],
    "fig3": [("fig3_bias_ratio.csv", ("rho", "w2", "bias_ratio"))],
    "fig4": [("fig4_inflation_equivalent.csv", ("rho", "w2", "infl_equiv"))],
    "lp_alpha": [("lp_alpha_losses.csv", ("alpha", "alpha_star", "loss_commitment", "loss_rule"))],
    "lp_phi": [("lp_phi_opt.csv", ("alpha", "alpha_star", "phi_opt"))],
    "lp_w2": [("lp_w2_bias.csv", ("w2", "w2_star", "bias"))],
}

PANEL_COUNTS = {"fig2": 2, "fig3": 1, "fig4": 1, "lp_alpha": 2, "lp_phi": 1, "lp_w2": 1}


def load_columns(csv_dir: str, filename: str, required: tuple[str, ...]) -> dict[str, list[float]]:
    """Read one CSV and return the required columns; strict about headers."""
    path = os.path.join(csv_dir, filename)
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in required if c not in header]
        if missing:
            raise SchemaMismatchError(path, missing)
        table: dict[str, list[float]] = {c: [] for c in required}
        for row in reader:
            for c in required:
                table[c].append(float(row[c]))
    return table


def _grouped(xs, groups, ys):
    """Split (x, y) pairs by group value, preserving group order of appearance."""
    out: dict[float, tuple[list[float], list[float]]] = {}
    for x, g, y in zip(xs, groups, ys):
        out.setdefault(g, ([], []))
        out[g][0].append(x)
        out[g][1].append(y)
    return out


def _line_panel(ax, table, x_col, group_col, y_col, group_label):
    for g, (xs, ys) in _grouped(table[x_col], table[group_col], table[y_col]).items():
        ax.plot(xs, ys, marker=".", label=f"{group_label}={g:g}")
    ax.set_xlabel(x_col)
    ax.set_ylabel(y_col)
    ax.legend(fontsize=7)


def build_figure(csv_dir: str, figure_id: str):
    """Assemble the matplotlib Figure for one figure id (no file output)."""
    if figure_id not in FIGURE_INPUTS:
        raise ValueError(f"unknown figure id: {figure_id}")
    tables = [load_columns(csv_dir, name, cols) for name, cols in FIGURE_INPUTS[figure_id]]

    if figure_id == "fig2":
        losses, bias = tables
        fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 7))
        for column in ("loss_commitment", "loss_discretion", "loss_rule"):
            top.plot(losses["w2"], losses[column], marker=".", label=column)
        top.set_xlabel("w2")
        top.set_ylabel("normalized loss")
        top.legend(fontsize=7)
        bottom.plot(bias["w2"], bias["bias"], marker=".", color="tab:red")
        bottom.set_xlabel("w2")
        bottom.set_ylabel("bias")
    elif figure_id in ("fig3", "fig4"):
        (table,) = tables
        y_col = "bias_ratio" if figure_id == "fig3" else "infl_equiv"
        fig, ax = plt.subplots(figsize=(6, 4))
        _line_panel(ax, table, "w2", "rho", y_col, "rho")
    elif figure_id == "lp_alpha":
        (table,) = tables
        fig, axes = plt.subplots(1, 2, figsize=(9, 4))
        for ax, column in zip(axes, ("loss_commitment", "loss_rule")):
            _line_panel(ax, table, "alpha", "alpha_star", column, "alpha_star")
    elif figure_id == "lp_phi":
        (table,) = tables
        fig, ax = plt.subplots(figsize=(6, 4))
        _line_panel(ax, table, "alpha", "alpha_star", "phi_opt", "alpha_star")
    else:  # lp_w2
        (table,) = tables
        fig, ax = plt.subplots(figsize=(6, 4))
        _line_panel(ax, table, "w2", "w2_star", "bias", "w2_star")

    fig.suptitle(figure_id)
    fig.tight_layout()
    return fig


def render(csv_dir: str, figure_id: str, out_path: str, image_format: str = "png") -> str:
    """Render one figure to ``out_path``; returns the written path."""
    if image_format not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {image_format!r}")
    fig = build_figure(csv_dir, figure_id)
    try:
        fig.savefig(out_path, format=image_format, dpi=110, metadata={"Date": None})
    finally:
        plt.close(fig)
    return str(out_path)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="stabias-render", description="Render replication CSVs into figures."
    )
    parser.add_argument("command", choices=["render"], nargs="?", default="render",
                        help="only 'render' is supported")
    parser.add_argument("--figure", required=True, choices=sorted(FIGURE_INPUTS))
    parser.add_argument("--csv-dir", required=True)
    parser.add_argument("--out", required=True)
    parser.add_argument("--format", default="png", choices=list(FORMATS))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        path = render(args.csv_dir, args.figure, args.out, args.format)
    except (SchemaMismatchError, FileNotFoundError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"wrote {path}")
    return 0


def entry() -> None:
    sys.exit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
