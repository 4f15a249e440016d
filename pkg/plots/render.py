#!/usr/bin/env python3
"""Offline figure rendering for wqpe CSV outputs.

Reads only the CSV files produced by the wqpe CLI (never recomputes), and
refuses any file whose header row does not match the documented schema.

    python plots/render.py --kind window_filter --in win.csv --out fig.png
    python plots/render.py --kind error_rate_grid --in d0.csv d1.csv ... --out fig.png
    python plots/render.py --kind sigma_chi_grid --in n4d1.csv ... --out fig.png
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

SCHEMAS = {
    "window_filter": ["series", "index", "re", "im", "abs2"],
    "error_rate_grid": ["p", "e_rect", "e_cos"],
    "sigma_chi_grid": ["r", "window", "success_prob", "cum_Pr", "epsilon", "sigma_chi"],
}


class SchemaError(Exception):
    """Input CSV does not match the documented schema."""


@dataclass(frozen=True)
class FigureRecipe:
    kind: str
    inputs: tuple[str, ...]
    out: str

    def __post_init__(self):
        if self.kind not in SCHEMAS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")


def read_table(path: str, schema: list[str]) -> dict:
    """Parse one CLI CSV: '#' manifest lines, an exact header row, data rows."""
    manifest = {}
    rows = []
    header = None
    with open(path, newline="") as fh:
        for raw in fh:
            line = raw.rstrip("\n")
            if line.startswith("#"):
                if "=" in line:
                    key, _, value = line[1:].partition("=")
                    manifest[key.strip()] = value.strip()
                continue
            cells = next(csv.reader([line]))
            if header is None:
                header = cells
                if header != schema:
                    raise SchemaError(
                        f"{path}: header {header} does not match schema {schema}"
                    )
                continue
            rows.append(cells)
    if header is None:
        raise SchemaError(f"{path}: no header row found")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    columns = {name: [row[i] for row in rows] for i, name in enumerate(schema)}
    return {"path": path, "manifest": manifest, "columns": columns}


def _floats(table, name):
    return [float(v) for v in table["columns"][name]]


def _grid_axes(n_panels: int, max_cols: int):
    cols = min(max_cols, n_panels)
    rows = math.ceil(n_panels / cols)
    fig, axes = plt.subplots(rows, cols, figsize=(4.2 * cols, 3.2 * rows), squeeze=False)
    return fig, [ax for row in axes for ax in row]


def render_window_filter(tables, out: str) -> None:
    (table,) = tables
    cols = table["columns"]
    sel = lambda series, name: [  # noqa: E731
        float(v) for v, s in zip(cols[name], cols["series"]) if s == series
    ]
    fig, axes = plt.subplots(2, 2, figsize=(9, 6.5))
    kind = table["manifest"].get("kind", "")

    ax = axes[0][0]
    ax.plot(sel("window", "index"), sel("window", "re"), "k.-")
    ax.set_xlabel("x")
    ax.set_ylabel("window amplitude")
    ax.set_title(f"time-domain window {kind}")

    ax = axes[0][1]
    ax.plot(sel("filter", "index"), sel("filter", "abs2"), "r.-")
    ax.set_xlabel("q")
    ax.set_ylabel("|filter|^2")
    ax.set_title("outcome distribution at delta = 0")

    ax = axes[1][0]
    ax.plot(sel("filter", "index"), sel("filter", "re"), ".-", label="re")
    ax.plot(sel("filter", "index"), sel("filter", "im"), ".-", label="im")
    ax.set_xlabel("q")
    ax.legend()
    ax.set_title("filter amplitude")

    ax = axes[1][1]
    abs2 = sel("filter", "abs2")
    floor = 1e-300
    ax.semilogy(sel("filter", "index"), [max(v, floor) for v in abs2], "r.-")
    ax.set_xlabel("q")
    ax.set_title("|filter|^2 (log scale)")

    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def render_error_rate_grid(tables, out: str) -> None:
    fig, axes = _grid_axes(len(tables), max_cols=3)
    for ax, table in zip(axes, tables):
        ps = _floats(table, "p")
        ax.semilogy(ps, _floats(table, "e_rect"), "o-", label="rectangular")
        ax.semilogy(ps, _floats(table, "e_cos"), "s-", label="cosine")
        delta = table["manifest"].get("delta2m", table["path"])
        ax.set_title(f"2^m delta = {delta}")
        ax.set_xlabel("extra qubits p")
        ax.set_ylabel("error rate")
        ax.legend()
    for ax in axes[len(tables):]:
        ax.set_visible(False)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


def render_sigma_chi_grid(tables, out: str) -> None:
    fig, axes = _grid_axes(len(tables), max_cols=3)
    for ax, table in zip(axes, tables):
        cols = table["columns"]
        for window, marker in (("rect", "o-"), ("cos", "s-")):
            rs = [
                float(r) for r, w in zip(cols["r"], cols["window"]) if w == window
            ]
            sig = [
                float(s)
                for s, w in zip(cols["sigma_chi"], cols["window"])
                if w == window
            ]
            if rs:
                ax.semilogy(rs, sig, marker, label=window)
        label = " ".join(
            f"{k}={table['manifest'][k]}" for k in ("sites", "d") if k in table["manifest"]
        )
        ax.set_title(label or table["path"])
        ax.set_xlabel("filter rounds r")
        ax.set_ylabel("sigma_chi")
        ax.legend()
    for ax in axes[len(tables):]:
        ax.set_visible(False)
    fig.tight_layout()
    fig.savefig(out)
    plt.close(fig)


RENDERERS = {
    "window_filter": render_window_filter,
    "error_rate_grid": render_error_rate_grid,
    "sigma_chi_grid": render_sigma_chi_grid,
}


def render(recipe: FigureRecipe) -> None:
    schema = SCHEMAS[recipe.kind]
    tables = [read_table(path, schema) for path in recipe.inputs]
    if recipe.kind == "window_filter" and len(tables) != 1:
        raise SchemaError("window_filter takes exactly one input CSV")
    RENDERERS[recipe.kind](tables, recipe.out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kind", required=True, choices=sorted(SCHEMAS))
    parser.add_argument("--in", dest="inputs", nargs="+", required=True)
    parser.add_argument("--out", required=True)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        render(FigureRecipe(kind=args.kind, inputs=tuple(args.inputs), out=args.out))
    except (SchemaError, OSError) as exc:
        print(f"render: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
