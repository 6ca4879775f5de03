#!/usr/bin/env python3
"""Render benchmark figures from a phaseloc results CSV.

Reads the raw trial records written by `phaseloc bench ...` and draws one of
four aggregate plots, one line per method:

  success        success fraction vs number of entries n
  timing         median reconstruction time (ms) vs n
  noise-success  success fraction vs noise level sigma
  noise-error    median relative error vs sigma

Rows with a non-finite rel_error (failed trials) are excluded from error
medians only; success fractions count every trial. The input CSV is opened
read-only and never modified.
"""

from __future__ import annotations

import argparse
import csv
import statistics
import sys
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

EXPECTED_COLUMNS = ["method", "n", "m", "sigma", "trial", "seed",
                    "rel_error", "time_ms", "success", "error_code"]

FIGURES = ("success", "timing", "noise-success", "noise-error")

AXIS_LABELS = {
    "success": ("number of entries n", "success probability"),
    "timing": ("number of entries n", "median reconstruction time (ms)"),
    "noise-success": ("noise level sigma", "success probability"),
    "noise-error": ("noise level sigma", "median relative error"),
}

TITLES = {
    "success": "Probability of successful recovery (noiseless)",
    "timing": "Reconstruction time (noiseless)",
    "noise-success": "Probability of successful recovery vs noise level",
    "noise-error": "Relative error vs noise level",
}


class SchemaMismatch(Exception):
    """CSV header does not match the benchmark schema."""


class EmptyData(Exception):
    """CSV holds no trial rows."""


@dataclass(frozen=True)
class FigureSpec:
    input_csv: str
    figure: str
    output: str

    def __post_init__(self):
        if self.figure not in FIGURES:
            raise ValueError(f"figure must be one of {FIGURES}, got {self.figure!r}")


def load_rows(path: str) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != EXPECTED_COLUMNS:
            raise SchemaMismatch(f"{path}: expected columns {EXPECTED_COLUMNS}, "
                                 f"got {header}")
        rows = []
        for raw in reader:
            if not raw:
                continue
            rows.append({
                "method": raw[0],
                "n": int(raw[1]),
                "sigma": float(raw[3]),
                "rel_error": float(raw[6]),
                "time_ms": float(raw[7]),
                "success": raw[8] == "true",
            })
    if not rows:
        raise EmptyData(f"{path}: no trial rows")
    return rows


def aggregate(rows: list[dict], figure: str) -> dict:
    """Per-method (x, y) series for the requested figure."""
    x_key = "n" if figure in ("success", "timing") else "sigma"
    groups: dict = {}
    for row in rows:
        groups.setdefault((row["method"], row[x_key]), []).append(row)

    series: dict = {}
    for (method, x_val), cell in sorted(groups.items()):
        if figure in ("success", "noise-success"):
            y_val = sum(r["success"] for r in cell) / len(cell)
        elif figure == "timing":
            y_val = statistics.median(r["time_ms"] for r in cell)
        else:
            finite = [r["rel_error"] for r in cell
                      if r["rel_error"] == r["rel_error"]]  # drop NaN
            if not finite:
                continue
            y_val = statistics.median(finite)
        series.setdefault(method, ([], []))
        series[method][0].append(x_val)
        series[method][1].append(y_val)
    return series


def render(spec: FigureSpec) -> None:
    rows = load_rows(spec.input_csv)
    series = aggregate(rows, spec.figure)
    xlabel, ylabel = AXIS_LABELS[spec.figure]

    fig, ax = plt.subplots(figsize=(12, 8), dpi=100)
    for method, (xs, ys) in sorted(series.items()):
        ax.plot(xs, ys, marker="o", label=method)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    ax.set_title(TITLES[spec.figure])
    if spec.figure == "timing":
        ax.set_yscale("log")
    if spec.figure == "noise-error":
        ax.set_yscale("symlog", linthresh=1e-12)
    ax.grid(True, alpha=0.4)
    ax.legend()
    fig.savefig(spec.output)
    plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--csv", required=True, help="benchmark results CSV")
    parser.add_argument("--figure", required=True, choices=FIGURES)
    parser.add_argument("--out", required=True, help="output PNG path")
    args = parser.parse_args(argv)
    spec = FigureSpec(args.csv, args.figure, args.out)
    try:
        render(spec)
    except (SchemaMismatch, EmptyData) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.figure} figure to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
