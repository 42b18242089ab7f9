#!/usr/bin/env python3
"""Figure generation over the benchmark CSV.

Three plot kinds, matching how the benchmark results are read in practice:

* cactus  -- per series, instances-solved vs sorted per-instance cost
* scatter -- two series compared instance by instance, log-log, with a
             diagonal and red timeout rails
* scaling -- per-instance cost against instance size

The script only reads the CSV; rendering is deterministic (no embedded
timestamps, fixed hash salt), so reruns produce identical bytes.

Usage:
    python3 plots.py --csv bench.csv --kind cactus --metric wall_time_ms --out cactus.svg
    python3 plots.py --csv bench.csv --kind scatter --metric pre_post_ops \
        --series basic:bitset --series interleave:bitset --out scatter.svg
    python3 plots.py --csv bench.csv --kind scaling --metric wall_time_ms \
        --x-col transitions --out scaling.svg
"""

from __future__ import annotations

import argparse
import csv
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "mecdec-plots"

import matplotlib.pyplot as plt

METRIC_COLUMNS = (
    "wall_time_ms",
    "pre_post_ops",
    "exists_ops",
    "basic_set_ops",
    "live_sets_peak",
    "recursion_depth_peak",
    "mec_count",
)
SIZE_COLUMNS = ("states", "transitions")

KINDS = ("cactus", "scatter", "scaling")


class PlotError(Exception):
    pass


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    kind: str
    metric: str
    out_path: str
    series: tuple[str, ...] = ()
    x_col: str = "states"

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PlotError(f"unknown plot kind {self.kind!r}")
        if self.metric not in METRIC_COLUMNS:
            raise PlotError(
                f"metric {self.metric!r} is not a CSV metric column"
                f" (choose from {', '.join(METRIC_COLUMNS)})"
            )
        if self.kind == "scaling" and self.x_col not in SIZE_COLUMNS:
            raise PlotError(f"size column {self.x_col!r} must be one of {SIZE_COLUMNS}")


def load_rows(csv_path: str) -> list[dict]:
    with open(csv_path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise PlotError(f"{csv_path} holds no data rows")
    return rows


def series_of(row: dict) -> str:
    return f"{row['algo']}:{row['backend']}"


def split_series(rows: list[dict], wanted: tuple[str, ...]) -> dict[str, list[dict]]:
    table: dict[str, list[dict]] = {}
    for row in rows:
        key = series_of(row)
        if wanted and key not in wanted:
            continue
        table.setdefault(key, []).append(row)
    for key in wanted:
        if key not in table:
            raise PlotError(f"series {key!r} has no rows in the CSV")
    if not table:
        raise PlotError("no series left after filtering")
    return table


def metric_value(row: dict, metric: str) -> float | None:
    cell = row.get(metric, "")
    return float(cell) if cell not in ("", None) else None


# -- data preparation (kept separate from rendering for testability) -----


def cactus_data(table: dict[str, list[dict]], metric: str):
    """Per series: sorted ok-row metric values, plus the row total.

    Timeout/error rows contribute no curve point but stretch the x-axis,
    so an algorithm that solves fewer instances visibly stops early.
    """
    out = {}
    for key, rows in sorted(table.items()):
        values = sorted(
            v
            for row in rows
            if row["status"] == "ok"
            and (v := metric_value(row, metric)) is not None
        )
        if not values:
            raise PlotError(f"series {key!r} has no ok rows")
        out[key] = (list(range(1, len(values) + 1)), values, len(rows))
    return out


def scatter_data(table: dict[str, list[dict]], metric: str):
    """Instance-matched points for exactly two series.

    Returns (x_key, y_key, points, rail) where each point is
    (x, y, status) with status ok/timeout; timeout coordinates sit on the
    rail value (the budget for wall time, just past the data otherwise).
    """
    if len(table) != 2:
        raise PlotError(
            f"scatter needs exactly two series, got {sorted(table)}"
        )
    (x_key, x_rows), (y_key, y_rows) = sorted(table.items())
    x_by = {r["instance"]: r for r in x_rows}
    y_by = {r["instance"]: r for r in y_rows}
    if set(x_by) != set(y_by):
        raise PlotError("series cover different instance sets")

    finite = [
        v
        for rows in (x_rows, y_rows)
        for row in rows
        if row["status"] == "ok" and (v := metric_value(row, metric)) is not None
    ]
    budgets = [
        v
        for rows in (x_rows, y_rows)
        for row in rows
        if row["status"] == "timeout"
        and (v := metric_value(row, "wall_time_ms")) is not None
    ]
    if metric == "wall_time_ms" and budgets:
        rail = max(budgets)
    elif finite:
        rail = max(finite) * 1.5
    else:
        raise PlotError("no plottable values in either series")

    points = []
    for name in sorted(x_by):
        rx, ry = x_by[name], y_by[name]
        if "error" in (rx["status"], ry["status"]):
            continue
        x = rail if rx["status"] == "timeout" else metric_value(rx, metric)
        y = rail if ry["status"] == "timeout" else metric_value(ry, metric)
        if x is None or y is None:
            continue
        status = "ok" if rx["status"] == ry["status"] == "ok" else "timeout"
        points.append((x, y, status))
    if not points:
        raise PlotError("no instance appears with data in both series")
    return x_key, y_key, points, rail


def scaling_data(table: dict[str, list[dict]], metric: str, x_col: str):
    out = {}
    for key, rows in sorted(table.items()):
        xs, ys = [], []
        for row in rows:
            if row["status"] != "ok":
                continue
            v = metric_value(row, metric)
            if v is None:
                continue
            xs.append(float(row[x_col]))
            ys.append(v)
        if xs:
            out[key] = (xs, ys)
    if not out:
        raise PlotError("no ok rows with size data")
    return out


# -- rendering -------------------------------------------------------------


def _save(fig, out_path: str):
    fig.savefig(out_path, metadata={"Date": None})
    plt.close(fig)


def _nonzero_floor(values):
    positive = [v for v in values if v > 0]
    return min(positive) if positive else 1.0


def make_cactus(spec: PlotSpec) -> str:
    table = split_series(load_rows(spec.csv_path), spec.series)
    data = cactus_data(table, spec.metric)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    max_total = max(total for _, _, total in data.values())
    for key, (xs, ys, _) in data.items():
        ax.plot(xs, ys, marker="o", markersize=3, linewidth=1.2, label=key)
    ax.set_xlim(0, max_total + 1)
    if any(v > 0 for _, ys, _ in data.values() for v in ys):
        ax.set_yscale("log")
    ax.set_xlabel("instances solved")
    ax.set_ylabel(spec.metric)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, spec.out_path)
    return spec.out_path


def make_scatter(spec: PlotSpec) -> str:
    table = split_series(load_rows(spec.csv_path), spec.series)
    x_key, y_key, points, rail = scatter_data(table, spec.metric)
    fig, ax = plt.subplots(figsize=(5.4, 5.4))
    ok = [(x, y) for x, y, st in points if st == "ok"]
    timed = [(x, y) for x, y, st in points if st == "timeout"]
    if ok:
        ax.scatter(*zip(*ok), s=18, alpha=0.8, label="solved by both")
    if timed:
        ax.scatter(*zip(*timed), s=26, marker="x", color="red", label="timeout")
    floor = _nonzero_floor([c for x, y, _ in points for c in (x, y)]) / 2
    ax.axhline(rail, color="red", linewidth=0.8, alpha=0.6)
    ax.axvline(rail, color="red", linewidth=0.8, alpha=0.6)
    ax.plot([floor, rail], [floor, rail], color="gray", linewidth=0.8, alpha=0.8)
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel(f"{x_key} {spec.metric}")
    ax.set_ylabel(f"{y_key} {spec.metric}")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, spec.out_path)
    return spec.out_path


def make_scaling(spec: PlotSpec) -> str:
    table = split_series(load_rows(spec.csv_path), spec.series)
    data = scaling_data(table, spec.metric, spec.x_col)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for key, (xs, ys) in data.items():
        ax.scatter(xs, ys, s=16, alpha=0.8, label=key)
    ax.set_xscale("log")
    if any(v > 0 for _, ys in data.values() for v in ys):
        ax.set_yscale("log")
    # the native format has no separate branch count: transitions stands in
    label = "transitions (branches)" if spec.x_col == "transitions" else spec.x_col
    ax.set_xlabel(label)
    ax.set_ylabel(spec.metric)
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    _save(fig, spec.out_path)
    return spec.out_path


RENDERERS = {"cactus": make_cactus, "scatter": make_scatter, "scaling": make_scaling}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Render benchmark CSV figures.")
    parser.add_argument("--csv", required=True, dest="csv_path")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--metric", required=True)
    parser.add_argument(
        "--series",
        action="append",
        default=[],
        help="algo:backend filter; repeat for several (scatter needs exactly two).",
    )
    parser.add_argument("--x-col", default="states", choices=SIZE_COLUMNS)
    parser.add_argument("--out", required=True, dest="out_path")
    args = parser.parse_args(argv)
    try:
        spec = PlotSpec(
            csv_path=args.csv_path,
            kind=args.kind,
            metric=args.metric,
            out_path=args.out_path,
            series=tuple(args.series),
            x_col=args.x_col,
        )
        RENDERERS[spec.kind](spec)
    except (PlotError, OSError) as exc:
        print(f"error: {exc}")
        return 1
    print(f"{spec.kind} -> {spec.out_path}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
