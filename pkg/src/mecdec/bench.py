"""Benchmark harness: per-instance records, CSV schema, timeouts, workers.

Op-count columns are bit-for-bit reproducible across runs and machines;
wall_time_ms is not.  Timeout rows carry the timeout budget in
wall_time_ms and leave the operation columns blank.
"""

from __future__ import annotations

import csv
import io
import multiprocessing as mp
import os
import time
from collections import deque
from dataclasses import dataclass
from pathlib import Path

from .engine import DeadlineExceeded, decompose_with_stats
from .model import ExplicitMdp, MdpError, parse_mdp, serialize_mdp

CSV_COLUMNS = [
    "instance",
    "states",
    "actions",
    "transitions",
    "algo",
    "backend",
    "wall_time_ms",
    "pre_post_ops",
    "exists_ops",
    "basic_set_ops",
    "live_sets_peak",
    "recursion_depth_peak",
    "mec_count",
    "status",
]


@dataclass
class BenchRecord:
    instance: str
    states: int
    actions: int
    transitions: int
    algo: str
    backend: str
    wall_time_ms: float | None
    pre_post_ops: int | None
    exists_ops: int | None
    basic_set_ops: int | None
    live_sets_peak: int | None
    recursion_depth_peak: int | None
    mec_count: int | None
    status: str  # ok | timeout | error

    @property
    def symbolic_ops(self) -> int | None:
        if self.pre_post_ops is None or self.exists_ops is None:
            return None
        return self.pre_post_ops + self.exists_ops

    def row(self) -> list[str]:
        def cell(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return f"{v:.3f}"
            return str(v)

        return [cell(getattr(self, c)) for c in CSV_COLUMNS]

    @staticmethod
    def from_row(row: dict[str, str]) -> "BenchRecord":
        def num(v, conv):
            return conv(v) if v not in ("", None) else None

        return BenchRecord(
            instance=row["instance"],
            states=int(row["states"]),
            actions=int(row["actions"]),
            transitions=int(row["transitions"]),
            algo=row["algo"],
            backend=row["backend"],
            wall_time_ms=num(row["wall_time_ms"], float),
            pre_post_ops=num(row["pre_post_ops"], int),
            exists_ops=num(row["exists_ops"], int),
            basic_set_ops=num(row["basic_set_ops"], int),
            live_sets_peak=num(row["live_sets_peak"], int),
            recursion_depth_peak=num(row["recursion_depth_peak"], int),
            mec_count=num(row["mec_count"], int),
            status=row["status"],
        )


def _stub(name, mdp, algo, backend, status, wall_ms=None) -> BenchRecord:
    return BenchRecord(
        instance=name,
        states=mdp.num_states if mdp is not None else 0,
        actions=mdp.num_actions if mdp is not None else 0,
        transitions=mdp.num_transitions if mdp is not None else 0,
        algo=algo,
        backend=backend,
        wall_time_ms=wall_ms,
        pre_post_ops=None,
        exists_ops=None,
        basic_set_ops=None,
        live_sets_peak=None,
        recursion_depth_peak=None,
        mec_count=None,
        status=status,
    )


def run_record(
    name: str,
    mdp: ExplicitMdp,
    algo: str,
    backend: str,
    timeout_s: float | None = None,
) -> BenchRecord:
    """One measured decomposition, never raising: failures become rows."""
    try:
        result, stats = decompose_with_stats(
            mdp, algo=algo, backend=backend, timeout_s=timeout_s
        )
    except DeadlineExceeded:
        return _stub(
            name, mdp, algo, backend, "timeout",
            wall_ms=timeout_s * 1000.0 if timeout_s else None,
        )
    except Exception:
        return _stub(name, mdp, algo, backend, "error")
    return BenchRecord(
        instance=name,
        states=mdp.num_states,
        actions=mdp.num_actions,
        transitions=mdp.num_transitions,
        algo=algo,
        backend=backend,
        wall_time_ms=stats.wall_time_ms,
        pre_post_ops=stats.pre_post_ops,
        exists_ops=stats.exists_ops,
        basic_set_ops=stats.basic_set_ops,
        live_sets_peak=stats.live_sets_peak,
        recursion_depth_peak=stats.recursion_depth_peak,
        mec_count=len(result),
        status="ok",
    )


def load_suite(suite_dir: str | Path) -> list[tuple[str, ExplicitMdp | None]]:
    """All *.mdp files in a directory, sorted by name.

    Files that fail to parse load as None; the runner turns those into
    status=error rows instead of aborting the sweep.
    """
    suite = Path(suite_dir)
    if not suite.is_dir():
        raise MdpError(f"suite directory {suite} does not exist")
    out: list[tuple[str, ExplicitMdp | None]] = []
    for path in sorted(suite.glob("*.mdp")):
        try:
            out.append((path.stem, parse_mdp(path.read_text())))
        except (OSError, MdpError):
            out.append((path.stem, None))
    if not out:
        raise MdpError(f"suite directory {suite} holds no .mdp files")
    return out


def _worker(conn, text: str, name: str, algo: str, backend: str, timeout_s):
    try:
        rec = run_record(name, parse_mdp(text), algo, backend, timeout_s)
    except Exception:
        rec = None
    try:
        conn.send(rec)
    finally:
        conn.close()


def run_suite(
    instances: list[tuple[str, ExplicitMdp]],
    algos=("basic", "interleave"),
    backends=("bitset", "bdd"),
    timeout_s: float | None = 240.0,
    jobs: int = 1,
) -> list[BenchRecord]:
    """One record per (instance, algo, backend), rows in deterministic order.

    With jobs > 1 each task runs in an isolated worker process (one backend
    instance per worker); the cooperative deadline fires inside the worker
    and a hard watchdog kills workers that overrun twice the budget.
    """
    tasks = [
        (name, mdp, algo, backend)
        for name, mdp in instances
        for algo in algos
        for backend in backends
    ]
    if jobs <= 1:
        return [
            run_record(name, mdp, algo, backend, timeout_s)
            if mdp is not None
            else _stub(name, None, algo, backend, "error")
            for name, mdp, algo, backend in tasks
        ]

    results: dict[int, BenchRecord] = {}
    pending = deque(enumerate(tasks))
    running: list[tuple[int, mp.Process, object, float | None]] = []
    while pending or running:
        while pending and len(running) < jobs:
            idx, (name, mdp, algo, backend) = pending.popleft()
            if mdp is None:
                results[idx] = _stub(name, None, algo, backend, "error")
                continue
            parent, child = mp.Pipe(duplex=False)
            proc = mp.Process(
                target=_worker,
                args=(child, serialize_mdp(mdp), name, algo, backend, timeout_s),
            )
            proc.start()
            child.close()
            hard_at = time.monotonic() + 2 * timeout_s if timeout_s else None
            running.append((idx, proc, parent, hard_at))
        progressed = False
        still: list[tuple[int, mp.Process, object, float | None]] = []
        for idx, proc, parent, hard_at in running:
            name, mdp, algo, backend = tasks[idx]
            rec = None
            if parent.poll(0):
                try:
                    rec = parent.recv()
                except EOFError:
                    rec = None
                if rec is None:
                    rec = _stub(name, mdp, algo, backend, "error")
            elif not proc.is_alive():
                rec = _stub(name, mdp, algo, backend, "error")
            elif hard_at is not None and time.monotonic() > hard_at:
                proc.terminate()
                rec = _stub(
                    name, mdp, algo, backend, "timeout",
                    wall_ms=timeout_s * 1000.0 if timeout_s else None,
                )
            if rec is None:
                still.append((idx, proc, parent, hard_at))
                continue
            proc.join(1.0)
            if proc.is_alive():
                proc.kill()
                proc.join()
            parent.close()
            results[idx] = rec
            progressed = True
        running = still
        if running and not progressed:
            time.sleep(0.01)
    return [results[i] for i in range(len(tasks))]


def write_csv(records: list[BenchRecord], path: str | Path | None = None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.row())
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text)
    return text


def read_csv(path: str | Path) -> list[BenchRecord]:
    with open(path, newline="") as fh:
        return [BenchRecord.from_row(row) for row in csv.DictReader(fh)]


def default_seed() -> int:
    """Generator seed default, overridable via the MECDEC_SEED env var."""
    return int(os.environ.get("MECDEC_SEED", "0"))
