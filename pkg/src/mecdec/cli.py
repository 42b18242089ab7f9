"""Command-line interface.

Exit codes: 0 success, 2 usage, 3 parse/validation/input failure,
4 failed verification (either --check or a compare disagreement).
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from .backends import BACKENDS, make_backend
from .bench import BenchRecord, default_seed, load_suite, run_suite, write_csv
from .engine import (
    ALGORITHMS,
    CheckFailure,
    build_symbolic_graph,
    decompose_with_stats,
)
from .generate import GeneratorParams, random_mdp
from .model import MdpError, builtin_example, parse_mdp, serialize_mdp
from .oracle import mec_decomposition, verify_decomposition
from .reachability import scc_decomposition

EXIT_INPUT = 3
EXIT_CHECK = 4


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _load(input_path: str | None, example: str | None):
    if (input_path is None) == (example is None):
        raise click.UsageError("provide exactly one of --input or --example")
    try:
        if example is not None:
            return builtin_example(example)
        return parse_mdp(Path(input_path).read_text())
    except OSError as exc:
        _fail(EXIT_INPUT, f"cannot read {input_path}: {exc.strerror or exc}")
    except MdpError as exc:
        _fail(EXIT_INPUT, str(exc))


def _split_list(value: str, allowed: tuple[str, ...], what: str) -> list[str]:
    items = [v.strip() for v in value.split(",") if v.strip()]
    if not items:
        raise click.UsageError(f"empty {what} list")
    for item in items:
        if item not in allowed:
            raise click.UsageError(f"unknown {what} {item!r}; choose from {', '.join(allowed)}")
    return items


input_opt = click.option("--input", "input_path", type=str, default=None, help="MDP file to read.")
example_opt = click.option("--example", type=str, default=None, help="Built-in example name.")


@click.group()
def main():
    """Maximal end component decomposition for MDPs, symbolically."""


@main.command()
@input_opt
@example_opt
@click.option("--algo", type=click.Choice(ALGORITHMS), default="interleave", show_default=True)
@click.option("--backend", type=click.Choice(sorted(BACKENDS)), default="bitset", show_default=True)
@click.option("--start", type=int, default=None, help="Start vertex for the first SCC search.")
@click.option("--check", is_flag=True, help="Run oracle-backed runtime checks; exit 4 on violation.")
@click.option("--stats", "stats_path", type=str, default=None, help="Write key=value stats here.")
@click.option("--output", type=str, default=None, help="Write the MEC document here instead of stdout.")
def decompose(input_path, example, algo, backend, start, check, stats_path, output):
    """Decompose one MDP and print its MEC document."""
    mdp = _load(input_path, example)
    if start is not None and not 0 <= start < mdp.num_states:
        raise click.UsageError(f"start vertex {start} out of range [0, {mdp.num_states})")
    try:
        result, stats = decompose_with_stats(
            mdp, algo=algo, backend=backend, start=start, check=check
        )
    except CheckFailure as exc:
        for problem in exc.problems:
            click.echo(f"check: {problem}", err=True)
        _fail(EXIT_CHECK, f"{len(exc.problems)} check violation(s)")
    doc = result.to_document()
    if output is not None:
        Path(output).write_text(doc)
    else:
        click.echo(doc, nl=False)
    if stats_path is not None:
        lines = [
            f"instance={input_path or example}",
            f"algo={algo}",
            f"backend={backend}",
            f"mec_count={len(result)}",
            f"pre_post_ops={stats.pre_post_ops}",
            f"exists_ops={stats.exists_ops}",
            f"basic_set_ops={stats.basic_set_ops}",
            f"cardinality_ops={stats.cardinality_ops}",
            f"pick_ops={stats.pick_ops}",
            f"live_sets_peak={stats.live_sets_peak}",
            f"recursion_depth_peak={stats.recursion_depth_peak}",
            f"wall_time_ms={stats.wall_time_ms:.3f}",
        ]
        Path(stats_path).write_text("\n".join(lines) + "\n")


@main.command()
@input_opt
@example_opt
@click.option("--algos", default="basic,interleave", show_default=True, help="Comma-separated algorithms.")
@click.option("--backends", default="bitset,bdd", show_default=True, help="Comma-separated backends.")
@click.option("--start", type=int, default=None)
def compare(input_path, example, algos, backends, start):
    """Run every algorithm/backend pair; exit 4 if any result disagrees."""
    algo_list = _split_list(algos, ALGORITHMS, "algorithm")
    backend_list = _split_list(backends, tuple(sorted(BACKENDS)), "backend")
    mdp = _load(input_path, example)
    name = input_path or example
    records: list[BenchRecord] = []
    results = []
    for algo in algo_list:
        for backend in backend_list:
            result, stats = decompose_with_stats(
                mdp, algo=algo, backend=backend, start=start
            )
            results.append(result)
            records.append(run_record_from(name, mdp, algo, backend, result, stats))
    header = ["algo", "backend", "mecs", "pre_post", "exists", "basic", "live_peak", "depth", "ms"]
    widths = [10, 8, 6, 9, 7, 8, 9, 6, 9]
    click.echo("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for rec in records:
        cells = [
            rec.algo,
            rec.backend,
            str(rec.mec_count),
            str(rec.pre_post_ops),
            str(rec.exists_ops),
            str(rec.basic_set_ops),
            str(rec.live_sets_peak),
            str(rec.recursion_depth_peak),
            f"{rec.wall_time_ms:.2f}",
        ]
        click.echo("  ".join(c.ljust(w) for c, w in zip(cells, widths)))
    if any(r != results[0] for r in results[1:]):
        _fail(EXIT_CHECK, "algorithm/backend pairs disagree on the decomposition")


def run_record_from(name, mdp, algo, backend, result, stats) -> BenchRecord:
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


@main.command()
@click.option("--suite", type=str, default=None, help="Directory of .mdp instances.")
@click.option("--csv", "csv_path", type=str, required=True, help="Output CSV path.")
@click.option("--timeout-s", type=float, default=240.0, show_default=True)
@click.option("--jobs", type=int, default=1, show_default=True)
@click.option("--seed-sweep", type=int, default=0, show_default=True,
              help="Additionally bench N generated instances (seeds base..base+N-1).")
@click.option("--algos", default="basic,interleave", show_default=True)
@click.option("--backends", default="bitset,bdd", show_default=True)
def bench(suite, csv_path, timeout_s, jobs, seed_sweep, algos, backends):
    """Benchmark a suite; one CSV row per (instance, algo, backend)."""
    algo_list = _split_list(algos, ALGORITHMS, "algorithm")
    backend_list = _split_list(backends, tuple(sorted(BACKENDS)), "backend")
    if suite is None and seed_sweep <= 0:
        raise click.UsageError("provide --suite and/or --seed-sweep N")
    instances = []
    if suite is not None:
        try:
            instances.extend(load_suite(suite))
        except MdpError as exc:
            _fail(EXIT_INPUT, str(exc))
    base = default_seed()
    for i in range(seed_sweep):
        params = GeneratorParams(40, 3, 0.4, 2, seed=base + i)
        instances.append((f"gen-s{base + i}", random_mdp(params)))
    records = run_suite(
        instances,
        algos=algo_list,
        backends=backend_list,
        timeout_s=timeout_s,
        jobs=jobs,
    )
    write_csv(records, csv_path)
    ok = sum(1 for r in records if r.status == "ok")
    click.echo(f"{len(records)} rows ({ok} ok) -> {csv_path}")


@main.command("gen-random")
@click.option("--states", type=int, required=True)
@click.option("--actions", type=int, required=True)
@click.option("--enable-p", type=float, default=0.5, show_default=True)
@click.option("--branch-max", type=int, default=2, show_default=True)
@click.option("--seed", type=int, default=None, help="Defaults to MECDEC_SEED or 0.")
@click.option("--out", type=str, required=True)
def gen_random(states, actions, enable_p, branch_max, seed, out):
    """Write a random MDP instance file."""
    if seed is None:
        seed = default_seed()
    try:
        params = GeneratorParams(states, actions, enable_p, branch_max, seed)
        mdp = random_mdp(params)
    except MdpError as exc:
        _fail(EXIT_INPUT, str(exc))
    Path(out).write_text(serialize_mdp(mdp))
    click.echo(f"{states} states, {actions} actions, {mdp.num_transitions} transitions -> {out}")


@main.command()
@input_opt
@example_opt
@click.option("--backend", type=click.Choice(sorted(BACKENDS)), default="bitset", show_default=True)
def scc(input_path, example, backend):
    """Print the SCCs of the underlying graph, one sorted id list per line.

    Debugging surface for the symbolic SCC decomposition; `check` covers
    the explicit side.
    """
    mdp = _load(input_path, example)
    be = make_backend(backend, mdp.num_states, mdp.num_actions)
    graph = build_symbolic_graph(be, mdp)
    comps = [be.states_of(c) for c in scc_decomposition(be, graph)]
    for comp in sorted(comps):
        click.echo(" ".join(str(s) for s in comp))


@main.command()
@input_opt
@example_opt
@click.option("--backend", type=click.Choice(sorted(BACKENDS)), default="bitset", show_default=True)
def check(input_path, example, backend):
    """Cross-validate both algorithms against the explicit oracle."""
    mdp = _load(input_path, example)
    expected = mec_decomposition(mdp)
    failures = []
    for algo in ALGORITHMS:
        result, _ = decompose_with_stats(mdp, algo=algo, backend=backend)
        if result != expected:
            failures.append(algo)
            verdict = verify_decomposition(mdp, result)
            for problem in verdict.problems:
                click.echo(f"{algo}: {problem}", err=True)
    if failures:
        _fail(EXIT_CHECK, f"disagreement with oracle: {', '.join(failures)}")
    click.echo("OK")


if __name__ == "__main__":
    main()
