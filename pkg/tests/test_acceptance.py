"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines; the whole module is sized to finish in well under two minutes on a
laptop-class machine.
"""

import math
import statistics
import time
from pathlib import Path

import pytest
from click.testing import CliRunner

from mecdec import (
    GeneratorParams,
    builtin_example,
    chain_of_cycles,
    mec_decomposition,
    path_of_sccs,
    random_mdp,
)
from mecdec.backends import make_backend
from mecdec.bench import load_suite, read_csv, run_suite
from mecdec.cli import main as cli_main
from mecdec.engine import (
    RuntimeChecker,
    build_symbolic_graph,
    decompose_basic,
    decompose_interleave,
    decompose_with_stats,
)
from mecdec.result import Mec, MecResult

REPO = Path(__file__).resolve().parent.parent

FIG1_MECS = MecResult(
    (
        Mec((0, 1), ((0, 0, 1), (1, 1, 0))),
        Mec((2, 3, 5), ((2, 3, 3), (3, 4, 5), (5, 7, 2))),
        Mec((4,), ((4, 6, 4),)),
    )
)

SUITE_SIZE = 1000


def depth_bound(states: int) -> int:
    return math.ceil(math.log(states, 1.5)) + 1 if states > 1 else 1


def suite_params(i: int) -> GeneratorParams:
    return GeneratorParams(
        num_states=2 + (i * 7) % 49,            # 2..50
        num_actions=1 + i % 4,                  # 1..4
        enable_prob=(0.15, 0.3, 0.5, 0.8)[i % 4],
        branch_max=1 + i % 3,
        seed=i,
    )


@pytest.fixture(scope="module")
def suite():
    return [random_mdp(suite_params(i)) for i in range(SUITE_SIZE)]


@pytest.fixture(scope="module")
def runs(suite):
    """Everything the shared criteria need, computed once per instance."""
    table = {
        "oracle": [],
        ("basic", "bitset"): [],
        ("interleave", "bitset"): [],
        ("basic", "bdd"): [],
        ("interleave", "bdd"): [],
    }
    t0 = time.perf_counter()
    for m in suite:
        table["oracle"].append(mec_decomposition(m))
        for algo in ("basic", "interleave"):
            table[(algo, "bitset")].append(decompose_with_stats(m, algo, "bitset"))
    equivalence_elapsed = time.perf_counter() - t0
    for m in suite:
        for algo in ("basic", "interleave"):
            table[(algo, "bdd")].append(decompose_with_stats(m, algo, "bdd"))
    table["equivalence_elapsed"] = equivalence_elapsed
    return table


def _parse_document(doc: str):
    mecs = []
    states, edges = None, None
    for line in doc.splitlines():
        kind = line.split()[0]
        if kind == "mec":
            if states is not None:
                mecs.append((states, edges))
            states, edges = [], []
        elif kind == "s":
            states = [int(x) for x in line.split()[1:]]
        elif kind == "e":
            s, a, t = (int(x) for x in line.split()[1:])
            edges.append((s, a, t))
    if states is not None:
        mecs.append((states, edges))
    return MecResult.canonical(mecs)


def test_c1_fig1_ground_truth_via_cli():
    runner = CliRunner()
    for algo in ("basic", "interleave"):
        for backend in ("bitset", "bdd"):
            res = runner.invoke(
                cli_main,
                ["decompose", "--example", "fig1", "--algo", algo, "--backend", backend],
            )
            assert res.exit_code == 0
            assert _parse_document(res.output) == FIG1_MECS
    print("ACCEPTANCE fig1-ground-truth: PASS (2 algos x 2 backends, exact set equality)")


def test_c2_oracle_equivalence_over_1000_random_mdps(suite, runs):
    mismatches = 0
    for i in range(len(suite)):
        expected = runs["oracle"][i]
        if runs[("basic", "bitset")][i][0] != expected:
            mismatches += 1
        if runs[("interleave", "bitset")][i][0] != expected:
            mismatches += 1
    assert mismatches == 0
    elapsed = runs["equivalence_elapsed"]
    assert elapsed < 120.0, f"equivalence sweep took {elapsed:.1f}s"
    print(
        f"ACCEPTANCE oracle-equivalence: PASS ({len(suite)} instances, zero"
        f" tolerance, {elapsed:.1f}s)"
    )


def test_c3_runtime_checks_report_zero_violations(suite, runs):
    total = 0
    for i, m in enumerate(suite):
        checker = RuntimeChecker(m, expected=runs["oracle"][i])
        be = make_backend("bitset", m.num_states, m.num_actions)
        graph = build_symbolic_graph(be, m)
        result = decompose_interleave(be, graph, checker=checker)
        assert result == runs["oracle"][i]
        checker_basic = RuntimeChecker(m, expected=runs["oracle"][i])
        be2 = make_backend("bitset", m.num_states, m.num_actions)
        decompose_basic(be2, build_symbolic_graph(be2, m), checker=checker_basic)
        total += len(checker.violations) + len(checker_basic.violations)
        assert checker.violations == []
        assert checker_basic.violations == []
    # the CLI surface drives the same hooks
    res = CliRunner().invoke(cli_main, ["decompose", "--example", "fig1", "--check"])
    assert res.exit_code == 0
    print(
        f"ACCEPTANCE runtime-checks: PASS ({len(suite)} instances, {total} violations)"
    )


def test_c4_backend_equivalence(suite, runs):
    for i in range(len(suite)):
        for algo in ("basic", "interleave"):
            r_bit, s_bit = runs[(algo, "bitset")][i]
            r_bdd, s_bdd = runs[(algo, "bdd")][i]
            assert r_bit == r_bdd, f"instance {i} {algo}: results differ"
            assert (
                s_bit.pre_post_ops,
                s_bit.exists_ops,
                s_bit.pick_ops,
            ) == (
                s_bdd.pre_post_ops,
                s_bdd.exists_ops,
                s_bdd.pick_ops,
            ), f"instance {i} {algo}: counters differ"
    print(
        f"ACCEPTANCE backend-equivalence: PASS ({len(suite)} instances x 2"
        " algorithms, identical results and counters)"
    )


def test_c5_space_bound(suite, runs):
    for i, m in enumerate(suite):
        bound = depth_bound(m.num_states)
        for key in (("basic", "bitset"), ("interleave", "bitset")):
            depth = runs[key][i][1].recursion_depth_peak
            assert depth <= bound, f"instance {i}: depth {depth} > bound {bound}"
    checked = len(suite)
    for num_sccs, size in ((125, 2), (250, 2), (500, 2), (1000, 2), (500, 4)):
        m = path_of_sccs(num_sccs, size)
        bound = depth_bound(m.num_states)
        for algo in ("basic", "interleave"):
            result, stats = decompose_with_stats(m, algo=algo)
            assert len(result) == num_sccs
            assert stats.recursion_depth_peak <= bound
        checked += 1
    print(
        f"ACCEPTANCE space-bound: PASS ({checked} instances incl. 2000-state"
        " path family, depth <= ceil(log_1.5 n)+1)"
    )


def _fit_exponent(sizes, ops):
    lx = [math.log(x) for x in sizes]
    ly = [math.log(y) for y in ops]
    mx, my = statistics.mean(lx), statistics.mean(ly)
    return sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum(
        (a - mx) ** 2 for a in lx
    )


def test_c6_operation_growth_on_cycle_chains():
    sizes, inter_ops, basic_ops = [], [], []
    for k in (16, 32, 64, 128, 256):
        m = chain_of_cycles(k, 3)
        _, si = decompose_with_stats(m, algo="interleave")
        _, sb = decompose_with_stats(m, algo="basic")
        sizes.append(m.num_states)
        inter_ops.append(si.symbolic_ops)
        basic_ops.append(sb.symbolic_ops)
    exponent = _fit_exponent(sizes, inter_ops)
    baseline_exponent = _fit_exponent(sizes, basic_ops)
    assert exponent <= 2.1, f"fitted exponent {exponent:.3f}"
    print(
        f"ACCEPTANCE operation-growth: PASS (interleave exponent"
        f" {exponent:.3f} <= 2.1; baseline {baseline_exponent:.3f})"
    )


def test_c7_fig1_redundancy_elimination():
    fig1 = builtin_example("fig1")
    _, si = decompose_with_stats(fig1, algo="interleave", start=4)
    _, sb = decompose_with_stats(fig1, algo="basic", start=4)
    assert si.symbolic_ops < sb.symbolic_ops
    print(
        f"ACCEPTANCE fig1-redundancy: PASS (interleave {si.symbolic_ops} <"
        f" basic {sb.symbolic_ops} pre/post+exists ops from the sink start)"
    )


def test_c8_desk_suite_artifact_and_median_ratio():
    csv_path = REPO / "bench" / "desk_suite.csv"
    suite_dir = REPO / "bench" / "suite"
    records = read_csv(csv_path)
    instances = load_suite(suite_dir)
    assert len(instances) == 50
    assert len(records) == 50 * 2 * 2
    assert all(r.status == "ok" for r in records)

    by_key = {(r.instance, r.algo, r.backend): r for r in records}
    ratios = []
    for name, _ in instances:
        basic = by_key[(name, "basic", "bitset")]
        inter = by_key[(name, "interleave", "bitset")]
        ratios.append(basic.symbolic_ops / inter.symbolic_ops)
    median = statistics.median(ratios)
    assert median > 1.0

    # the committed op-count columns reproduce bit-for-bit
    fresh = run_suite(instances, timeout_s=240.0)
    strip = lambda r: (
        r.instance, r.algo, r.backend, r.states, r.actions, r.transitions,
        r.pre_post_ops, r.exists_ops, r.basic_set_ops, r.live_sets_peak,
        r.recursion_depth_peak, r.mec_count, r.status,
    )
    assert sorted(map(strip, fresh)) == sorted(map(strip, records))
    print(
        f"ACCEPTANCE desk-suite: PASS (median basic/interleave ratio"
        f" {median:.3f} > 1.0 over 50 committed instances; CSV reproduced)"
    )
