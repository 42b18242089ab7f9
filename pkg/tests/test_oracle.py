from helpers import graph_triples, random_instances, scc_reachability

from mecdec import (
    ExplicitGraph,
    builtin_example,
    mec_decomposition,
    tarjan_scc,
    underlying_graph,
    verify_decomposition,
)
from mecdec.model import ExplicitMdp, Transition
from mecdec.result import Mec, MecResult


def as_sets(comps):
    return {frozenset(c) for c in comps}


def test_tarjan_on_fig1_finds_the_two_true_sccs():
    # b2/b4 connect states 1 and 3 both ways, so {0,1,2,3,5} is one SCC of
    # the unmodified graph; the three-way split only appears after b4 goes.
    g = underlying_graph(builtin_example("fig1"))
    assert as_sets(tarjan_scc(g)) == {frozenset({4}), frozenset({0, 1, 2, 3, 5})}


def test_tarjan_on_fig1_without_b4_pair():
    m = builtin_example("fig1")
    edges = frozenset(e for e in underlying_graph(m).edges if (e[0], e[1]) != (3, 5))
    g = ExplicitGraph(6, 8, edges)
    assert as_sets(tarjan_scc(g)) == {
        frozenset({4}),
        frozenset({0, 1}),
        frozenset({2, 3, 5}),
    }


def test_tarjan_empty_graph():
    assert tarjan_scc(ExplicitGraph(0, 1, frozenset())) == []


def test_tarjan_matches_reachability_definition_on_random_graphs():
    for m in random_instances(60):
        triples = graph_triples(m)
        got = sorted(tarjan_scc(underlying_graph(m)))
        assert got == scc_reachability(m.num_states, triples)


def test_tarjan_handles_long_paths_iteratively():
    n = 3000
    ts = [Transition(i, 0, i + 1, 1.0) for i in range(n - 1)]
    ts.append(Transition(n - 1, 0, n - 1, 1.0))
    g = underlying_graph(ExplicitMdp(n, 1, tuple(ts)))
    assert len(tarjan_scc(g)) == n


def test_mec_decomposition_fig1():
    got = mec_decomposition(builtin_example("fig1"))
    assert got == MecResult(
        (
            Mec((0, 1), ((0, 0, 1), (1, 1, 0))),
            Mec((2, 3, 5), ((2, 3, 3), (3, 4, 5), (5, 7, 2))),
            Mec((4,), ((4, 6, 4),)),
        )
    )


def test_mec_decomposition_selfloop():
    got = mec_decomposition(builtin_example("selfloop1"))
    assert got == MecResult((Mec((0,), ((0, 0, 0),)),))


def _cycle_with_sink(escape_only: bool) -> ExplicitMdp:
    # States 0,1,2 in a cycle, 3 a sink self-loop.  Hand-simulated worklist:
    # with a dedicated cycle action the cycle is a component of its own;
    # when every cycle state's only action can fall into the sink, only the
    # sink remains.
    ts = []
    for i in range(3):
        if escape_only:
            ts.append(Transition(i, 0, (i + 1) % 3, 0.5))
            ts.append(Transition(i, 0, 3, 0.5))
        else:
            ts.append(Transition(i, 0, (i + 1) % 3, 1.0))
            ts.append(Transition(i, 1, 3, 1.0))
    ts.append(Transition(3, 0, 3, 1.0))
    num_actions = 1 if escape_only else 2
    return ExplicitMdp(4, num_actions, tuple(ts))


def test_cycle_with_probabilistic_escape_everywhere_leaves_only_the_sink():
    got = mec_decomposition(_cycle_with_sink(escape_only=True))
    assert got == MecResult((Mec((3,), ((3, 0, 3),)),))


def test_cycle_with_separate_escape_action_keeps_the_cycle():
    got = mec_decomposition(_cycle_with_sink(escape_only=False))
    assert [m.states for m in got.mecs] == [(0, 1, 2), (3,)]


def test_mec_decomposition_is_permutation_invariant():
    def permute(mdp: ExplicitMdp, perm: list[int]) -> ExplicitMdp:
        ts = tuple(
            Transition(perm[s], a, perm[t], p) for s, a, t, p in mdp.transitions
        )
        return ExplicitMdp(mdp.num_states, mdp.num_actions, ts)

    import random

    for m in random_instances(25):
        perm = list(range(m.num_states))
        random.Random(m.num_states).shuffle(perm)
        inv = {perm[i]: i for i in range(m.num_states)}
        permuted = mec_decomposition(permute(m, perm))
        mapped = MecResult.canonical(
            (
                [inv[s] for s in mec.states],
                [(inv[s], a, inv[t]) for s, a, t in mec.edges],
            )
            for mec in permuted.mecs
        )
        assert mapped == mec_decomposition(m)


def test_every_oracle_mec_passes_verification():
    for m in random_instances(40):
        verdict = verify_decomposition(m, mec_decomposition(m))
        assert verdict.ok, verdict.problems


def test_verification_catches_missing_component():
    m = builtin_example("fig1")
    full = mec_decomposition(m)
    broken = MecResult(tuple(mec for mec in full.mecs if mec.states != (0, 1)))
    verdict = verify_decomposition(m, broken)
    assert not verdict.ok
    assert any("missing component" in p for p in verdict.problems)


def test_verification_catches_structural_damage():
    m = builtin_example("fig1")
    full = mec_decomposition(m)
    # stitch two components together: not strongly connected, not self-contained
    merged = Mec(
        tuple(sorted(full.mecs[0].states + full.mecs[2].states)),
        tuple(sorted(full.mecs[0].edges + full.mecs[2].edges)),
    )
    verdict = verify_decomposition(m, MecResult((merged, full.mecs[1])))
    assert not verdict.ok
    assert any("not strongly connected" in p for p in verdict.problems)
