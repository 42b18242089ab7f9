"""Maximal end component decomposition engines.

Two algorithms over the same backend contract:

* decompose_basic: full SCC decomposition first, then per-SCC trimming of
  pairs that escape the component, re-decomposing remainders until stable.
* decompose_interleave: computes one SCC at a time and eagerly removes the
  absorbing closure of escaping pairs from the two non-SCC partitions
  before recursing, so pairs that can never sit in any component are never
  processed again.

Both release intermediate handles eagerly and process sub-problems in
increasing vertex-set size with the largest handled by tail iteration,
keeping recursion depth (and hence peak live sets) logarithmic.
"""

from __future__ import annotations

import time

from .backends import make_backend
from .backends.base import Handle, OpStats, SymbolicBackend, SymbolicGraph
from .model import ExplicitMdp
from .oracle import mec_decomposition as oracle_decomposition
from .oracle import verify_decomposition
from .reachability import contains_vertex, scc_decomposition, scc_of_vertex
from .result import MecResult

ALGORITHMS = ("basic", "interleave")


class DeadlineExceeded(Exception):
    """Cooperative timeout raised at a recursion boundary."""


class CheckFailure(Exception):
    """Runtime verification found violations; carries their descriptions."""

    def __init__(self, problems: list[str]):
        super().__init__("; ".join(problems[:5]) + ("..." if len(problems) > 5 else ""))
        self.problems = problems


def _check_deadline(deadline: float | None):
    if deadline is not None and time.monotonic() > deadline:
        raise DeadlineExceeded()


def escaping_pairs(be: SymbolicBackend, U: Handle, graph: SymbolicGraph) -> Handle:
    """State-action pairs of U with an edge leaving U (within the graph)."""
    outside = be.difference(graph.vertices, U)
    into_outside = be.pairs_into(outside, graph.edges)
    be.release(outside)
    pairs = be.restrict_pairs_to_sources(into_outside, U)
    be.release(into_outside)
    return pairs


def attractor(be: SymbolicBackend, X: Handle, graph: SymbolicGraph) -> tuple[Handle, Handle]:
    """Least fixed point absorbing states whose every enabled action is
    already doomed, and pairs that can reach such states.

    Returns (states, pairs); the input pair set is contained in the output
    pair set and is not consumed.  The enabled-pairs projection is loop
    invariant and computed once, on first loop entry.
    """
    prev_states, prev_pairs = be.empty_vertices(), be.empty_pairs()
    states, pairs = be.empty_vertices(), be.clone(X)
    enabled = None
    while not (be.equal(states, prev_states) and be.equal(pairs, prev_pairs)):
        be.release(prev_states)
        be.release(prev_pairs)
        prev_states, prev_pairs = states, pairs
        if enabled is None:
            enabled = be.enabled_pairs(graph.edges)
        alive = be.difference(enabled, prev_pairs)
        alive_states = be.pair_sources(alive)
        be.release(alive)
        doomed = be.difference(graph.vertices, alive_states)
        be.release(alive_states)
        states = be.union(prev_states, doomed)
        be.release(doomed)
        reaching = be.pairs_into(prev_states, graph.edges)
        pairs = be.union(prev_pairs, reaching)
        be.release(reaching)
    be.release(prev_states)
    be.release(prev_pairs)
    if enabled is not None:
        be.release(enabled)
    return states, pairs


class RuntimeChecker:
    """Runtime verification hooks for check mode.

    Works entirely on enumerated explicit data so enabling it perturbs no
    operation counter.  Violations are collected, not raised, so a full run
    can report all of them.
    """

    def __init__(self, mdp: ExplicitMdp, expected: MecResult | None = None):
        if expected is None:
            expected = oracle_decomposition(mdp)
        self.mec_states = {s for m in expected.mecs for s in m.states}
        self.mec_pairs = {(s, a) for m in expected.mecs for s, a, _ in m.edges}
        self.violations: list[str] = []

    def on_removed(self, be: SymbolicBackend, states: Handle, pairs: Handle):
        for s in be.states_of(states):
            if s in self.mec_states:
                self.violations.append(
                    f"removed state {s} belongs to a maximal end component"
                )
        for s, a in be.pairs_of(pairs):
            if (s, a) in self.mec_pairs:
                self.violations.append(
                    f"removed pair ({s},{a}) belongs to a maximal end component"
                )

    def on_downstream_partition(self, be: SymbolicBackend, part: Handle, edges: Handle):
        inside = set(be.states_of(part))
        if not inside:
            return
        seen = set()
        for s, a, t in be.triples_of(edges):
            if s in inside and t not in inside and (s, a) not in seen:
                seen.add((s, a))
                self.violations.append(
                    f"downstream partition has escaping pair ({s},{a})"
                )


def decompose_interleave(
    be: SymbolicBackend,
    graph: SymbolicGraph,
    start: int | None = None,
    checker: RuntimeChecker | None = None,
    deadline: float | None = None,
) -> MecResult:
    """Interleaved decomposition of a component-closed sub-MDP graph."""
    out: list[tuple[list[int], list[tuple[int, int, int]]]] = []
    if not be.is_empty(graph.vertices):
        vertices = be.clone(graph.vertices)
        edges = be.clone(graph.edges)
        be.enter_call()
        try:
            _interleave_from(be, vertices, edges, start, out, checker, deadline)
        finally:
            be.exit_call()
    return MecResult.canonical(out)


def _interleave_from(be, vertices, edges, start, out, checker, deadline):
    # owns vertices/edges; tail-iterates on the largest sub-problem
    while True:
        _check_deadline(deadline)
        graph = SymbolicGraph(vertices, edges)
        v = start if start is not None else be.pick(vertices)
        res = scc_of_vertex(be, v, graph)
        scc, fwd = res.scc, res.fwd
        children: list[tuple[Handle, Handle, int | None]] = []

        # The SCC itself: emit if nothing escapes, else trim and recurse.
        esc = escaping_pairs(be, scc, graph)
        doomed, removed = attractor(be, esc, graph)
        be.release(esc)
        if be.is_empty(removed):
            assert be.is_empty(doomed)
            mec_edges = be.restrict_relation(edges, scc)
            out.append((be.states_of(scc), be.triples_of(mec_edges)))
            be.release(mec_edges)
        else:
            if checker is not None:
                checker.on_removed(be, doomed, removed)
            trimmed_edges = be.remove_pairs_from_relation(edges, removed)
            survivors = be.difference(scc, doomed)
            if be.is_empty(survivors):
                be.release(survivors)
            else:
                sub_edges = be.restrict_relation(trimmed_edges, survivors)
                children.append((survivors, sub_edges, None))
            be.release(trimmed_edges)
        be.release(doomed)
        be.release(removed)

        # Forward-reachable beyond the SCC: nothing can escape it, recurse
        # directly, seeded with the max-distance vertex (when it landed in
        # this partition rather than inside the SCC).
        downstream = be.difference(fwd, scc)
        if checker is not None:
            checker.on_downstream_partition(be, downstream, edges)
        if be.is_empty(downstream):
            be.release(downstream)
        else:
            seed = (
                res.new_start
                if contains_vertex(be, downstream, res.new_start)
                else None
            )
            sub_edges = be.restrict_relation(edges, downstream)
            children.append((downstream, sub_edges, seed))

        # Not forward-reachable: trim the absorbing closure of its escaping
        # pairs now, before that work is redone inside the partition.
        rest = be.difference(vertices, fwd)
        esc = escaping_pairs(be, rest, graph)
        doomed, removed = attractor(be, esc, graph)
        be.release(esc)
        if checker is not None:
            checker.on_removed(be, doomed, removed)
        trimmed_edges = be.remove_pairs_from_relation(edges, removed)
        survivors = be.difference(rest, doomed)
        if be.is_empty(survivors):
            be.release(survivors)
        else:
            sub_edges = be.restrict_relation(trimmed_edges, survivors)
            children.append((survivors, sub_edges, None))
        be.release(trimmed_edges)
        be.release(doomed)
        be.release(removed)
        be.release(rest)

        be.release(scc)
        be.release(fwd)
        be.release(vertices)
        be.release(edges)
        if not children:
            return
        sizes = [be.cardinality(c[0]) for c in children]
        order = sorted(range(len(children)), key=lambda i: (sizes[i], i))
        for i in order[:-1]:
            sub_v, sub_e, sub_s = children[i]
            be.enter_call()
            try:
                _interleave_from(be, sub_v, sub_e, sub_s, out, checker, deadline)
            finally:
                be.exit_call()
        vertices, edges, start = children[order[-1]]


def decompose_basic(
    be: SymbolicBackend,
    graph: SymbolicGraph,
    start: int | None = None,
    checker: RuntimeChecker | None = None,
    deadline: float | None = None,
) -> MecResult:
    """Baseline: SCC-decompose fully, then trim each component and repeat."""
    out: list[tuple[list[int], list[tuple[int, int, int]]]] = []
    if be.is_empty(graph.vertices):
        return MecResult.canonical(out)
    work: list[tuple[Handle, Handle, int | None]] = [
        (be.clone(graph.vertices), be.clone(graph.edges), start)
    ]
    while work:
        vertices, edges, st = work.pop()
        _check_deadline(deadline)
        sub = SymbolicGraph(vertices, edges)
        for comp in scc_decomposition(be, sub, start=st):
            esc = escaping_pairs(be, comp, sub)
            if be.is_empty(esc):
                mec_edges = be.restrict_relation(edges, comp)
                out.append((be.states_of(comp), be.triples_of(mec_edges)))
                be.release(mec_edges)
            else:
                # Seed the absorption with every escaping pair over the
                # component graph: a state whose actions all escape has no
                # enabled pair left there and dissolves on the first pass.
                comp_edges = be.restrict_relation(edges, comp)
                doomed, removed = attractor(be, esc, SymbolicGraph(comp, comp_edges))
                if checker is not None:
                    checker.on_removed(be, doomed, removed)
                survivors = be.difference(comp, doomed)
                if be.is_empty(survivors):
                    be.release(survivors)
                else:
                    trimmed = be.remove_pairs_from_relation(comp_edges, removed)
                    sub_edges = be.restrict_relation(trimmed, survivors)
                    be.release(trimmed)
                    work.append((survivors, sub_edges, None))
                be.release(comp_edges)
                be.release(doomed)
                be.release(removed)
            be.release(esc)
            be.release(comp)
        be.release(vertices)
        be.release(edges)
    return MecResult.canonical(out)


def build_symbolic_graph(be: SymbolicBackend, mdp: ExplicitMdp) -> SymbolicGraph:
    """Encode the underlying graph of an MDP into backend handles."""
    return SymbolicGraph(
        vertices=be.full_vertices(),
        edges=be.relation(mdp.support()),
    )


def decompose_with_stats(
    mdp: ExplicitMdp,
    algo: str = "interleave",
    backend: str = "bitset",
    start: int | None = None,
    check: bool = False,
    timeout_s: float | None = None,
) -> tuple[MecResult, OpStats]:
    """Run one decomposition on a fresh backend and snapshot its counters.

    With check=True, the runtime removal/partition assertions are recorded
    against the explicit oracle and the final result is verified; any
    violation raises CheckFailure.
    """
    if algo not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algo!r}; choose from {ALGORITHMS}")
    if start is not None and not 0 <= start < mdp.num_states:
        raise ValueError(f"start vertex {start} out of range")
    be = make_backend(backend, mdp.num_states, mdp.num_actions)
    graph = build_symbolic_graph(be, mdp)
    checker = RuntimeChecker(mdp) if check else None
    deadline = time.monotonic() + timeout_s if timeout_s is not None else None
    t0 = time.perf_counter()
    if algo == "basic":
        result = decompose_basic(be, graph, start=start, checker=checker, deadline=deadline)
    else:
        result = decompose_interleave(
            be, graph, start=start, checker=checker, deadline=deadline
        )
    be.stats.wall_time_ms = (time.perf_counter() - t0) * 1000.0
    stats = be.stats_snapshot()
    if check:
        problems = list(checker.violations)
        verdict = verify_decomposition(mdp, result)
        problems.extend(verdict.problems)
        if problems:
            raise CheckFailure(problems)
    return result, stats
