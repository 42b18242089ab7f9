"""Explicit-state ground truth: Tarjan SCCs and worklist MEC decomposition.

Everything here works on its own adjacency structures and shares no code
with the symbolic path; it is the arbiter when the two disagree.  Intended
for desk-scale instances, not the benchmark hot path.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .model import ExplicitGraph, ExplicitMdp, underlying_graph
from .result import MecResult


def tarjan_scc(graph: ExplicitGraph) -> list[list[int]]:
    """SCCs of a labelled graph as sorted id lists, iterative Tarjan.

    Components come back in the order Tarjan identifies them (reverse
    topological).  Label multiplicity is irrelevant; successors are deduped.
    """
    n = graph.num_vertices
    succ: list[list[int]] = [[] for _ in range(n)]
    seen = [set() for _ in range(n)]
    for s, _, t in sorted(graph.edges):
        if t not in seen[s]:
            seen[s].add(t)
            succ[s].append(t)

    index = [-1] * n
    lowlink = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    counter = 0
    sccs: list[list[int]] = []

    for root in range(n):
        if index[root] != -1:
            continue
        # (vertex, next-successor position) frames
        work = [(root, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = lowlink[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            advanced = False
            while i < len(succ[v]):
                w = succ[v][i]
                i += 1
                if index[w] == -1:
                    work.append((v, i))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    lowlink[v] = min(lowlink[v], index[w])
            if advanced:
                continue
            if lowlink[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                sccs.append(sorted(comp))
            if work:
                parent = work[-1][0]
                lowlink[parent] = min(lowlink[parent], lowlink[v])
    return sccs


def _scc_partition(states: set[int], pi: dict[int, set[int]], succ) -> list[list[int]]:
    """Tarjan restricted to the sub-MDP (states, pi)."""
    order = sorted(states)
    pos = {s: i for i, s in enumerate(order)}
    edges = set()
    for s in order:
        for a in pi[s]:
            for t in succ[(s, a)]:
                edges.add((pos[s], 0, pos[t]))
    g = ExplicitGraph(len(order), 1, frozenset(edges))
    return [[order[i] for i in comp] for comp in tarjan_scc(g)]


def mec_decomposition(mdp: ExplicitMdp) -> MecResult:
    """The unique MEC decomposition, by repeated SCC split and trimming.

    Worklist of candidate sub-MDPs; a component whose pairs all stay inside
    is an MEC, otherwise escaping pairs are dropped, states left without an
    action are dissolved (together with every pair that can reach them) and
    the survivors are re-examined.
    """
    succ: dict[tuple[int, int], list[int]] = {}
    for s, a, t in mdp.support():
        succ.setdefault((s, a), []).append(t)
    pi0: dict[int, set[int]] = {s: set() for s in range(mdp.num_states)}
    for (s, a) in succ:
        pi0[s].add(a)

    mecs: list[tuple[list[int], list[tuple[int, int, int]]]] = []
    work: list[tuple[set[int], dict[int, set[int]]]] = [
        (set(range(mdp.num_states)), pi0)
    ]
    while work:
        states, pi = work.pop()
        for comp in _scc_partition(states, pi, succ):
            cset = set(comp)
            escaping = {
                (s, a)
                for s in comp
                for a in pi[s]
                if any(t not in cset for t in succ[(s, a)])
            }
            if not escaping:
                edges = [
                    (s, a, t) for s in comp for a in pi[s] for t in succ[(s, a)]
                ]
                mecs.append((comp, edges))
                continue
            # Trim within the component: drop escaping pairs, dissolve states
            # left actionless, and propagate through pairs that reach them.
            cpi = {s: {a for a in pi[s] if (s, a) not in escaping} for s in comp}
            into: dict[int, set[tuple[int, int]]] = {s: set() for s in comp}
            for s in comp:
                for a in cpi[s]:
                    for t in succ[(s, a)]:
                        into[t].add((s, a))
            dead = deque(s for s in comp if not cpi[s])
            dissolved = set(dead)
            while dead:
                q = dead.popleft()
                for (s, a) in into[q]:
                    if s in dissolved or a not in cpi[s]:
                        continue
                    cpi[s].discard(a)
                    if not cpi[s]:
                        dissolved.add(s)
                        dead.append(s)
            survivors = cset - dissolved
            if survivors:
                work.append((survivors, {s: cpi[s] for s in survivors}))
    return MecResult.canonical(mecs)


@dataclass
class Verdict:
    ok: bool
    problems: list[str]


def _strongly_connected(states: list[int], edges) -> bool:
    if not states:
        return False
    adj: dict[int, list[int]] = {s: [] for s in states}
    radj: dict[int, list[int]] = {s: [] for s in states}
    for s, _, t in edges:
        adj[s].append(t)
        radj[t].append(s)

    def reaches_all(start, nbrs):
        seen = {start}
        todo = [start]
        while todo:
            v = todo.pop()
            for w in nbrs[v]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        return len(seen) == len(states)

    return reaches_all(states[0], adj) and reaches_all(states[0], radj)


def verify_decomposition(mdp: ExplicitMdp, result: MecResult) -> Verdict:
    """Check a claimed decomposition: structure per component, then
    maximality and coverage against this module's own decomposition."""
    problems: list[str] = []
    support: dict[tuple[int, int], set[int]] = {}
    for s, a, t in mdp.support():
        support.setdefault((s, a), set()).add(t)

    claimed: set[int] = set()
    for k, mec in enumerate(result.mecs):
        sset = set(mec.states)
        if claimed & sset:
            problems.append(f"mec {k} overlaps an earlier component")
        claimed |= sset
        if not mec.edges:
            problems.append(f"mec {k} has no edges")
            continue
        pairs = {(s, a) for s, a, _ in mec.edges}
        for s, a, t in mec.edges:
            if s not in sset or t not in sset:
                problems.append(f"mec {k} edge ({s},{a},{t}) leaves its state set")
        for s, a in pairs:
            targets = support.get((s, a))
            if targets is None:
                problems.append(f"mec {k} uses pair ({s},{a}) not enabled in the MDP")
                continue
            if not targets <= sset:
                problems.append(
                    f"mec {k} pair ({s},{a}) can step outside the component"
                )
            for t in targets:
                if (s, a, t) not in mec.edges:
                    problems.append(f"mec {k} omits edge ({s},{a},{t}) of pair ({s},{a})")
        stateless = sset - {s for s, _ in pairs}
        for s in sorted(stateless):
            problems.append(f"mec {k} state {s} keeps no action")
        if not _strongly_connected(list(mec.states), mec.edges):
            problems.append(f"mec {k} is not strongly connected")

    expected = mec_decomposition(mdp)
    if result != expected:
        missing = set(expected.mecs) - set(result.mecs)
        extra = set(result.mecs) - set(expected.mecs)
        for m in sorted(missing):
            problems.append(f"missing component with states {list(m.states)}")
        for m in sorted(extra):
            problems.append(f"unexpected component with states {list(m.states)}")
    return Verdict(ok=not problems, problems=problems)


def scc_of_mdp(mdp: ExplicitMdp) -> list[list[int]]:
    """Convenience: SCCs of the underlying graph."""
    return tarjan_scc(underlying_graph(mdp))
