"""Independent brute-force oracles used to freeze expected values.

These deliberately share nothing with the symbolic path: plain scans over
explicit triple lists.
"""

from __future__ import annotations

import random

from mecdec import GeneratorParams, random_mdp, underlying_graph


def pre_scan(triples, U):
    return sorted({s for s, a, t in triples if t in U})


def post_scan(triples, U):
    return sorted({t for s, a, t in triples if s in U})


def escaping_scan(triples, U):
    """Pairs of U with an edge leaving U."""
    return sorted({(s, a) for s, a, t in triples if s in U and t not in U})


def attractor_scan(num_states, triples, X):
    """Worklist attractor over a sub-MDP's triples: absorb states whose
    every enabled pair is doomed, then pairs that can reach them."""
    enabled: dict[int, set[int]] = {}
    present = set()
    for s, a, t in triples:
        enabled.setdefault(s, set()).add(a)
        present.add(s)
    doomed_pairs = set(X)
    doomed_states: set[int] = set()
    changed = True
    while changed:
        changed = False
        for s in range(num_states):
            if s in doomed_states:
                continue
            pairs = {(s, a) for a in enabled.get(s, set())}
            if pairs <= doomed_pairs:
                doomed_states.add(s)
                changed = True
        for s, a, t in triples:
            if t in doomed_states and (s, a) not in doomed_pairs:
                doomed_pairs.add((s, a))
                changed = True
    return sorted(doomed_states), sorted(doomed_pairs)


def scc_reachability(num_states, triples):
    """SCCs via pairwise reachability: the quadratic definition, directly."""
    reach = [set() for _ in range(num_states)]
    adj = [set() for _ in range(num_states)]
    for s, _, t in triples:
        adj[s].add(t)
    for v in range(num_states):
        todo = [v]
        seen = {v}
        while todo:
            u = todo.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    todo.append(w)
        reach[v] = seen
    comps = []
    assigned = set()
    for v in range(num_states):
        if v in assigned:
            continue
        comp = sorted(u for u in reach[v] if v in reach[u])
        assigned.update(comp)
        comps.append(comp)
    return sorted(comps)


def random_instances(count, max_states=30, max_actions=4, seed_base=0):
    """A deterministic sweep over sizes, densities and branching."""
    out = []
    for i in range(count):
        params = GeneratorParams(
            num_states=2 + (seed_base + i * 7) % (max_states - 1),
            num_actions=1 + i % max_actions,
            enable_prob=(0.15, 0.3, 0.5, 0.8)[i % 4],
            branch_max=1 + i % 3,
            seed=seed_base + i,
        )
        out.append(random_mdp(params))
    return out


def random_vertex_subset(mdp, seed):
    rng = random.Random(seed)
    return [s for s in range(mdp.num_states) if rng.random() < 0.5]


def graph_triples(mdp):
    return sorted(underlying_graph(mdp).edges)
