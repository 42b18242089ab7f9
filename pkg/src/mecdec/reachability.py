"""Symbolic reachability and SCC primitives.

Forward sets are computed layer by layer so the last non-empty frontier
yields a vertex at maximum BFS distance from the start; that vertex seeds
the recursive call on the downstream partition, avoiding rediscovery work.
The full decomposition recurses on the smaller of its two partitions and
tail-iterates the larger, which bounds recursion depth logarithmically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .backends.base import Handle, SymbolicBackend, SymbolicGraph


@dataclass
class SccResult:
    scc: Handle          # the SCC of the start vertex
    fwd: Handle          # everything forward-reachable from it
    new_start: int       # a vertex at maximum BFS distance

    def release(self):
        self.scc.release()
        self.fwd.release()


def forward_set(be: SymbolicBackend, v: int, graph: SymbolicGraph) -> tuple[Handle, int]:
    """Least fixed point of Post containing v, plus a member of the last
    non-empty frontier.  At most eccentricity+1 Post calls."""
    fwd = be.empty_vertices()
    frontier = be.singleton(v)
    last = None
    while not be.is_empty(frontier):
        grown = be.union(fwd, frontier)
        be.release(fwd)
        fwd = grown
        if last is not None:
            be.release(last)
        last = frontier
        image = be.post(last, graph.edges)
        frontier = be.difference(image, fwd)
        be.release(image)
    be.release(frontier)
    far = be.pick(last)
    be.release(last)
    return fwd, far


def scc_of_vertex(be: SymbolicBackend, v: int, graph: SymbolicGraph) -> SccResult:
    """SCC of v: backward closure from v intersected with its forward set."""
    fwd, far = forward_set(be, v, graph)
    scc = be.singleton(v)
    while True:
        preimage = be.pre(scc, graph.edges)
        candidates = be.intersect(preimage, fwd)
        be.release(preimage)
        if be.is_subset(candidates, scc):
            be.release(candidates)
            break
        grown = be.union(scc, candidates)
        be.release(scc)
        be.release(candidates)
        scc = grown
    return SccResult(scc=scc, fwd=fwd, new_start=far)


def scc_decomposition(
    be: SymbolicBackend, graph: SymbolicGraph, start: int | None = None
) -> list[Handle]:
    """All SCCs of the graph, as vertex-set handles owned by the caller."""
    out: list[Handle] = []
    if be.is_empty(graph.vertices):
        return out
    vertices = be.clone(graph.vertices)
    edges = be.clone(graph.edges)
    be.enter_call()
    try:
        _decompose_from(be, vertices, edges, start, out)
    finally:
        be.exit_call()
    return out


def contains_vertex(be: SymbolicBackend, part: Handle, v: int) -> bool:
    """Free membership query (no counted operations)."""
    single = be.singleton(v)
    inside = be.is_subset(single, part)
    be.release(single)
    return inside


def _decompose_from(be, vertices, edges, start, out):
    # owns vertices/edges; loops on the larger partition in place
    while True:
        v = start if start is not None else be.pick(vertices)
        res = scc_of_vertex(be, v, SymbolicGraph(vertices, edges))
        out.append(res.scc)
        downstream = be.difference(res.fwd, res.scc)
        rest = be.difference(vertices, res.fwd)
        be.release(res.fwd)
        # The max-distance vertex seeds the downstream call only when it
        # actually landed there; it can sit inside the SCC instead.
        seed = res.new_start if contains_vertex(be, downstream, res.new_start) else None
        children: list[tuple[Handle, Handle, int | None]] = []
        for part, part_start in ((downstream, seed), (rest, None)):
            if be.is_empty(part):
                be.release(part)
                continue
            sub_edges = be.restrict_relation(edges, part)
            children.append((part, sub_edges, part_start))
        be.release(vertices)
        be.release(edges)
        if not children:
            return
        if len(children) == 2:
            sizes = [be.cardinality(c[0]) for c in children]
            small, large = (0, 1) if sizes[0] <= sizes[1] else (1, 0)
            sub_v, sub_e, sub_s = children[small]
            be.enter_call()
            try:
                _decompose_from(be, sub_v, sub_e, sub_s, out)
            finally:
                be.exit_call()
            vertices, edges, start = children[large]
        else:
            vertices, edges, start = children[0]
