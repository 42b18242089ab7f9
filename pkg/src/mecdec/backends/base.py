"""Symbolic set/relation backend contract, handles and instrumentation.

A backend instance owns three kinds of opaque handles: vertex sets, state-
action ("pair") sets, and the labelled edge relation.  All counted unit
operations are dispatched through this base class, so operation counters
are driven purely by algorithm control flow and agree across backends.

Counter taxonomy: Pre/Post in their own bucket; the three projection
shapes (drop destination, drop action, select by destination membership)
count as exists ops; constructive set algebra (union, intersection,
difference, complement, cylinder product/removal, relation restriction)
counts one basic op per call; Pick and cardinality have their own buckets.
Emptiness/equality/subset queries and enumeration for output are free, as
are constructors and handle clones (those only affect live-set tracking).

A backend instance is single-threaded and handles never move between
instances; run concurrent decompositions on separate instances.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable

VERTEX = "vertex"
PAIRS = "pairs"
RELATION = "relation"


class BackendError(Exception):
    """Handle misuse: cross-backend mixing, released handles, empty pick."""


@dataclass
class OpStats:
    pre_post_ops: int = 0
    exists_ops: int = 0
    basic_set_ops: int = 0
    cardinality_ops: int = 0
    pick_ops: int = 0
    live_sets_current: int = 0
    live_sets_peak: int = 0
    recursion_depth_peak: int = 0
    wall_time_ms: float = 0.0

    def snapshot(self) -> "OpStats":
        return replace(self)

    @property
    def symbolic_ops(self) -> int:
        """The headline metric: Pre/Post plus exists operations."""
        return self.pre_post_ops + self.exists_ops


class Handle:
    """Opaque reference to one set owned by one backend instance."""

    __slots__ = ("backend", "kind", "payload", "alive")

    def __init__(self, backend: "SymbolicBackend", kind: str, payload):
        self.backend = backend
        self.kind = kind
        self.payload = payload
        self.alive = True

    def release(self):
        self.backend.release(self)

    def __repr__(self):
        state = "live" if self.alive else "released"
        return f"<{self.kind} handle ({state}) of {self.backend.name}>"


@dataclass
class SymbolicGraph:
    """A (vertex set, edge relation) pair representing a sub-MDP's graph."""

    vertices: Handle
    edges: Handle

    def release(self):
        self.vertices.release()
        self.edges.release()


class SymbolicBackend:
    """Base class: validation, counting and handle lifetime; subclasses
    implement the raw payload operations."""

    name = "abstract"

    def __init__(self, num_states: int, num_actions: int):
        if num_states < 1 or num_actions < 1:
            raise BackendError("backend needs at least one state and one action")
        self.num_states = num_states
        self.num_actions = num_actions
        self.stats = OpStats()
        self._depth = 0

    # -- handle lifetime -------------------------------------------------

    def _wrap(self, kind: str, payload) -> Handle:
        self.stats.live_sets_current += 1
        if self.stats.live_sets_current > self.stats.live_sets_peak:
            self.stats.live_sets_peak = self.stats.live_sets_current
        return Handle(self, kind, payload)

    def _check(self, h: Handle, kind: str) -> None:
        if not isinstance(h, Handle) or h.backend is not self:
            raise BackendError("handle belongs to a different backend instance")
        if not h.alive:
            raise BackendError("handle was already released")
        if h.kind != kind:
            raise BackendError(f"expected a {kind} handle, got {h.kind}")

    def release(self, h: Handle) -> None:
        if h.backend is not self:
            raise BackendError("handle belongs to a different backend instance")
        if not h.alive:
            raise BackendError("double release")
        h.alive = False
        self.stats.live_sets_current -= 1

    def clone(self, h: Handle) -> Handle:
        self._check(h, h.kind)
        return self._wrap(h.kind, h.payload)

    # -- recursion depth hooks (driven by the engines) --------------------

    def enter_call(self) -> None:
        self._depth += 1
        if self._depth > self.stats.recursion_depth_peak:
            self.stats.recursion_depth_peak = self._depth

    def exit_call(self) -> None:
        self._depth -= 1

    # -- constructors (allocation only, not counted as operations) --------

    def vertex_set(self, ids: Iterable[int]) -> Handle:
        ids = list(ids)
        for v in ids:
            if not 0 <= v < self.num_states:
                raise BackendError(f"state id {v} out of range")
        return self._wrap(VERTEX, self._make_vertex(ids))

    def empty_vertices(self) -> Handle:
        return self._wrap(VERTEX, self._make_vertex([]))

    def full_vertices(self) -> Handle:
        return self._wrap(VERTEX, self._make_vertex(range(self.num_states)))

    def singleton(self, v: int) -> Handle:
        return self.vertex_set([v])

    def pair_set(self, pairs: Iterable[tuple[int, int]]) -> Handle:
        pairs = list(pairs)
        for s, a in pairs:
            if not (0 <= s < self.num_states and 0 <= a < self.num_actions):
                raise BackendError(f"pair ({s},{a}) out of range")
        return self._wrap(PAIRS, self._make_pairs(pairs))

    def empty_pairs(self) -> Handle:
        return self._wrap(PAIRS, self._make_pairs([]))

    def relation(self, triples: Iterable[tuple[int, int, int]]) -> Handle:
        triples = list(triples)
        for s, a, t in triples:
            if not (
                0 <= s < self.num_states
                and 0 <= a < self.num_actions
                and 0 <= t < self.num_states
            ):
                raise BackendError(f"triple ({s},{a},{t}) out of range")
        return self._wrap(RELATION, self._make_relation(triples))

    # -- Pre/Post ----------------------------------------------------------

    def pre(self, U: Handle, rel: Handle) -> Handle:
        """States with an edge into U."""
        self._check(U, VERTEX)
        self._check(rel, RELATION)
        self.stats.pre_post_ops += 1
        return self._wrap(VERTEX, self._pre(U.payload, rel.payload))

    def post(self, U: Handle, rel: Handle) -> Handle:
        """States reachable from U in one step."""
        self._check(U, VERTEX)
        self._check(rel, RELATION)
        self.stats.pre_post_ops += 1
        return self._wrap(VERTEX, self._post(U.payload, rel.payload))

    # -- exists projections --------------------------------------------------

    def enabled_pairs(self, rel: Handle) -> Handle:
        """Pairs with at least one edge (destination projected away)."""
        self._check(rel, RELATION)
        self.stats.exists_ops += 1
        return self._wrap(PAIRS, self._enabled_pairs(rel.payload))

    def pairs_into(self, target: Handle, rel: Handle) -> Handle:
        """Pairs with an edge into the target set."""
        self._check(target, VERTEX)
        self._check(rel, RELATION)
        self.stats.exists_ops += 1
        return self._wrap(PAIRS, self._pairs_into(target.payload, rel.payload))

    def pair_sources(self, X: Handle) -> Handle:
        """States owning at least one pair in X (action projected away)."""
        self._check(X, PAIRS)
        self.stats.exists_ops += 1
        return self._wrap(VERTEX, self._pair_sources(X.payload))

    # -- basic set algebra --------------------------------------------------

    def _binary(self, a: Handle, b: Handle, op) -> Handle:
        if a.kind not in (VERTEX, PAIRS):
            raise BackendError("set algebra applies to vertex or pair sets")
        self._check(a, a.kind)
        self._check(b, a.kind)
        self.stats.basic_set_ops += 1
        return self._wrap(a.kind, op(a.kind, a.payload, b.payload))

    def union(self, a: Handle, b: Handle) -> Handle:
        return self._binary(a, b, self._union)

    def intersect(self, a: Handle, b: Handle) -> Handle:
        return self._binary(a, b, self._intersect)

    def difference(self, a: Handle, b: Handle) -> Handle:
        return self._binary(a, b, self._difference)

    def complement(self, U: Handle) -> Handle:
        """Complement within the full vertex universe."""
        self._check(U, VERTEX)
        self.stats.basic_set_ops += 1
        return self._wrap(VERTEX, self._complement(U.payload))

    def restrict_pairs_to_sources(self, X: Handle, U: Handle) -> Handle:
        """X ∩ (U × all actions): one cylinder intersection."""
        self._check(X, PAIRS)
        self._check(U, VERTEX)
        self.stats.basic_set_ops += 1
        return self._wrap(PAIRS, self._restrict_pairs_to_sources(X.payload, U.payload))

    def remove_pairs_from_relation(self, rel: Handle, X: Handle) -> Handle:
        """rel minus the cylinder X × all states: one subtraction."""
        self._check(rel, RELATION)
        self._check(X, PAIRS)
        self.stats.basic_set_ops += 1
        return self._wrap(RELATION, self._remove_pairs(rel.payload, X.payload))

    def restrict_relation(self, rel: Handle, W: Handle) -> Handle:
        """rel ∩ (W × all actions × W): one cylinder intersection."""
        self._check(rel, RELATION)
        self._check(W, VERTEX)
        self.stats.basic_set_ops += 1
        return self._wrap(RELATION, self._restrict_relation(rel.payload, W.payload))

    # -- pick / cardinality ---------------------------------------------------

    def pick(self, U: Handle) -> int:
        """Deterministic choice: the minimum state id in U."""
        self._check(U, VERTEX)
        if self._is_empty(VERTEX, U.payload):
            raise BackendError("pick from an empty set")
        self.stats.pick_ops += 1
        return self._pick_min(U.payload)

    def cardinality(self, h: Handle) -> int:
        if h.kind not in (VERTEX, PAIRS):
            raise BackendError("cardinality applies to vertex or pair sets")
        self._check(h, h.kind)
        self.stats.cardinality_ops += 1
        return self._card(h.kind, h.payload)

    # -- free queries -----------------------------------------------------------

    def is_empty(self, h: Handle) -> bool:
        self._check(h, h.kind)
        return self._is_empty(h.kind, h.payload)

    def equal(self, a: Handle, b: Handle) -> bool:
        self._check(a, a.kind)
        self._check(b, a.kind)
        return self._equal(a.kind, a.payload, b.payload)

    def is_subset(self, a: Handle, b: Handle) -> bool:
        self._check(a, a.kind)
        self._check(b, a.kind)
        return self._is_subset(a.kind, a.payload, b.payload)

    # -- enumeration (output materialization, free) -------------------------------

    def states_of(self, U: Handle) -> list[int]:
        self._check(U, VERTEX)
        return self._states_of(U.payload)

    def pairs_of(self, X: Handle) -> list[tuple[int, int]]:
        self._check(X, PAIRS)
        return self._pairs_of(X.payload)

    def triples_of(self, rel: Handle) -> list[tuple[int, int, int]]:
        self._check(rel, RELATION)
        return self._triples_of(rel.payload)

    def stats_snapshot(self) -> OpStats:
        return self.stats.snapshot()

    # -- subclass surface ----------------------------------------------------

    def _make_vertex(self, ids):
        raise NotImplementedError

    def _make_pairs(self, pairs):
        raise NotImplementedError

    def _make_relation(self, triples):
        raise NotImplementedError

    def _pre(self, U, rel):
        raise NotImplementedError

    def _post(self, U, rel):
        raise NotImplementedError

    def _enabled_pairs(self, rel):
        raise NotImplementedError

    def _pairs_into(self, target, rel):
        raise NotImplementedError

    def _pair_sources(self, X):
        raise NotImplementedError

    def _union(self, kind, a, b):
        raise NotImplementedError

    def _intersect(self, kind, a, b):
        raise NotImplementedError

    def _difference(self, kind, a, b):
        raise NotImplementedError

    def _complement(self, U):
        raise NotImplementedError

    def _restrict_pairs_to_sources(self, X, U):
        raise NotImplementedError

    def _remove_pairs(self, rel, X):
        raise NotImplementedError

    def _restrict_relation(self, rel, W):
        raise NotImplementedError

    def _pick_min(self, U):
        raise NotImplementedError

    def _card(self, kind, p):
        raise NotImplementedError

    def _is_empty(self, kind, p):
        raise NotImplementedError

    def _equal(self, kind, a, b):
        raise NotImplementedError

    def _is_subset(self, kind, a, b):
        raise NotImplementedError

    def _states_of(self, U):
        raise NotImplementedError

    def _pairs_of(self, X):
        raise NotImplementedError

    def _triples_of(self, rel):
        raise NotImplementedError
