"""Explicit bitset backend: arbitrary-precision ints as characteristic vectors.

Vertex sets are ints over num_states bits; pair sets are ints over
num_states * num_actions bits with pair (s, a) at bit s * num_actions + a.
The relation keeps a destination bitmask per present pair plus a per-source
successor mask so Post is frontier-proportional.
"""

from __future__ import annotations

from .base import SymbolicBackend


def _bits(mask: int):
    while mask:
        lsb = mask & -mask
        yield lsb.bit_length() - 1
        mask ^= lsb


class _Rel:
    """Immutable relation payload."""

    __slots__ = ("dests", "by_src", "pair_mask")

    def __init__(self, dests: dict[int, int], num_actions: int):
        self.dests = dests  # pair index -> destination bitmask
        by_src: dict[int, int] = {}
        pair_mask = 0
        for p, dm in dests.items():
            pair_mask |= 1 << p
            s = p // num_actions
            by_src[s] = by_src.get(s, 0) | dm
        self.by_src = by_src
        self.pair_mask = pair_mask


class BitsetBackend(SymbolicBackend):
    name = "bitset"

    def __init__(self, num_states: int, num_actions: int):
        super().__init__(num_states, num_actions)
        self._full = (1 << num_states) - 1
        self._action_block = (1 << num_actions) - 1

    # -- constructors

    def _make_vertex(self, ids):
        m = 0
        for v in ids:
            m |= 1 << v
        return m

    def _make_pairs(self, pairs):
        m = 0
        for s, a in pairs:
            m |= 1 << (s * self.num_actions + a)
        return m

    def _make_relation(self, triples):
        dests: dict[int, int] = {}
        for s, a, t in triples:
            p = s * self.num_actions + a
            dests[p] = dests.get(p, 0) | (1 << t)
        return _Rel(dests, self.num_actions)

    # -- Pre/Post

    def _pre(self, U, rel):
        acc = 0
        na = self.num_actions
        for p, dm in rel.dests.items():
            if dm & U:
                acc |= 1 << (p // na)
        return acc

    def _post(self, U, rel):
        acc = 0
        by_src = rel.by_src
        for s in _bits(U):
            acc |= by_src.get(s, 0)
        return acc

    # -- exists projections

    def _enabled_pairs(self, rel):
        return rel.pair_mask

    def _pairs_into(self, target, rel):
        acc = 0
        for p, dm in rel.dests.items():
            if dm & target:
                acc |= 1 << p
        return acc

    def _pair_sources(self, X):
        acc = 0
        na = self.num_actions
        for p in _bits(X):
            acc |= 1 << (p // na)
        return acc

    # -- basic algebra

    def _union(self, kind, a, b):
        return a | b

    def _intersect(self, kind, a, b):
        return a & b

    def _difference(self, kind, a, b):
        return a & ~b

    def _complement(self, U):
        return self._full & ~U

    def _restrict_pairs_to_sources(self, X, U):
        srcmask = 0
        na = self.num_actions
        block = self._action_block
        for s in _bits(U):
            srcmask |= block << (s * na)
        return X & srcmask

    def _remove_pairs(self, rel, X):
        dests = {p: dm for p, dm in rel.dests.items() if not (X >> p) & 1}
        return _Rel(dests, self.num_actions)

    def _restrict_relation(self, rel, W):
        na = self.num_actions
        dests = {}
        for p, dm in rel.dests.items():
            if (W >> (p // na)) & 1:
                kept = dm & W
                if kept:
                    dests[p] = kept
        return _Rel(dests, self.num_actions)

    # -- pick / cardinality / queries

    def _pick_min(self, U):
        return (U & -U).bit_length() - 1

    def _card(self, kind, p):
        return p.bit_count()

    def _is_empty(self, kind, p):
        if kind == "relation":
            return not p.dests
        return p == 0

    def _equal(self, kind, a, b):
        if kind == "relation":
            return a.dests == b.dests
        return a == b

    def _is_subset(self, kind, a, b):
        return a & ~b == 0

    # -- enumeration

    def _states_of(self, U):
        return list(_bits(U))

    def _pairs_of(self, X):
        na = self.num_actions
        return [(p // na, p % na) for p in _bits(X)]

    def _triples_of(self, rel):
        na = self.num_actions
        out = []
        for p in sorted(rel.dests):
            s, a = p // na, p % na
            out.extend((s, a, t) for t in _bits(rel.dests[p]))
        return sorted(out)
