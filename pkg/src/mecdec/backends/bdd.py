"""Reduced ordered BDD backend.

Variable order pairs each current-state bit with its next-state bit
(most significant first) and puts the action bits after them:

    x0 x0' x1 x1' ... u0 u1 ...

State bits are most-significant-first, so the least satisfying assignment
under a prefer-0 walk is the numerically smallest vertex, which makes Pick
deterministic and equal to the bitset backend's minimum-id policy.  The
node table is hash-consed; no dynamic reordering, no garbage collection
beyond dropping the whole manager with its backend instance.
"""

from __future__ import annotations

from .base import SymbolicBackend

FALSE = 0
TRUE = 1


class _Manager:
    def __init__(self, num_levels: int):
        self.num_levels = num_levels
        terminal = num_levels  # sentinel level below every variable
        self.level = [terminal, terminal]
        self.lo = [0, 1]
        self.hi = [0, 1]
        self.unique: dict[tuple[int, int, int], int] = {}
        self.and_cache: dict[tuple[int, int], int] = {}
        self.or_cache: dict[tuple[int, int], int] = {}
        self.not_cache: dict[int, int] = {}
        self.exists_cache: dict[tuple[int, int], int] = {}
        self.rename_cache: dict[tuple[int, int], int] = {}
        self._cubes: list[tuple[frozenset[int], int]] = []  # (levels, max level)
        self._maps: list[dict[int, int]] = []
        self.count_cache: dict[tuple[int, int], int] = {}

    # -- structure ---------------------------------------------------------

    def mk(self, level: int, lo: int, hi: int) -> int:
        if lo == hi:
            return lo
        key = (level, lo, hi)
        node = self.unique.get(key)
        if node is None:
            node = len(self.level)
            self.level.append(level)
            self.lo.append(lo)
            self.hi.append(hi)
            self.unique[key] = node
        return node

    def register_cube(self, levels) -> int:
        fs = frozenset(levels)
        self._cubes.append((fs, max(fs)))
        return len(self._cubes) - 1

    def register_map(self, mapping: dict[int, int]) -> int:
        self._maps.append(dict(mapping))
        return len(self._maps) - 1

    # -- boolean operations -----------------------------------------------------

    def apply_and(self, a: int, b: int) -> int:
        if a == FALSE or b == FALSE:
            return FALSE
        if a == TRUE:
            return b
        if b == TRUE or a == b:
            return a
        key = (a, b) if a < b else (b, a)
        r = self.and_cache.get(key)
        if r is not None:
            return r
        la, lb = self.level[a], self.level[b]
        top = la if la < lb else lb
        a0, a1 = (self.lo[a], self.hi[a]) if la == top else (a, a)
        b0, b1 = (self.lo[b], self.hi[b]) if lb == top else (b, b)
        r = self.mk(top, self.apply_and(a0, b0), self.apply_and(a1, b1))
        self.and_cache[key] = r
        return r

    def apply_or(self, a: int, b: int) -> int:
        if a == TRUE or b == TRUE:
            return TRUE
        if a == FALSE:
            return b
        if b == FALSE or a == b:
            return a
        key = (a, b) if a < b else (b, a)
        r = self.or_cache.get(key)
        if r is not None:
            return r
        la, lb = self.level[a], self.level[b]
        top = la if la < lb else lb
        a0, a1 = (self.lo[a], self.hi[a]) if la == top else (a, a)
        b0, b1 = (self.lo[b], self.hi[b]) if lb == top else (b, b)
        r = self.mk(top, self.apply_or(a0, b0), self.apply_or(a1, b1))
        self.or_cache[key] = r
        return r

    def negate(self, a: int) -> int:
        if a == FALSE:
            return TRUE
        if a == TRUE:
            return FALSE
        r = self.not_cache.get(a)
        if r is not None:
            return r
        r = self.mk(self.level[a], self.negate(self.lo[a]), self.negate(self.hi[a]))
        self.not_cache[a] = r
        return r

    def diff(self, a: int, b: int) -> int:
        return self.apply_and(a, self.negate(b))

    def exists(self, a: int, cube_id: int) -> int:
        levels, top_max = self._cubes[cube_id]
        return self._exists(a, cube_id, levels, top_max)

    def _exists(self, a: int, cube_id: int, levels, top_max) -> int:
        if a <= TRUE:
            return a
        la = self.level[a]
        if la > top_max:
            return a
        key = (a, cube_id)
        r = self.exists_cache.get(key)
        if r is not None:
            return r
        lo = self._exists(self.lo[a], cube_id, levels, top_max)
        hi = self._exists(self.hi[a], cube_id, levels, top_max)
        if la in levels:
            r = self.apply_or(lo, hi)
        else:
            r = self.mk(la, lo, hi)
        self.exists_cache[key] = r
        return r

    def rename(self, a: int, map_id: int) -> int:
        # mapping must preserve level order on the node's support
        if a <= TRUE:
            return a
        key = (a, map_id)
        r = self.rename_cache.get(key)
        if r is not None:
            return r
        mapping = self._maps[map_id]
        la = self.level[a]
        r = self.mk(
            mapping.get(la, la),
            self.rename(self.lo[a], map_id),
            self.rename(self.hi[a], map_id),
        )
        self.rename_cache[key] = r
        return r

    # -- interpretation ---------------------------------------------------------

    def less_than(self, levels: list[int], bound: int) -> int:
        """Assignments of `levels` (MSB-first) encoding a value < bound."""
        width = len(levels)
        if bound >= 1 << width:
            return TRUE
        node = FALSE
        for i in reversed(range(width)):
            bit = (bound >> (width - 1 - i)) & 1
            if bit:
                node = self.mk(levels[i], TRUE, node)
            else:
                node = self.mk(levels[i], node, FALSE)
        return node

    def cube(self, bits: list[tuple[int, int]]) -> int:
        """Single assignment: (level, bit) literals, any order."""
        node = TRUE
        for lvl, bit in sorted(bits, reverse=True):
            node = self.mk(lvl, FALSE, node) if bit else self.mk(lvl, node, FALSE)
        return node

    def or_reduce(self, nodes: list[int]) -> int:
        """Balanced disjunction; keeps intermediate results small."""
        if not nodes:
            return FALSE
        while len(nodes) > 1:
            nodes = [
                self.apply_or(nodes[i], nodes[i + 1]) if i + 1 < len(nodes) else nodes[i]
                for i in range(0, len(nodes), 2)
            ]
        return nodes[0]

    def count(self, a: int, levels: tuple[int, ...], levels_id: int) -> int:
        """Number of satisfying assignments over `levels` (support must be inside)."""
        pos = {lvl: i for i, lvl in enumerate(levels)}
        width = len(levels)

        def node_pos(n: int) -> int:
            return width if n <= TRUE else pos[self.level[n]]

        def cnt(n: int) -> int:
            if n == FALSE:
                return 0
            if n == TRUE:
                return 1
            key = (n, levels_id)
            r = self.count_cache.get(key)
            if r is not None:
                return r
            here = node_pos(n)
            lo, hi = self.lo[n], self.hi[n]
            r = cnt(lo) * (1 << (node_pos(lo) - here - 1)) + cnt(hi) * (
                1 << (node_pos(hi) - here - 1)
            )
            self.count_cache[key] = r
            return r

        return cnt(a) * (1 << node_pos(a))

    def min_assignment(self, a: int) -> dict[int, int]:
        """Prefer-0 walk; absent levels read as 0."""
        bits: dict[int, int] = {}
        node = a
        while node != TRUE:
            if self.lo[node] != FALSE:
                bits[self.level[node]] = 0
                node = self.lo[node]
            else:
                bits[self.level[node]] = 1
                node = self.hi[node]
        return bits

    def assignments(self, a: int, levels: tuple[int, ...]):
        """Yield bit tuples over `levels` satisfying a (support inside levels)."""
        width = len(levels)

        def walk(node: int, i: int, prefix: list[int]):
            if node == FALSE:
                return
            if i == width:
                yield tuple(prefix)
                return
            lvl = levels[i]
            if node != TRUE and self.level[node] == lvl:
                branches = ((0, self.lo[node]), (1, self.hi[node]))
            else:
                branches = ((0, node), (1, node))
            for bit, child in branches:
                prefix.append(bit)
                yield from walk(child, i + 1, prefix)
                prefix.pop()

        yield from walk(a, 0, [])


class BddBackend(SymbolicBackend):
    name = "bdd"

    def __init__(self, num_states: int, num_actions: int):
        super().__init__(num_states, num_actions)
        self._t = max(1, (num_states - 1).bit_length())
        self._l = max(1, (num_actions - 1).bit_length())
        t, l = self._t, self._l
        self._x = [2 * i for i in range(t)]
        self._xp = [2 * i + 1 for i in range(t)]
        self._u = [2 * t + j for j in range(l)]
        m = _Manager(2 * t + l)
        self._m = m
        self._cube_xp = m.register_cube(self._xp)
        self._cube_u = m.register_cube(self._u)
        self._cube_x_u = m.register_cube(self._x + self._u)
        self._cube_u_xp = m.register_cube(self._u + self._xp)
        self._map_x_to_xp = m.register_map({x: x + 1 for x in self._x})
        self._map_xp_to_x = m.register_map({xp: xp - 1 for xp in self._xp})
        self._dom_v = m.less_than(self._x, num_states)
        self._levels_x = tuple(self._x)
        self._levels_xu = tuple(sorted(self._x + self._u))
        self._levels_all = tuple(sorted(self._x + self._xp + self._u))
        self._levels_x_id = 0
        self._levels_xu_id = 1

    # -- encodings

    def _state_bits(self, s: int, levels: list[int]) -> list[tuple[int, int]]:
        t = len(levels)
        return [(levels[i], (s >> (t - 1 - i)) & 1) for i in range(t)]

    def _decode(self, bits: tuple[int, ...]) -> int:
        v = 0
        for b in bits:
            v = (v << 1) | b
        return v

    # -- constructors

    def _make_vertex(self, ids):
        ids = sorted(set(ids))
        if len(ids) == self.num_states:
            return self._dom_v
        m = self._m
        return m.or_reduce([m.cube(self._state_bits(s, self._x)) for s in ids])

    def _make_pairs(self, pairs):
        m = self._m
        cubes = [
            m.cube(self._state_bits(s, self._x) + self._state_bits(a, self._u))
            for s, a in sorted(set(pairs))
        ]
        return m.or_reduce(cubes)

    def _make_relation(self, triples):
        m = self._m
        cubes = [
            m.cube(
                self._state_bits(s, self._x)
                + self._state_bits(a, self._u)
                + self._state_bits(t, self._xp)
            )
            for s, a, t in sorted(set(triples))
        ]
        return m.or_reduce(cubes)

    # -- Pre/Post

    def _pre(self, U, rel):
        m = self._m
        target = m.rename(U, self._map_x_to_xp)
        return m.exists(m.apply_and(rel, target), self._cube_u_xp)

    def _post(self, U, rel):
        m = self._m
        image = m.exists(m.apply_and(rel, U), self._cube_x_u)
        return m.rename(image, self._map_xp_to_x)

    # -- exists projections

    def _enabled_pairs(self, rel):
        return self._m.exists(rel, self._cube_xp)

    def _pairs_into(self, target, rel):
        m = self._m
        shifted = m.rename(target, self._map_x_to_xp)
        return m.exists(m.apply_and(rel, shifted), self._cube_xp)

    def _pair_sources(self, X):
        return self._m.exists(X, self._cube_u)

    # -- basic algebra

    def _union(self, kind, a, b):
        return self._m.apply_or(a, b)

    def _intersect(self, kind, a, b):
        return self._m.apply_and(a, b)

    def _difference(self, kind, a, b):
        return self._m.diff(a, b)

    def _complement(self, U):
        return self._m.diff(self._dom_v, U)

    def _restrict_pairs_to_sources(self, X, U):
        return self._m.apply_and(X, U)

    def _remove_pairs(self, rel, X):
        return self._m.diff(rel, X)

    def _restrict_relation(self, rel, W):
        m = self._m
        both = m.apply_and(W, m.rename(W, self._map_x_to_xp))
        return m.apply_and(rel, both)

    # -- pick / cardinality / queries

    def _pick_min(self, U):
        bits = self._m.min_assignment(U)
        v = 0
        for lvl in self._x:
            v = (v << 1) | bits.get(lvl, 0)
        return v

    def _card(self, kind, p):
        if kind == "pairs":
            return self._m.count(p, self._levels_xu, self._levels_xu_id)
        return self._m.count(p, self._levels_x, self._levels_x_id)

    def _is_empty(self, kind, p):
        return p == FALSE

    def _equal(self, kind, a, b):
        return a == b

    def _is_subset(self, kind, a, b):
        return self._m.diff(a, b) == FALSE

    # -- enumeration

    def _states_of(self, U):
        return sorted(self._decode(bits) for bits in self._m.assignments(U, self._levels_x))

    def _pairs_of(self, X):
        t = self._t
        out = []
        for bits in self._m.assignments(X, self._levels_xu):
            out.append((self._decode(bits[:t]), self._decode(bits[t:])))
        return sorted(out)

    def _triples_of(self, rel):
        # levels_all interleaves x/x' pairs then the action block
        t, l = self._t, self._l
        out = []
        for bits in self._m.assignments(rel, self._levels_all):
            s = self._decode(bits[0 : 2 * t : 2])
            d = self._decode(bits[1 : 2 * t : 2])
            a = self._decode(bits[2 * t :])
            out.append((s, a, d))
        return sorted(out)
