"""Random MDP instances and structured benchmark families.

Generation is a pure function of its parameters: the same seed yields a
byte-identical serialized instance on every run and machine.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .model import ExplicitMdp, MdpValidationError, Transition


@dataclass(frozen=True)
class GeneratorParams:
    num_states: int
    num_actions: int
    enable_prob: float = 0.5  # per (state, action) enable probability
    branch_max: int = 2       # per enabled pair, 1..branch_max successors
    seed: int = 0

    def __post_init__(self):
        if self.num_states < 1 or self.num_actions < 1:
            raise MdpValidationError("need at least one state and one action")
        if not 0.0 < self.enable_prob <= 1.0:
            raise MdpValidationError("enable probability must be in (0, 1]")
        if self.branch_max < 1:
            raise MdpValidationError("branch_max must be at least 1")


def _branch(rng: random.Random, src: int, act: int, params: GeneratorParams):
    """Successor distribution for one enabled pair, with exact rational weights."""
    k = rng.randint(1, min(params.branch_max, params.num_states))
    dsts = rng.sample(range(params.num_states), k)
    weights = [rng.randint(1, 9) for _ in dsts]
    total = sum(weights)
    return [
        Transition(src, act, d, float(Fraction(w, total)))
        for d, w in zip(dsts, weights)
    ]


def random_mdp(params: GeneratorParams) -> ExplicitMdp:
    """Seed-deterministic random MDP satisfying all model invariants.

    Every state is forced to enable at least one action; actions that end
    up enabled nowhere are repaired by enabling them in a random state.
    """
    rng = random.Random(params.seed)
    transitions: list[Transition] = []
    used_actions: set[int] = set()
    for s in range(params.num_states):
        enabled = [a for a in range(params.num_actions) if rng.random() < params.enable_prob]
        if not enabled:
            enabled = [rng.randrange(params.num_actions)]
        for a in enabled:
            transitions.extend(_branch(rng, s, a, params))
            used_actions.add(a)
    for a in range(params.num_actions):
        if a not in used_actions:
            s = rng.randrange(params.num_states)
            transitions.extend(_branch(rng, s, a, params))
    return ExplicitMdp(params.num_states, params.num_actions, tuple(transitions))


def chain_of_sccs(
    num_sccs: int,
    cycle_len: int = 2,
    *,
    forward: bool = True,
    cross_jumps: int = 0,
    seed: int = 0,
) -> ExplicitMdp:
    """A chain of cycle components linked by deterministic transfer edges.

    Component i occupies states [i*cycle_len, (i+1)*cycle_len).  Action 0
    walks each cycle; action 1 transfers from a component's head to the
    next (forward=True) or previous component's head.  With cross_jumps > 0
    an extra action adds that many jumps toward strictly earlier components,
    so the cycles stay the SCCs but many pairs escape their component.
    The MECs are exactly the cycles.
    """
    if num_sccs < 1 or cycle_len < 1:
        raise MdpValidationError("need at least one component and one state per cycle")
    n = num_sccs * cycle_len
    ts: list[Transition] = []
    for i in range(num_sccs):
        base = i * cycle_len
        for j in range(cycle_len):
            ts.append(Transition(base + j, 0, base + (j + 1) % cycle_len, 1.0))
    num_actions = 1
    if num_sccs > 1:
        num_actions = 2
        for i in range(num_sccs):
            target = i + 1 if forward else i - 1
            if 0 <= target < num_sccs:
                ts.append(Transition(i * cycle_len, 1, target * cycle_len, 1.0))
    if cross_jumps > 0 and num_sccs > 2:
        num_actions = 3
        rng = random.Random(seed)
        jumps: set[tuple[int, int]] = set()
        attempts = 0
        while len(jumps) < cross_jumps and attempts < 20 * cross_jumps:
            attempts += 1
            i = rng.randrange(2, num_sccs)
            j = rng.randrange(0, i - 1)
            jumps.add((i, j))
        by_src: dict[int, list[int]] = {}
        for i, j in sorted(jumps):
            by_src.setdefault(i, []).append(j)
        for i, targets in sorted(by_src.items()):
            src = i * cycle_len + (1 % cycle_len)
            p = float(Fraction(1, len(targets)))
            for j in targets:
                ts.append(Transition(src, 2, j * cycle_len, p))
        if not jumps:
            num_actions = 2
    return ExplicitMdp(n, num_actions, tuple(ts))


def path_of_sccs(num_sccs: int, cycle_len: int = 2) -> ExplicitMdp:
    """Forward chain of small cycles; adversarial for naive SCC recursion depth."""
    return chain_of_sccs(num_sccs, cycle_len, forward=True)


def chain_of_cycles(k: int, cycle_len: int = 3) -> ExplicitMdp:
    """k cycles of fixed length linked forward; fixed two-action alphabet."""
    return chain_of_sccs(k, cycle_len, forward=True)
