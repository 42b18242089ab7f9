"""Explicit MDP representation: validation, text format, built-in examples.

The explicit model is the semantic ground truth everything else is built
from.  Decomposition code only ever looks at the support of the transition
function; probabilities are validated here and then ignored.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, NamedTuple

PROB_TOL = 1e-9


class MdpError(Exception):
    """Base class for model construction failures."""


class MdpSyntaxError(MdpError):
    """Malformed MDP document; message carries the offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class MdpValidationError(MdpError):
    """Well-formed input that violates an MDP invariant."""


class Transition(NamedTuple):
    src: int
    act: int
    dst: int
    prob: float


@dataclass(frozen=True)
class ExplicitMdp:
    """An MDP over states 0..num_states-1 and a global action id space.

    Transitions are stored canonically sorted by (src, act, dst).  Every
    (src, act) group present must have probabilities summing to 1 (the
    action is fully enabled) and every state must enable at least one
    action.  Instances are immutable and safe to share across workers.
    """

    num_states: int
    num_actions: int
    transitions: tuple[Transition, ...]
    init_dist: tuple[tuple[int, float], ...] | None = None
    action_names: Mapping[int, str] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self,
            "transitions",
            tuple(sorted(Transition(*t) for t in self.transitions)),
        )
        object.__setattr__(self, "action_names", dict(self.action_names))
        if self.init_dist is not None:
            object.__setattr__(
                self, "init_dist", tuple(sorted(self.init_dist))
            )
        self._validate()

    # -- validation ----------------------------------------------------

    def _validate(self):
        if self.num_states < 1:
            raise MdpValidationError("an MDP needs at least one state")
        if self.num_actions < 1:
            raise MdpValidationError("an MDP needs at least one action")
        seen = set()
        sums: dict[tuple[int, int], float] = {}
        for s, a, t, p in self.transitions:
            if not (0 <= s < self.num_states and 0 <= t < self.num_states):
                raise MdpValidationError(
                    f"transition ({s}, {self.action_name(a)}, {t}) has a state id"
                    f" out of range [0, {self.num_states})"
                )
            if not 0 <= a < self.num_actions:
                raise MdpValidationError(
                    f"transition ({s}, a{a}, {t}) has an action id out of"
                    f" range [0, {self.num_actions})"
                )
            if not 0.0 < p <= 1.0:
                raise MdpValidationError(
                    f"transition ({s}, {self.action_name(a)}, {t}) has"
                    f" probability {p} outside (0, 1]"
                )
            if (s, a, t) in seen:
                raise MdpValidationError(
                    f"duplicate transition ({s}, {self.action_name(a)}, {t})"
                )
            seen.add((s, a, t))
            sums[(s, a)] = sums.get((s, a), 0.0) + p
        for (s, a), total in sums.items():
            if abs(total - 1.0) > PROB_TOL:
                raise MdpValidationError(
                    f"({s}, {self.action_name(a)}) probabilities sum to {total:g}"
                )
        enabled_states = {s for (s, a) in sums}
        for s in range(self.num_states):
            if s not in enabled_states:
                raise MdpValidationError(f"state {s} has no enabled action")
        used_actions = {a for (s, a) in sums}
        for a in range(self.num_actions):
            if a not in used_actions:
                raise MdpValidationError(
                    f"action {self.action_name(a)} is enabled in no state"
                )
        for a in self.action_names:
            if not 0 <= a < self.num_actions:
                raise MdpValidationError(f"action name declared for unknown id {a}")
        if self.init_dist is not None:
            states = [s for s, _ in self.init_dist]
            if len(states) != len(set(states)):
                raise MdpValidationError("duplicate state in initial distribution")
            total = 0.0
            for s, p in self.init_dist:
                if not 0 <= s < self.num_states:
                    raise MdpValidationError(
                        f"initial distribution mentions unknown state {s}"
                    )
                if not 0.0 < p <= 1.0:
                    raise MdpValidationError(
                        f"initial probability {p} of state {s} outside (0, 1]"
                    )
                total += p
            if abs(total - 1.0) > PROB_TOL:
                raise MdpValidationError(
                    f"initial distribution sums to {total:g}"
                )

    # -- derived views ---------------------------------------------------

    def action_name(self, a: int) -> str:
        return self.action_names.get(a, f"a{a}")

    def enabled_actions(self, s: int) -> list[int]:
        return sorted({a for (src, a, _, _) in self.transitions if src == s})

    @property
    def num_transitions(self) -> int:
        return len(self.transitions)

    def support(self) -> list[tuple[int, int, int]]:
        """All (src, act, dst) triples with positive probability, sorted."""
        return [(s, a, t) for s, a, t, _ in self.transitions]


@dataclass(frozen=True)
class ExplicitGraph:
    """Labelled directed graph over the states of an MDP."""

    num_vertices: int
    num_labels: int
    edges: frozenset[tuple[int, int, int]]


def underlying_graph(mdp: ExplicitMdp) -> ExplicitGraph:
    """Graph with one (src, act, dst) edge per positive-probability transition."""
    return ExplicitGraph(
        num_vertices=mdp.num_states,
        num_labels=mdp.num_actions,
        edges=frozenset(mdp.support()),
    )


# -- text format ---------------------------------------------------------
#
# mdp <num_states> <num_actions>
# action <id> <name>          (optional, display only)
# init <state> <prob>         (optional)
# t <src> <act> <dst> <prob>
#
# '#' starts a comment.  Probabilities are decimals or rationals like 2/3.


def _parse_prob(token: str, line_no: int) -> float:
    try:
        return float(Fraction(token))
    except (ValueError, ZeroDivisionError):
        raise MdpSyntaxError(line_no, f"bad probability {token!r}") from None


def _parse_int(token: str, line_no: int, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise MdpSyntaxError(line_no, f"bad {what} {token!r}") from None


def parse_mdp(data: str | bytes) -> ExplicitMdp:
    """Parse the native text format, validating all MDP invariants."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    header = None
    transitions: list[Transition] = []
    init: list[tuple[int, float]] = []
    names: dict[int, str] = {}
    for line_no, raw in enumerate(data.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        kind, args = fields[0], fields[1:]
        if kind == "mdp":
            if header is not None:
                raise MdpSyntaxError(line_no, "duplicate mdp header")
            if len(args) != 2:
                raise MdpSyntaxError(line_no, "expected: mdp <num_states> <num_actions>")
            header = (
                _parse_int(args[0], line_no, "state count"),
                _parse_int(args[1], line_no, "action count"),
            )
            continue
        if header is None:
            raise MdpSyntaxError(line_no, "first directive must be the mdp header")
        if kind == "t":
            if len(args) != 4:
                raise MdpSyntaxError(line_no, "expected: t <src> <act> <dst> <prob>")
            transitions.append(
                Transition(
                    _parse_int(args[0], line_no, "state id"),
                    _parse_int(args[1], line_no, "action id"),
                    _parse_int(args[2], line_no, "state id"),
                    _parse_prob(args[3], line_no),
                )
            )
        elif kind == "init":
            if len(args) != 2:
                raise MdpSyntaxError(line_no, "expected: init <state> <prob>")
            init.append(
                (_parse_int(args[0], line_no, "state id"), _parse_prob(args[1], line_no))
            )
        elif kind == "action":
            if len(args) != 2:
                raise MdpSyntaxError(line_no, "expected: action <id> <name>")
            names[_parse_int(args[0], line_no, "action id")] = args[1]
        else:
            raise MdpSyntaxError(line_no, f"unknown directive {kind!r}")
    if header is None:
        raise MdpSyntaxError(1, "missing mdp header")
    return ExplicitMdp(
        num_states=header[0],
        num_actions=header[1],
        transitions=tuple(transitions),
        init_dist=tuple(init) if init else None,
        action_names=names,
    )


def _format_prob(p: float) -> str:
    if p == int(p):
        return str(int(p))
    return repr(p)


def serialize_mdp(mdp: ExplicitMdp) -> str:
    """Canonical serialization: transitions sorted by (src, act, dst)."""
    lines = [f"mdp {mdp.num_states} {mdp.num_actions}"]
    for a in sorted(mdp.action_names):
        lines.append(f"action {a} {mdp.action_names[a]}")
    if mdp.init_dist is not None:
        for s, p in mdp.init_dist:
            lines.append(f"init {s} {_format_prob(p)}")
    for s, a, t, p in mdp.transitions:
        lines.append(f"t {s} {a} {t} {_format_prob(p)}")
    return "\n".join(lines) + "\n"


# -- built-in examples -----------------------------------------------------


def _fig1() -> ExplicitMdp:
    # Six states, eight actions: a two-cycle {0,1}, a three-cycle {2,3,5},
    # a sink self-loop 4, and a branching action b4 at state 3 splitting
    # 0.5/0.5 between the two-cycle and the sink.  Only the support matters
    # to the decomposition; b2/b4 stitch the two cycles into one SCC until
    # the b4 pair is removed.
    names = {0: "a1", 1: "a2", 2: "b2", 3: "a3", 4: "a4", 5: "b4", 6: "a5", 7: "a6"}
    ts = [
        (0, 0, 1, 1.0),  # 0 -a1-> 1
        (1, 1, 0, 1.0),  # 1 -a2-> 0
        (1, 2, 3, 1.0),  # 1 -b2-> 3
        (2, 3, 3, 1.0),  # 2 -a3-> 3
        (3, 4, 5, 1.0),  # 3 -a4-> 5
        (3, 5, 1, 0.5),  # 3 -b4-> 1
        (3, 5, 4, 0.5),  # 3 -b4-> 4
        (4, 6, 4, 1.0),  # 4 -a5-> 4
        (5, 7, 2, 1.0),  # 5 -a6-> 2
    ]
    return ExplicitMdp(6, 8, tuple(Transition(*t) for t in ts), action_names=names)


def _selfloop1() -> ExplicitMdp:
    return ExplicitMdp(1, 1, (Transition(0, 0, 0, 1.0),))


BUILTIN_EXAMPLES = {
    "fig1": _fig1,
    "selfloop1": _selfloop1,
}


def builtin_example(name: str) -> ExplicitMdp:
    try:
        build = BUILTIN_EXAMPLES[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_EXAMPLES))
        raise MdpError(f"unknown example {name!r}; registered examples: {known}") from None
    return build()
