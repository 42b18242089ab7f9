"""Canonical decomposition results, shared by the symbolic engine and the oracle."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable


@dataclass(frozen=True, order=True)
class Mec:
    """One maximal end component: its states and its labelled edges."""

    states: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class MecResult:
    """Full decomposition in canonical form.

    State lists and edge lists are sorted; components are ordered by their
    minimum state id.  Two results are equal iff the decompositions are.
    """

    mecs: tuple[Mec, ...]

    @staticmethod
    def canonical(parts: Iterable[tuple[Iterable[int], Iterable[tuple[int, int, int]]]]) -> "MecResult":
        mecs = [
            Mec(tuple(sorted(states)), tuple(sorted(edges)))
            for states, edges in parts
        ]
        mecs.sort(key=lambda m: m.states)
        return MecResult(tuple(mecs))

    def __len__(self) -> int:
        return len(self.mecs)

    def to_document(self) -> str:
        """Text form: a `mec <k>` header, one `s` line and `e` lines per component."""
        lines: list[str] = []
        for k, mec in enumerate(self.mecs):
            lines.append(f"mec {k}")
            lines.append("s " + " ".join(str(s) for s in mec.states))
            for s, a, t in mec.edges:
                lines.append(f"e {s} {a} {t}")
        return "\n".join(lines) + ("\n" if lines else "")
