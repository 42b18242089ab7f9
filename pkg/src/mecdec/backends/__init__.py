"""Interchangeable symbolic set backends."""

from .base import BackendError, Handle, OpStats, SymbolicBackend, SymbolicGraph
from .bdd import BddBackend
from .bitset import BitsetBackend

BACKENDS = {
    "bitset": BitsetBackend,
    "bdd": BddBackend,
}


def make_backend(name: str, num_states: int, num_actions: int) -> SymbolicBackend:
    try:
        cls = BACKENDS[name]
    except KeyError:
        known = ", ".join(sorted(BACKENDS))
        raise BackendError(f"unknown backend {name!r}; available: {known}") from None
    return cls(num_states, num_actions)


__all__ = [
    "BACKENDS",
    "BackendError",
    "BddBackend",
    "BitsetBackend",
    "Handle",
    "OpStats",
    "SymbolicBackend",
    "SymbolicGraph",
    "make_backend",
]
