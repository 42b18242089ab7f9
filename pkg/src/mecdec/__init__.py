"""Symbolic maximal end component decomposition for MDPs."""

from .backends import BACKENDS, OpStats, make_backend
from .engine import (
    ALGORITHMS,
    CheckFailure,
    DeadlineExceeded,
    decompose_basic,
    decompose_interleave,
    decompose_with_stats,
)
from .generate import GeneratorParams, chain_of_cycles, chain_of_sccs, path_of_sccs, random_mdp
from .model import (
    ExplicitGraph,
    ExplicitMdp,
    MdpError,
    MdpSyntaxError,
    MdpValidationError,
    builtin_example,
    parse_mdp,
    serialize_mdp,
    underlying_graph,
)
from .oracle import mec_decomposition, tarjan_scc, verify_decomposition
from .result import Mec, MecResult

__all__ = [
    "ALGORITHMS",
    "BACKENDS",
    "CheckFailure",
    "DeadlineExceeded",
    "ExplicitGraph",
    "ExplicitMdp",
    "GeneratorParams",
    "Mec",
    "MecResult",
    "MdpError",
    "MdpSyntaxError",
    "MdpValidationError",
    "OpStats",
    "builtin_example",
    "chain_of_cycles",
    "chain_of_sccs",
    "decompose_basic",
    "decompose_interleave",
    "decompose_with_stats",
    "make_backend",
    "mec_decomposition",
    "parse_mdp",
    "path_of_sccs",
    "random_mdp",
    "serialize_mdp",
    "tarjan_scc",
    "underlying_graph",
    "verify_decomposition",
]
