import pytest

from mecdec import (
    GeneratorParams,
    MdpError,
    MdpSyntaxError,
    MdpValidationError,
    builtin_example,
    chain_of_sccs,
    parse_mdp,
    random_mdp,
    serialize_mdp,
    underlying_graph,
)
from mecdec.model import ExplicitMdp, Transition

FIG1_EDGES = {
    (0, 0, 1),  # a1
    (1, 1, 0),  # a2
    (1, 2, 3),  # b2
    (3, 5, 1),  # b4, into the two-cycle
    (3, 5, 4),  # b4, into the sink
    (2, 3, 3),  # a3
    (3, 4, 5),  # a4
    (5, 7, 2),  # a6
    (4, 6, 4),  # a5, the sink self-loop
}


def test_fig1_structure():
    m = builtin_example("fig1")
    assert m.num_states == 6
    assert m.num_actions == 8
    g = underlying_graph(m)
    assert g.edges == frozenset(FIG1_EDGES)
    assert g.num_vertices == 6 and g.num_labels == 8


def test_fig1_round_trips_through_text():
    m = builtin_example("fig1")
    assert parse_mdp(serialize_mdp(m)) == m


def test_selfloop_is_minimal_valid_mdp():
    m = builtin_example("selfloop1")
    assert m.num_states == 1 and m.num_actions == 1
    assert underlying_graph(m).edges == frozenset({(0, 0, 0)})


def test_unknown_example_lists_registered_names():
    with pytest.raises(MdpError, match="fig1"):
        builtin_example("nope")


def test_parse_minimal_document():
    m = parse_mdp("mdp 1 1\nt 0 0 0 1\n")
    assert m == builtin_example("selfloop1")


def test_parse_accepts_bytes():
    m = parse_mdp(b"mdp 1 1\nt 0 0 0 1\n")
    assert m == builtin_example("selfloop1")


def test_parse_accepts_comments_rationals_and_init():
    text = """
# a three-state toy
mdp 3 2
action 0 go
init 0 1
t 0 0 1 1/3
t 0 0 2 2/3
t 1 1 1 1
t 2 0 2 1
"""
    m = parse_mdp(text)
    assert m.num_transitions == 4
    assert m.init_dist == ((0, 1.0),)
    assert m.action_names[0] == "go"


def test_parse_reports_line_numbers():
    with pytest.raises(MdpSyntaxError, match="line 3"):
        parse_mdp("mdp 2 1\nt 0 0 1 1\nt 1 0 oops 1\n")
    with pytest.raises(MdpSyntaxError, match="line 1"):
        parse_mdp("transitions?\n")


def test_probability_sum_violation_names_the_pair():
    with pytest.raises(MdpValidationError, match=r"\(0, a0\) probabilities sum to 0.5"):
        parse_mdp("mdp 1 1\nt 0 0 0 0.5\n")


def test_state_without_action_is_rejected_not_repaired():
    with pytest.raises(MdpValidationError, match="state 1 has no enabled action"):
        parse_mdp("mdp 2 1\nt 0 0 0 1\n")


def test_action_enabled_nowhere_is_rejected():
    with pytest.raises(MdpValidationError, match="a1 is enabled in no state"):
        parse_mdp("mdp 1 2\nt 0 0 0 1\n")


def test_duplicate_triple_rejected():
    with pytest.raises(MdpValidationError, match="duplicate"):
        ExplicitMdp(1, 1, (Transition(0, 0, 0, 0.5), Transition(0, 0, 0, 0.5)))


def test_out_of_range_ids_rejected():
    with pytest.raises(MdpValidationError, match="out of range"):
        ExplicitMdp(2, 1, (Transition(0, 0, 5, 1.0), Transition(1, 0, 1, 1.0)))


def test_init_distribution_must_sum_to_one():
    with pytest.raises(MdpValidationError, match="initial distribution sums"):
        parse_mdp("mdp 1 1\ninit 0 0.25\nt 0 0 0 1\n")


def test_underlying_graph_counts_support_triples():
    for m in [random_mdp(GeneratorParams(12, 3, 0.5, 3, seed=s)) for s in range(20)]:
        g = underlying_graph(m)
        recount = {(s, a, t) for s, a, t, p in m.transitions if p > 0}
        assert g.edges == frozenset(recount)
        assert len(g.edges) == m.num_transitions


def test_generator_is_deterministic_in_seed():
    params = GeneratorParams(20, 3, 0.5, 2, seed=42)
    assert serialize_mdp(random_mdp(params)) == serialize_mdp(random_mdp(params))
    other = GeneratorParams(20, 3, 0.5, 2, seed=43)
    assert serialize_mdp(random_mdp(params)) != serialize_mdp(random_mdp(other))


def test_generator_one_state_one_action_is_the_selfloop():
    m = random_mdp(GeneratorParams(1, 1, 1.0, 1, seed=0))
    assert underlying_graph(m).edges == frozenset({(0, 0, 0)})


def test_generated_instances_round_trip_over_100_seeds():
    for seed in range(100):
        m = random_mdp(GeneratorParams(50, 4, 0.35, 3, seed=seed))
        assert parse_mdp(serialize_mdp(m)) == m


def test_serialize_parse_is_identity_on_canonical_documents():
    m = random_mdp(GeneratorParams(9, 2, 0.6, 2, seed=5))
    doc = serialize_mdp(m)
    assert serialize_mdp(parse_mdp(doc)) == doc


def test_generator_params_validation():
    with pytest.raises(MdpValidationError):
        GeneratorParams(0, 1)
    with pytest.raises(MdpValidationError):
        GeneratorParams(1, 1, enable_prob=0.0)
    with pytest.raises(MdpValidationError):
        GeneratorParams(1, 1, branch_max=0)


def test_chain_of_sccs_shape():
    m = chain_of_sccs(4, 3, forward=True)
    assert m.num_states == 12
    assert m.num_actions == 2
    back = chain_of_sccs(5, 2, forward=False, cross_jumps=3, seed=1)
    assert back.num_actions == 3
    assert parse_mdp(serialize_mdp(back)) == back
