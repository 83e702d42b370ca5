from fractions import Fraction

import pytest
from helpers import labels, system

from rccsbisim.branching import (
    GoalOutsideGraph,
    IllFormedQuery,
    almost_sure_reach,
    eps_graph,
    l_transition,
    q_transition,
    quotient,
    signature,
)
from rccsbisim.partition import Partition


@pytest.fixture
def eps():
    sys = system("eps_trees.rccs", "P")
    return sys, sys.partition(["P", "P1", "P2", "P3"], ["P4", "P5"])


def test_eps_graph(eps):
    sys, p = eps
    g = eps_graph(sys.lts, p, sys["P"])
    assert g.nodes == sys.ids("P", "P1", "P2", "P3")


def test_almost_sure_reach(eps):
    sys, p = eps
    g = eps_graph(sys.lts, p, sys["P"])
    assert almost_sure_reach(g, sys.ids("P2", "P3")) == g.nodes
    assert almost_sure_reach(g, sys.ids("P2")) == sys.ids("P2")


def test_goal_outside_graph(eps):
    sys, p = eps
    g = eps_graph(sys.lts, p, sys["P"])
    with pytest.raises(GoalOutsideGraph):
        almost_sure_reach(g, sys.ids("P4"))


def test_l_and_q_transitions(eps):
    sys, p = eps
    b2, b3 = p.block_of(sys["P4"]), p.block_of(sys.term_state("0"))
    b1 = p.block_of(sys["P"])
    assert l_transition(sys.lts, p, sys["P"], "a", b2)
    assert q_transition(sys.lts, p, sys["P4"], Fraction(1, 2), b1)
    assert q_transition(sys.lts, p, sys["P4"], Fraction(1, 2), b3)
    assert not q_transition(sys.lts, p, sys["P4"], Fraction(1, 5), b1)


def test_ill_formed_queries(eps):
    sys, p = eps
    own = p.block_of(sys["P"])
    with pytest.raises(IllFormedQuery):
        l_transition(sys.lts, p, sys["P"], "tau", own)
    with pytest.raises(IllFormedQuery):
        q_transition(sys.lts, p, sys["P4"], Fraction(1, 2), p.block_of(sys["P4"]))


def test_seed_that_is_a_bisimulation_is_returned(eps):
    sys, p = eps
    assert quotient(sys.lts, p) == p


def test_signature_of_equivalent_states_agree(eps):
    sys, p = eps
    assert signature(sys.lts, p, sys["P"]) == signature(sys.lts, p, sys["P3"])
    assert signature(sys.lts, p, sys["P4"]) == signature(sys.lts, p, sys["P5"])


def test_silent_loop_quotient():
    sys = system("silent_loop.rccs", "A1")
    assert sys.blocks_by_label(quotient(sys.lts)) == labels("A1,B1", "a", "b", "0")


def test_leaky_loop_quotient():
    sys = system("leaky_loop.rccs", "A2")
    assert sys.blocks_by_label(quotient(sys.lts)) == labels("A2,B2,C2")


def test_stuttering_through_unrelated_state_splits():
    sys = system("weak_exh_only.rccs", "A3", "B3")
    p = quotient(sys.lts)
    assert not p.same_block(sys["A3"], sys["B3"])


def test_quotient_from_discrete_is_discrete():
    sys = system("coin.rccs")
    d = Partition.discrete(len(sys.lts))
    assert quotient(sys.lts, d) == d
