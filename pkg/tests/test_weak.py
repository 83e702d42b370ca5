from fractions import Fraction

import pytest
from helpers import labels, system

from rccsbisim.partition import Partition, class_mass
from rccsbisim.weak import MassNotNormalized, flow_problem, lift_equal, weak_combined_exists, weak_quotient

H, T = Fraction(1, 2), Fraction(1, 3)


def test_lift_equal():
    p = Partition.from_blocks(4, [[0, 1], [2, 3]])
    assert lift_equal(p, {0: H, 2: H}, {1: H, 3: Fraction(1, 4), 2: Fraction(1, 4)})
    assert not lift_equal(p, {0: H, 2: H}, {1: Fraction(1)})


def test_infinite_loop_reaches_exact_masses():
    sys = system("coin.rccs", "S", "P1")
    p = sys.partition(["S", "P1"], ["a"], ["b"])
    a, b = p.block_of(sys.term_state("a")), p.block_of(sys.term_state("b"))
    assert weak_combined_exists(sys.lts, sys["P1"], "tau", {a: H, b: H}, p)
    assert not weak_combined_exists(sys.lts, sys["P1"], "tau", {a: T, b: 1 - T}, p)


def test_convex_combination_with_staying():
    sys = system("coin.rccs", "S", "P2")
    p = sys.partition(["S", "P2", "Q2"], ["a"], ["b"])
    own, a, b = p.block_of(sys["S"]), p.block_of(sys.term_state("a")), p.block_of(sys.term_state("b"))
    assert weak_combined_exists(sys.lts, sys["S"], "tau", {own: T, a: T, b: T}, p)


def test_visible_action_requires_completion():
    sys = system("silent_loop.rccs", "A1")
    p = Partition.coarsest(len(sys.lts))
    assert not weak_combined_exists(sys.lts, sys["A1"], "a", {0: Fraction(1)}, p)
    assert weak_combined_exists(sys.lts, sys.term_state("a"), "a", {0: Fraction(1)}, p)


def test_silent_weak_step_may_be_empty():
    sys = system("leaky_loop.rccs", "A2")
    p = sys.partition(["A2", "B2"], ["C2"])
    own, c = p.block_of(sys["B2"]), p.block_of(sys["C2"])
    assert weak_combined_exists(sys.lts, sys["B2"], "tau", {own: Fraction(1)}, p)
    assert weak_combined_exists(sys.lts, sys["B2"], "tau", {own: H, c: H}, p)


def test_mass_not_normalized():
    sys = system("coin.rccs", "S")
    with pytest.raises(MassNotNormalized):
        weak_combined_exists(sys.lts, sys["S"], "tau", {0: H}, Partition.coarsest(len(sys.lts)))


def test_flow_problem_dump():
    sys = system("coin.rccs", "P1")
    p = sys.partition(["P1"], ["a"], ["b"])
    dumps = []
    a, b = p.block_of(sys.term_state("a")), p.block_of(sys.term_state("b"))
    weak_combined_exists(sys.lts, sys["P1"], "tau", {a: H, b: H}, p, dump=dumps.append)
    assert "balance[post," in dumps[0] and "mass[block" in dumps[0]
    assert flow_problem(sys.lts, sys["P1"], "tau", {a: H, b: H}, p).feasible()


def test_quotients():
    sys = system("silent_loop.rccs", "A1")
    assert sys.blocks_by_label(weak_quotient(sys.lts)) == labels("A1,B1", "a", "b", "0")
    sys = system("leaky_loop.rccs", "A2")
    assert sys.blocks_by_label(weak_quotient(sys.lts)) == labels("A2,B2,C2")
    sys = system("weak_exh_only.rccs", "A3", "B3")
    assert weak_quotient(sys.lts).same_block(sys["A3"], sys["B3"])


def test_weak_quotient_respects_seed():
    sys = system("leaky_loop.rccs", "A2")
    seed = sys.partition(["A2", "B2"], ["C2"])
    assert weak_quotient(sys.lts, seed) == seed
