"""Acceptance criteria, one test each.

``conftest.py`` prints a PASS/FAIL line per test of this module at the end of
the run; ``python3 tests/test_acceptance.py`` runs just these.
"""

import sys
import time
from fractions import Fraction

import pytest
from helpers import labels, random_systems, system

from agreement import almost_sure_agreement, divergence_agreement, mec_agreement, weak_agreement
from rccsbisim.branching import l_transition, q_transition, quotient
from rccsbisim.divergence import det_div_tree
from rccsbisim.generate import chain_definitions
from rccsbisim.lts import build_lts
from rccsbisim.relations import RELATIONS, compute, equivalent, partition_for
from rccsbisim.syntax import load_definitions
from rccsbisim.tauec import comp_mec
from rccsbisim.verify import satisfies

LATTICE = [
    ("branching-div", "branching-exh"),
    ("branching-exh", "branching"),
    ("branching", "weak"),
    ("branching-exh", "weak-exh"),
    ("weak-exh", "weak"),
]


def _timed(fn):
    start = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - start


@pytest.fixture(scope="module")
def corpus():
    return random_systems(2024, 500, max_states=12)


def test_silent_loop_quotients():
    def run():
        sys_ = system("silent_loop.rccs", "A1", "B1")
        parts = {rel: sys_.blocks_by_label(partition_for(sys_.lts, rel)) for rel in RELATIONS}
        checks = [equivalent(sys_.lts, sys_["A1"], sys_["B1"], rel) for rel in ("branching-exh", "branching-div", "weak-exh")]
        return parts, checks

    (parts, checks), elapsed = _timed(run)
    merged = labels("A1,B1", "a", "b", "0")
    assert parts["branching"] == parts["weak"] == parts["branching-exh"] == merged
    assert parts["branching-div"] == labels("A1", "B1", "a", "b", "0")
    assert checks == [True, False, True]
    assert elapsed < 1


def test_leaky_loop_quotients():
    def run():
        sys_ = system("leaky_loop.rccs", "A2")
        lts = sys_.lts
        names = ("A2", "B2", "C2")
        out = {}
        for rel in RELATIONS:
            p = partition_for(lts, rel)
            out[rel] = {frozenset(n for n in names if sys_[n] in b) for b in p.blocks()} - {frozenset()}
        return out

    parts, elapsed = _timed(run)
    assert parts["branching"] == parts["weak"] == labels("A2,B2,C2")
    assert parts["weak-exh"] == labels("A2,B2", "C2")
    assert parts["branching-exh"] == parts["branching-div"] == labels("A2", "B2", "C2")
    assert elapsed < 1


def test_exhaustive_weak_strictly_coarser_than_branching():
    sys_ = system("weak_exh_only.rccs")
    assert equivalent(sys_.lts, sys_["A3"], sys_["B3"], "weak-exh")
    assert not equivalent(sys_.lts, sys_["A3"], sys_["B3"], "branching")


def test_two_loops_exhaustive_check_and_components():
    sys_ = system("two_loops.rccs", "A1", "A3")
    p = partition_for(sys_.lts, "branching-exh")
    assert p.same_block(sys_["A1"], sys_["A3"])
    assert sys_.blocks_by_label(p) == labels("A1,B1,A3,B3,C3", "a", "b", "0")
    mecs = comp_mec(sys_.lts, sys_["A3"])
    assert [m.nodes for m in mecs] == [frozenset({sys_["B3"]}), frozenset({sys_["C3"]})]
    for m in mecs:
        (v,) = m.nodes
        assert [(e.src, e.dst, e.silent, e.prob) for e in m.edges] == [(v, v, True, None)]


def test_divergence_detection_rounds():
    sys_ = system("divergence_rounds.rccs", "B")
    p = quotient(sys_.lts)
    s0, s1, s2, s3, s4 = sys_["B"], sys_["A"], sys_["S2"], sys_.term_state("0"), sys_["S4"]
    trace = []
    assert det_div_tree(sys_.lts, p, s0, trace) is False
    assert trace == [{s3}, {s2}, {s1}, {s0}]
    assert [det_div_tree(sys_.lts, p, s) for s in (s1, s2, s3, s4)] == [False, False, False, True]


def test_coin_implementations():
    sys_ = system("coin.rccs")
    lts = sys_.lts
    s, p1, p2, q2 = sys_["S"], sys_["P1"], sys_["P2"], sys_["Q2"]
    for rel in ("branching", "weak"):
        part = partition_for(lts, rel)
        assert part.same_block(s, p1) and part.same_block(s, p2)
    exh = partition_for(lts, "weak-exh")
    assert not exh.same_block(p2, s) and not exh.same_block(p2, p1)
    assert not partition_for(lts, "branching-div").same_block(q2, p2)


def test_epsilon_tree_transitions_under_seed():
    sys_ = system("eps_trees.rccs", "P")
    seed = sys_.partition(["P", "P1", "P2", "P3"], ["P4", "P5"])
    assert len(seed) == 3
    assert quotient(sys_.lts, seed) == seed
    lts = sys_.lts
    cls = lambda name: seed.block_of(sys_[name])
    zero = seed.block_of(sys_.term_state("0"))
    assert l_transition(lts, seed, sys_["P"], "a", cls("P4"))
    assert q_transition(lts, seed, sys_["P4"], Fraction(1, 2), cls("P2"))
    assert q_transition(lts, seed, sys_["P4"], Fraction(1, 2), zero)


def test_random_lattice_and_definitions(corpus):
    def run():
        failures = []
        for k, lts in enumerate(corpus):
            parts = {rel: partition_for(lts, rel) for rel in RELATIONS}
            for finer, coarser in LATTICE:
                if not parts[finer].refines(parts[coarser]):
                    failures.append(f"system {k}: {finer} not below {coarser}")
            for rel, p in parts.items():
                if not satisfies(lts, p, rel):
                    failures.append(f"system {k}: {rel} result violates its conditions")
        return failures

    failures, elapsed = _timed(run)
    assert len(corpus) >= 500 and all(len(lts) <= 12 for lts in corpus)
    assert not failures, failures[:5]
    assert elapsed < 60


def test_oracle_agreement(corpus):
    results = {
        "almost-sure": almost_sure_agreement(corpus, max_nodes=8),
        "divergence": divergence_agreement(corpus, max_nodes=8),
        "end-components": mec_agreement(corpus, max_nodes=6),
        "weak": weak_agreement(corpus, max_states=6),
    }
    for name, (checked, bad) in results.items():
        assert checked > 0, name
        assert not bad, (name, bad[:3])
    assert weak_agreement.skipped == 0


@pytest.mark.parametrize("relation", RELATIONS)
def test_chain_runtime(relation):
    defs = load_definitions(chain_definitions(67))
    lts = build_lts([defs["P0"]])
    assert len(lts) >= 200
    (p, _), elapsed = _timed(lambda: compute(lts, relation))
    assert len(p) == len(lts)
    assert elapsed < 10


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
