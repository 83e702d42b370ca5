"""Direct, pairwise checks that a partition satisfies a defining condition.

These deliberately avoid the signature and block-level shortcuts used by the
deciders: every transition query is answered from the per-state
epsilon-graph, and every pair in a block is compared explicitly.
"""

from __future__ import annotations

from .branching import eps_graph, l_transition, normalized_masses, q_transition
from .divergence import det_div_tree
from .lts import Lts, plts_transitions
from .partition import Partition, class_mass
from .syntax import TAU
from .tauec import comp_mec, reaches_related_mec
from .weak import weak_combined_exists


def enabled_moves(lts: Lts, p: Partition, s: int) -> set[tuple]:
    """All l-transitions and q-transitions of ``s`` that leave nothing unmatched."""
    g = eps_graph(lts, p, s)
    own = p.block_of(s)
    out: set[tuple] = set()
    for v in g.nodes:
        for e in lts.out[v]:
            if e.probabilistic:
                continue
            b = p.block_of(e.dst)
            if (e.action != TAU or b != own) and l_transition(lts, p, s, e.action, b):
                out.add(("l", e.action, b))
        for b, q in (normalized_masses(lts, p, v) or {}).items():
            if q_transition(lts, p, s, q, b):
                out.add(("q", q, b))
    return out


def _blockwise(p: Partition, per_state) -> bool:
    for block in p.blocks():
        values = [per_state(s) for s in sorted(block)]
        if any(v != values[0] for v in values):
            return False
    return True


def is_branching_bisimulation(lts: Lts, p: Partition) -> bool:
    # Moves are checked in both directions because blocks are compared as sets.
    return _blockwise(p, lambda s: enabled_moves(lts, p, s))


def is_divergence_preserving(lts: Lts, p: Partition) -> bool:
    return _blockwise(p, lambda s: det_div_tree(lts, p, s))


def is_tau_ec_invariant(lts: Lts, p: Partition) -> bool:
    for block in p.blocks():
        for a in block:
            for mec in comp_mec(lts, a):
                if not all(reaches_related_mec(lts, p, b, mec) for b in block):
                    return False
    return True


def is_weak_bisimulation(lts: Lts, p: Partition) -> bool:
    for block in p.blocks():
        for a in block:
            for action, dist in plts_transitions(lts, a):
                m = class_mass(p, dist)
                for b in block:
                    if b != a and not weak_combined_exists(lts, b, action, m, p):
                        return False
    return True


CONDITIONS = {
    "branching": (is_branching_bisimulation,),
    "branching-div": (is_branching_bisimulation, is_divergence_preserving),
    "branching-exh": (is_branching_bisimulation, is_tau_ec_invariant),
    "weak": (is_weak_bisimulation,),
    "weak-exh": (is_weak_bisimulation, is_tau_ec_invariant),
}


def satisfies(lts: Lts, p: Partition, relation: str) -> bool:
    return all(check(lts, p) for check in CONDITIONS[relation])
