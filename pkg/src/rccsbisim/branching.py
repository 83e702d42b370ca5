"""Branching bisimilarity by signature refinement.

Within a block, the state-preserving immediate silent transitions form a
small MDP.  An l-transition or q-transition from a state exists iff the state
can reach the matching goal nodes almost surely in that MDP.  Because the
epsilon-graph of a state is forward closed inside its block, the almost-sure
set is computed once per block and goal, not once per state.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .lts import Itr, Lts, immediate_silent_transitions
from .partition import Partition, coarsest
from .syntax import TAU


class GoalOutsideGraph(ValueError):
    pass


class IllFormedQuery(ValueError):
    pass


@dataclass(frozen=True)
class EpsGraph:
    root: int
    nodes: frozenset[int]
    edges: Mapping[int, tuple[Itr, ...]]


@dataclass(frozen=True)
class Signature:
    vis: frozenset  # (action, block id)
    probs: frozenset  # (q, block id)


def preserving_itrs(lts: Lts, p: Partition, s: int) -> tuple[Itr, ...]:
    bid = p.block_of(s)
    return tuple(
        itr for itr in immediate_silent_transitions(lts, s) if all(p.block_of(t) == bid for t in itr.tgt)
    )


def eps_graph(lts: Lts, p: Partition, s: int) -> EpsGraph:
    edges: dict[int, tuple[Itr, ...]] = {}
    stack = [s]
    while stack:
        v = stack.pop()
        if v in edges:
            continue
        edges[v] = preserving_itrs(lts, p, v)
        for itr in edges[v]:
            stack.extend(t for t in itr.tgt if t not in edges)
    return EpsGraph(s, frozenset(edges), edges)


def _almost_sure(nodes: Iterable[int], edges: Mapping[int, Iterable[Itr]], goal: Iterable[int]) -> frozenset:
    alive = set(nodes)
    goal = set(goal) & alive
    while True:
        allowed = {v: [i for i in edges[v] if i.tgt <= alive] for v in alive}
        preds: dict[int, list[int]] = defaultdict(list)
        for v, itrs in allowed.items():
            for itr in itrs:
                for t in itr.tgt:
                    preds[t].append(v)
        reach = set(goal)
        stack = list(goal)
        while stack:
            t = stack.pop()
            for v in preds.get(t, ()):
                if v not in reach:
                    reach.add(v)
                    stack.append(v)
        if reach == alive:
            return frozenset(alive)
        alive = reach


def almost_sure_reach(graph: EpsGraph, goal: Iterable[int]) -> frozenset[int]:
    """Nodes with a scheduler that reaches ``goal`` with probability one."""
    goal = frozenset(goal)
    if not goal <= graph.nodes:
        raise GoalOutsideGraph(f"goal nodes {sorted(goal - graph.nodes)} not in the epsilon-graph")
    return _almost_sure(graph.nodes, graph.edges, goal)


def normalized_masses(lts: Lts, p: Partition, s: int) -> dict[int, Fraction] | None:
    """Class masses of the collective of ``s`` conditioned on leaving its block.

    ``None`` when ``s`` has no collective or the collective stays in the block.
    """
    c = lts.collective(s)
    if c is None:
        return None
    own = p.block_of(s)
    stay = c.mass(p.block(own))
    if stay == 1:
        return None
    out: dict[int, Fraction] = {}
    for t, q in c.targets:
        b = p.block_of(t)
        if b != own:
            out[b] = out.get(b, Fraction(0)) + q / (1 - stay)
    return out


def _vis_goal(lts: Lts, p: Partition, nodes: Iterable[int], action: str, target: int) -> set[int]:
    return {
        v
        for v in nodes
        if any(not e.probabilistic and e.action == action and p.block_of(e.dst) == target for e in lts.out[v])
    }


def l_transition(lts: Lts, p: Partition, s: int, action: str, target: int) -> bool:
    if action == TAU and target == p.block_of(s):
        raise IllFormedQuery("a silent l-transition must leave the current block")
    g = eps_graph(lts, p, s)
    return s in almost_sure_reach(g, _vis_goal(lts, p, g.nodes, action, target))


def q_transition(lts: Lts, p: Partition, s: int, q: Fraction, target: int) -> bool:
    q = Fraction(q)
    if target == p.block_of(s):
        raise IllFormedQuery("a q-transition must leave the current block")
    if not 0 < q <= 1:
        raise IllFormedQuery(f"q = {q} is not in (0, 1]")
    g = eps_graph(lts, p, s)
    goal = set()
    for v in g.nodes:
        nm = normalized_masses(lts, p, v)
        if nm is not None and nm.get(target, 0) == q:
            goal.add(v)
    return s in almost_sure_reach(g, goal)


def block_signatures(lts: Lts, p: Partition, bid: int) -> dict[int, Signature]:
    """Signature of every member of block ``bid``."""
    members = p.block(bid)
    edges = {v: preserving_itrs(lts, p, v) for v in members}
    goals: dict[tuple, set[int]] = defaultdict(set)
    for v in sorted(members):
        for e in lts.out[v]:
            if e.probabilistic:
                continue
            b = p.block_of(e.dst)
            if e.action != TAU or b != bid:
                goals[("vis", e.action, b)].add(v)
        nm = normalized_masses(lts, p, v)
        for b, q in (nm or {}).items():
            goals[("prob", q, b)].add(v)
    vis: dict[int, set] = {v: set() for v in members}
    probs: dict[int, set] = {v: set() for v in members}
    for key, goal in goals.items():
        for v in _almost_sure(members, edges, goal):
            (vis if key[0] == "vis" else probs)[v].add(key[1:])
    return {v: Signature(frozenset(vis[v]), frozenset(probs[v])) for v in members}


def signature(lts: Lts, p: Partition, s: int) -> Signature:
    return block_signatures(lts, p, p.block_of(s))[s]


def split_by(p: Partition, bid: int, key: Callable[[int], object]) -> list[frozenset]:
    groups: dict[object, set[int]] = {}
    for s in sorted(p.block(bid)):
        groups.setdefault(key(s), set()).add(s)
    return [frozenset(g) for g in groups.values()]


def quotient_with_stats(lts: Lts, seed: Partition | None = None) -> tuple[Partition, int]:
    p = seed if seed is not None else coarsest(lts)
    rounds = 0
    while True:
        rounds += 1
        new = p
        for bid in p.ids():
            sigs = block_signatures(lts, p, bid)
            pieces = split_by(p, bid, sigs.__getitem__)
            if len(pieces) > 1:
                new = new.refine(bid, pieces)
        if new is p:
            return p, rounds
        p = new


def quotient(lts: Lts, seed: Partition | None = None) -> Partition:
    """Coarsest branching bisimulation contained in ``seed``."""
    return quotient_with_stats(lts, seed)[0]
