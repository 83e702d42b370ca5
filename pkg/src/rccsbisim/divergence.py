"""Branching bisimilarity with explicit divergence."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .branching import eps_graph, preserving_itrs, quotient_with_stats
from .lts import Itr, Lts
from .partition import NotASplitter, Partition, coarsest

Trace = Callable[[str], None]


@dataclass(frozen=True)
class DivSplitter:
    witness: int


def non_divergent_rounds(nodes: Iterable[int], edges: Mapping[int, Iterable[Itr]]) -> list[frozenset]:
    """Least fixpoint of non-divergent nodes, as the set added in each round.

    Round 0 holds the nodes without state-preserving moves.  A node joins once
    every one of its moves has a target that joined in an earlier round.
    """
    pending = set(nodes)
    done: set[int] = set()
    rounds = []
    while True:
        fresh = frozenset(v for v in pending if all(itr.tgt & done for itr in edges[v]))
        if not fresh:
            return rounds
        rounds.append(fresh)
        done |= fresh
        pending -= fresh


def det_div_tree(lts: Lts, p: Partition, s: int, trace: list | None = None) -> bool:
    """True iff ``s`` has a divergent epsilon-tree under ``p``."""
    g = eps_graph(lts, p, s)
    rounds = non_divergent_rounds(g.nodes, g.edges)
    if trace is not None:
        trace.extend(rounds)
    return not any(s in r for r in rounds)


def divergent_states(lts: Lts, p: Partition) -> frozenset[int]:
    out: set[int] = set()
    for bid in p.ids():
        members = p.block(bid)
        edges = {v: preserving_itrs(lts, p, v) for v in members}
        ndiv = frozenset().union(*non_divergent_rounds(members, edges))
        out |= members - ndiv
    return frozenset(out)


def find_div_split(lts: Lts, p: Partition) -> tuple[bool, DivSplitter | None]:
    """First block, by id, that mixes divergent and non-divergent states."""
    div = divergent_states(lts, p)
    for bid in p.ids():
        block = p.block(bid)
        if block & div and block - div:
            return False, DivSplitter(min(block))
    return True, None


def div_refine(lts: Lts, p: Partition, w: DivSplitter) -> Partition:
    bid = p.block_of(w.witness)
    block = p.block(bid)
    div = divergent_states(lts, p) & block
    if not div or div == block:
        raise NotASplitter(f"block {bid} is uniform with respect to divergence")
    return p.refine(bid, [div, block - div])


def _describe(p: Partition) -> str:
    return f"{len(p)} blocks, sizes {sorted((len(b) for b in p.blocks()), reverse=True)}"


def div_branching_partition(
    lts: Lts, seed: Partition | None = None, trace: Trace | None = None
) -> tuple[Partition, int]:
    """Coarsest divergence-preserving branching bisimulation within ``seed``."""
    p = seed if seed is not None else coarsest(lts)
    iterations = 0
    while True:
        iterations += 1
        p, _ = quotient_with_stats(lts, p)
        ok, w = find_div_split(lts, p)
        if trace is not None:
            where = "none" if ok else f"state {w.witness}"
            trace(f"iteration {iterations}: {_describe(p)}; divergence splitter {where}")
        if ok:
            return p, iterations
        p = div_refine(lts, p, w)


def div_bran_bisim(
    lts: Lts, a: int, b: int, seed: Partition | None = None, trace: Trace | None = None
) -> tuple[bool, Partition]:
    p, _ = div_branching_partition(lts, seed, trace)
    return p.same_block(a, b), p
