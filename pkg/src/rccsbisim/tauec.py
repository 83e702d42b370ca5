"""Silent end components and the exhaustive bisimilarities built on them."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

import networkx as nx

from .branching import quotient_with_stats
from .lts import Edge, Lts
from .partition import NotASplitter, Partition, coarsest
from .weak import weak_quotient_with_stats

Trace = Callable[[str], None]


class Base(Enum):
    BRANCHING = "branching"
    WEAK = "weak"


@dataclass(frozen=True)
class TauGraph:
    nodes: frozenset[int]
    edges: frozenset[Edge]


@dataclass(frozen=True)
class TauEc:
    nodes: frozenset[int]
    edges: frozenset[Edge]

    def sort_key(self) -> tuple:
        return (min(self.nodes), sorted(self.nodes))


@dataclass(frozen=True)
class MecSplitter:
    witness: int
    mec: TauEc


def silent_reach(lts: Lts, s: int) -> frozenset[int]:
    key = ("silent-reach", s)
    hit = lts.cache.get(key)
    if hit is None:
        seen = {s}
        stack = [s]
        while stack:
            v = stack.pop()
            for e in lts.out[v]:
                if e.silent and e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        hit = lts.cache[key] = frozenset(seen)
    return hit


def tau_graph(lts: Lts, s: int) -> TauGraph:
    nodes = silent_reach(lts, s)
    return TauGraph(nodes, frozenset(e for v in nodes for e in lts.out[v] if e.silent))


def mec_decompose(lts: Lts, nodes: frozenset[int]) -> list[TauEc]:
    """Maximal silent end components inside a silently forward-closed node set."""
    edges = frozenset(e for v in nodes for e in lts.out[v] if e.silent)
    pending = [(nodes, edges)]
    found: list[TauEc] = []
    while pending:
        vs, es = pending.pop()
        g = nx.DiGraph()
        g.add_nodes_from(vs)
        g.add_edges_from((e.src, e.dst) for e in es)
        for comp in nx.strongly_connected_components(g):
            inner = {e for e in es if e.src in comp and e.dst in comp}
            leaking = {
                e.group
                for e in inner
                if e.group is not None and not lts.collectives[e.group].support <= comp
            }
            if leaking:
                kept = frozenset(e for e in inner if e.group not in leaking)
                pending.append((frozenset(comp), kept))
            elif inner and all(any(e.src == v for e in inner) for v in comp):
                found.append(TauEc(frozenset(comp), frozenset(inner)))
    return sorted(found, key=TauEc.sort_key)


def all_mecs(lts: Lts) -> list[TauEc]:
    hit = lts.cache.get("mecs")
    if hit is None:
        hit = lts.cache["mecs"] = mec_decompose(lts, frozenset(lts.states))
    return hit


def comp_mec(lts: Lts, s: int) -> list[TauEc]:
    """Maximal silent end components of the silent graph of ``s``.

    The silent graph of ``s`` is forward closed, so its maximal end components
    are exactly the global ones it contains.  The global decomposition is
    computed once per LTS and filtered here.
    """
    key = ("mec", s)
    hit = lts.cache.get(key)
    if hit is None:
        reach = silent_reach(lts, s)
        hit = lts.cache[key] = [mec for mec in all_mecs(lts) if min(mec.nodes) in reach]
    return hit


def ec_related(p: Partition, ec1: TauEc, ec2: TauEc) -> bool:
    """Every class touched by ``ec2`` is also touched by ``ec1``."""
    return {p.block_of(v) for v in ec2.nodes} <= {p.block_of(v) for v in ec1.nodes}


def reaches_related_mec(lts: Lts, p: Partition, q: int, target: TauEc) -> bool:
    return any(ec_related(p, target, mec) for mec in comp_mec(lts, q))


def _split_sets(lts: Lts, p: Partition, block: frozenset, mec: TauEc) -> tuple[frozenset, frozenset]:
    yes = frozenset(q for q in block if reaches_related_mec(lts, p, q, mec))
    return yes, block - yes


def find_mec_split(lts: Lts, p: Partition) -> tuple[bool, MecSplitter | None]:
    """First (block, state, reachable MEC) that some block member cannot match."""
    for bid in p.ids():
        block = p.block(bid)
        seen: set[TauEc] = set()
        for s in sorted(block):
            for mec in comp_mec(lts, s):
                if mec in seen:
                    continue
                seen.add(mec)
                yes, no = _split_sets(lts, p, block, mec)
                if no:
                    return False, MecSplitter(s, mec)
    return True, None


def mec_refine(lts: Lts, p: Partition, w: MecSplitter) -> Partition:
    bid = p.block_of(w.witness)
    block = p.block(bid)
    yes, no = _split_sets(lts, p, block, w.mec)
    if not yes or not no:
        raise NotASplitter(f"end component does not separate block {bid}")
    return p.refine(bid, [yes, no])


def exh_partition(
    lts: Lts,
    base: Base = Base.BRANCHING,
    seed: Partition | None = None,
    trace: Trace | None = None,
    dump: Callable[[str], None] | None = None,
) -> tuple[Partition, int]:
    """Coarsest exhaustive bisimulation within ``seed`` over the chosen base relation."""
    p = seed if seed is not None else coarsest(lts)
    iterations = 0
    while True:
        iterations += 1
        if base is Base.WEAK:
            p, _ = weak_quotient_with_stats(lts, p, dump=dump)
        else:
            p, _ = quotient_with_stats(lts, p)
        ok, w = find_mec_split(lts, p)
        if trace is not None:
            where = "none" if ok else f"state {w.witness} via end component {sorted(w.mec.nodes)}"
            trace(f"iteration {iterations}: {len(p)} blocks; end-component splitter {where}")
        if ok:
            return p, iterations
        p = mec_refine(lts, p, w)


def exh_bisim(
    lts: Lts,
    a: int,
    b: int,
    base: Base = Base.BRANCHING,
    seed: Partition | None = None,
    trace: Trace | None = None,
) -> tuple[bool, Partition]:
    p, _ = exh_partition(lts, base, seed, trace)
    return p.same_block(a, b), p
