"""One entry point for the five decidable equivalences."""

from __future__ import annotations

from typing import Callable

from .branching import quotient_with_stats
from .divergence import div_branching_partition
from .lts import Lts
from .partition import Partition
from .tauec import Base, exh_partition
from .weak import weak_quotient_with_stats

RELATIONS = ("branching", "branching-div", "branching-exh", "weak", "weak-exh")


def compute(
    lts: Lts,
    relation: str,
    seed: Partition | None = None,
    trace: Callable[[str], None] | None = None,
    dump: Callable[[str], None] | None = None,
) -> tuple[Partition, int]:
    """Largest ``relation`` inside ``seed`` and the number of outer iterations."""
    if relation == "branching":
        return quotient_with_stats(lts, seed)
    if relation == "branching-div":
        return div_branching_partition(lts, seed, trace)
    if relation == "branching-exh":
        return exh_partition(lts, Base.BRANCHING, seed, trace)
    if relation == "weak":
        return weak_quotient_with_stats(lts, seed, trace, dump)
    if relation == "weak-exh":
        return exh_partition(lts, Base.WEAK, seed, trace, dump)
    raise ValueError(f"unknown relation {relation!r}; expected one of {', '.join(RELATIONS)}")


def partition_for(lts: Lts, relation: str, seed: Partition | None = None) -> Partition:
    return compute(lts, relation, seed)[0]


def equivalent(lts: Lts, a: int, b: int, relation: str, seed: Partition | None = None) -> bool:
    return partition_for(lts, relation, seed).same_block(a, b)
