"""Partitions of the state space with stable block identifiers."""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping


class PartNotSubset(ValueError):
    pass


class NotASplitter(ValueError):
    """Raised when a proposed split would leave one side empty."""


class Partition:
    """Immutable partition of ``range(n)``.

    Every block has an integer id.  Refining a block retires its id and mints
    fresh ids for the pieces, so ids never change meaning.
    """

    __slots__ = ("_blocks", "_block_of", "_next_id")

    def __init__(self, blocks: Mapping[int, frozenset], block_of: tuple[int, ...], next_id: int):
        self._blocks = dict(blocks)
        self._block_of = block_of
        self._next_id = next_id

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        parts = sorted((frozenset(b) for b in blocks), key=lambda b: min(b) if b else -1)
        owner = [-1] * n
        for bid, b in enumerate(parts):
            if not b:
                raise ValueError("empty block")
            for s in b:
                if not 0 <= s < n or owner[s] != -1:
                    raise ValueError(f"state {s} is out of range or in two blocks")
                owner[s] = bid
        if -1 in owner:
            raise ValueError(f"state {owner.index(-1)} is in no block")
        return cls(dict(enumerate(parts)), tuple(owner), len(parts))

    @classmethod
    def coarsest(cls, n: int) -> "Partition":
        return cls.from_blocks(n, [range(n)] if n else [])

    @classmethod
    def discrete(cls, n: int) -> "Partition":
        return cls.from_blocks(n, ([s] for s in range(n)))

    @property
    def size(self) -> int:
        return len(self._block_of)

    def __len__(self) -> int:
        return len(self._blocks)

    def ids(self) -> list[int]:
        return sorted(self._blocks)

    def blocks(self) -> list[frozenset]:
        return [self._blocks[b] for b in self.ids()]

    def block(self, bid: int) -> frozenset:
        return self._blocks[bid]

    def block_of(self, s: int) -> int:
        return self._block_of[s]

    def members(self, s: int) -> frozenset:
        return self._blocks[self._block_of[s]]

    def same_block(self, a: int, b: int) -> bool:
        return self._block_of[a] == self._block_of[b]

    def __contains__(self, bid: int) -> bool:
        return bid in self._blocks

    def as_set(self) -> frozenset[frozenset]:
        return frozenset(self._blocks.values())

    def __eq__(self, other) -> bool:
        return isinstance(other, Partition) and self.as_set() == other.as_set()

    def __hash__(self) -> int:
        return hash(self.as_set())

    def __repr__(self) -> str:
        return "Partition(" + ", ".join(str(sorted(b)) for b in self.blocks()) + ")"

    def refines(self, other: "Partition") -> bool:
        return all(len({other.block_of(s) for s in b}) == 1 for b in self.blocks())

    def refine(self, bid: int, pieces: Iterable[Iterable[int]]) -> "Partition":
        """Replace block ``bid`` by ``pieces``, which must partition it."""
        pieces = [frozenset(p) for p in pieces]
        pieces = sorted((p for p in pieces if p), key=min)
        old = self._blocks[bid]
        if frozenset().union(*pieces) != old or sum(map(len, pieces)) != len(old):
            raise PartNotSubset(f"pieces do not partition block {bid}")
        if len(pieces) == 1:
            return self
        blocks = dict(self._blocks)
        del blocks[bid]
        owner = list(self._block_of)
        nid = self._next_id
        for p in pieces:
            blocks[nid] = p
            for s in p:
                owner[s] = nid
            nid += 1
        return Partition(blocks, tuple(owner), nid)

    def to_labels(self, label: Callable[[int], str]) -> list[list[str]]:
        """Blocks as sorted lists of labels, sorted; a byte-stable rendering."""
        return sorted(sorted(label(s) for s in b) for b in self.blocks())


def coarsest(lts) -> Partition:
    return Partition.coarsest(len(lts))


def split(p: Partition, bid: int, part: Iterable[int]) -> Partition:
    """Split block ``bid`` into ``part`` and its complement."""
    part = frozenset(part)
    block = p.block(bid)
    if not part <= block:
        raise PartNotSubset(f"{sorted(part - block)} not in block {bid}")
    return p.refine(bid, [part, block - part])


def class_mass(p: Partition, dist: Mapping[int, Fraction]) -> dict[int, Fraction]:
    """Probability mass per block id; blocks with zero mass are omitted."""
    out: dict[int, Fraction] = {}
    for s, q in dist.items():
        if q:
            b = p.block_of(s)
            out[b] = out.get(b, Fraction(0)) + q
    return out
