from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from rccsbisim.generate import random_term
from rccsbisim.lts import Lts, StateExplosion, build_lts
from rccsbisim.partition import Partition
from rccsbisim.syntax import Term, load_definitions, pretty

FIXTURES = Path(__file__).parent / "fixtures"


@dataclass
class System:
    defs: dict[str, Term]
    lts: Lts

    def __getitem__(self, name: str) -> int:
        return self.lts.index[self.defs[name]]

    def ids(self, *names: str) -> frozenset[int]:
        return frozenset(self[n] for n in names)

    def term_state(self, text: str) -> int:
        from rccsbisim.syntax import process

        return self.lts.index[process(text, self.defs)]

    def partition(self, *blocks) -> Partition:
        """Blocks given as names or term texts; leftover states form one block."""
        parts, seen = [], set()
        for block in blocks:
            ids = {self[x] if x in self.defs else self.term_state(x) for x in block}
            parts.append(ids)
            seen |= ids
        rest = set(self.lts.states) - seen
        if rest:
            parts.append(rest)
        return Partition.from_blocks(len(self.lts), parts)

    def blocks_by_label(self, p: Partition) -> set[frozenset[str]]:
        names: dict[Term, str] = {}
        for n, t in self.defs.items():
            names.setdefault(t, n)
        label = lambda s: names.get(self.lts.terms[s]) or pretty(self.lts.terms[s])
        return {frozenset(label(s) for s in b) for b in p.blocks()}


def system(fixture: str, *roots: str) -> System:
    defs = load_definitions((FIXTURES / fixture).read_text())
    roots = roots or tuple(defs)
    return System(defs, build_lts([defs[r] for r in roots]))


def labels(*blocks: str) -> set[frozenset[str]]:
    return {frozenset(b.split(",")) for b in blocks}


def random_systems(seed: int, count: int, max_states: int = 12, depth: int = 4):
    """Deterministic corpus of small random LTSs with one root each."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        t = random_term(rng, depth=depth)
        try:
            lts = build_lts([t], max_states=max_states)
        except StateExplosion:
            continue
        out.append(lts)
    return out
