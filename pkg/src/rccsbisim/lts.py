"""Labelled transition system generated by the operational rules."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .syntax import TAU, NdChoice, PChoice, Term, canonical, head_normal, pretty, validate

DEFAULT_MAX_STATES = 100_000

Distribution = dict  # state id -> Fraction


class StateExplosion(RuntimeError):
    def __init__(self, limit: int):
        super().__init__(f"more than {limit} reachable states")
        self.limit = limit


@dataclass(frozen=True)
class Edge:
    """An LTS edge.  Probabilistic edges carry ``prob`` and a collective ``group``."""

    src: int
    action: str
    dst: int
    prob: Fraction | None = None
    group: int | None = None

    @property
    def silent(self) -> bool:
        return self.action == TAU

    @property
    def probabilistic(self) -> bool:
        return self.prob is not None

    def label(self, unicode: bool = True) -> str:
        act = "τ" if (self.silent and unicode) else self.action
        return act if self.prob is None else f"{self.prob} {act}"


@dataclass(frozen=True)
class Collective:
    """All probabilistic edges produced by one probabilistic choice."""

    id: int
    source: int
    targets: tuple[tuple[int, Fraction], ...]

    @property
    def support(self) -> frozenset[int]:
        return frozenset(t for t, _ in self.targets)

    def mass(self, states) -> Fraction:
        return sum((p for t, p in self.targets if t in states), Fraction(0))


@dataclass(frozen=True)
class Itr:
    """Immediate silent transition: a plain tau edge or one whole collective."""

    source: int
    targets: tuple[tuple[int, Fraction], ...]
    collective: int | None = None

    @property
    def tgt(self) -> frozenset[int]:
        return frozenset(t for t, _ in self.targets)


@dataclass
class Lts:
    terms: list[Term]
    index: dict[Term, int]
    out: list[list[Edge]]
    collectives: list[Collective]
    collective_of: list[int | None]
    roots: list[int]
    cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.terms)

    @property
    def states(self) -> range:
        return range(len(self.terms))

    def state(self, t: Term) -> int:
        return self.index[canonical(t)]

    def collective(self, s: int) -> Collective | None:
        c = self.collective_of[s]
        return None if c is None else self.collectives[c]

    def edges(self) -> Iterable[Edge]:
        for row in self.out:
            yield from row


def build_lts(roots: Sequence[Term], max_states: int = DEFAULT_MAX_STATES) -> Lts:
    """Explore the states reachable from ``roots`` breadth first."""
    terms: list[Term] = []
    index: dict[Term, int] = {}
    queue: deque[int] = deque()

    def intern(t: Term) -> int:
        sid = index.get(t)
        if sid is None:
            if len(terms) >= max_states:
                raise StateExplosion(max_states)
            sid = len(terms)
            terms.append(t)
            index[t] = sid
            queue.append(sid)
        return sid

    root_ids = [intern(validate(r)) for r in roots]
    out: list[list[Edge]] = []
    collectives: list[Collective] = []
    collective_of: list[int | None] = []
    while queue:
        s = queue.popleft()
        head = head_normal(terms[s])
        row: list[Edge] = []
        coll = None
        if isinstance(head, NdChoice):
            for act, cont in head.branches:
                e = Edge(s, act, intern(canonical(cont)))
                if e not in row:
                    row.append(e)
        elif isinstance(head, PChoice):
            merged: dict[int, Fraction] = {}
            for p, cont in head.branches:
                t = intern(canonical(cont))
                merged[t] = merged.get(t, Fraction(0)) + p
            coll = len(collectives)
            collectives.append(Collective(coll, s, tuple(merged.items())))
            row = [Edge(s, TAU, t, p, coll) for t, p in merged.items()]
        out.append(row)
        collective_of.append(coll)
    return Lts(terms, index, out, collectives, collective_of, root_ids)


def immediate_silent_transitions(lts: Lts, s: int) -> list[Itr]:
    key = ("itr", s)
    hit = lts.cache.get(key)
    if hit is None:
        hit = [Itr(s, ((e.dst, Fraction(1)),)) for e in lts.out[s] if e.silent and not e.probabilistic]
        c = lts.collective(s)
        if c is not None:
            hit.append(Itr(s, c.targets, c.id))
        lts.cache[key] = hit
    return hit


def plts_transitions(lts: Lts, s: int) -> list[tuple[str, Distribution]]:
    """Transitions of the induced probabilistic LTS, one per choice branch."""
    moves: list[tuple[str, Distribution]] = [
        (e.action, {e.dst: Fraction(1)}) for e in lts.out[s] if not e.probabilistic
    ]
    c = lts.collective(s)
    if c is not None:
        moves.append((TAU, dict(c.targets)))
    return moves


def silent_successors(lts: Lts, s: int) -> list[int]:
    return [e.dst for e in lts.out[s] if e.silent]


# ---------------------------------------------------------------------------
# export

_PALETTE = ["red", "blue", "darkgreen", "orange", "purple", "brown", "magenta", "teal"]


def _default_label(lts: Lts) -> Callable[[int], str]:
    return lambda s: pretty(lts.terms[s])


def to_dot(lts: Lts, label: Callable[[int], str] | None = None) -> str:
    label = label or _default_label(lts)
    roots = set(lts.roots)
    lines = ["digraph lts {", "  rankdir=LR;"]
    for s in lts.states:
        shape = "doublecircle" if s in roots else "circle"
        lines.append(f"  s{s} [label={json.dumps(label(s), ensure_ascii=False)}, shape={shape}];")
    for e in lts.edges():
        attrs = [f"label={json.dumps(e.label(), ensure_ascii=False)}"]
        if e.group is not None:
            colour = _PALETTE[e.group % len(_PALETTE)]
            attrs += [f"color={colour}", f"fontcolor={colour}"]
        lines.append(f"  s{e.src} -> s{e.dst} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(lts: Lts, label: Callable[[int], str] | None = None) -> dict:
    label = label or _default_label(lts)
    return {
        "states": [{"id": s, "term": pretty(lts.terms[s]), "label": label(s)} for s in lts.states],
        "edges": [
            {
                "src": e.src,
                "dst": e.dst,
                "action": e.action,
                "prob": None if e.prob is None else str(e.prob),
                "group": e.group,
            }
            for e in lts.edges()
        ],
        "collectives": [
            {"id": c.id, "source": c.source, "targets": [[t, str(p)] for t, p in c.targets]}
            for c in lts.collectives
        ],
        "roots": list(lts.roots),
    }
