"""Weak probabilistic bisimilarity.

A weak combined transition ``s =a=>c rho`` is encoded as a flow problem.  Flow
variables count the expected number of times each transition is taken under a
randomized scheduler, and stop variables give the final distribution.  For a
visible action the states are doubled into a "before" and an "after" copy and
the action moves mass from one copy to the other.  Stopping is allowed only in
the after copy, or anywhere when the action is silent.  The scheduler exists
iff the flow problem is feasible; feasibility is decided exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

from . import lp
from .lts import Distribution, Lts, plts_transitions
from .partition import Partition, class_mass, coarsest
from .syntax import TAU

Trace = Callable[[str], None]


class MassNotNormalized(ValueError):
    pass


def lift_equal(p: Partition, d1: Mapping[int, Fraction], d2: Mapping[int, Fraction]) -> bool:
    """Lifting of the partition's equivalence to distributions."""
    return class_mass(p, d1) == class_mass(p, d2)


def _moves(lts: Lts, s: int) -> tuple[list[Distribution], dict[str, list[Distribution]]]:
    key = ("moves", s)
    hit = lts.cache.get(key)
    if hit is None:
        silent: list[Distribution] = []
        visible: dict[str, list[Distribution]] = {}
        for act, dist in plts_transitions(lts, s):
            if act == TAU:
                silent.append(dist)
            visible.setdefault(act, []).append(dist)
        hit = lts.cache[key] = (silent, visible)
    return hit


def _closure(lts: Lts, starts) -> list[int]:
    seen = dict.fromkeys(starts)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for dist in _moves(lts, v)[0]:
            for t in dist:
                if t not in seen:
                    seen[t] = None
                    stack.append(t)
    return sorted(seen)


@dataclass
class FlowProblem:
    names: list[str]
    rows: list[dict[int, Fraction]]
    rhs: list[Fraction]
    labels: list[str]
    trivially_infeasible: bool = False

    def feasible(self) -> bool:
        if self.trivially_infeasible:
            return False
        return lp.feasible(self.rows, self.rhs, len(self.names))

    def to_text(self) -> str:
        lines = [f"variables: {len(self.names)}"]
        for label, row, r in zip(self.labels, self.rows, self.rhs):
            terms = " ".join(f"{'+' if c > 0 else '-'} {abs(c)}*{self.names[j]}" for j, c in sorted(row.items()))
            lines.append(f"{label}: {terms or '0'} = {r}")
        if self.trivially_infeasible:
            lines.append("infeasible: a required class has no reachable stopping state")
        return "\n".join(lines) + "\n"


def flow_problem(lts: Lts, s: int, action: str, m: Mapping[int, Fraction], p: Partition) -> FlowProblem:
    if sum(m.values(), Fraction(0)) != 1 or any(v < 0 for v in m.values()):
        raise MassNotNormalized(f"class masses sum to {sum(m.values(), Fraction(0))}")
    m = {b: Fraction(v) for b, v in m.items() if v}
    names: list[str] = []
    balance: dict[tuple, dict[int, Fraction]] = {}

    def var(name: str) -> int:
        names.append(name)
        return len(names) - 1

    def add(node: tuple, j: int, c: Fraction) -> None:
        row = balance.setdefault(node, {})
        row[j] = row.get(j, Fraction(0)) + c

    phases = ["pre", "post"] if action != TAU else ["post"]
    pre = _closure(lts, [s])
    if action == TAU:
        nodes = {"post": pre}
    else:
        landing = {t for v in pre for d in _moves(lts, v)[1].get(action, []) for t in d}
        nodes = {"pre": pre, "post": _closure(lts, landing)}
    for ph in phases:
        for v in nodes[ph]:
            balance[(ph, v)] = {}
    stops: dict[int, list[int]] = {}
    for ph in phases:
        for v in nodes[ph]:
            silent, visible = _moves(lts, v)
            for k, dist in enumerate(silent):
                j = var(f"t[{ph},{v},{k}]")
                add((ph, v), j, Fraction(1))
                for t, q in dist.items():
                    add((ph, t), j, -q)
            if ph == "pre":
                for k, dist in enumerate(visible.get(action, [])):
                    j = var(f"a[{v},{k}]")
                    add(("pre", v), j, Fraction(1))
                    for t, q in dist.items():
                        add(("post", t), j, -q)
            elif p.block_of(v) in m:
                j = var(f"stop[{v}]")
                add((ph, v), j, Fraction(1))
                stops.setdefault(p.block_of(v), []).append(j)
    rows, rhs, labels = [], [], []
    for (ph, v), row in balance.items():
        rows.append({j: c for j, c in row.items() if c})
        rhs.append(Fraction(1) if (ph == phases[0] and v == s) else Fraction(0))
        labels.append(f"balance[{ph},{v}]")
    for b in sorted(m):
        rows.append({j: Fraction(1) for j in stops.get(b, [])})
        rhs.append(m[b])
        labels.append(f"mass[block {b}]")
    missing = any(b not in stops for b in m)
    return FlowProblem(names, rows, rhs, labels, missing)


def weak_combined_exists(
    lts: Lts,
    s: int,
    action: str,
    m: Mapping[int, Fraction],
    p: Partition,
    dump: Callable[[str], None] | None = None,
) -> bool:
    """Is there a weak combined ``action``-transition from ``s`` with class masses ``m``?"""
    problem = flow_problem(lts, s, action, m, p)
    if dump is not None:
        dump(problem.to_text())
    return problem.feasible()


def weak_quotient_with_stats(
    lts: Lts,
    seed: Partition | None = None,
    trace: Trace | None = None,
    dump: Callable[[str], None] | None = None,
) -> tuple[Partition, int]:
    p = seed if seed is not None else coarsest(lts)
    # Answers stay valid across refinements: a query only mentions blocks that
    # still exist, and an existing block id always denotes the same states.
    memo: dict[tuple, bool] = {}

    def can_match(b: int, action: str, m: dict[int, Fraction]) -> bool:
        if action == TAU and m == {p.block_of(b): 1}:
            return True
        key = (b, action, frozenset(m.items()))
        hit = memo.get(key)
        if hit is None:
            hit = memo[key] = weak_combined_exists(lts, b, action, m, p, dump)
        return hit

    rounds = 0
    while True:
        rounds += 1
        new = p
        for bid in p.ids():
            block = sorted(p.block(bid))
            challenges: dict[tuple, int] = {}
            for a in block:
                for action, dist in plts_transitions(lts, a):
                    m = class_mass(p, dist)
                    challenges.setdefault((action, frozenset(m.items())), a)
            answers = {b: [] for b in block}
            for (action, mk), challenger in challenges.items():
                m = dict(mk)
                for b in block:
                    answers[b].append(b == challenger or can_match(b, action, m))
            groups: dict[tuple, list[int]] = {}
            for b in block:
                groups.setdefault(tuple(answers[b]), []).append(b)
            if len(groups) > 1:
                new = new.refine(bid, groups.values())
        if trace is not None:
            trace(f"weak round {rounds}: {len(new)} blocks")
        if new is p:
            return p, rounds
        p = new


def weak_quotient(lts: Lts, seed: Partition | None = None) -> Partition:
    """Coarsest weak probabilistic bisimulation contained in ``seed``."""
    return weak_quotient_with_stats(lts, seed)[0]
