"""Random and synthetic process terms for experiments and property tests."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from .syntax import NIL, TAU, Fix, NdChoice, PChoice, Term, Var, validate


def _split_mass(rng: random.Random, k: int) -> list[Fraction]:
    den = rng.choice([d for d in (2, 3, 4, 5, 6) if d >= k])
    cuts = sorted(rng.sample(range(1, den), k - 1))
    parts = [b - a for a, b in zip([0, *cuts], [*cuts, den])]
    return [Fraction(x, den) for x in parts]


def random_term(
    rng: random.Random,
    depth: int = 4,
    actions: tuple[str, ...] = ("a", "b"),
    silent_bias: float = 0.5,
) -> Term:
    """A random closed, guarded term; recursion is frequent so that loops and
    silent cycles are common."""
    fresh = (f"V{i}" for i in itertools.count())

    def act() -> str:
        return TAU if rng.random() < silent_bias else rng.choice(actions)

    def gen(d: int, bound: tuple[str, ...], usable: tuple[str, ...]) -> Term:
        kinds = ["nil"] + ["var"] * (2 * bool(usable))
        if d > 0:
            kinds += ["nd", "nd", "nd", "p", "p", "fix", "fix"]
        kind = rng.choice(kinds)
        if kind == "nil":
            return NIL
        if kind == "var":
            return Var(rng.choice(usable))
        if kind == "fix":
            x = next(fresh)
            return Fix(x, gen(d - 1, bound + (x,), usable))
        k = rng.choice([1, 1, 2, 2, 3]) if kind == "nd" else rng.choice([2, 2, 3])
        conts = [gen(d - 1, bound, bound) for _ in range(k)]
        if kind == "nd":
            return NdChoice((act(), c) for c in conts)
        return PChoice(zip(_split_mass(rng, k), conts))

    return validate(gen(depth, (), ()))


def chain_definitions(levels: int) -> str:
    """Definitions for a chain of ``levels`` choice points, three states each."""
    lines = [f"# synthetic chain with {levels} levels"]
    for i in range(levels):
        nxt = f"P{i + 1}"
        lines.append(f"P{i} = mu X.(a.{nxt} + b.{nxt} + tau.(1/2 tau.X (+) 1/2 tau.b.{nxt}))")
    lines.append(f"P{levels} = 0")
    return "\n".join(lines) + "\n"
