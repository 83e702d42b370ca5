"""Class counts of the five relations over a random corpus, plus chain timings."""

from __future__ import annotations

import argparse
import random
import time
from collections import Counter
from dataclasses import dataclass

from rccsbisim.generate import chain_definitions, random_term
from rccsbisim.lts import StateExplosion, build_lts
from rccsbisim.relations import RELATIONS, compute, partition_for
from rccsbisim.syntax import load_definitions


@dataclass
class SurveyConfig:
    seed: int = 0
    count: int = 200
    max_states: int = 12
    depth: int = 4
    chain_levels: tuple[int, ...] = (17, 34, 67)


def corpus(cfg: SurveyConfig):
    rng = random.Random(cfg.seed)
    out = []
    while len(out) < cfg.count:
        try:
            out.append(build_lts([random_term(rng, depth=cfg.depth)], max_states=cfg.max_states))
        except StateExplosion:
            continue
    return out


def survey(cfg: SurveyConfig) -> None:
    systems = corpus(cfg)
    strict = Counter()
    for lts in systems:
        sizes = {rel: len(partition_for(lts, rel)) for rel in RELATIONS}
        for a in RELATIONS:
            for b in RELATIONS:
                if sizes[a] > sizes[b]:
                    strict[(a, b)] += 1
    print(f"{len(systems)} systems, {sum(len(l) for l in systems)} states")
    print("systems where the first relation has more classes than the second:")
    for (a, b), n in sorted(strict.items()):
        print(f"  {a:14} > {b:14} {n}")
    for levels in cfg.chain_levels:
        lts = build_lts([load_definitions(chain_definitions(levels))["P0"]])
        row = []
        for rel in RELATIONS:
            start = time.perf_counter()
            compute(lts, rel)
            row.append(f"{rel} {time.perf_counter() - start:.2f}s")
        print(f"chain of {len(lts)} states: " + ", ".join(row))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=SurveyConfig.seed)
    parser.add_argument("--count", type=int, default=SurveyConfig.count)
    parser.add_argument("--max-states", type=int, default=SurveyConfig.max_states)
    args = parser.parse_args()
    survey(SurveyConfig(seed=args.seed, count=args.count, max_states=args.max_states))


if __name__ == "__main__":
    main()
