"""Quotient every fixture under every relation and print the blocks."""

from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

from rccsbisim.lts import build_lts
from rccsbisim.relations import RELATIONS, partition_for
from rccsbisim.syntax import load_definitions, pretty

ROOT = Path(__file__).resolve().parent.parent


@dataclass
class ExamplesConfig:
    fixtures: Path = ROOT / "tests" / "fixtures"
    relations: tuple[str, ...] = RELATIONS


def run(cfg: ExamplesConfig) -> None:
    for path in sorted(cfg.fixtures.glob("*.rccs")):
        defs = load_definitions(path.read_text())
        lts = build_lts(list(defs.values()))
        names: dict = {}
        for name, t in defs.items():
            names.setdefault(t, name)
        label = lambda s: names.get(lts.terms[s]) or pretty(lts.terms[s])
        print(f"{path.name}: {len(lts)} states")
        for rel in cfg.relations:
            blocks = partition_for(lts, rel).to_labels(label)
            print(f"  {rel:14} " + " ".join("{" + ",".join(b) + "}" for b in blocks))


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fixtures", type=Path, default=ExamplesConfig.fixtures)
    parser.add_argument("--rel", action="append", choices=RELATIONS)
    args = parser.parse_args()
    run(ExamplesConfig(args.fixtures, tuple(args.rel) if args.rel else RELATIONS))


if __name__ == "__main__":
    main()
