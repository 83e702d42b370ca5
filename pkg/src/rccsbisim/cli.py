"""Command line interface.

Exit status is 0 when the queried processes are equivalent (or the command
succeeded), 1 when they are not, and 2 on any input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import lts as lts_mod
from .lts import DEFAULT_MAX_STATES, Lts, StateExplosion, build_lts
from .partition import Partition
from .relations import RELATIONS, compute
from .syntax import Term, TermError, load_definitions, pretty, process
from .tauec import comp_mec


class CliError(Exception):
    pass


class Workspace:
    """A definitions file, the LTS of the requested roots, and state labels."""

    def __init__(self, path: str, roots: list[str], max_states: int):
        try:
            text = Path(path).read_text()
        except OSError as err:
            raise CliError(f"cannot read {path}: {err.strerror}") from err
        self.defs = load_definitions(text)
        terms = [self.resolve(r) for r in roots]
        self.lts: Lts = build_lts(terms, max_states)
        names: dict[Term, str] = {}
        for name, t in self.defs.items():
            names.setdefault(t, name)
        self.labels = [names.get(t) or pretty(t) for t in self.lts.terms]

    def resolve(self, ref: str) -> Term:
        if ref in self.defs:
            return self.defs[ref]
        return process(ref, self.defs)

    def state(self, ref: str) -> int:
        return self.lts.index[self.resolve(ref)]

    def label(self, s: int) -> str:
        return self.labels[s]

    def seed(self, path: str | None) -> Partition | None:
        if path is None:
            return None
        try:
            blocks = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise CliError(f"cannot read seed partition {path}: {err}") from err
        if not isinstance(blocks, list) or not all(isinstance(b, list) for b in blocks):
            raise CliError("a seed partition is a JSON list of lists of process names or terms")
        seen: set[int] = set()
        parts = []
        for block in blocks:
            part = set()
            for ref in block:
                t = self.resolve(str(ref))
                if t not in self.lts.index:
                    raise CliError(f"{ref} is not a reachable state")
                s = self.lts.index[t]
                if s in seen:
                    raise CliError(f"{ref} appears in two seed blocks")
                seen.add(s)
                part.add(s)
            if part:
                parts.append(part)
        rest = set(self.lts.states) - seen
        if rest:
            parts.append(rest)
        return Partition.from_blocks(len(self.lts), parts)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _trace(enabled: bool):
    if not enabled:
        return None
    return lambda line: print(line, file=sys.stderr)


def _dumper(path: str | None):
    if path is None:
        return None
    handle = open(path, "w")
    return lambda text: (handle.write(text), handle.write("\n"), handle.flush())


def cmd_check(args) -> int:
    ws = Workspace(args.file, [args.a, args.b], args.max_states)
    a, b = ws.state(args.a), ws.state(args.b)
    start = time.perf_counter()
    p, iterations = compute(ws.lts, args.rel, ws.seed(args.seed_partition), _trace(args.trace), _dumper(args.dump_lp))
    wall = time.perf_counter() - start
    equal = p.same_block(a, b)
    if args.format == "text":
        print("EQUIVALENT" if equal else "NOT EQUIVALENT")
        for bid in sorted({p.block_of(a), p.block_of(b)}, key=lambda bid: min(p.block(bid))):
            print("{" + ", ".join(sorted(ws.label(s) for s in p.block(bid))) + "}")
    else:
        stats = {"states": len(ws.lts), "iterations": iterations}
        if args.timing:
            stats["wall_time"] = round(wall, 6)
        verdict = {"relation": args.rel, "equal": equal, "partition": p.to_labels(ws.label), "stats": stats}
        sys.stdout.write(_dump_json(verdict))
    return 0 if equal else 1


def cmd_quotient(args) -> int:
    ws = Workspace(args.file, args.names, args.max_states)
    start = time.perf_counter()
    p, iterations = compute(ws.lts, args.rel, ws.seed(args.seed_partition), _trace(args.trace), _dumper(args.dump_lp))
    wall = time.perf_counter() - start
    blocks = p.to_labels(ws.label)
    if args.format == "text":
        for block in blocks:
            print("{" + ", ".join(block) + "}")
    else:
        stats = {"states": len(ws.lts), "iterations": iterations}
        if args.timing:
            stats["wall_time"] = round(wall, 6)
        sys.stdout.write(_dump_json({"relation": args.rel, "partition": blocks, "stats": stats}))
    return 0


def cmd_mec(args) -> int:
    ws = Workspace(args.file, [args.name], args.max_states)
    out = []
    for mec in comp_mec(ws.lts, ws.state(args.name)):
        edges = sorted([ws.label(e.src), e.label(unicode=False), ws.label(e.dst)] for e in mec.edges)
        out.append({"nodes": sorted(ws.label(v) for v in mec.nodes), "edges": edges})
    out.sort(key=lambda m: (m["nodes"], m["edges"]))
    if args.format == "text":
        for m in out:
            print("{" + ", ".join(m["nodes"]) + "}: " + "; ".join(" ".join(e) for e in m["edges"]))
    else:
        sys.stdout.write(_dump_json(out))
    return 0


def cmd_dot(args) -> int:
    ws = Workspace(args.file, args.names, args.max_states)
    text = lts_mod.to_dot(ws.lts, ws.label)
    if args.output and args.output != "-":
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_lts(args) -> int:
    ws = Workspace(args.file, args.names, args.max_states)
    sys.stdout.write(_dump_json(lts_mod.to_json(ws.lts, ws.label)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rccsbisim", description="Decide bisimilarities of randomized CCS processes.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, relation: bool = True):
        p.add_argument("file", help="definitions file with one 'Name = term' per line")
        p.add_argument("--max-states", type=int, default=DEFAULT_MAX_STATES)
        p.add_argument("--format", choices=["json", "text"], default="json")
        if relation:
            p.add_argument("--rel", choices=RELATIONS, default="branching")
            p.add_argument("--seed-partition", metavar="JSON", help="initial partition: list of lists of names")
            p.add_argument("--trace", action="store_true", help="log refinement iterations to stderr")
            p.add_argument("--timing", action="store_true", help="add wall time to the stats")
            p.add_argument("--dump-lp", metavar="FILE", help="write every weak-transition flow problem to FILE")

    p = sub.add_parser("check", help="decide whether two processes are equivalent")
    common(p)
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("quotient", help="print the final partition")
    common(p)
    p.add_argument("names", nargs="+")
    p.set_defaults(func=cmd_quotient)

    p = sub.add_parser("mec", help="maximal silent end components reachable from a process")
    common(p, relation=False)
    p.add_argument("name")
    p.set_defaults(func=cmd_mec)

    p = sub.add_parser("dot", help="Graphviz rendering of the reachable LTS")
    common(p, relation=False)
    p.add_argument("names", nargs="+")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dot)

    p = sub.add_parser("lts", help="JSON export of the reachable LTS")
    common(p, relation=False)
    p.add_argument("names", nargs="+")
    p.set_defaults(func=cmd_lts)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliError, TermError, StateExplosion, KeyError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
