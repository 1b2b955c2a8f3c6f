"""Command-line interface. Exit codes: 0 ok, 1 verification failure, 2 bad input, 3 budget exhausted."""

from __future__ import annotations

import argparse
import json
import os
import signal
import sys
from dataclasses import asdict
from fractions import Fraction

from . import certificates as cert
from .builder import Gates, color_or_minor, find_clique_minor
from .errors import HeuristicFailed, MinorCertError, NoCoverFound, NoLinkageFound, ParseError
from .generators import gen
from .graph import Graph, complete_bipartite, cycle_graph, stats
from .increment import dense_or_minor
from .turan import turan_experiment

BUDGET_ENV = "MINORCERT_BUDGET"
EXIT_OK, EXIT_VERIFY, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
PATTERNS = {"c4": lambda: cycle_graph(4), "k23": lambda: complete_bipartite(2, 3), "c6": lambda: cycle_graph(6)}


class BudgetExhausted(Exception):
    pass


def _read_graph(path: str) -> Graph:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return Graph.from_text(text)


def _kv(items: list[str]) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ParseError(f"expected key=value, got {item!r}", "--param")
        k, v = item.split("=", 1)
        out[k] = v
    return out


def _family(specs: list[str]) -> list[dict]:
    """``kind:key=val,key=val[@seed]`` per instance."""
    out = []
    for spec in specs:
        seed = 0
        if "@" in spec:
            spec, s = spec.rsplit("@", 1)
            seed = int(s)
        kind, _, rest = spec.partition(":")
        params = _kv([p for p in rest.split(",") if p])
        out.append({"name": spec, "kind": kind, "params": params, "seed": seed})
    return out


def _emit(args, payload: dict) -> None:
    payload = {"settings": {k: v for k, v in vars(args).items() if k != "func"}, **payload}
    text = cert.dumps(payload)
    print(text)
    if args.json_out:
        with open(args.json_out, "w") as fh:
            fh.write(text + "\n")


def cmd_gen(args) -> int:
    G = gen(args.kind, _kv(args.param), args.seed)
    text = G.to_text()
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_stats(args) -> int:
    G = _read_graph(args.graph)
    _emit(args, {"stats": {k: str(v) if isinstance(v, Fraction) else v for k, v in asdict(stats(G)).items()}})
    return EXIT_OK


def cmd_color(args) -> int:
    G = _read_graph(args.graph)
    res = color_or_minor(G, args.t, Gates.parse(args.gates), seed=args.seed)
    _emit(args, {"result": cert.to_cert(res, G)})
    return EXIT_OK


def cmd_find_minor(args) -> int:
    G = _read_graph(args.graph)
    m = find_clique_minor(G, args.t, seed=args.seed, restarts=args.restarts)
    if m is None:
        print(f"no K_{args.t} model found after {args.restarts} restarts", file=sys.stderr)
        return EXIT_BUDGET
    _emit(args, {"result": cert.model_cert(m)})
    return EXIT_OK


def cmd_increment(args) -> int:
    G = _read_graph(args.graph)
    eps = Fraction(args.eps)
    out = dense_or_minor(G, args.k, args.l, eps)
    _emit(args, {"result": cert.increment_cert(G, out, args.k, args.l, eps)})
    return EXIT_OK


def cmd_experiment(args) -> int:
    H = PATTERNS[args.pattern]() if args.pattern in PATTERNS else _read_graph(args.pattern)
    family = _family(args.family or [f"pg_incidence:q={q}" for q in (2, 3, 4, 5)])
    rep = turan_experiment(family, H, Fraction(args.gamma), Fraction(args.epsilon), seed=args.seed,
                           workers=args.workers)
    _emit(args, {"report": rep.to_dict(timings=args.timings)})
    return EXIT_OK


def cmd_verify(args) -> int:
    text = sys.stdin.read() if args.file == "-" else open(args.file).read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    # CLI outputs wrap the certificate next to the settings used to make it
    if isinstance(data, dict) and "result" in data and "kind" not in data:
        data = data["result"]
    problems = cert.verify_data(data)
    if problems:
        for p in problems:
            print(p)
        return EXIT_VERIFY
    print("ok")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    default_budget = float(os.environ.get(BUDGET_ENV, "0") or 0)
    p = argparse.ArgumentParser(prog="minorcert", description=__doc__)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=float, default=default_budget,
                   help=f"wall-clock seconds, 0 for none (default from ${BUDGET_ENV})")
    p.add_argument("--json-out", default=None, help="also write the JSON output here")
    p.add_argument("--gates", default="10,16,16", help="cover,linkage,pieces connectivity multipliers")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen", help="generate a graph in text format")
    s.add_argument("kind")
    s.add_argument("param", nargs="*", help="key=value")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("stats", help="basic graph statistics")
    s.add_argument("graph")
    s.set_defaults(func=cmd_stats)

    s = sub.add_parser("color", help="proper colouring or a K_t model")
    s.add_argument("graph")
    s.add_argument("--t", type=int, required=True)
    s.set_defaults(func=cmd_color)

    s = sub.add_parser("find-minor", help="search for a K_t model")
    s.add_argument("graph")
    s.add_argument("--t", type=int, required=True)
    s.add_argument("--restarts", type=int, default=8)
    s.set_defaults(func=cmd_find_minor)

    s = sub.add_parser("increment", help="small dense subgraph or dense bounded minor")
    s.add_argument("graph")
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--l", type=int, required=True)
    s.add_argument("--eps", required=True, help="rational such as 1/20")
    s.set_defaults(func=cmd_increment)

    s = sub.add_parser("experiment", help="dense minors of H-free graphs")
    s.add_argument("--family", action="append", help="kind:key=val,...[@seed], repeatable")
    s.add_argument("--pattern", default="c4", help=f"one of {sorted(PATTERNS)} or a graph file")
    s.add_argument("--gamma", default="3/2")
    s.add_argument("--epsilon", default="1/10")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--timings", action="store_true", help="include wall times (breaks byte-identity)")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("verify", help="re-check a certificate file")
    s.add_argument("file")
    s.set_defaults(func=cmd_verify)
    return p


def _on_alarm(signum, frame):
    raise BudgetExhausted()


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.budget > 0 and hasattr(signal, "SIGALRM"):
        signal.signal(signal.SIGALRM, _on_alarm)
        signal.setitimer(signal.ITIMER_REAL, args.budget)
    try:
        return args.func(args)
    except BudgetExhausted:
        print(f"budget of {args.budget}s exhausted", file=sys.stderr)
        return EXIT_BUDGET
    except (HeuristicFailed, NoLinkageFound, NoCoverFound) as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_BUDGET
    except (MinorCertError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    finally:
        if args.budget > 0 and hasattr(signal, "SIGALRM"):
            signal.setitimer(signal.ITIMER_REAL, 0)


if __name__ == "__main__":
    sys.exit(main())
