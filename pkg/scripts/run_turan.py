"""Run the dense-minor experiment on C4-free plane incidence graphs and write a JSON report."""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from minorcert.certificates import dumps
from minorcert.graph import cycle_graph
from minorcert.turan import turan_experiment


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--q", type=int, nargs="+", default=[2, 3, 4, 5, 7])
    p.add_argument("--gamma", default="3/2")
    p.add_argument("--epsilon", default="1/10")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default="-")
    args = p.parse_args(argv)
    family = [{"name": f"pg_incidence q={q}", "kind": "pg_incidence", "params": {"q": q}} for q in args.q]
    rep = turan_experiment(family, cycle_graph(4), Fraction(args.gamma), Fraction(args.epsilon), seed=args.seed)
    for row in rep.rows:
        print(f"{row['name']:>20}  v={row['v']:4d}  d={row['d']:>6}  best={row['best_density']:>8}  "
              f"target={float(row['target']):7.3f}  ratio={float(row['ratio']):5.2f}", file=sys.stderr)
    text = dumps(rep.to_dict())
    if args.out == "-":
        print(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
