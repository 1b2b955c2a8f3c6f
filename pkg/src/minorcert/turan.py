"""Turán-exponent experiment: dense minors of H-free graphs against d^(gamma/(2(gamma-1)))."""

from __future__ import annotations

import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import BadParams, DensityTooLow, NotHFree, PatternTooLarge
from .generators import gen
from .graph import Graph, core_vertices
from .increment import small_or_dense_minor
from .models import Model, validate_model

PATTERN_LIMIT = 8
DELTA_GRID_BITS = 10
DELTA_GRID_MAX = 8


def subgraph_free(G: Graph, H: Graph) -> bool:
    """True iff no subgraph of ``G`` is isomorphic to ``H``."""
    if H.n > PATTERN_LIMIT:
        raise PatternTooLarge(f"pattern has {H.n} > {PATTERN_LIMIT} vertices")
    if H.n > G.n or H.m > G.m:
        return True
    # place pattern vertices so that each one after the first has a placed neighbour when possible
    order: list[int] = []
    rest = set(range(H.n))
    while rest:
        nxt = max(rest, key=lambda v: (sum(w in order for w in H.nbrs[v]), H.degree(v), -v))
        order.append(nxt)
        rest.remove(nxt)
    back = [[w for w in H.nbrs[v] if w in order[:i]] for i, v in enumerate(order)]
    image: dict[int, int] = {}
    used: set[int] = set()

    def place(i: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        if back[i]:
            cand = set(G.adj[image[back[i][0]]])
            for w in back[i][1:]:
                cand &= G.adj[image[w]]
        else:
            cand = range(G.n)
        for x in sorted(cand):
            if x in used or G.degree(x) < H.degree(v):
                continue
            image[v] = x
            used.add(x)
            if place(i + 1):
                return True
            used.discard(x)
            del image[v]
        return False

    return not place(0)


@dataclass(frozen=True)
class TuranParams:
    gamma: Fraction
    epsilon: Fraction
    delta: Fraction

    @property
    def exponent(self) -> Fraction:
        return self.gamma / (2 * (self.gamma - 1))

    def problems(self) -> list[str]:
        g, e, dl = self.gamma, self.epsilon, self.delta
        out = []
        if g <= 1 or e <= 0 or dl <= 0:
            return ["need gamma > 1, epsilon > 0, delta > 0"]
        if not (g + dl) / ((2 + dl) * (g - 1 + dl) + dl) > self.exponent - e:
            out.append("(g+d)/((2+d)(g-1+d)+d) > g/(2(g-1)) - eps fails")
        if not (self.exponent - e) * dl <= Fraction(1, 2):
            out.append("(g/(2(g-1)) - eps) delta <= 1/2 fails")
        return out


def choose_delta(gamma, epsilon) -> Fraction:
    """Largest multiple of ``2^-10`` in ``(0, 8]`` meeting both constraints, checked exactly."""
    gamma, epsilon = Fraction(gamma), Fraction(epsilon)
    if gamma <= 1 or epsilon <= 0:
        raise BadParams("need gamma > 1 and epsilon > 0")
    step = Fraction(1, 1 << DELTA_GRID_BITS)
    j = DELTA_GRID_MAX << DELTA_GRID_BITS
    target = gamma / (2 * (gamma - 1)) - epsilon
    if target > 0:
        j = min(j, math.floor(Fraction(1, 2) / target / step))
    # the left side of the first constraint decreases in delta, so scan down
    while j > 0 and TuranParams(gamma, epsilon, j * step).problems():
        j -= 1
    if j == 0:
        raise BadParams("no grid value of delta satisfies both constraints")
    return j * step


# -- densest minor search ----------------------------------------------

def _contraction_search(G: Graph, rng: random.Random | None) -> tuple[Fraction, list[list[int]], Graph]:
    """Contract low-degree vertices into their least-overlapping neighbour; keep the densest core seen."""
    adj = {v: set(G.adj[v]) for v in range(G.n)}
    sets = {v: [v] for v in range(G.n)}
    best: tuple[Fraction, list[list[int]], Graph] = (Fraction(-1), [], Graph.from_edges(0, []))
    while adj:
        ids = sorted(adj)
        index = {x: i for i, x in enumerate(ids)}
        cur = Graph.from_edges(len(ids), [(index[a], index[b]) for a in ids for b in adj[a] if a < b])
        core = core_vertices(cur) if cur.m else list(range(cur.n))
        H, keep = cur.induced(core)
        dens = H.density() if H.n else Fraction(0)
        if dens > best[0]:
            best = (dens, [sorted(sets[ids[i]]) for i in keep], H)
        dmin = min(len(a) for a in adj.values())
        low = [v for v in ids if len(adj[v]) == dmin]
        v = low[0] if rng is None else rng.choice(low)
        if not adj[v]:
            for w in adj.pop(v):
                adj[w].discard(v)
            del sets[v]
            continue
        u = min(sorted(adj[v]), key=lambda w: len(adj[w] & adj[v]))
        for w in adj.pop(v):
            adj[w].discard(v)
            if w != u:
                adj[w].add(u)
                adj[u].add(w)
        sets[u] += sets.pop(v)
    return best


def densest_minor_search(G: Graph, seed: int = 0, restarts: int = 4) -> Model:
    """Validated model of the densest minor found by seeded greedy contraction."""
    rng = random.Random(seed)
    best = None
    for attempt in range(restarts):
        found = _contraction_search(G, rng if attempt else None)
        if best is None or found[0] > best[0]:
            best = found
    model = Model.build(G, best[2], best[1])
    problems = validate_model(model)
    if problems:
        raise AssertionError("; ".join(problems))
    return model


# -- experiment ---------------------------------------------------------

@dataclass
class ExperimentReport:
    gamma: Fraction
    epsilon: Fraction
    delta: Fraction
    seed: int
    rows: list[dict] = field(default_factory=list)
    wall_times: list[float] = field(default_factory=list)

    def to_dict(self, timings: bool = False) -> dict:
        out = {"gamma": str(self.gamma), "epsilon": str(self.epsilon), "delta": str(self.delta),
               "seed": self.seed, "rows": self.rows}
        if timings:
            out["wall_times"] = self.wall_times
        return out


def _as_instance(item) -> tuple[str, Graph]:
    if isinstance(item, Graph):
        return "graph", item
    if isinstance(item, tuple) and len(item) == 2 and isinstance(item[1], Graph):
        return item
    if isinstance(item, dict):
        return item.get("name", item["kind"]), gen(item["kind"], item.get("params", {}), int(item.get("seed", 0)))
    raise BadParams(f"cannot read instance {item!r}")


def _run_row(args) -> tuple[dict, float]:
    name, G, params, seed, escalations = args
    start = time.perf_counter()
    d = G.density()
    trace = []
    best_model = None
    # escalate D from 2 d(G); each target either certifies or stops on the driver's density gate
    for i in range(1, escalations + 1):
        D = d * (1 << i)
        try:
            res = small_or_dense_minor(G, D, params.delta)
        except DensityTooLow:
            trace.append({"D": str(D), "driver": "density_too_low"})
            break
        trace.append({"D": str(D), "driver": res.outcome})
        if res.outcome != "minor":
            break
        best_model = res.model
    searched = densest_minor_search(G, seed)
    trace.append({"search": "greedy_contraction", "density": str(Fraction(searched.pattern.m, searched.pattern.n))})
    candidates = [m for m in (best_model, searched) if m is not None]
    model = max(candidates, key=lambda m: Fraction(m.pattern.m, m.pattern.n))
    if validate_model(model):
        raise AssertionError("experiment model failed validation")
    best = Fraction(model.pattern.m, model.pattern.n)
    target = float(d) ** float(params.exponent)
    row = {
        "name": name, "v": G.n, "e": G.m, "d": str(d), "best_density": str(best),
        "target": repr(target), "cap": repr(math.sqrt(G.m)), "ratio": repr(float(best) / target),
        "floor_ok": best >= d, "cap_ok": best * best <= G.m,
        "seed": seed, "trace": trace,
        "model": {"pattern_edges": [list(e) for e in model.pattern.edges()],
                  "branch_sets": [list(b) for b in model.branch_sets]},
    }
    return row, time.perf_counter() - start


def turan_experiment(family: Sequence, H: Graph, gamma, epsilon, seed: int = 0, escalations: int = 4,
                     workers: int = 1) -> ExperimentReport:
    """One row per instance: best certified minor density against ``d^(gamma/(2(gamma-1)))``."""
    gamma, epsilon = Fraction(gamma), Fraction(epsilon)
    params = TuranParams(gamma, epsilon, choose_delta(gamma, epsilon))
    instances = [_as_instance(x) for x in family]
    offending = [i for i, (_, G) in enumerate(instances) if not subgraph_free(G, H)]
    if offending:
        raise NotHFree(offending)
    report = ExperimentReport(gamma, epsilon, params.delta, seed)
    jobs = [(name, G, params, seed, escalations) for name, G in instances]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_row, jobs))
    else:
        results = [_run_row(j) for j in jobs]
    for row, wall in results:
        report.rows.append(row)
        report.wall_times.append(wall)
    return report
