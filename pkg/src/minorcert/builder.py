"""Clique-minor construction: highly connected pieces, dense minors, assembly, and the colour-or-minor pipeline."""

from __future__ import annotations

import math
import random
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .coloring import Coloring, coloring_problems, greedy_degeneracy_color, log_partition_color
from .errors import BadParams, HeuristicFailed, InternalInvariantBroken, NoCoverFound, TooFewPieces
from .flow import INF, FlowNetwork
from .graph import Graph, components, core_vertices, min_vertex_cut, vertex_connectivity
from .linkage import knitted_cover, rooted_model_with_linkage
from .models import HADWIGER_CAP, Model, _find_clique, find_clique_model, lift_model, validate_model


@dataclass(frozen=True)
class Gates:
    """Connectivity multipliers gating assembly attempts (never validity)."""
    cover: float = 10
    linkage: float = 16
    pieces: float = 16

    @classmethod
    def parse(cls, text: str) -> "Gates":
        parts = [float(x) for x in text.split(",")]
        if len(parts) != 3:
            raise BadParams("gates are three comma-separated numbers: cover,linkage,pieces")
        return cls(*parts)


# -- contraction workspace ----------------------------------------------

class _Quotient:
    """Mutable minor of a host graph: adjacency between branch-set ids."""

    def __init__(self, G: Graph, vertices: Iterable[int] | None = None):
        vs = range(G.n) if vertices is None else vertices
        keep = set(vs)
        self.host = G
        self.adj = {v: set(G.adj[v]) & keep for v in keep}
        self.sets = {v: {v} for v in keep}

    def __len__(self):
        return len(self.adj)

    def remove(self, v: int) -> None:
        for w in self.adj.pop(v):
            self.adj[w].discard(v)
        del self.sets[v]

    def contract(self, u: int, v: int) -> None:
        """Merge ``v`` into ``u``."""
        nv = self.adj.pop(v)
        for w in nv:
            self.adj[w].discard(v)
            if w != u:
                self.adj[w].add(u)
                self.adj[u].add(w)
        self.sets[u] |= self.sets.pop(v)

    def min_degree(self) -> int:
        return min(len(a) for a in self.adj.values())

    def model(self, ids: Iterable[int] | None = None) -> Model:
        ids = sorted(self.adj) if ids is None else list(ids)
        index = {x: i for i, x in enumerate(ids)}
        edges = [(index[a], index[b]) for a in ids for b in self.adj[a] if b in index and index[a] < index[b]]
        return Model.build(self.host, Graph.from_edges(len(ids), edges), [self.sets[x] for x in ids])

    def clique(self, t: int) -> list[int] | None:
        ids = sorted(self.adj)
        index = {x: i for i, x in enumerate(ids)}
        masks = []
        for x in ids:
            m = 0
            for y in self.adj[x]:
                m |= 1 << index[y]
            masks.append(m)
        found = _find_clique(masks, t)
        return None if found is None else [ids[i] for i in found]


def _pick_contraction(Q: _Quotient, rng: random.Random, most_common: bool) -> tuple[int, int] | None:
    dmin = Q.min_degree()
    low = sorted(v for v, a in Q.adj.items() if len(a) == dmin)
    v = low[0] if rng is None else rng.choice(low)
    if not Q.adj[v]:
        return None
    av = Q.adj[v]
    key = (lambda u: (len(Q.adj[u] & av), -u)) if most_common else (lambda u: (-len(Q.adj[u] & av), -u))
    u = max(sorted(av), key=key)
    return u, v


# -- clique minors -------------------------------------------------------

def _greedy_clique_minor(G: Graph, t: int, rng: random.Random | None, most_common: bool) -> Model | None:
    Q = _Quotient(G)
    while True:
        low = [v for v, a in Q.adj.items() if len(a) < t - 1]
        while low:
            for v in low:
                if v in Q.adj:
                    Q.remove(v)
            low = [v for v, a in Q.adj.items() if len(a) < t - 1]
        if len(Q) < t:
            return None
        found = Q.clique(t)
        if found is not None:
            return Model.clique(G, [Q.sets[x] for x in found])
        pick = _pick_contraction(Q, rng, most_common)
        if pick is None:
            return None
        Q.contract(*pick)


def find_clique_minor(G: Graph, t: int, seed: int = 0, restarts: int = 8, exact_cap: int = HADWIGER_CAP) -> Model | None:
    """A validated ``K_t`` model or None; exact when ``G.n <= exact_cap``."""
    if t <= 0:
        return Model.clique(G, [])
    if G.n <= exact_cap:
        return find_clique_model(G, t, exact_cap)
    rng = random.Random(seed)
    for attempt in range(restarts):
        m = _greedy_clique_minor(G, t, rng if attempt >= 2 else None, most_common=attempt % 2 == 1)
        if m is not None:
            if validate_model(m):
                raise InternalInvariantBroken("greedy clique minor failed validation")
            return m
    return None


# -- highly connected subgraphs ----------------------------------------

@dataclass(frozen=True)
class ConnectedPiece:
    vertices: tuple[int, ...]
    graph: Graph
    kappa: int
    threshold: Fraction

    def problems(self, host: Graph) -> list[str]:
        H, _ = host.induced(self.vertices)
        out = []
        if H != self.graph:
            out.append("recorded subgraph differs from the induced subgraph")
        k = vertex_connectivity(H)
        if k != self.kappa:
            out.append(f"recorded kappa {self.kappa} != actual {k}")
        if k < self.threshold:
            out.append(f"kappa {k} < {self.threshold}")
        return out


def _mader_ok(H: Graph, gamma: Fraction) -> bool:
    # v(H) >= gamma and e(H) > gamma (v(H) - gamma/2)
    return H.n >= gamma and H.m > gamma * (H.n - gamma / 2)


def mader_subgraph(G: Graph) -> ConnectedPiece:
    """Induced subgraph with vertex connectivity ``>= d(G)/2``.

    Minimal-subgraph descent: with ``gamma = d(G)`` every graph on the way
    satisfies ``v >= gamma`` and ``e > gamma (v - gamma/2)``.  A vertex of
    degree ``<= gamma`` is deleted; otherwise a vertex cut smaller than
    ``gamma/2`` leaves a side that still satisfies both, and we recurse into
    it.  When neither applies the connectivity bound holds.
    """
    if G.m == 0:
        raise BadParams("mader_subgraph needs at least one edge")
    gamma = G.density()
    tau = gamma / 2
    current = core_vertices(G)
    while True:
        H, labels = G.induced(current)
        if not _mader_ok(H, gamma):
            raise HeuristicFailed("mader", "descent left the admissible family")
        low = next((v for v in range(H.n) if H.degree(v) <= gamma), None)
        if low is not None:
            current = [labels[v] for v in range(H.n) if v != low]
            continue
        kappa = vertex_connectivity(H)
        if kappa >= tau:
            piece = ConnectedPiece(tuple(current), H, kappa, tau)
            return piece
        S = min_vertex_cut(H)
        rest = [v for v in range(H.n) if v not in S]
        comps = components(H, rest)
        first = set(comps[0])
        sides = [sorted(first | S), sorted(set(range(H.n)) - first)]
        for side in sides:
            if _mader_ok(H.induced(side)[0], gamma):
                current = [labels[v] for v in side]
                break
        else:
            raise HeuristicFailed("mader", "no side of the cut stays admissible")


# -- dense minor with large minimum degree --------------------------------

def _min_degree_ok(n: int, delta: int, d: Fraction) -> bool:
    return n >= 1 and n <= d + 2 and 2 * delta >= n + Fraction(3, 10) * d - 2


def dense_minor_min_degree(G: Graph, seed: int = 0, restarts: int = 8) -> Model:
    """Minor ``H`` with ``v(H) <= d+2`` and ``2 delta(H) >= v(H) + 0.3 d - 2`` where ``d = d(G)``."""
    d = G.density() if G.n else Fraction(0)
    if d < 3:
        raise BadParams(f"d(G)={d} < 3")
    rng = random.Random(seed)
    for attempt in range(restarts):
        Q = _Quotient(G, core_vertices(G))
        r = rng if attempt >= 2 else None
        while len(Q):
            if len(Q) <= d + 2:
                found = _trim_to_min_degree(Q, d)
                if found is not None:
                    m = Q.model(found)
                    if validate_model(m):
                        raise InternalInvariantBroken("dense minor failed validation")
                    return m
            pick = _pick_contraction(Q, r, most_common=attempt % 2 == 0)
            if pick is None:
                break
            Q.contract(*pick)
    raise HeuristicFailed("dense_minor", f"no admissible minor after {restarts} restarts")


def _trim_to_min_degree(Q: _Quotient, d: Fraction) -> list[int] | None:
    """Delete minimum-degree vertices one by one, checking the target at each size."""
    alive = set(Q.adj)
    deg = {v: len(Q.adj[v]) for v in alive}
    while alive:
        delta = min(deg[v] for v in alive)
        if _min_degree_ok(len(alive), delta, d):
            return sorted(alive)
        v = min(alive, key=lambda x: (deg[x], x))
        alive.remove(v)
        for w in Q.adj[v]:
            if w in alive:
                deg[w] -= 1
    return None


# -- assembling K_t from pieces --------------------------------------------

@dataclass(frozen=True)
class PiecePlan:
    t: int
    y: int
    x: int

    @classmethod
    def for_t(cls, t: int, y: int | None = None) -> "PiecePlan":
        if t < 1:
            raise BadParams("t >= 1 required")
        if y is None:
            y = max(1, math.floor(math.log(t) ** 0.25)) if t > 1 else 1
        if y < 1:
            raise BadParams("y >= 1 required")
        return cls(t, y, -(-t // y))

    @property
    def pieces_needed(self) -> int:
        return self.y * (self.y - 1) // 2 + 1


def _route_to_core(G: Graph, piece: set[int], core: set[int], blocked: set[int], need: int) -> list[list[int]] | None:
    """``need`` disjoint paths from ``piece`` to ``core`` avoiding ``blocked``, trimmed to one end vertex in each."""
    n = G.n
    S, T = 2 * n, 2 * n + 1
    net = FlowNetwork(2 * n + 2)
    cap: dict[tuple[int, int], int] = {}

    def arc(a, b, c):
        net.add_edge(a, b, c)
        cap[(a, b)] = cap.get((a, b), 0) + c

    for v in range(n):
        if v in blocked:
            continue
        arc(2 * v, 2 * v + 1, 1)
        for w in G.nbrs[v]:
            if w not in blocked:
                arc(2 * v + 1, 2 * w, INF)
        if v in piece:
            arc(S, 2 * v, 1)
        if v in core:
            arc(2 * v + 1, T, 1)
    if net.max_flow(S, T, cutoff=need) < need:
        return None
    flow = {a: c - net.res[a[0]][a[1]] for a, c in cap.items()}
    paths = []
    for v in sorted(piece - blocked):
        if flow.get((S, 2 * v), 0) <= 0:
            continue
        path = [v]
        node = 2 * v + 1
        while True:
            if flow.get((node, T), 0) > 0 and path[-1] in core:
                flow[(node, T)] -= 1
                break
            nxt = next(b for (a, b), f in flow.items() if a == node and f > 0 and b != T)
            flow[(node, nxt)] -= 1
            w = nxt // 2
            path.append(w)
            node = 2 * w + 1
        first_core = next(i for i, u in enumerate(path) if u in core)
        path = path[:first_core + 1]
        last_piece = max(i for i, u in enumerate(path) if u in piece)
        paths.append(path[last_piece:])
        if len(paths) == need:
            break
    return paths


def assemble_clique_minor(G: Graph, pieces: Sequence[Iterable[int]], t: int, y: int | None = None,
                          seed: int = 0) -> Model:
    """``K_t`` model from disjoint pieces via a ``K_{xy}`` model, or :class:`HeuristicFailed`.

    ``pieces[0]`` plays the hub; every other pair of indices ``{i, j}``
    gets its own piece, joined to the hub by ``2x`` disjoint paths.
    """
    plan = PiecePlan.for_t(t, y)
    pieces = [sorted(set(p)) for p in pieces]
    if len(pieces) < plan.pieces_needed:
        raise TooFewPieces(f"{len(pieces)} pieces < {plan.pieces_needed} needed")
    flat = [v for p in pieces for v in p]
    if len(flat) != len(set(flat)):
        raise BadParams("pieces must be pairwise disjoint")
    if plan.y == 1:
        for verts in (pieces[0], list(range(G.n))):
            sub, labels = G.induced(verts)
            m = find_clique_minor(sub, t, seed)
            if m is not None:
                return lift_model(m, G, labels)
        raise HeuristicFailed("clique", "no K_t found in the hub or the whole graph")

    x, yy = plan.x, plan.y
    hub = set(pieces[0])
    pair_pieces = dict(zip(combinations(range(yy), 2), (set(p) for p in pieces[1:])))
    all_piece_vertices = set(flat)
    used: set[int] = set()
    routes: dict[tuple[int, int], list[list[int]]] = {}
    for (i, j), P in pair_pieces.items():
        blocked = (all_piece_vertices - P - hub) | used
        paths = _route_to_core(G, P, hub, blocked, 2 * x)
        if paths is None:
            raise HeuristicFailed("linkage", f"fewer than {2 * x} paths from piece {(i, j)} to the hub")
        routes[(i, j)] = paths
        used.update(v for p in paths for v in p)

    branch: dict[tuple[int, int], set[int]] = {(i, a): set() for i in range(yy) for a in range(x)}
    hub_ends: dict[tuple[int, int], list[int]] = {key: [] for key in branch}
    for (i, j), paths in routes.items():
        labels_ = [(i, a) for a in range(x)] + [(j, a) for a in range(x)]
        roots = [p[0] for p in paths]
        sub, lab = G.induced(sorted(pair_pieces[(i, j)]))
        index = {v: k for k, v in enumerate(lab)}
        try:
            rm = rooted_model_with_linkage(sub, [index[r] for r in roots], seed=seed)
        except HeuristicFailed as exc:
            raise HeuristicFailed("clique", f"piece {(i, j)}: {exc}") from None
        for key, bset, p in zip(labels_, rm.rooted.model.branch_sets, paths):
            branch[key].update(lab[v] for v in bset)
            branch[key].update(p[1:-1])
            hub_ends[key].append(p[-1])
    keys = sorted(branch)
    hub_sub, hub_lab = G.induced(sorted(hub))
    hindex = {v: k for k, v in enumerate(hub_lab)}
    try:
        cover = knitted_cover(hub_sub, [[hindex[v] for v in hub_ends[key]] for key in keys], seed=seed,
                              report_gates=False)
    except NoCoverFound as exc:
        raise HeuristicFailed("cover", str(exc)) from None
    for key, part in zip(keys, cover.parts):
        branch[key].update(hub_lab[v] for v in part)
    model = Model.clique(G, [branch[key] for key in keys[:t]])
    problems = validate_model(model)
    if problems:
        raise HeuristicFailed("assembly", "; ".join(problems[:3]))
    return model


# -- the colour-or-minor pipeline ------------------------------------------

@dataclass
class PipelineResult:
    kind: str  # "coloring" or "minor"
    coloring: Coloring | None = None
    model: Model | None = None
    report: dict = field(default_factory=dict)

    def problems(self, G: Graph) -> list[str]:
        if self.kind == "coloring" and self.coloring is not None:
            return coloring_problems(G, self.coloring)
        if self.kind == "minor" and self.model is not None:
            out = validate_model(self.model)
            if self.model.pattern.n != self.report.get("t") or not self.model.pattern.is_complete():
                out.append("pattern is not K_t")
            return out
        return ["result carries neither a colouring nor a model"]


def color_or_minor(G: Graph, t: int, gates: Gates = Gates(), seed: int = 0) -> PipelineResult:
    """Proper colouring or a validated ``K_t`` model; always one of the two."""
    if t < 3:
        raise BadParams("t >= 3 required")
    lt = math.log(t)
    report: dict = {"t": t, "seed": seed, "gates": asdict(gates), "trace": [],
                    "density_target": 3.2 * t * math.sqrt(lt)}
    trace = report["trace"]

    def done(res: PipelineResult) -> PipelineResult:
        problems = res.problems(G)
        if problems:
            raise InternalInvariantBroken("; ".join(problems[:3]))
        return res

    m = find_clique_minor(G, t, seed)
    if m is not None:
        trace.append("direct_minor")
        return done(PipelineResult("minor", model=m, report=report))
    trace.append("direct_minor_failed")

    piece_density = gates.pieces * t * lt ** 0.25
    piece_size = t * lt ** 0.75
    report["piece_gates"] = {"density": piece_density, "size": piece_size}
    remaining = set(range(G.n))
    pieces: list[list[int]] = []
    while remaining:
        sub, lab = G.induced(sorted(remaining))
        if sub.m == 0:
            break
        core = [lab[v] for v in core_vertices(sub)]
        H = G.induced(core)[0]
        if H.density() < piece_density or len(core) > piece_size:
            break
        pieces.append(core)
        remaining -= set(core)
    report["pieces"] = [{"v": len(p), "e": G.count_edges_within(p), "d": str(G.induced(p)[0].density())}
                        for p in pieces]
    need = math.ceil(math.sqrt(lt) / 2)
    if pieces and len(pieces) >= need:
        kappa = vertex_connectivity(G)
        report["kappa"] = kappa
        if kappa >= gates.linkage * t * lt ** 0.25:
            try:
                m = assemble_clique_minor(G, pieces, t, seed=seed)
                trace.append("assembled")
                return done(PipelineResult("minor", model=m, report=report))
            except (HeuristicFailed, TooFewPieces) as exc:
                trace.append(f"assembly_failed:{exc}")
        else:
            trace.append("connectivity_gate_closed")

    colors: dict[int, int] = {}
    offset = 0
    X = sorted(v for p in pieces for v in p)
    if X:
        sub, lab = G.induced(X)
        out = log_partition_color(sub, t)
        if isinstance(out, Model):
            trace.append("minor_from_pieces")
            return done(PipelineResult("minor", model=lift_model(out, G, lab), report=report))
        for v, c in out.colors.items():
            colors[lab[v]] = c
        offset = max(out.colors.values()) + 1
    rest = sorted(remaining)
    if rest:
        sub, lab = G.induced(rest)
        col = greedy_degeneracy_color(sub)
        for v, c in col.colors.items():
            colors[lab[v]] = offset + c
    coloring = Coloring.of(colors)
    trace.append("colored")
    report["palette"] = coloring.palette_size
    return done(PipelineResult("coloring", coloring=coloring, report=report))
