"""Vertex-disjoint linkages, knitted covers and rooted clique models with a linkage."""

from __future__ import annotations

import itertools
import random
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import BadParams, HeuristicFailed, NoCoverFound, NoLinkageFound
from .graph import Graph, is_connected_set, vertex_connectivity
from .models import Model, RootedModel, validate_rooted

EXACT_VERTEX_LIMIT = 16
EXACT_PAIR_LIMIT = 3
EXACT_NODE_BUDGET = 200_000


@dataclass(frozen=True)
class LinkageSpec:
    pairs: tuple[tuple[int, int], ...]
    forbidden: frozenset[int] = frozenset()

    @classmethod
    def of(cls, pairs: Iterable[Sequence[int]], forbidden: Iterable[int] = ()) -> "LinkageSpec":
        return cls(tuple((int(s), int(t)) for s, t in pairs), frozenset(forbidden))

    def terminals(self) -> set[int]:
        return {v for p in self.pairs for v in p}

    def problems(self, G: Graph) -> list[str]:
        out = []
        seen: dict[int, int] = {}
        for i, (s, t) in enumerate(self.pairs):
            for v in {s, t}:
                if not 0 <= v < G.n:
                    out.append(f"pair {i} vertex {v} out of range")
                elif v in self.forbidden:
                    out.append(f"pair {i} vertex {v} is forbidden")
                elif v in seen:
                    out.append(f"vertex {v} used by pairs {seen[v]} and {i}")
                else:
                    seen[v] = i
        return out


def linkage_problems(G: Graph, spec: LinkageSpec, paths: Sequence[Sequence[int]]) -> list[str]:
    out = []
    if len(paths) != len(spec.pairs):
        return [f"{len(paths)} paths for {len(spec.pairs)} pairs"]
    used: dict[int, int] = {}
    for i, ((s, t), P) in enumerate(zip(spec.pairs, paths)):
        if not P or P[0] != s or P[-1] != t:
            out.append(f"path {i} does not run from {s} to {t}")
            continue
        if s == t and len(P) != 1:
            out.append(f"path {i} should be the single vertex {s}")
        for a, b in zip(P, P[1:]):
            if not (0 <= a < G.n and 0 <= b < G.n) or not G.has_edge(a, b):
                out.append(f"path {i} uses non-edge {a}-{b}")
        for v in P:
            if v in spec.forbidden:
                out.append(f"path {i} uses forbidden vertex {v}")
            if v in used:
                out.append(f"vertex {v} on paths {used[v]} and {i}")
            used[v] = i
    return out


def _bfs_path(G: Graph, sources: Iterable[int], targets: set[int], blocked: set[int]) -> list[int] | None:
    """Shortest path from any source to any target through unblocked vertices (lowest ids first)."""
    parent: dict[int, int | None] = {}
    q = deque()
    for s in sorted(sources):
        if s not in blocked:
            parent[s] = None
            q.append(s)
    while q:
        u = q.popleft()
        if u in targets:
            path = [u]
            while parent[path[-1]] is not None:
                path.append(parent[path[-1]])
            return path[::-1]
        for w in G.nbrs[u]:
            if w not in parent and w not in blocked:
                parent[w] = u
                q.append(w)
    return None


def _connected(G: Graph, s: int, t: int, blocked: set[int]) -> bool:
    return s == t or _bfs_path(G, [s], {t}, blocked) is not None


# -- heuristic ---------------------------------------------------------

def _route(G: Graph, spec: LinkageSpec, order: list[int], rng: random.Random, rounds: int):
    """Sequential shortest paths with rip-up and re-route."""
    term = spec.terminals()
    paths: dict[int, list[int]] = {}
    queue = deque(order)
    for _ in range(rounds):
        if not queue:
            return [paths[i] for i in range(len(spec.pairs))]
        i = queue.popleft()
        s, t = spec.pairs[i]
        if s == t:
            paths[i] = [s]
            continue
        used = {v for j, P in paths.items() for v in P}
        blocked = set(spec.forbidden) | (term - {s, t}) | used
        P = _bfs_path(G, [s], {t}, blocked)
        if P is not None:
            paths[i] = P
            continue
        # route ignoring other paths, then rip up whatever it crosses
        free = _bfs_path(G, [s], {t}, set(spec.forbidden) | (term - {s, t}))
        if free is None:
            return None
        hit = sorted(j for j, Q in paths.items() if not set(Q).isdisjoint(free))
        rng.shuffle(hit)
        for j in hit:
            del paths[j]
            queue.append(j)
        paths[i] = free
    return None


# -- exact search --------------------------------------------------------

class _ExactLinkage:
    def __init__(self, G: Graph, spec: LinkageSpec, budget: int):
        self.G = G
        self.spec = spec
        self.budget = budget
        self.nodes = 0
        self.exhausted_budget = False
        self.failed: set = set()

    def solve(self):
        used = frozenset(self.spec.forbidden)
        return self._pair(0, used)

    def _remaining_ok(self, i: int, used: frozenset, extra: tuple[int, int] | None = None) -> bool:
        pairs = self.spec.pairs
        term = self.spec.terminals()
        for j in range(i, len(pairs)):
            s, t = pairs[j]
            if not _connected(self.G, s, t, set(used) | (term - {s, t})):
                return False
        if extra is not None:
            cur, t = extra
            blocked = set(used) | (term - {t})
            blocked.discard(cur)
            if not _connected(self.G, cur, t, blocked):
                return False
        return True

    def _pair(self, i: int, used: frozenset):
        if i == len(self.spec.pairs):
            return []
        s, t = self.spec.pairs[i]
        if s == t:
            rest = self._pair(i + 1, used | {s})
            return None if rest is None else [[s]] + rest
        if not self._remaining_ok(i, used):
            return None
        return self._extend(i, [s], used | {s})

    def _extend(self, i: int, path: list[int], used: frozenset):
        self.nodes += 1
        if self.nodes > self.budget:
            self.exhausted_budget = True
            return None
        cur = path[-1]
        key = (i, cur, used)
        if key in self.failed:
            return None
        s, t = self.spec.pairs[i]
        term = self.spec.terminals()
        for w in self.G.nbrs[cur]:
            if w == t:
                rest = self._pair(i + 1, used | {t})
                if rest is not None:
                    return [path + [t]] + rest
                if self.exhausted_budget:
                    return None
                continue
            if w in used or w in term:
                continue
            nu = used | {w}
            if not self._remaining_ok(i + 1, nu, (w, t)):
                continue
            found = self._extend(i, path + [w], nu)
            if found is not None:
                return found
            if self.exhausted_budget:
                return None
        self.failed.add(key)
        return None


def find_linkage(G: Graph, spec: LinkageSpec, seed: int = 0, restarts: int = 16,
                 exact_budget: int = EXACT_NODE_BUDGET) -> list[list[int]]:
    """Vertex-disjoint paths, path ``i`` joining ``spec.pairs[i]``.

    Raises :class:`NoLinkageFound`; its ``exhaustive`` flag is set only when
    infeasibility was proved.
    """
    problems = spec.problems(G)
    if problems:
        raise BadParams("; ".join(problems))
    term = spec.terminals()
    for s, t in spec.pairs:
        if not _connected(G, s, t, set(spec.forbidden) | (term - {s, t})):
            raise NoLinkageFound(exhaustive=True)
    rng = random.Random(seed)
    k = len(spec.pairs)
    for attempt in range(restarts):
        order = list(range(k))
        if attempt:
            rng.shuffle(order)
        paths = _route(G, spec, order, rng, rounds=8 * k + 8)
        if paths is not None and not linkage_problems(G, spec, paths):
            return paths
    if G.n <= EXACT_VERTEX_LIMIT or k <= EXACT_PAIR_LIMIT:
        search = _ExactLinkage(G, spec, exact_budget)
        paths = search.solve()
        if paths is not None:
            if linkage_problems(G, spec, paths):
                raise AssertionError("exact linkage search returned an invalid linkage")
            return paths
        raise NoLinkageFound(exhaustive=not search.exhausted_budget)
    raise NoLinkageFound(exhaustive=False)


def brute_force_linkable(G: Graph, spec: LinkageSpec) -> bool:
    """Oracle: try every assignment of free vertices to pairs (tiny graphs only)."""
    k = len(spec.pairs)
    term = spec.terminals()
    free = [v for v in range(G.n) if v not in term and v not in spec.forbidden]
    for owners in itertools.product(range(k + 1), repeat=len(free)):
        ok = True
        for i, (s, t) in enumerate(spec.pairs):
            part = {s, t} | {v for v, o in zip(free, owners) if o == i + 1}
            if not is_connected_set(G, part):
                ok = False
                break
        if ok:
            return True
    return False


# -- knitted covers ------------------------------------------------------

@dataclass
class KnittedCover:
    sets: tuple[tuple[int, ...], ...]
    parts: tuple[tuple[int, ...], ...]
    gates: dict[int, bool] = field(default_factory=dict)

    def problems(self, G: Graph) -> list[str]:
        out = []
        seen: dict[int, int] = {}
        if len(self.parts) != len(self.sets):
            return ["part count differs from set count"]
        for i, (S, C) in enumerate(zip(self.sets, self.parts)):
            if not set(S) <= set(C):
                out.append(f"part {i} misses vertices of its set")
            if not is_connected_set(G, C):
                out.append(f"part {i} not connected")
            for v in C:
                if v in seen:
                    out.append(f"vertex {v} in parts {seen[v]} and {i}")
                seen[v] = i
        return out


COVER_GATES = (10, 22)
EXACT_COVER_LIMIT = 200_000


def _grow_cover(G: Graph, sets: list[list[int]], order: list[int]) -> list[list[int]] | None:
    all_terms = {v for S in sets for v in S}
    used: set[int] = set()
    parts: dict[int, list[int]] = {}
    for i in order:
        S = sets[i]
        tree = {S[0]}
        blocked = (all_terms - set(S)) | used
        for target in S[1:]:
            if target in tree:
                continue
            P = _bfs_path(G, tree, {target}, blocked)
            if P is None:
                return None
            tree.update(P)
        parts[i] = sorted(tree)
        used |= tree
    return [parts[i] for i in range(len(sets))]


def _exact_cover(G: Graph, sets: list[list[int]]) -> list[list[int]] | None:
    k = len(sets)
    terms = {v for S in sets for v in S}
    free = [v for v in range(G.n) if v not in terms]
    for owners in itertools.product(range(k + 1), repeat=len(free)):
        parts = [set(S) | {v for v, o in zip(free, owners) if o == i + 1} for i, S in enumerate(sets)]
        if all(is_connected_set(G, p) for p in parts):
            return [sorted(p) for p in parts]
    return None


def knitted_cover(G: Graph, sets: Sequence[Iterable[int]], seed: int = 0, restarts: int = 16,
                  report_gates: bool = True) -> KnittedCover:
    """Disjoint connected ``C_i`` containing ``S_i``; greedy Steiner growth, exact when tiny."""
    sets = [sorted(set(S)) for S in sets]
    if any(not S for S in sets):
        raise BadParams("every set must be nonempty")
    flat = [v for S in sets for v in S]
    if len(flat) != len(set(flat)):
        raise BadParams("sets must be pairwise disjoint")
    if any(not 0 <= v < G.n for v in flat):
        raise BadParams("set vertex out of range")
    gates: dict[int, bool] = {}
    if report_gates:
        kappa = vertex_connectivity(G) if G.n > 1 else 0
        gates = {c: kappa >= c * len(flat) for c in COVER_GATES}
    rng = random.Random(seed)
    order = list(range(len(sets)))
    for attempt in range(restarts):
        if attempt:
            rng.shuffle(order)
        parts = _grow_cover(G, sets, order)
        if parts is not None:
            cover = KnittedCover(tuple(map(tuple, sets)), tuple(map(tuple, parts)), gates)
            if not cover.problems(G):
                return cover
    if all(len(S) <= 2 for S in sets):
        # covering pairs is a linkage problem, which has an exact search
        try:
            paths = find_linkage(G, LinkageSpec.of([(S[0], S[-1]) for S in sets]), seed=seed)
        except NoLinkageFound as exc:
            raise NoCoverFound(exhaustive=exc.exhaustive) from None
        return KnittedCover(tuple(map(tuple, sets)), tuple(tuple(sorted(P)) for P in paths), gates)
    free = G.n - len(flat)
    if (len(sets) + 1) ** free <= EXACT_COVER_LIMIT:
        parts = _exact_cover(G, sets)
        if parts is None:
            raise NoCoverFound(exhaustive=True)
        return KnittedCover(tuple(map(tuple, sets)), tuple(map(tuple, parts)), gates)
    raise NoCoverFound(exhaustive=False)


# -- rooted clique models ------------------------------------------------

def _grow_rooted_clique(G: Graph, roots: Sequence[int], allowed: set[int], rng: random.Random,
                        shuffle: bool) -> list[set[int]] | None:
    """Join every pair of root sets by a shortest path split half and half."""
    sets = [{r} for r in roots]
    owner = {r: i for i, r in enumerate(roots)}
    pairs = list(itertools.combinations(range(len(roots)), 2))
    if shuffle:
        rng.shuffle(pairs)
    for i, j in pairs:
        if any(not sets[j].isdisjoint(G.adj[u]) for u in sets[i]):
            continue
        blocked = {v for v in range(G.n) if v not in allowed or (v in owner and owner[v] not in (i, j))}
        blocked -= sets[i] | sets[j]
        P = _bfs_path(G, sets[i], sets[j], blocked)
        if P is None:
            return None
        inner = P[1:-1]
        half = (len(inner) + 1) // 2
        for v in inner[:half]:
            sets[i].add(v)
            owner[v] = i
        for v in inner[half:]:
            sets[j].add(v)
            owner[v] = j
    return sets


@dataclass
class RootedLinkage:
    rooted: RootedModel
    spec: LinkageSpec
    paths: list[list[int]]

    def problems(self) -> list[str]:
        G = self.rooted.model.host
        out = validate_rooted(self.rooted) + linkage_problems(G, self.spec, self.paths)
        on_paths = {v for P in self.paths for v in P}
        clash = self.rooted.model.vertices() & on_paths
        if clash:
            out.append(f"model and linkage share vertices {sorted(clash)[:5]}")
        return out


def rooted_model_with_linkage(G: Graph, roots: Sequence[int], spec: LinkageSpec | None = None,
                              seed: int = 0, attempts: int = 64) -> RootedLinkage:
    """``K_s`` model rooted at ``roots`` plus a disjoint ``spec``-linkage.

    Each attempt either routes the linkage first or grows the model first;
    later attempts reserve a random half of the free vertices for the
    linkage.  Raises :class:`HeuristicFailed` naming the stage that failed.
    """
    spec = spec or LinkageSpec(())
    roots = list(roots)
    named = set(roots) | spec.terminals()
    if len(named) != len(roots) + len(spec.terminals()) or len(set(roots)) != len(roots):
        raise BadParams("roots and pair vertices must be distinct")
    if spec.problems(G) or any(not 0 <= r < G.n for r in roots):
        raise BadParams("invalid roots or linkage spec")
    rng = random.Random(seed)
    linkage_seen = False
    free = [v for v in range(G.n) if v not in named and v not in spec.forbidden]
    for attempt in range(attempts):
        if attempt < 2:
            pool = set(free)
        else:
            pool = {v for v in free if rng.random() < 0.5}
        model_first = attempt % 2 == 0
        rest = set(free) - pool if attempt >= 2 else set(free)
        if model_first:
            sets = _grow_rooted_clique(G, roots, set(roots) | rest, rng, attempt > 0)
            if sets is None:
                continue
            taken = set().union(*sets) if sets else set()
            link_spec = LinkageSpec(spec.pairs, spec.forbidden | taken | set(roots))
            try:
                paths = find_linkage(G, link_spec, seed=seed + attempt, restarts=4, exact_budget=20_000)
            except NoLinkageFound:
                continue
            linkage_seen = True
        else:
            allowed_link = pool | spec.terminals()
            blocked = {v for v in range(G.n) if v not in allowed_link}
            link_spec = LinkageSpec(spec.pairs, spec.forbidden | blocked)
            try:
                paths = find_linkage(G, link_spec, seed=seed + attempt, restarts=4, exact_budget=20_000)
            except NoLinkageFound:
                continue
            linkage_seen = True
            on_paths = {v for P in paths for v in P}
            model_pool = (set(free) - on_paths) | set(roots)
            sets = _grow_rooted_clique(G, roots, model_pool, rng, attempt > 0)
            if sets is None:
                continue
        model = Model.clique(G, sets)
        out = RootedLinkage(RootedModel(model, tuple(roots)), spec, paths)
        if not out.problems():
            return out
    if spec.pairs and not linkage_seen:
        raise HeuristicFailed("linkage", f"no linkage after {attempts} attempts")
    raise HeuristicFailed("clique", f"no rooted model after {attempts} attempts")
