"""Immutable simple graphs and the primitives every other module builds on.

Vertices are the dense ids ``0..n-1``. Densities are exact ``Fraction``s.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidMap, NotAForest, NotEdges, NullGraph, ParseError, SameVertex
from .flow import local_vertex_connectivity, minimum_st_vertex_cut


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    nbrs: tuple[tuple[int, ...], ...]
    adj: tuple[frozenset[int], ...] = field(repr=False, compare=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValueError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge {u}-{v} out of range for n={n}")
            sets[u].add(v)
            sets[v].add(u)
        return cls._from_sets(sets)

    @classmethod
    def _from_sets(cls, sets: Sequence[set[int]]) -> "Graph":
        return cls(len(sets), tuple(tuple(sorted(s)) for s in sets),
                   tuple(frozenset(s) for s in sets))

    # -- basic queries -------------------------------------------------
    @property
    def m(self) -> int:
        return sum(len(a) for a in self.nbrs) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.nbrs[u] if u < v]

    def degree(self, v: int) -> int:
        return len(self.nbrs[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def density(self) -> Fraction:
        if self.n == 0:
            raise NullGraph("density of the null graph is undefined")
        return Fraction(self.m, self.n)

    def min_degree(self) -> int:
        return min((len(a) for a in self.nbrs), default=0)

    def is_complete(self) -> bool:
        return all(len(a) == self.n - 1 for a in self.nbrs)

    def induced(self, vertices: Iterable[int]) -> tuple["Graph", tuple[int, ...]]:
        """Induced subgraph, relabelled; second item maps new id -> old id."""
        keep = tuple(sorted(set(vertices)))
        pos = {v: i for i, v in enumerate(keep)}
        sets = [{pos[w] for w in self.nbrs[v] if w in pos} for v in keep]
        return Graph._from_sets(sets), keep

    def count_edges_within(self, vertices: Iterable[int]) -> int:
        vs = set(vertices)
        return sum(1 for v in vs for w in self.nbrs[v] if w in vs) // 2

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.nbrs == other.nbrs

    def __hash__(self) -> int:
        return hash((self.n, self.nbrs))

    # -- text format ---------------------------------------------------
    def to_text(self) -> str:
        lines = [f"p {self.n} {self.m}"]
        lines += [f"e {u} {v}" for u, v in self.edges()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        n = None
        edges = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            parts = raw.split()
            if not parts or parts[0] in ("c", "#"):
                continue
            try:
                if parts[0] == "p":
                    n = int(parts[1])
                elif parts[0] == "e":
                    edges.append((int(parts[1]), int(parts[2])))
                elif len(parts) == 2:
                    edges.append((int(parts[0]), int(parts[1])))
                else:
                    raise ValueError(raw)
            except (ValueError, IndexError):
                raise ParseError(f"cannot parse {raw!r}", f"line {lineno}") from None
        if n is None:
            n = 1 + max((max(e) for e in edges), default=-1)
        try:
            return cls.from_edges(n, edges)
        except ValueError as exc:
            raise ParseError(str(exc)) from None


# -- small named graphs -------------------------------------------------

def empty_graph(n: int) -> Graph:
    return Graph.from_edges(n, [])


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_bipartite(a: int, b: int) -> Graph:
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def grid_graph(rows: int, cols: int) -> Graph:
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    return Graph.from_edges(rows * cols, edges)


def disjoint_union(*graphs: Graph) -> Graph:
    edges, off = [], 0
    for g in graphs:
        edges += [(u + off, v + off) for u, v in g.edges()]
        off += g.n
    return Graph.from_edges(off, edges)


# -- statistics ------------------------------------------------------

@dataclass(frozen=True)
class GraphStats:
    v: int
    e: int
    density: Fraction
    min_degree: int
    degeneracy: int


def degeneracy_order(G: Graph) -> tuple[list[int], int]:
    """Peel order (repeatedly remove a min-degree vertex, lowest id on ties)."""
    deg = [len(a) for a in G.nbrs]
    heap = [(d, v) for v, d in enumerate(deg)]
    heapq.heapify(heap)
    removed = [False] * G.n
    order, k = [], 0
    while heap:
        d, v = heapq.heappop(heap)
        if removed[v] or d != deg[v]:
            continue
        removed[v] = True
        order.append(v)
        k = max(k, d)
        for w in G.nbrs[v]:
            if not removed[w]:
                deg[w] -= 1
                heapq.heappush(heap, (deg[w], w))
    return order, k


def degeneracy(G: Graph) -> int:
    return degeneracy_order(G)[1]


def stats(G: Graph) -> GraphStats:
    if G.n == 0:
        raise NullGraph("stats of the null graph")
    return GraphStats(G.n, G.m, G.density(), G.min_degree(), degeneracy(G))


def core_vertices(G: Graph) -> list[int]:
    """Vertex set of :func:`densest_core`.

    Deletes the lowest-indexed vertex whose degree is at most the current
    density until none remains; the density never decreases along the way.
    """
    if G.n == 0:
        raise NullGraph("densest_core of the null graph")
    if G.m == 0:
        raise ValueError("densest_core needs at least one edge")
    alive = set(range(G.n))
    deg = [len(a) for a in G.nbrs]
    e = G.m
    changed = True
    while changed:
        changed = False
        for v in sorted(alive):
            # deg[v] <= e / |alive|, compared exactly
            if deg[v] * len(alive) <= e:
                alive.remove(v)
                e -= deg[v]
                for w in G.nbrs[v]:
                    if w in alive:
                        deg[w] -= 1
                changed = True
                break
    return sorted(alive)


def densest_core(G: Graph) -> Graph:
    return G.induced(core_vertices(G))[0]


# -- connectivity ----------------------------------------------------

def components(G: Graph, within: Iterable[int] | None = None) -> list[list[int]]:
    allowed = set(range(G.n)) if within is None else set(within)
    seen: set[int] = set()
    comps = []
    for s in sorted(allowed):
        if s in seen:
            continue
        seen.add(s)
        comp, stack = [s], [s]
        while stack:
            u = stack.pop()
            for w in G.nbrs[u]:
                if w in allowed and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def is_connected_set(G: Graph, vertices: Iterable[int]) -> bool:
    vs = set(vertices)
    return len(vs) > 0 and len(components(G, vs)) == 1


def _connectivity_search(G: Graph) -> tuple[int, tuple[int, int] | None]:
    n = G.n
    if n <= 1:
        return 0, None
    if G.is_complete():
        return n - 1, None
    best = G.min_degree()
    best_pair = None
    i = 0
    while i < n and i <= best:
        for j in range(i + 1, n):
            if j in G.adj[i]:
                continue
            k = local_vertex_connectivity(G.nbrs, i, j, cutoff=best + 1)
            if k < best or best_pair is None and k == best:
                best, best_pair = k, (i, j)
        i += 1
    if best_pair is None:
        # min degree attained: cut off a minimum-degree vertex from a non-neighbour
        v = min(range(n), key=lambda x: (len(G.nbrs[x]), x))
        w = next(x for x in range(n) if x != v and x not in G.adj[v])
        best_pair = (v, w)
    return best, best_pair


def vertex_connectivity(G: Graph) -> int:
    """Exact vertex connectivity; ``K_n`` gets ``n - 1`` by convention."""
    return _connectivity_search(G)[0]


def min_vertex_cut(G: Graph) -> set[int] | None:
    """A minimum separating vertex set, or None for complete graphs."""
    k, pair = _connectivity_search(G)
    if pair is None:
        return None
    return minimum_st_vertex_cut(G.nbrs, *pair)


def common_neighbors(G: Graph, u: int, v: int) -> set[int]:
    if u == v:
        raise SameVertex(f"common_neighbors({u}, {v})")
    return set(G.adj[u] & G.adj[v])


# -- contraction bookkeeping -----------------------------------------

@dataclass(frozen=True)
class ContractionMap:
    """Provenance of a minor: result vertex ``i`` is the source set ``classes[i]``.

    Source vertices outside every class were deleted.
    """
    source: Graph
    target: Graph
    classes: tuple[tuple[int, ...], ...]

    @property
    def class_of(self) -> dict[int, int]:
        return {v: i for i, c in enumerate(self.classes) for v in c}

    def validate(self) -> list[str]:
        problems = []
        seen: set[int] = set()
        if len(self.classes) != self.target.n:
            problems.append("class count differs from target vertex count")
        for i, c in enumerate(self.classes):
            if not c:
                problems.append(f"class {i} empty")
            if seen & set(c):
                problems.append(f"class {i} overlaps an earlier class")
            seen |= set(c)
            if any(not 0 <= v < self.source.n for v in c):
                problems.append(f"class {i} has out-of-range vertices")
            elif c and not is_connected_set(self.source, c):
                problems.append(f"class {i} not connected")
        if not problems:
            for a, b in self.target.edges():
                if not _sets_adjacent(self.source, self.classes[a], self.classes[b]):
                    problems.append(f"target edge {a}-{b} not realised in source")
        return problems

    def compose(self, after: "ContractionMap") -> "ContractionMap":
        """Map ``source -> after.target`` given ``after.source == self.target``."""
        if after.source.n != self.target.n:
            raise InvalidMap("maps do not chain")
        classes = tuple(tuple(sorted(v for x in c for v in self.classes[x]))
                        for c in after.classes)
        return ContractionMap(self.source, after.target, classes)

    def pull_back(self, target_vertices: Iterable[int]) -> list[int]:
        return sorted(v for x in target_vertices for v in self.classes[x])

    def max_class_size(self) -> int:
        return max((len(c) for c in self.classes), default=0)


def _sets_adjacent(G: Graph, a: Iterable[int], b: Iterable[int]) -> bool:
    bs = set(b)
    return any(not bs.isdisjoint(G.adj[u]) for u in a)


def identity_map(G: Graph) -> ContractionMap:
    return ContractionMap(G, G, tuple((v,) for v in range(G.n)))


def induced_map(G: Graph, vertices: Iterable[int]) -> ContractionMap:
    H, keep = G.induced(vertices)
    return ContractionMap(G, H, tuple((v,) for v in keep))


def contract_partition(G: Graph, classes: Sequence[Iterable[int]]) -> ContractionMap:
    """Quotient of ``G`` by disjoint connected classes (others deleted).

    Parallel edges merge and loops drop, so the result is simple.
    """
    cls = tuple(tuple(sorted(c)) for c in classes)
    owner: dict[int, int] = {}
    for i, c in enumerate(cls):
        for v in c:
            if v in owner:
                raise InvalidMap(f"vertex {v} in two classes")
            owner[v] = i
    for i, c in enumerate(cls):
        if not c or not is_connected_set(G, c):
            raise InvalidMap(f"class {i} is empty or disconnected")
    sets: list[set[int]] = [set() for _ in cls]
    for u, v in G.edges():
        a, b = owner.get(u), owner.get(v)
        if a is not None and b is not None and a != b:
            sets[a].add(b)
            sets[b].add(a)
    return ContractionMap(G, Graph._from_sets(sets), cls)


def forest_classes(n: int, forest_edges: Iterable[tuple[int, int]]) -> list[list[int]]:
    """Components of ``(range(n), F)``; raises NotAForest on a cycle."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in forest_edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            raise NotAForest(f"edge {u}-{v} closes a cycle")
        parent[ru] = rv
    groups: dict[int, list[int]] = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def contract_forest(G: Graph, F: Iterable[tuple[int, int]]) -> tuple[Graph, ContractionMap, int]:
    """Contract an acyclic edge set; returns ``(G/F, map, edge loss)``."""
    F = list(F)
    for u, v in F:
        if not (0 <= u < G.n and 0 <= v < G.n) or not G.has_edge(u, v):
            raise NotEdges(f"{u}-{v} is not an edge")
    cm = contract_partition(G, forest_classes(G.n, F))
    return cm.target, cm, G.m - cm.target.m
