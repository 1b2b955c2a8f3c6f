"""Mates, small dense certificates, and the star-forest increment on unbalanced bipartite graphs."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import BadParams, InternalInvariantBroken, NoViolation, SameVertex
from .graph import ContractionMap, Graph, contract_partition, identity_map
from .models import BoundedMinorCert, Model, validate_bounded


@dataclass(frozen=True)
class MateParams:
    epsilon: Fraction
    d: Fraction
    K: Fraction = Fraction(1)

    def __post_init__(self):
        if not 0 < self.epsilon < 1 or self.d < 1 or self.K < 1:
            raise BadParams(f"mate parameters out of range: {self}")

    @property
    def threshold(self) -> Fraction:
        return self.epsilon * self.d


@dataclass(frozen=True)
class SmallDenseCert:
    """``host[vertices]`` has ``e`` edges, at most ``v_bound`` vertices and at least ``e_bound`` edges."""
    host: Graph
    vertices: tuple[int, ...]
    e: int
    v_bound: Fraction
    e_bound: Fraction

    @classmethod
    def make(cls, host: Graph, vertices: Iterable[int], v_bound, e_bound) -> "SmallDenseCert":
        vs = tuple(sorted(set(vertices)))
        return cls(host, vs, host.count_edges_within(vs), Fraction(v_bound), Fraction(e_bound))

    def problems(self) -> list[str]:
        out = []
        if any(not 0 <= v < self.host.n for v in self.vertices):
            return ["vertex ids out of range"]
        if len(set(self.vertices)) != len(self.vertices):
            out.append("repeated vertices")
        actual = self.host.count_edges_within(self.vertices)
        if actual != self.e:
            out.append(f"recorded e={self.e} but subgraph has {actual} edges")
        if len(self.vertices) > self.v_bound:
            out.append(f"v={len(self.vertices)} > v_bound={self.v_bound}")
        if actual < self.e_bound:
            out.append(f"e={actual} < e_bound={self.e_bound}")
        return out


def codegree(G: Graph, u: int, v: int) -> int:
    return len(G.adj[u] & G.adj[v])


def are_mates(G: Graph, u: int, v: int, p: MateParams) -> bool:
    if u == v:
        raise SameVertex(f"are_mates({u}, {v})")
    return codegree(G, u, v) >= p.threshold


def mates_of(G: Graph, v: int, threshold: Fraction, within: set[int] | None = None) -> list[int]:
    counts: dict[int, int] = {}
    for w in G.nbrs[v]:
        for x in G.nbrs[w]:
            if x != v:
                counts[x] = counts.get(x, 0) + 1
    return sorted(x for x, c in counts.items() if c >= threshold and (within is None or x in within))


def find_unmated_violation(G: Graph, p: MateParams):
    """``None`` iff ``G`` is (K, eps, d)-unmated, else ``(v, mates)``.

    ``mates`` lists the first ``ceil(eps*d)`` mates of ``v``; ``deg(v) <= K*d``.
    """
    thr = p.threshold
    need = math.ceil(thr)
    for v in range(G.n):
        if G.degree(v) > p.K * p.d:
            continue
        ms = mates_of(G, v, thr)
        if len(ms) >= thr:
            return v, ms[:need]
    return None


def small_dense_from_violation(origin: ContractionMap, Gp: Graph | None, k: int, eps, d) -> SmallDenseCert:
    """Pull a dense neighbourhood of an unmated violation back to ``origin.source``.

    ``Gp`` (defaults to ``origin.target``) is a ``k``-bounded minor of the
    source via ``origin``.
    """
    Gp = origin.target if Gp is None else Gp
    eps, d = Fraction(eps), Fraction(d)
    found = find_unmated_violation(Gp, MateParams(eps, d, Fraction(k * k)))
    if found is None:
        raise NoViolation("the minor is unmated")
    v, mates = found
    local = set(Gp.adj[v]) | {v} | set(mates)
    cert = SmallDenseCert.make(origin.source, origin.pull_back(local), 3 * k ** 3 * d, eps * eps * d * d / 2)
    if cert.problems():
        raise InternalInvariantBroken("; ".join(cert.problems()))
    return cert


# -- star forests --------------------------------------------------------

@dataclass
class StarForestState:
    """Star forest from ``B`` to ``A``: each centre in ``B`` owns at most ``l`` leaves."""
    A: tuple[int, ...]
    B: tuple[int, ...]
    l: int
    leaves: dict[int, list[int]] = field(default_factory=dict)
    center: dict[int, int] = field(default_factory=dict)
    augmentations: int = 0

    def size(self) -> int:
        """Number of forest vertices (every centre counts, even leafless)."""
        return len(self.B) + len(self.center)

    def component(self, b: int) -> list[int]:
        return [b] + sorted(self.leaves[b])


def _check_bipartite_params(G, A, B, l, eps0, d0, need_unbalanced=True):
    if l < 2:
        raise BadParams("l >= 2 required")
    if not 0 < eps0 < Fraction(1, 2 * l):
        raise BadParams(f"eps0={eps0} outside (0, 1/(2l))")
    if d0 < 1 / eps0:
        raise BadParams(f"d0={d0} < 1/eps0")
    if set(A) & set(B):
        raise BadParams("A and B overlap")
    if need_unbalanced and len(A) <= l * len(B):
        raise BadParams(f"|A|={len(A)} <= l|B|={l * len(B)}")
    Bs = set(B)
    for a in A:
        if len(G.adj[a] & Bs) < d0:
            raise BadParams(f"vertex {a} has fewer than d0 neighbours in B")


def truncated_bipartite(G: Graph, A: Sequence[int], B: Sequence[int], d0: Fraction) -> Graph:
    """Keep only A-B edges, each A-vertex keeping its ``ceil(d0)`` lowest B-neighbours."""
    Bs = set(B)
    keep = math.ceil(d0)
    edges = []
    for a in A:
        for b in sorted(G.adj[a] & Bs)[:keep]:
            edges.append((a, b))
    return Graph.from_edges(G.n, edges)


class _ForestSearch:
    def __init__(self, G0: Graph, state: StarForestState, mates: dict[int, set[int]]):
        self.G0 = G0
        self.st = state
        self.mates = mates

    def blocked(self, a: int, b: int) -> bool:
        ma = self.mates[a]
        return any(w in ma for w in self.st.leaves[b])

    def explore(self, u: int, augment: bool):
        """Alternating-path search from ``u``; returns reached centres or True on augmentation."""
        st = self.st
        parent_b: dict[int, int] = {}
        parent_a: dict[int, int | None] = {u: None}
        queue = deque([u])
        while queue:
            a = queue.popleft()
            for b in self.G0.nbrs[a]:
                if b == st.center.get(a) or b in parent_b or self.blocked(a, b):
                    continue
                parent_b[b] = a
                if len(st.leaves[b]) < st.l:
                    if augment:
                        self._augment(b, parent_b, parent_a)
                        return True
                    raise InternalInvariantBroken("reachable component with fewer than l leaves")
                for leaf in st.leaves[b]:
                    if leaf not in parent_a:
                        parent_a[leaf] = b
                        queue.append(leaf)
        return parent_b

    def _augment(self, b, parent_b, parent_a):
        st = self.st
        before = st.size()
        while True:
            a = parent_b[b]
            old = parent_a[a]
            st.leaves[b].append(a)
            st.center[a] = b
            if old is None:
                break
            st.leaves[old].remove(a)
            b = old
        st.augmentations += 1
        if st.size() != before + 1:
            raise InternalInvariantBroken("augmentation did not grow the forest")


def _mate_table(G0: Graph, A: Sequence[int], thr: Fraction) -> dict[int, set[int]]:
    As = set(A)
    return {a: set(mates_of(G0, a, thr, As)) for a in A}


def grow_star_forest(G: Graph, A: Sequence[int], B: Sequence[int], l: int, eps0, d0,
                     G0: Graph | None = None) -> StarForestState:
    """Mate-free ``(l+1)``-bounded star forest, maximal under alternating-path augmentation."""
    eps0, d0 = Fraction(eps0), Fraction(d0)
    A, B = tuple(sorted(A)), tuple(sorted(B))
    _check_bipartite_params(G, A, B, l, eps0, d0, need_unbalanced=False)
    if G0 is None:
        G0 = truncated_bipartite(G, A, B, d0)
    st = StarForestState(A, B, l, {b: [] for b in B}, {})
    search = _ForestSearch(G0, st, _mate_table(G0, A, eps0 * d0))
    progress = True
    while progress:
        progress = False
        for u in A:
            if u not in st.center and search.explore(u, augment=True) is True:
                progress = True
                break
    return st


def reachable_forest(G0: Graph, st: StarForestState, u: int, eps0, d0) -> list[int]:
    """Centres of components reachable from ``u`` by alternating paths."""
    search = _ForestSearch(G0, st, _mate_table(G0, st.A, Fraction(eps0) * Fraction(d0)))
    return sorted(search.explore(u, augment=False))


def bipartite_increment(G: Graph, A: Sequence[int], B: Sequence[int], l: int, eps0, d0):
    """Small dense subgraph or an ``(l+1)``-bounded minor of density ``>= (l/2)(1-2 l eps0) d0``.

    Only A-B edges of ``G`` drive the search; certificates are stated on ``G``.
    Returns a :class:`SmallDenseCert` or a :class:`BoundedMinorCert`.
    """
    eps0, d0 = Fraction(eps0), Fraction(d0)
    A, B = tuple(sorted(A)), tuple(sorted(B))
    _check_bipartite_params(G, A, B, l, eps0, d0)
    G0 = truncated_bipartite(G, A, B, d0)

    # every A-vertex now has degree ceil(d0), so the degree cap is ceil(d0)
    cap = Fraction(math.ceil(d0)) / d0
    found = find_unmated_violation(G0, MateParams(eps0, d0, cap))
    if found is not None:
        v, mates = found
        local = set(G0.adj[v]) | {v} | set(mates)
        cert = SmallDenseCert.make(G, local, 3 * d0, eps0 * eps0 * d0 * d0 / 2)
        if cert.problems():
            raise InternalInvariantBroken("; ".join(cert.problems()))
        return cert

    st = grow_star_forest(G, A, B, l, eps0, d0, G0=G0)
    u = next(a for a in A if a not in st.center)
    centres = reachable_forest(G0, st, u, eps0, d0)
    if not centres:
        raise InternalInvariantBroken("no component reachable from an uncovered vertex")
    for b in centres:
        if len(st.leaves[b]) != l:
            raise InternalInvariantBroken(f"component at {b} has {len(st.leaves[b])} != l leaves")
    inside = {x for b in centres for x in st.component(b)}
    Bs = set(B)
    for b in centres:
        for w in st.leaves[b]:
            out = len((G0.adj[w] & Bs) - inside)
            if out > eps0 * d0:
                raise InternalInvariantBroken(f"leaf {w} has {out} neighbours outside the forest")

    cm = contract_partition(G, [st.component(b) for b in centres])
    pat = cm.target
    model = Model.build(G, pat, cm.classes)
    threshold = Fraction(l, 2) * (1 - 2 * l * eps0) * d0
    cert = BoundedMinorCert(model, l + 1, Fraction(pat.m, pat.n), threshold)
    problems = validate_bounded(cert)
    if problems:
        raise InternalInvariantBroken("; ".join(problems))
    return cert
