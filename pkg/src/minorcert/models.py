"""Minor models, their validation, and exhaustive small-instance oracles."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InvalidMap, TooLarge
from .graph import ContractionMap, Graph, complete_graph, is_connected_set

HADWIGER_CAP = 12
MINOR_DENSITY_CAP = 9


@dataclass(frozen=True)
class Model:
    """Branch set ``branch_sets[i]`` of ``host`` realises pattern vertex ``i``."""
    host: Graph
    pattern: Graph
    branch_sets: tuple[tuple[int, ...], ...]

    @classmethod
    def build(cls, host: Graph, pattern: Graph, branch_sets: Iterable[Iterable[int]]) -> "Model":
        return cls(host, pattern, tuple(tuple(sorted(b)) for b in branch_sets))

    @classmethod
    def clique(cls, host: Graph, branch_sets: Sequence[Iterable[int]]) -> "Model":
        return cls.build(host, complete_graph(len(branch_sets)), branch_sets)

    def max_branch_size(self) -> int:
        return max((len(b) for b in self.branch_sets), default=0)

    def vertices(self) -> set[int]:
        return {v for b in self.branch_sets for v in b}


@dataclass(frozen=True)
class RootedModel:
    model: Model
    roots: tuple[int, ...]


@dataclass(frozen=True)
class BoundedMinorCert:
    """A ``bound``-bounded minor whose pattern density meets ``threshold``."""
    model: Model
    bound: int
    density: Fraction
    threshold: Fraction


def validate_model(m: Model) -> list[str]:
    """Empty list iff ``m`` is a model; otherwise one message per violation."""
    problems = []
    host = m.host
    if len(m.branch_sets) != m.pattern.n:
        problems.append(f"{len(m.branch_sets)} branch sets for a {m.pattern.n}-vertex pattern")
        return problems
    seen: dict[int, int] = {}
    for i, b in enumerate(m.branch_sets):
        if not b:
            problems.append(f"branch set {i} is empty")
            continue
        bad = [v for v in b if not 0 <= v < host.n]
        if bad:
            problems.append(f"branch set {i} has invalid vertices {bad}")
            continue
        for v in b:
            if v in seen:
                problems.append(f"vertex {v} in branch sets {seen[v]} and {i}")
            seen[v] = i
        if not is_connected_set(host, b):
            problems.append(f"branch set {i} {list(b)} not connected")
    if problems:
        return problems
    for a, c in m.pattern.edges():
        cs = set(m.branch_sets[c])
        if not any(not cs.isdisjoint(host.adj[u]) for u in m.branch_sets[a]):
            problems.append(f"branch sets {a} and {c} not adjacent")
    return problems


def validate_rooted(rm: RootedModel) -> list[str]:
    problems = validate_model(rm.model)
    roots = set(rm.roots)
    if len(roots) != len(rm.model.branch_sets):
        problems.append("root count differs from branch set count")
    for i, b in enumerate(rm.model.branch_sets):
        if len(roots & set(b)) != 1:
            problems.append(f"branch set {i} holds {len(roots & set(b))} roots")
    return problems


def validate_bounded(cert: BoundedMinorCert) -> list[str]:
    problems = validate_model(cert.model)
    pat = cert.model.pattern
    if pat.n == 0:
        return problems + ["empty pattern"]
    if cert.model.max_branch_size() > cert.bound:
        problems.append(f"branch set of size {cert.model.max_branch_size()} exceeds bound {cert.bound}")
    actual = Fraction(pat.m, pat.n)
    if actual != cert.density:
        problems.append(f"recorded density {cert.density} != actual {actual}")
    if actual < cert.threshold:
        problems.append(f"density {actual} < threshold {cert.threshold}")
    return problems


def model_from_contraction(cm: ContractionMap, sub: Iterable[int] | None = None) -> Model:
    """Model of ``cm.target[sub]`` in ``cm.source``."""
    sub = range(cm.target.n) if sub is None else sorted(set(sub))
    sub = list(sub)
    if any(not 0 <= x < cm.target.n for x in sub):
        raise InvalidMap("sub is not a set of target vertices")
    pattern, keep = cm.target.induced(sub)
    m = Model.build(cm.source, pattern, [cm.classes[x] for x in keep])
    problems = validate_model(m)
    if problems:
        raise InvalidMap("; ".join(problems))
    return m


def pull_back_model(m: Model, cm: ContractionMap) -> Model:
    """Re-express a model living in ``cm.target`` as a model in ``cm.source``."""
    return Model.build(cm.source, m.pattern, [cm.pull_back(b) for b in m.branch_sets])


def lift_model(m: Model, host: Graph, labels: Sequence[int]) -> Model:
    """Model in an induced subgraph (new id ``i`` = ``labels[i]``) moved to ``host``."""
    return Model.build(host, m.pattern, [[labels[v] for v in b] for b in m.branch_sets])


# -- bitmask helpers ---------------------------------------------------

def _masks(G: Graph) -> list[int]:
    out = []
    for v in range(G.n):
        x = 0
        for w in G.nbrs[v]:
            x |= 1 << w
        out.append(x)
    return out


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _find_clique(masks: list[int], t: int, cand: int | None = None, chosen=()) -> tuple[int, ...] | None:
    """Some set of ``t`` pairwise adjacent vertices, or None."""
    if t == 0:
        return tuple(chosen)
    if cand is None:
        cand = (1 << len(masks)) - 1
    while cand:
        if _popcount(cand) < t:
            return None
        v = cand.bit_length() - 1
        cand &= ~(1 << v)
        if _popcount(masks[v] & cand) >= t - 1:
            r = _find_clique(masks, t - 1, masks[v] & cand, chosen + (v,))
            if r is not None:
                return r
    return None


def clique_number(G: Graph) -> int:
    masks = _masks(G)
    t = 1 if G.n else 0
    while _find_clique(masks, t + 1) is not None:
        t += 1
    return t


# -- Hadwiger oracle -----------------------------------------------------

class _MinorSearch:
    """Branch and bound for a ``K_t`` model.

    Only contractions are explored; a clique of size ``t`` in the current
    quotient finishes the search. Each branch either contracts an edge or
    forbids its two ends from ever sharing a branch set, which makes the
    search complete.
    """

    def __init__(self, t: int):
        self.t = t
        self.failed: set[tuple] = set()

    def run(self, masks: list[int], forb: list[int], sets: list[frozenset]) -> list[frozenset] | None:
        t = self.t
        masks, forb, sets = _reduce(masks, forb, sets, t)
        n = len(masks)
        if n < t:
            return None
        e = sum(_popcount(x) for x in masks) // 2
        if t <= 2:
            if t == 1:
                return [sets[0]]
            for v in range(n):
                if masks[v]:
                    w = (masks[v] & -masks[v]).bit_length() - 1
                    return [sets[v], sets[w]]
            return None
        # every vertex has degree >= 2 here, so shrinking to t classes costs >= n - t edges
        if e - (n - t) < t * (t - 1) // 2:
            cl = _find_clique(masks, t)
            return None if cl is None else [sets[v] for v in cl]
        cl = _find_clique(masks, t)
        if cl is not None:
            return [sets[v] for v in cl]
        key = (tuple(masks), tuple(forb))
        if key in self.failed:
            return None
        best = None
        for u in range(n):
            mu = masks[u] & ~forb[u]
            x = mu >> (u + 1)
            while x:
                low = x & -x
                v = u + 1 + low.bit_length() - 1
                x ^= low
                c = _popcount(masks[u] & masks[v])
                if best is None or c > best[0]:
                    best = (c, u, v)
        if best is not None:
            _, u, v = best
            r = self.run(*_contract(masks, forb, sets, u, v))
            if r is not None:
                return r
            f2 = list(forb)
            f2[u] |= 1 << v
            f2[v] |= 1 << u
            r = self.run(masks, f2, sets)
            if r is not None:
                return r
        self.failed.add(key)
        return None


def _drop_bit(x: int, v: int) -> int:
    return (x & ((1 << v) - 1)) | ((x >> (v + 1)) << v)


def _remove(masks, forb, sets, v):
    keep = [i for i in range(len(masks)) if i != v]
    return ([_drop_bit(masks[i], v) for i in keep],
            [_drop_bit(forb[i], v) for i in keep],
            [sets[i] for i in keep])


def _contract(masks, forb, sets, u, v):
    """Merge ``v`` into ``u`` then drop ``v``."""
    masks, forb, sets = list(masks), list(forb), list(sets)
    merged = (masks[u] | masks[v]) & ~(1 << u) & ~(1 << v)
    fm = (forb[u] | forb[v]) & ~(1 << u) & ~(1 << v)
    for w in range(len(masks)):
        if merged >> w & 1:
            masks[w] |= 1 << u
        if fm >> w & 1:
            forb[w] |= 1 << u
    masks[u] = merged
    forb[u] = fm
    sets[u] = sets[u] | sets[v]
    return _remove(masks, forb, sets, v)


def _reduce(masks, forb, sets, t):
    """Shrink by moves that preserve existence of a ``K_t`` model."""
    changed = True
    while changed and len(masks) >= t:
        changed = False
        for v in range(len(masks)):
            d = _popcount(masks[v])
            if t >= 3 and d <= 1:
                masks, forb, sets = _remove(masks, forb, sets, v)
                changed = True
                break
            if d < t - 1:
                # v cannot be a singleton branch set, so it is deleted or merged
                free = masks[v] & ~forb[v]
                if not free:
                    masks, forb, sets = _remove(masks, forb, sets, v)
                    changed = True
                    break
                single = free & (free - 1) == 0
                if single or (t >= 4 and d == 2 and forb[v] == 0):
                    # a lone free neighbour must share v's branch set; a
                    # degree-2 vertex can always be pushed into a neighbour
                    a = (free & -free).bit_length() - 1
                    masks, forb, sets = _contract(masks, forb, sets, a, v)
                    changed = True
                    break
    return masks, forb, sets


def find_clique_model(G: Graph, t: int, cap: int = HADWIGER_CAP) -> Model | None:
    """Exhaustive search for a ``K_t`` model (``G.n <= cap``)."""
    if G.n > cap:
        raise TooLarge(f"{G.n} vertices exceeds oracle cap {cap}")
    if t <= 0:
        return Model.clique(G, [])
    found = _MinorSearch(t).run(_masks(G), [0] * G.n, [frozenset([v]) for v in range(G.n)])
    if found is None:
        return None
    return Model.clique(G, found)


def hadwiger_number(G: Graph, cap: int = HADWIGER_CAP, witness: bool = False):
    """Largest ``t`` with a ``K_t`` minor; optionally also a witness model."""
    if G.n > cap:
        raise TooLarge(f"{G.n} vertices exceeds oracle cap {cap}")
    masks = _masks(G)
    t = clique_number(G)
    best = Model.clique(G, [[v] for v in (_find_clique(masks, t) or ())])
    while True:
        if (t + 1) * t // 2 > G.m or t + 1 > G.n:
            break
        m = find_clique_model(G, t + 1, cap)
        if m is None:
            break
        t, best = t + 1, m
    return (t, best) if witness else t


# -- densest-minor oracle ------------------------------------------------

def max_minor_density(G: Graph, cap: int = MINOR_DENSITY_CAP) -> Fraction:
    """Maximum density over all minors, by enumerating contraction partitions.

    Each vertex is deleted or placed in a block (restricted growth order);
    blocks must be connected. Edge deletion never raises density, so
    quotients of vertex subsets cover every minor.
    """
    if G.n > cap:
        raise TooLarge(f"{G.n} vertices exceeds oracle cap {cap}")
    if G.n == 0:
        return Fraction(0)
    n = G.n
    masks = _masks(G)
    best = Fraction(0)
    label = [-1] * n
    blocks: list[int] = []

    def connected(mask: int) -> bool:
        start = mask & -mask
        seen = start
        frontier = start
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            v = low.bit_length() - 1
            new = masks[v] & mask & ~seen
            seen |= new
            frontier |= new
        return seen == mask

    def finish():
        nonlocal best
        k = len(blocks)
        if k == 0:
            return
        if any(not connected(b) for b in blocks):
            return
        e = 0
        for i, j in combinations(range(k), 2):
            bi, bj = blocks[i], blocks[j]
            x = bi
            while x:
                low = x & -x
                x ^= low
                if masks[low.bit_length() - 1] & bj:
                    e += 1
                    break
        d = Fraction(e, k)
        if d > best:
            best = d

    def rec(v: int):
        if v == n:
            finish()
            return
        rec(v + 1)  # deleted
        for i in range(len(blocks)):
            blocks[i] |= 1 << v
            rec(v + 1)
            blocks[i] &= ~(1 << v)
        blocks.append(1 << v)
        rec(v + 1)
        blocks.pop()

    rec(0)
    return best
