"""Certifying colourings: each routine returns its promised object or a ``K_t`` model."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import Disconnected, InternalInvariantBroken
from .graph import Graph, components, degeneracy_order, is_connected_set
from .models import Model, lift_model


@dataclass(frozen=True)
class Coloring:
    colors: dict[int, int]
    palette_size: int

    @classmethod
    def of(cls, colors: dict[int, int]) -> "Coloring":
        return cls(dict(colors), len(set(colors.values())))


def coloring_problems(G: Graph, c: Coloring, vertices: Iterable[int] | None = None) -> list[str]:
    vs = set(range(G.n)) if vertices is None else set(vertices)
    problems = []
    missing = vs - set(c.colors)
    if missing:
        problems.append(f"uncoloured vertices {sorted(missing)[:10]}")
    for u, v in G.edges():
        if u in c.colors and v in c.colors and c.colors[u] == c.colors[v]:
            problems.append(f"edge {u}-{v} monochromatic ({c.colors[u]})")
    if c.palette_size != len(set(c.colors.values())):
        problems.append("palette size differs from the number of colours used")
    return problems


@dataclass
class DominationChain:
    """Levels of (connected dominating set, independent subset) per component."""
    levels: list[list[tuple[list[int], list[int]]]] = field(default_factory=list)
    residual: list[int] = field(default_factory=list)


def dominate_peel(G: Graph, seed: int, within: Iterable[int] | None = None) -> tuple[list[int], list[int]]:
    """Connected dominating set ``D`` of the component of ``seed`` plus ``I ⊆ D``.

    Grows ``D`` by distance-2 jumps: the far endpoint joins ``I`` (it has no
    neighbour in ``D``) and the midpoint joins ``D``, so ``|D| = 2|I| - 1``.
    """
    allowed = set(range(G.n)) if within is None else set(within)
    if seed not in allowed:
        raise ValueError(f"seed {seed} outside the vertex set")
    if not is_connected_set(G, allowed):
        raise Disconnected("dominate_peel needs a connected vertex set")
    D = {seed}
    I = [seed]
    while True:
        nbhd = {w for v in D for w in G.adj[v] if w in allowed} - D
        far = sorted(u for w in nbhd for u in G.adj[w] if u in allowed and u not in D and u not in nbhd)
        if not far:
            break
        u = far[0]
        w = min(x for x in G.adj[u] if x in nbhd)
        D.add(w)
        D.add(u)
        I.append(u)
        if len(D) > 2 * len(I) - 1:
            raise InternalInvariantBroken("|D| <= 2|I| - 1 violated")
    return sorted(D), sorted(I)


def domination_chain(G: Graph, t: int, within: Iterable[int] | None = None):
    """Peel ``t - 2`` levels; return ``(chain, model_or_None)``.

    If an edge survives all levels, the nested dominating sets above it and
    the edge's two ends form a ``K_t`` model.
    """
    alive = set(range(G.n)) if within is None else set(within)
    chain = DominationChain()
    for _ in range(max(t - 2, 0)):
        if not alive:
            break
        level = []
        for comp in components(G, alive):
            D, I = dominate_peel(G, comp[0], comp)
            level.append((D, I))
        chain.levels.append(level)
        for D, _ in level:
            alive -= set(D)
    chain.residual = sorted(alive)
    for u in chain.residual:
        for v in G.nbrs[u]:
            if v in alive and u < v:
                if len(chain.levels) < t - 2:
                    raise InternalInvariantBroken("edge survived an early exhausted chain")
                sets = []
                for level in chain.levels:
                    for D, _ in level:
                        # the dominating set whose component contains the edge
                        if _dominates(G, D, u):
                            sets.append(D)
                            break
                sets += [[u], [v]]
                return chain, Model.clique(G, sets)
    return chain, None


def _dominates(G: Graph, D: list[int], u: int) -> bool:
    return u in D or not G.adj[u].isdisjoint(D)


def independent_or_minor(G: Graph, t: int):
    """Independent set of size ``>= ceil(n / (2(t-1)))`` or a ``K_t`` model."""
    if t < 2:
        raise ValueError("t >= 2 required")
    chain, model = domination_chain(G, t)
    if model is not None:
        return model
    candidates = [sorted(v for _, I in level for v in I) for level in chain.levels]
    candidates.append(chain.residual)
    best = max(candidates, key=len, default=[])
    need = -(-G.n // (2 * (t - 1)))
    if len(best) < need:
        raise InternalInvariantBroken(f"independent set {len(best)} < {need}")
    return best


def woodall_split(G: Graph, t: int):
    """``(X, colouring of G[X] with <= t-1 colours)`` with ``|X| >= n/2``, or a model."""
    if t < 2:
        raise ValueError("t >= 2 required")
    chain, model = domination_chain(G, t)
    if model is not None:
        return model
    colors: dict[int, int] = {}
    for j, level in enumerate(chain.levels):
        for _, I in level:
            for v in I:
                colors[v] = j
    for v in chain.residual:
        colors[v] = len(chain.levels)
    col = Coloring.of(colors)
    if col.palette_size > t - 1 or 2 * len(colors) < G.n:
        raise InternalInvariantBroken("woodall_split bounds violated")
    return sorted(colors), col


def log_rounds(n: int, t: int) -> int:
    """Smallest ``s >= 0`` with ``t * 2**s >= n`` (that is ``ceil(log2(n/t))``)."""
    s = 0
    while t * (1 << s) < n:
        s += 1
    return s


def log_partition_color(G: Graph, t: int):
    """Colouring with ``<= (ceil(log2(n/t)) + 2) t`` colours, or a ``K_t`` model."""
    if t < 2:
        raise ValueError("t >= 2 required")
    s = log_rounds(G.n, t)
    remaining = list(range(G.n))
    colors: dict[int, int] = {}
    offset = 0
    for _ in range(s):
        if not remaining:
            break
        H, labels = G.induced(remaining)
        out = woodall_split(H, t)
        if isinstance(out, Model):
            return lift_model(out, G, labels)
        X, col = out
        for v in X:
            colors[labels[v]] = offset + col.colors[v]
        offset += t - 1
        taken = {labels[v] for v in X}
        remaining = [v for v in remaining if v not in taken]
    if len(remaining) > t:
        raise InternalInvariantBroken(f"{len(remaining)} vertices left after {s} rounds")
    for i, v in enumerate(remaining):
        colors[v] = offset + i
    return Coloring.of(colors)


def greedy_degeneracy_color(G: Graph) -> Coloring:
    """Colour in reverse peel order; uses at most degeneracy + 1 colours."""
    order, _ = degeneracy_order(G)
    colors: dict[int, int] = {}
    for v in reversed(order):
        used = {colors[w] for w in G.nbrs[v] if w in colors}
        c = 0
        while c in used:
            c += 1
        colors[v] = c
    return Coloring.of(colors)
