"""Deterministic instance families."""

from __future__ import annotations

import itertools
import random

from .errors import BadParams
from .graph import Graph

# Addition and multiplication tables of GF(q), elements 0..q-1.  For GF(4)
# the element 2 is a root a of x^2+x+1 and 3 = a+1.
FIELD_TABLES: dict[int, tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]] = {
    2: (((0, 1), (1, 0)),
        ((0, 0), (0, 1))),
    3: (((0, 1, 2), (1, 2, 0), (2, 0, 1)),
        ((0, 0, 0), (0, 1, 2), (0, 2, 1))),
    4: (((0, 1, 2, 3), (1, 0, 3, 2), (2, 3, 0, 1), (3, 2, 1, 0)),
        ((0, 0, 0, 0), (0, 1, 2, 3), (0, 2, 3, 1), (0, 3, 1, 2))),
    5: (((0, 1, 2, 3, 4), (1, 2, 3, 4, 0), (2, 3, 4, 0, 1), (3, 4, 0, 1, 2), (4, 0, 1, 2, 3)),
        ((0, 0, 0, 0, 0), (0, 1, 2, 3, 4), (0, 2, 4, 1, 3), (0, 3, 1, 4, 2), (0, 4, 3, 2, 1))),
    7: (tuple(tuple((a + b) % 7 for b in range(7)) for a in range(7)),
        tuple(tuple((a * b) % 7 for b in range(7)) for a in range(7))),
}


def _is_prime(q: int) -> bool:
    return q >= 2 and all(q % p for p in range(2, int(q ** 0.5) + 1))


class _Field:
    def __init__(self, q: int):
        if q in FIELD_TABLES:
            self.add_t, self.mul_t = FIELD_TABLES[q]
        elif _is_prime(q):
            self.add_t = tuple(tuple((a + b) % q for b in range(q)) for a in range(q))
            self.mul_t = tuple(tuple((a * b) % q for b in range(q)) for a in range(q))
        else:
            raise BadParams(f"unsupported field order {q}")
        self.q = q
        self.neg = [next(b for b in range(q) if self.add_t[a][b] == 0) for a in range(q)]
        self.inv = [0] + [next(b for b in range(q) if self.mul_t[a][b] == 1) for a in range(1, q)]

    def normalize(self, v):
        lead = next(x for x in v if x)
        s = self.inv[lead]
        return tuple(self.mul_t[s][x] for x in v)

    def combo(self, x, u, y, w):
        m, a = self.mul_t, self.add_t
        return tuple(a[m[x][p]][m[y][r]] for p, r in zip(u, w))


def _projective_points(F: _Field, dim: int) -> list[tuple[int, ...]]:
    pts = []
    for v in itertools.product(range(F.q), repeat=dim + 1):
        if any(v) and F.normalize(v) == v:
            pts.append(v)
    return pts


def _lines_of_plane(F: _Field):
    """Each line ``ax+by+cz=0`` of PG(2,q) with its ``q+1`` points."""
    m, a = F.mul_t, F.add_t
    out = []
    for line in _projective_points(F, 2):
        la, lb, lc = line
        pts = []
        if lc:
            ic = F.inv[lc]
            for x, y in [(1, y) for y in range(F.q)] + [(0, 1)]:
                z = F.neg[m[a[m[la][x]][m[lb][y]]][ic]]
                pts.append(F.normalize((x, y, z)))
        else:
            x0, y0 = F.normalize((F.neg[lb], la))
            pts = [F.normalize((x0, y0, z)) for z in range(F.q)] + [(0, 0, 1)]
        out.append((line, pts))
    return out


def pg_incidence(q: int) -> Graph:
    """Point-line incidence graph of PG(2,q): points ``0..N-1``, lines ``N..2N-1``."""
    if q not in FIELD_TABLES and not _is_prime(q):
        raise BadParams(f"pg_incidence needs q in {sorted(FIELD_TABLES)} or a prime")
    F = _Field(q)
    pts = _projective_points(F, 2)
    index = {p: i for i, p in enumerate(pts)}
    N = len(pts)
    edges = []
    for j, (_, on) in enumerate(_lines_of_plane(F)):
        edges.extend((index[p], N + j) for p in on)
    return Graph.from_edges(2 * N, edges)


def projective_line_incidence(q: int, dim: int = 3) -> tuple[Graph, list[int], list[int]]:
    """Lines versus points of PG(dim, q): ``(G, lines, points)``.

    Two lines share at most one point, and there are far more lines than
    points once ``dim >= 3``.
    """
    if dim < 2:
        raise BadParams("dim >= 2 required")
    F = _Field(q)
    pts = _projective_points(F, dim)
    index = {p: i for i, p in enumerate(pts)}
    lines: set[frozenset[int]] = set()
    for i, u in enumerate(pts):
        for w in pts[i + 1:]:
            span = {index[F.normalize(F.combo(x, u, y, w))]
                    for x in range(F.q) for y in range(F.q) if x or y}
            lines.add(frozenset(span))
    lines_sorted = sorted(sorted(L) for L in lines)
    N = len(pts)
    edges = [(N + j, p) for j, L in enumerate(lines_sorted) for p in L]
    G = Graph.from_edges(N + len(lines_sorted), edges)
    return G, list(range(N, G.n)), list(range(N))


def gnp(n: int, p: float, seed: int = 0) -> Graph:
    if n < 0 or not 0 <= p <= 1:
        raise BadParams("gnp needs n >= 0 and 0 <= p <= 1")
    rng = random.Random(seed)
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])


def gnm(n: int, m: int, seed: int = 0) -> Graph:
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    if n < 0 or not 0 <= m <= len(pairs):
        raise BadParams(f"gnm needs 0 <= m <= {len(pairs)}")
    rng = random.Random(seed)
    return Graph.from_edges(n, rng.sample(pairs, m))


def bipartite_unbalanced(a: int, b: int, deg: int, seed: int = 0) -> Graph:
    """``A = 0..a-1`` each joined to ``deg`` random vertices of ``B = a..a+b-1``."""
    if a < 0 or b < 0 or not 0 <= deg <= b:
        raise BadParams("bipartite_unbalanced needs 0 <= deg <= b")
    rng = random.Random(seed)
    edges = [(u, a + w) for u in range(a) for w in rng.sample(range(b), deg)]
    return Graph.from_edges(a + b, edges)


def glued_blobs(blocks: int, size: int, cut: int = 1, seed: int = 0) -> Graph:
    """Copies of ``K_size`` glued along ``cut``-vertex overlaps in a random tree pattern."""
    if blocks < 1 or size < 1 or not 0 <= cut < size:
        raise BadParams("glued_blobs needs blocks >= 1 and 0 <= cut < size")
    rng = random.Random(seed)
    block_vertices: list[list[int]] = []
    n = 0
    for i in range(blocks):
        shared = rng.sample(block_vertices[rng.randrange(i)], cut) if i else []
        fresh = list(range(n, n + size - len(shared)))
        n += len(fresh)
        block_vertices.append(shared + fresh)
    edges = {(min(u, v), max(u, v)) for bv in block_vertices for u in bv for v in bv if u != v}
    return Graph.from_edges(n, edges)


GENERATORS = {
    "gnp": lambda p, seed: gnp(int(p["n"]), float(p["p"]), seed),
    "gnm": lambda p, seed: gnm(int(p["n"]), int(p["m"]), seed),
    "bipartite_unbalanced": lambda p, seed: bipartite_unbalanced(int(p["a"]), int(p["b"]), int(p["deg"]), seed),
    "pg_incidence": lambda p, seed: pg_incidence(int(p["q"])),
    "glued_blobs": lambda p, seed: glued_blobs(int(p["blocks"]), int(p["size"]), int(p.get("cut", 1)), seed),
}


def gen(kind: str, params: dict, seed: int = 0) -> Graph:
    if kind not in GENERATORS:
        raise BadParams(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}")
    try:
        return GENERATORS[kind](params, seed)
    except KeyError as exc:
        raise BadParams(f"{kind} is missing parameter {exc}") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, BadParams):
            raise
        raise BadParams(f"bad parameters for {kind}: {exc}") from None
