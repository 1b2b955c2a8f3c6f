"""Density increments on general graphs and the iterated bounded-minor driver.

``general_increment`` runs a local search over ``k``-bounded forests on the
low-degree vertices, guided by the potential ``small_k``.  ``dense_or_minor``
combines it with the bipartite star-forest increment, and
``small_or_dense_minor`` iterates that combiner until either the density
target is met or a small dense subgraph is pulled back to the input graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .bipartite import MateParams, SmallDenseCert, bipartite_increment, find_unmated_violation, small_dense_from_violation
from .errors import BadParams, DensityTooLow, HeuristicFailed, InternalInvariantBroken, NoViolation
from .graph import ContractionMap, Graph, contract_partition, core_vertices, identity_map, induced_map
from .models import BoundedMinorCert, Model, validate_bounded, validate_model
from .trees import centroids, peripheral_piece


def smallness_of_sizes(sizes: Iterable[int], k: int) -> int:
    return sum(max(k - 3 * s, 0) for s in sizes)


@dataclass(frozen=True)
class BipartiteWitness:
    """``X``, ``Y`` disjoint, ``|X| > l|Y|``, every ``x`` has ``>= floor`` neighbours in ``Y``."""
    host: Graph
    X: tuple[int, ...]
    Y: tuple[int, ...]
    floor: Fraction
    l: int

    def problems(self) -> list[str]:
        out = []
        Ys = set(self.Y)
        if Ys & set(self.X):
            out.append("X and Y overlap")
        if len(self.X) <= self.l * len(self.Y):
            out.append(f"|X|={len(self.X)} <= l|Y|={self.l * len(self.Y)}")
        for x in self.X:
            got = len(self.host.adj[x] & Ys)
            if got < self.floor:
                out.append(f"vertex {x} has {got} < {self.floor} neighbours in Y")
                break
        return out


class BoundedForest:
    """Forest on ``A`` with incrementally maintained quotient ``host / E(F)``.

    Component ids: an untouched vertex ``v`` is its own id ``v``; merged or
    split components get fresh ids ``>= host.n``.  ``B`` vertices always stay
    singletons.
    """

    def __init__(self, host: Graph, A: Iterable[int], k: int):
        self.host = host
        self.k = k
        self.A = frozenset(A)
        self.fadj: dict[int, set[int]] = {v: set() for v in self.A}
        self.comp = list(range(host.n))
        self.members: dict[int, set[int]] = {v: {v} for v in range(host.n)}
        self.cadj: dict[int, set[int]] = {v: set(host.adj[v]) for v in range(host.n)}
        self.acomps: set[int] = set(self.A)
        self.e_quot = host.m
        self._next = host.n
        self.small = smallness_of_sizes([1] * len(self.A), k)
        # Y: vertices outside A plus centroids of components with more than 2k/3 vertices
        self.Y = set(range(host.n)) - self.A
        self.cent: dict[int, list[int]] = {}
        self.last_new: list[int] = []

    def smallness(self) -> int:
        return self.small

    def in_X(self, v: int) -> bool:
        return v in self.A and 3 * len(self.members[self.comp[v]]) < self.k

    def edge_loss(self) -> int:
        return self.host.m - self.e_quot

    def forest_edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u in self.fadj for v in self.fadj[u] if u < v)

    def tree(self, cid: int) -> dict[int, set[int]]:
        return {v: set(self.fadj[v]) for v in self.members[cid]}

    def codegree(self, a: int, b: int) -> int:
        return len(self.cadj[a] & self.cadj[b])

    def classes(self) -> list[list[int]]:
        return sorted(sorted(m) for m in self.members.values())

    def _replace(self, old: list[int], groups: list[set[int]]) -> None:
        olds = set(old)
        inner = sum(1 for c in old for y in self.cadj[c] if y in olds) // 2
        self.e_quot -= sum(len(self.cadj[c]) for c in old) - inner
        for c in old:
            for y in self.cadj[c]:
                if y not in olds:
                    self.cadj[y].discard(c)
            del self.cadj[c]
            self.small -= max(self.k - 3 * len(self.members[c]), 0)
            del self.members[c]
            self.acomps.discard(c)
            self.Y.difference_update(self.cent.pop(c, ()))
        new = []
        for g in groups:
            cid = self._next
            self._next += 1
            self.members[cid] = set(g)
            self.acomps.add(cid)
            for v in g:
                self.comp[v] = cid
            self.small += max(self.k - 3 * len(g), 0)
            new.append(cid)
        news = set(new)
        added = 0
        for cid in new:
            nb = {self.comp[w] for u in self.members[cid] for w in self.host.adj[u]}
            nb.discard(cid)
            self.cadj[cid] = nb
            for y in nb:
                if y not in news:
                    self.cadj[y].add(cid)
                    added += 2
                else:
                    added += 1
        self.e_quot += added // 2
        for cid in new:
            if 3 * len(self.members[cid]) > 2 * self.k:
                self.cent[cid] = centroids(self.tree(cid))
                self.Y.update(self.cent[cid])
        self.last_new = new

    def merge(self, v: int, u: int) -> None:
        a, b = self.comp[v], self.comp[u]
        self.fadj[v].add(u)
        self.fadj[u].add(v)
        self._replace([a, b], [self.members[a] | self.members[b]])

    def transfer(self, v: int, u: int, central: tuple[int, int], piece: Iterable[int]) -> None:
        a, b = self.comp[v], self.comp[u]
        x, y = central
        self.fadj[x].discard(y)
        self.fadj[y].discard(x)
        self.fadj[v].add(u)
        self.fadj[u].add(v)
        piece = set(piece)
        self._replace([a, b], [self.members[a] | piece, self.members[b] - piece])

    def quotient_map(self) -> ContractionMap:
        return contract_partition(self.host, self.classes())


def smallness(F: BoundedForest) -> int:
    return F.smallness()


def _check_increment_params(d: Fraction, k: int, l: int, eps: Fraction, eps_cap: Fraction) -> None:
    if not (isinstance(k, int) and isinstance(l, int)) or not k >= l >= 2:
        raise BadParams(f"need integers k >= l >= 2, got k={k}, l={l}")
    if not 0 < eps < eps_cap:
        raise BadParams(f"eps={eps} outside (0, {eps_cap})")
    if d < 1 / eps:
        raise BadParams(f"d(G)={d} < 1/eps={1 / eps}")


def general_increment(G: Graph, k: int, l: int, eps, trace: list | None = None):
    """Return a :class:`SmallDenseCert`, a :class:`BipartiteWitness` or a k-bounded :class:`BoundedMinorCert`.

    The search runs on the densest core ``H`` of ``G`` (all degrees exceed
    ``d = d(G)`` there) while every threshold uses ``d``.  ``trace`` (a list)
    receives one dict per accepted move.
    """
    eps = Fraction(eps)
    if G.n == 0:
        raise BadParams("empty graph")
    d = G.density()
    _check_increment_params(d, k, l, eps, Fraction(1, 4 * k))
    core = core_vertices(G)
    H, labels = G.induced(core)
    to_core = induced_map(G, core)
    n = H.n
    low = [v for v in range(n) if H.degree(v) <= k * d]
    B = [v for v in range(n) if H.degree(v) > k * d]
    if k * d * len(B) > 2 * H.m:
        raise InternalInvariantBroken("kd|B| <= 2e fails")
    F = BoundedForest(H, low, k)
    floor = (1 - 2 * k * eps) * d
    mate_thr = eps * d
    star_budget = 2 * eps * d

    def outcome_small(cm: ContractionMap):
        try:
            return small_dense_from_violation(to_core.compose(cm), None, k, eps, d)
        except NoViolation:
            raise InternalInvariantBroken("expected an unmated violation in the contracted graph")

    moved = True
    while moved:
        # full passes in id order until one pass makes no move
        moved = False
        for v in low:
            if not F.in_X(v) or len(H.adj[v] & F.Y) >= floor:
                continue
            T = F.comp[v]
            u = next((u for u in H.nbrs[v]
                      if u not in F.Y and F.comp[u] != T and F.codegree(T, F.comp[u]) < mate_thr), None)
            if u is None:
                # x_T has more than eps*d mates, so the quotient is not unmated
                return outcome_small(F.quotient_map())
            before = F.smallness()
            Tu = F.comp[u]
            kind = "merge"
            if 3 * len(F.members[Tu]) <= 2 * k:
                F.merge(v, u)
            else:
                central, piece = peripheral_piece(F.tree(Tu), u)
                F.transfer(v, u, central, piece)
                kind = "transfer"
            moved = True
            after = F.smallness()
            loss = F.edge_loss()
            bound = star_budget * (k * n - after)
            if trace is not None:
                trace.append({"move": kind, "v": labels[v], "u": labels[u], "small_before": before,
                              "small_after": after, "edge_loss": loss, "star_bound": bound})
            if after >= before:
                raise InternalInvariantBroken(f"small_k did not decrease ({before} -> {after})")
            if any(len(F.members[c]) > k for c in F.last_new):
                raise InternalInvariantBroken("a forest component exceeds k vertices")
            if loss > bound:
                raise InternalInvariantBroken(f"edge loss {loss} exceeds {bound}")

    Y = F.Y
    X = [v for v in low if F.in_X(v)]
    cm = F.quotient_map()
    if find_unmated_violation(cm.target, MateParams(eps, d, Fraction(k * k))) is not None:
        return outcome_small(cm)
    if len(X) > l * len(Y):
        w = BipartiteWitness(G, tuple(labels[x] for x in X), tuple(sorted(labels[y] for y in Y)), floor, l)
        if w.problems():
            raise InternalInvariantBroken("; ".join(w.problems()))
        return w
    if len(Y) * k > 2 * H.m / d + 3 * n:
        raise InternalInvariantBroken("|Y| exceeds |B| + 3v/k")
    full = to_core.compose(cm)
    model = Model.build(G, full.target, full.classes)
    pat = full.target
    cert = BoundedMinorCert(model, k, Fraction(pat.m, pat.n), Fraction(k, 8 * l) * floor)
    problems = validate_bounded(cert)
    if problems:
        raise InternalInvariantBroken("; ".join(problems))
    return cert


def dense_or_minor(G: Graph, k: int, l: int, eps, trace: list | None = None):
    """Small dense subgraph, an (l+1)-bounded minor, or a k-bounded minor, all stated against ``d(G)``."""
    eps = Fraction(eps)
    if G.n == 0:
        raise BadParams("empty graph")
    d = G.density()
    _check_increment_params(d, k, l, eps, Fraction(1, 6 * k))
    out = general_increment(G, k, l, eps, trace)
    if not isinstance(out, BipartiteWitness):
        return out
    d0 = out.floor
    res = bipartite_increment(G, out.X, out.Y, l, 2 * eps, d0)
    if isinstance(res, SmallDenseCert):
        cert = SmallDenseCert.make(G, res.vertices, 3 * k ** 3 * d, eps * eps * d * d / 2)
        problems = cert.problems()
    else:
        cert = BoundedMinorCert(res.model, l + 1, res.density, Fraction(l, 2) * (1 - 6 * k * eps) * d)
        problems = validate_bounded(cert)
    if problems:
        raise InternalInvariantBroken("; ".join(problems))
    return cert


# -- parameters ------------------------------------------------------

def _root_at_least(x: Fraction, base: int, delta: Fraction) -> bool:
    """Exact ``x >= base ** (1/(delta+1))`` for rational ``delta > 0``."""
    p, q = delta.numerator, delta.denominator
    return x > 0 and x ** (p + q) >= Fraction(base) ** q


@dataclass(frozen=True)
class IncrementParams:
    delta: Fraction
    k: int
    l: int
    eps: Fraction

    @property
    def C(self) -> Fraction:
        return 6 * Fraction(self.k) ** 3 / self.eps ** 2

    def el_holds(self) -> bool:
        return _root_at_least((1 - 6 * self.k * self.eps) * Fraction(self.l, 2), self.l + 1, self.delta)

    def ek_holds(self) -> bool:
        return _root_at_least((1 - 2 * self.k * self.eps) * Fraction(self.k, 8 * self.l), self.k, self.delta)

    def problems(self) -> list[str]:
        out = []
        if not self.k >= self.l >= 2:
            out.append("need k >= l >= 2")
        if not 0 < self.eps < Fraction(1, 6 * self.k):
            out.append("eps outside (0, 1/(6k))")
        if not self.el_holds():
            out.append("(1-6k eps) l/2 >= (l+1)^(1/(delta+1)) fails")
        if not self.ek_holds():
            out.append("(1-2k eps) k/(8l) >= k^(1/(delta+1)) fails")
        return out


def _smallest(pred, lo: int = 1) -> int:
    """Least integer ``>= lo`` satisfying a monotone predicate (which must eventually hold)."""
    hi = lo
    while not pred(hi):
        lo, hi = hi + 1, hi * 2
    while lo < hi:
        mid = (lo + hi) // 2
        if pred(mid):
            hi = mid
        else:
            lo = mid + 1
    return lo


def choose_params(delta) -> IncrementParams:
    """Least ``l``, then least ``k``, then the largest ``eps = 1/(12 k m)`` meeting both growth inequalities."""
    delta = Fraction(delta)
    if delta <= 0:
        raise BadParams("delta must be positive")
    p, q = delta.numerator, delta.denominator
    l = 2
    # l/2 must strictly exceed (l+1)^(1/(delta+1)) before any eps can work
    while Fraction(l, 2) ** (p + q) <= Fraction(l + 1) ** q:
        l += 1
    # likewise k/(8l) > k^(1/(delta+1)), i.e. k^p > (8l)^(p+q)
    k = _smallest(lambda k: k >= l and k ** p > (8 * l) ** (p + q), l)
    m = _smallest(lambda m: IncrementParams(delta, k, l, Fraction(1, 12 * k * m)).el_holds()
                  and IncrementParams(delta, k, l, Fraction(1, 12 * k * m)).ek_holds())
    params = IncrementParams(delta, k, l, Fraction(1, 12 * k * m))
    if params.problems():
        raise InternalInvariantBroken("; ".join(params.problems()))
    return params


# -- the driver ------------------------------------------------------

def theorem_bound_problems(host: Graph, vertices: Iterable[int], C: Fraction, D: Fraction, delta: Fraction,
                           d: Fraction | None = None) -> list[str]:
    """Exact check of ``v(H) <= C s^delta D^2/d`` and ``d(H) >= s^-delta d / C`` with ``s = D/d``."""
    vs = sorted(set(vertices))
    if not vs:
        return ["empty subgraph"]
    d = host.density() if d is None else Fraction(d)
    s = D / d
    p, q = delta.numerator, delta.denominator
    v = len(vs)
    dens = Fraction(host.count_edges_within(vs), v)
    out = []
    # v <= C s^(p/q) D^2/d  <=>  (v d / (C D^2))^q <= s^p
    if (v * d / (C * D * D)) ** q > s ** p:
        out.append(f"v(H)={v} > C s^delta D^2/d(G)")
    # dens >= s^(-p/q) d / C  <=>  (dens C / d)^q * s^p >= 1
    if (dens * C / d) ** q * s ** p < 1:
        out.append(f"d(H)={dens} < s^-delta d(G)/C")
    return out


@dataclass
class DriverResult:
    """Outcome of :func:`small_or_dense_minor`; everything is stated on ``host``."""
    host: Graph
    outcome: str  # "minor" or "small_dense"
    params: IncrementParams
    D: Fraction
    rounds: list[dict] = field(default_factory=list)
    r_total: int = 1
    round_bound: int | None = None
    model: Model | None = None
    subgraph: SmallDenseCert | None = None
    theorem_ok: bool | None = None

    def problems(self) -> list[str]:
        out = []
        if self.outcome == "minor":
            if self.model is None:
                return ["minor outcome without a model"]
            out += validate_model(self.model)
            pat = self.model.pattern
            if pat.n == 0 or Fraction(pat.m, pat.n) < self.D:
                out.append(f"pattern density below D={self.D}")
        elif self.outcome == "small_dense":
            if self.subgraph is None:
                return ["small_dense outcome without a subgraph"]
            out += self.subgraph.problems()
            if self.theorem_ok:
                out += theorem_bound_problems(self.host, self.subgraph.vertices, self.params.C, self.D,
                                              self.params.delta)
        else:
            out.append(f"unknown outcome {self.outcome!r}")
        if self.round_bound is not None and len(self.rounds) > self.round_bound:
            out.append(f"{len(self.rounds)} rounds exceed the bound {self.round_bound}")
        return out


# every admissible parameter set has k >= 2 and eps < 1/(6k), so C = 6k^3/eps^2 > 216 k^5
C_LOWER_BOUND = 216 * 2 ** 5


def geometric_round_bound(d: Fraction, D: Fraction, params: IncrementParams) -> int:
    """Rounds needed when each round multiplies density by at least ``min(l+1, k)^(1/(delta+1))``."""
    if d >= D:
        return 0
    r = min(params.l + 1, params.k)
    growth = math.log(r) / (float(params.delta) + 1)
    # one round of slack covers floating point error; the loop only needs an upper bound
    return math.ceil(math.log(float(D / d)) / growth) + 1


def small_or_dense_minor(G: Graph, D, delta, params: IncrementParams | None = None,
                         strict: bool = True, max_rounds: int = 64) -> DriverResult:
    """Dense minor of density ``>= D`` or a small dense subgraph of ``G``.

    Strict mode requires ``d(G) >= C`` with ``C = 6k^3/eps^2`` and asserts the
    final size/density inequalities.  With ``strict=False`` only ``d >= 1/eps``
    is needed each round; gains and final inequalities are then recorded, not
    assumed.
    """
    D, delta = Fraction(D), Fraction(delta)
    if G.n == 0:
        raise BadParams("empty graph")
    if strict and params is None and G.density() < min(D, C_LOWER_BOUND):
        # skip the parameter search, which is very slow for small delta
        raise DensityTooLow(f"d(G)={G.density()} < {C_LOWER_BOUND} < C")
    params = choose_params(delta) if params is None else params
    if params.delta != delta:
        raise BadParams("params were chosen for a different delta")
    d = G.density()
    if strict:
        if params.problems():
            raise BadParams("; ".join(params.problems()))
        # a graph already at density D is its own answer, whatever C is
        if d < params.C and d < D:
            raise DensityTooLow(f"d(G)={d} < C={params.C}")
    res = DriverResult(G, "minor", params, D)
    res.round_bound = geometric_round_bound(d, D, params) if strict else max_rounds
    cm = identity_map(G)
    p, q = delta.numerator, delta.denominator
    while True:
        cur = cm.target
        dc = cur.density() if cur.n else Fraction(0)
        if dc >= D:
            res.model = Model.build(G, cur, cm.classes)
            break
        if len(res.rounds) >= res.round_bound:
            raise HeuristicFailed("driver", f"no result within {res.round_bound} rounds")
        out = dense_or_minor(cur, params.k, params.l, params.eps)
        if isinstance(out, SmallDenseCert):
            verts = cm.pull_back(out.vertices)
            R = res.r_total
            res.subgraph = SmallDenseCert.make(G, verts, R * 3 * params.k ** 3 * dc,
                                               params.eps ** 2 * dc * dc / 2)
            res.rounds.append({"round": len(res.rounds), "r": 1, "density_before": dc,
                               "density_after": dc, "outcome": "small_dense", "gain_ok": True})
            res.outcome = "small_dense"
            break
        r = out.bound
        step = ContractionMap(cur, out.model.pattern, out.model.branch_sets)
        cm = cm.compose(step)
        after = out.density
        gain_ok = (after / dc) ** (p + q) >= Fraction(r) ** q
        res.rounds.append({"round": len(res.rounds), "r": r, "density_before": dc,
                           "density_after": after, "outcome": "bounded_minor", "gain_ok": gain_ok})
        res.r_total *= r
        if strict and not gain_ok:
            raise InternalInvariantBroken(f"density gain below r^(1/(delta+1)) with r={r}")
        if after <= dc:
            raise HeuristicFailed("driver", "a round did not increase the density")
        if not strict and after < 1 / params.eps:
            raise HeuristicFailed("driver", f"minor density {after} fell below 1/eps")
    if res.outcome == "small_dense":
        res.theorem_ok = not theorem_bound_problems(G, res.subgraph.vertices, params.C, D, delta)
        if strict and not res.theorem_ok:
            raise InternalInvariantBroken("small dense certificate misses the size/density bounds")
    problems = res.problems()
    if problems:
        raise InternalInvariantBroken("; ".join(problems))
    return res
