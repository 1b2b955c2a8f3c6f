"""JSON certificates: one serializer per emitted object and an independent verifier.

Rationals are written as ``"p/q"`` strings.  Every certificate embeds its host
graph as ``{"n": ..., "edges": [[u, v], ...]}`` so it can be re-checked alone.
The verifier recomputes every threshold it can from the recorded parameters
instead of trusting recorded bounds.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .bipartite import SmallDenseCert
from .builder import ConnectedPiece, PipelineResult
from .coloring import Coloring, coloring_problems
from .errors import MinorCertError, ParseError
from .graph import Graph
from .increment import DriverResult, IncrementParams, theorem_bound_problems
from .linkage import KnittedCover, LinkageSpec, RootedLinkage, linkage_problems
from .models import BoundedMinorCert, Model, RootedModel, validate_bounded, validate_model, validate_rooted


def q(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def graph_json(G: Graph) -> dict:
    return {"n": G.n, "edges": [list(e) for e in G.edges()]}


# -- serializers ---------------------------------------------------------

def model_cert(m: Model, roots=None) -> dict:
    out = {"kind": "model", "host": graph_json(m.host), "pattern_edges": [list(e) for e in m.pattern.edges()],
           "pattern_n": m.pattern.n, "branch_sets": [list(b) for b in m.branch_sets]}
    if roots is not None:
        out["roots"] = list(roots)
    return out


def coloring_cert(G: Graph, c: Coloring, palette_max=None) -> dict:
    out = {"kind": "coloring", "palette": c.palette_size,
           "colors": [c.colors.get(v) for v in range(G.n)], "host": graph_json(G)}
    if palette_max is not None:
        out["palette_max"] = int(palette_max)
    return out


def partial_coloring_cert(G: Graph, X, c: Coloring, palette_max: int, covered_min) -> dict:
    """Colouring of ``G[X]`` with at most ``palette_max`` colours on at least ``covered_min`` vertices."""
    colors = [c.colors.get(v) if v in set(X) else None for v in range(G.n)]
    return {"kind": "partial_coloring", "palette": c.palette_size, "colors": colors, "host": graph_json(G),
            "palette_max": int(palette_max), "covered_min": q(covered_min)}


def independent_set_cert(G: Graph, vertices, size_min) -> dict:
    return {"kind": "independent_set", "host": graph_json(G), "vertices": sorted(vertices), "size_min": q(size_min)}


def small_dense_cert(c: SmallDenseCert) -> dict:
    return {"kind": "small_dense", "host": graph_json(c.host), "vertices": list(c.vertices), "e": c.e,
            "v_bound": q(c.v_bound), "e_bound": q(c.e_bound)}


def bounded_minor_cert(c: BoundedMinorCert) -> dict:
    return {"kind": "bounded_minor", "model": model_cert(c.model), "bound": c.bound,
            "density": q(c.density), "threshold": q(c.threshold)}


def either_cert(out, G: Graph, **kw) -> dict:
    """``{"minor": ...}`` for a model, ``{"ok": ...}`` for anything else."""
    if isinstance(out, Model):
        return {"minor": model_cert(out)}
    return {"ok": to_cert(out, G, **kw)}


def increment_cert(G: Graph, out, k: int, l: int, eps) -> dict:
    inner = small_dense_cert(out) if isinstance(out, SmallDenseCert) else bounded_minor_cert(out)
    outcome = "small_dense" if isinstance(out, SmallDenseCert) else "bounded_minor"
    return {"kind": "increment", "outcome": outcome, "params": {"k": k, "l": l, "eps": q(eps)},
            "host": graph_json(G), "certificate": inner}


def bipartite_cert(G: Graph, out, l: int, eps0, d0) -> dict:
    inner = small_dense_cert(out) if isinstance(out, SmallDenseCert) else bounded_minor_cert(out)
    outcome = "small_dense" if isinstance(out, SmallDenseCert) else "bounded_minor"
    return {"kind": "bipartite_increment", "outcome": outcome,
            "params": {"l": l, "eps0": q(eps0), "d0": q(d0)}, "certificate": inner}


def linkage_cert(G: Graph, spec: LinkageSpec, paths) -> dict:
    return {"kind": "linkage", "host": graph_json(G), "pairs": [list(p) for p in spec.pairs],
            "forbidden": sorted(spec.forbidden), "paths": [list(p) for p in paths]}


def to_cert(obj, G: Graph | None = None, **kw) -> dict:
    """Certificate for any object the library emits."""
    if isinstance(obj, RootedModel):
        return model_cert(obj.model, obj.roots)
    if isinstance(obj, Model):
        return model_cert(obj)
    if isinstance(obj, BoundedMinorCert):
        return bounded_minor_cert(obj)
    if isinstance(obj, SmallDenseCert):
        return small_dense_cert(obj)
    if isinstance(obj, Coloring):
        return coloring_cert(G, obj, kw.get("palette_max"))
    if isinstance(obj, RootedLinkage):
        return {"kind": "rooted_linkage", "model": model_cert(obj.rooted.model, obj.rooted.roots),
                "linkage": linkage_cert(obj.rooted.model.host, obj.spec, obj.paths)}
    if isinstance(obj, KnittedCover):
        return {"kind": "knitted_cover", "host": graph_json(G), "sets": [list(s) for s in obj.sets],
                "parts": [list(p) for p in obj.parts]}
    if isinstance(obj, ConnectedPiece):
        return {"kind": "connected_piece", "host": graph_json(G), "vertices": list(obj.vertices),
                "kappa": obj.kappa, "threshold": q(obj.threshold)}
    if isinstance(obj, DriverResult):
        p = obj.params
        inner = model_cert(obj.model) if obj.outcome == "minor" else small_dense_cert(obj.subgraph)
        return {"kind": "driver", "outcome": obj.outcome, "D": q(obj.D),
                "params": {"delta": q(p.delta), "k": p.k, "l": p.l, "eps": q(p.eps)},
                "rounds": obj.rounds, "round_bound": obj.round_bound, "r_total": obj.r_total,
                "theorem_ok": obj.theorem_ok, "certificate": inner}
    if isinstance(obj, PipelineResult):
        inner = model_cert(obj.model) if obj.kind == "minor" else coloring_cert(G, obj.coloring)
        return {"kind": "pipeline", "t": obj.report["t"], "branch": obj.kind, "certificate": inner,
                "report": obj.report}
    raise TypeError(f"no certificate format for {type(obj).__name__}")


def _encode_default(x):
    if isinstance(x, Fraction):
        return q(x)
    if isinstance(x, (set, frozenset, tuple)):
        return sorted(x) if isinstance(x, (set, frozenset)) else list(x)
    raise TypeError(f"cannot encode {type(x).__name__}")


def dumps(cert: dict) -> str:
    return json.dumps(cert, sort_keys=False, separators=(",", ":"), default=_encode_default)


# -- verifier -----------------------------------------------------------

class _Reader:
    """Typed field access that raises :class:`ParseError` with a JSON path."""

    def __init__(self, data: dict, path: str):
        if not isinstance(data, dict):
            raise ParseError("expected an object", path)
        self.data, self.path = data, path

    def has(self, key: str) -> bool:
        return key in self.data

    def raw(self, key: str):
        if key not in self.data:
            raise ParseError(f"missing field {key!r}", self.path)
        return self.data[key]

    def int(self, key: str) -> int:
        v = self.raw(key)
        if not isinstance(v, int) or isinstance(v, bool):
            raise ParseError(f"{key} must be an integer", f"{self.path}.{key}")
        return v

    def frac(self, key: str) -> Fraction:
        v = self.raw(key)
        try:
            if isinstance(v, bool) or not isinstance(v, (int, str)):
                raise ValueError
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{key} must be a rational 'p/q'", f"{self.path}.{key}") from None

    def ints(self, key: str, allow_none: bool = False) -> list:
        v = self.raw(key)
        ok = isinstance(v, list) and all((x is None and allow_none) or (isinstance(x, int) and not isinstance(x, bool))
                                         for x in v)
        if not ok:
            raise ParseError(f"{key} must be a list of integers", f"{self.path}.{key}")
        return v

    def int_lists(self, key: str) -> list[list[int]]:
        v = self.raw(key)
        if not isinstance(v, list) or not all(isinstance(b, list) and all(isinstance(x, int) for x in b) for b in v):
            raise ParseError(f"{key} must be a list of integer lists", f"{self.path}.{key}")
        return v

    def sub(self, key: str) -> "_Reader":
        return _Reader(self.raw(key), f"{self.path}.{key}")

    def graph(self, key: str = "host") -> Graph:
        r = self.sub(key)
        n = r.int("n")
        edges = r.int_lists("edges")
        try:
            return Graph.from_edges(n, [tuple(e) for e in edges])
        except (MinorCertError, ValueError, TypeError) as exc:
            raise ParseError(f"invalid graph: {exc}", r.path) from None


def _model(r: _Reader) -> Model:
    host = r.graph()
    n = r.int("pattern_n") if r.has("pattern_n") else len(r.int_lists("branch_sets"))
    try:
        pattern = Graph.from_edges(n, [tuple(e) for e in r.int_lists("pattern_edges")])
    except (MinorCertError, ValueError, TypeError) as exc:
        raise ParseError(f"invalid pattern: {exc}", f"{r.path}.pattern_edges") from None
    return Model.build(host, pattern, r.int_lists("branch_sets"))


def _check_model(r: _Reader) -> list[str]:
    m = _model(r)
    if r.has("roots"):
        return validate_rooted(RootedModel(m, tuple(r.ints("roots"))))
    return validate_model(m)


def _check_coloring(r: _Reader, partial: bool) -> list[str]:
    G = r.graph()
    raw = r.ints("colors", allow_none=True)
    if len(raw) != G.n:
        return [f"{len(raw)} colour entries for {G.n} vertices"]
    colors = {v: c for v, c in enumerate(raw) if c is not None}
    out = coloring_problems(G, Coloring(colors, r.int("palette")), vertices=colors if partial else None)
    used = len(set(colors.values()))
    if r.has("palette_max") and used > r.int("palette_max"):
        out.append(f"palette {used} > palette_max {r.int('palette_max')}")
    if partial and len(colors) < r.frac("covered_min"):
        out.append(f"covered {len(colors)} < covered_min {r.frac('covered_min')}")
    return out


def _check_small_dense(r: _Reader) -> list[str]:
    G = r.graph()
    vs = r.ints("vertices")
    if any(not 0 <= v < G.n for v in vs):
        return ["vertex ids out of range"]
    return SmallDenseCert(G, tuple(vs), r.int("e"), r.frac("v_bound"), r.frac("e_bound")).problems()


def _check_bounded(r: _Reader) -> list[str]:
    m = _model(r.sub("model"))
    return validate_bounded(BoundedMinorCert(m, r.int("bound"), r.frac("density"), r.frac("threshold")))


def _pattern_density(r: _Reader) -> Fraction:
    n = r.int("pattern_n") if r.has("pattern_n") else len(r.int_lists("branch_sets"))
    return Fraction(len(r.int_lists("pattern_edges")), n) if n else Fraction(0)


def _check_increment(r: _Reader) -> list[str]:
    p = r.sub("params")
    k, l, eps = p.int("k"), p.int("l"), p.frac("eps")
    G = r.graph()
    d = G.density()
    inner = r.sub("certificate")
    out = verify_data(inner.data, inner.path)
    kind = inner.raw("kind")
    if kind == "small_dense":
        vs, e = len(inner.ints("vertices")), G.count_edges_within(inner.ints("vertices"))
        if inner.graph() != G:
            out.append("subgraph certificate lives on a different host")
        if vs > 3 * k ** 3 * d:
            out.append(f"v(H)={vs} > 3k^3 d={3 * k ** 3 * d}")
        if e < eps * eps * d * d / 2:
            out.append(f"e(H)={e} < eps^2 d^2/2={eps * eps * d * d / 2}")
    elif kind == "bounded_minor":
        mr = inner.sub("model")
        if mr.graph() != G:
            out.append("minor certificate lives on a different host")
        bound, dens = inner.int("bound"), _pattern_density(mr)
        via_l = bound <= l + 1 and dens >= Fraction(l, 2) * (1 - 6 * k * eps) * d
        via_k = bound <= k and dens >= Fraction(k, 8 * l) * (1 - 2 * k * eps) * d
        if not (via_l or via_k):
            out.append(f"bounded minor (bound {bound}, density {dens}) meets neither "
                       f"(l/2)(1-6k eps)d={Fraction(l, 2) * (1 - 6 * k * eps) * d} with bound l+1 nor "
                       f"(k/8l)(1-2k eps)d={Fraction(k, 8 * l) * (1 - 2 * k * eps) * d} with bound k")
    else:
        out.append(f"unexpected increment outcome {kind!r}")
    return out


def _check_bipartite(r: _Reader) -> list[str]:
    p = r.sub("params")
    l, eps0, d0 = p.int("l"), p.frac("eps0"), p.frac("d0")
    inner = r.sub("certificate")
    out = verify_data(inner.data, inner.path)
    if inner.raw("kind") == "small_dense":
        vs = inner.ints("vertices")
        G = inner.graph()
        if len(vs) > 3 * d0:
            out.append(f"v(H)={len(vs)} > 3 d0={3 * d0}")
        if G.count_edges_within(vs) < eps0 * eps0 * d0 * d0 / 2:
            out.append(f"e(H) < eps0^2 d0^2/2={eps0 * eps0 * d0 * d0 / 2}")
    else:
        bound, dens = inner.int("bound"), _pattern_density(inner.sub("model"))
        if bound > l + 1:
            out.append(f"bound {bound} > l+1={l + 1}")
        floor = Fraction(l, 2) * (1 - 2 * l * eps0) * d0
        if dens < floor:
            out.append(f"density {dens} < (l/2)(1-2l eps0)d0={floor}")
    return out


def _check_driver(r: _Reader) -> list[str]:
    inner = r.sub("certificate")
    out = verify_data(inner.data, inner.path)
    rounds = r.raw("rounds")
    bound = r.raw("round_bound")
    if bound is not None and len(rounds) > bound:
        out.append(f"{len(rounds)} rounds exceed the bound {bound}")
    D = r.frac("D")
    outcome = r.raw("outcome")
    if outcome == "minor":
        dens = _pattern_density(inner)
        if dens < D:
            out.append(f"minor density {dens} < D={D}")
    elif outcome == "small_dense" and r.raw("theorem_ok"):
        p = r.sub("params")
        params = IncrementParams(p.frac("delta"), p.int("k"), p.int("l"), p.frac("eps"))
        out += theorem_bound_problems(inner.graph(), inner.ints("vertices"), params.C, D, params.delta)
    elif outcome != "small_dense":
        out.append(f"unknown driver outcome {outcome!r}")
    return out


def _check_pipeline(r: _Reader) -> list[str]:
    inner = r.sub("certificate")
    out = verify_data(inner.data, inner.path)
    t = r.int("t")
    if r.raw("branch") == "minor":
        n = inner.int("pattern_n")
        if n != t or len(inner.int_lists("pattern_edges")) != t * (t - 1) // 2:
            out.append(f"pattern is not K_{t}")
    return out


def _check_linkage(r: _Reader) -> list[str]:
    G = r.graph()
    spec = LinkageSpec.of(r.int_lists("pairs"), r.ints("forbidden"))
    return spec.problems(G) + linkage_problems(G, spec, r.int_lists("paths"))


def _check_cover(r: _Reader) -> list[str]:
    G = r.graph()
    sets, parts = r.int_lists("sets"), r.int_lists("parts")
    if any(not 0 <= v < G.n for p in parts for v in p):
        return ["part vertex out of range"]
    return KnittedCover(tuple(map(tuple, sets)), tuple(map(tuple, parts))).problems(G)


def _check_piece(r: _Reader) -> list[str]:
    G = r.graph()
    vs = r.ints("vertices")
    if any(not 0 <= v < G.n for v in vs):
        return ["vertex ids out of range"]
    H, _ = G.induced(vs)
    return ConnectedPiece(tuple(vs), H, r.int("kappa"), r.frac("threshold")).problems(G)


def _check_independent(r: _Reader) -> list[str]:
    G = r.graph()
    vs = r.ints("vertices")
    if any(not 0 <= v < G.n for v in vs):
        return ["vertex ids out of range"]
    out = [f"edge {u}-{v} inside the set" for u, v in G.edges() if u in vs and v in vs][:5]
    if len(set(vs)) < r.frac("size_min"):
        out.append(f"|I|={len(set(vs))} < size_min={r.frac('size_min')}")
    return out


def _check_rooted_linkage(r: _Reader) -> list[str]:
    mr, lr = r.sub("model"), r.sub("linkage")
    out = _check_model(mr) + _check_linkage(lr)
    on_paths = {v for p in lr.int_lists("paths") for v in p}
    clash = on_paths & {v for b in mr.int_lists("branch_sets") for v in b}
    if clash:
        out.append(f"model and linkage share vertices {sorted(clash)[:5]}")
    return out


_CHECKS = {
    "model": _check_model,
    "coloring": lambda r: _check_coloring(r, partial=False),
    "partial_coloring": lambda r: _check_coloring(r, partial=True),
    "independent_set": _check_independent,
    "small_dense": _check_small_dense,
    "bounded_minor": _check_bounded,
    "increment": _check_increment,
    "bipartite_increment": _check_bipartite,
    "driver": _check_driver,
    "pipeline": _check_pipeline,
    "linkage": _check_linkage,
    "rooted_linkage": _check_rooted_linkage,
    "knitted_cover": _check_cover,
    "connected_piece": _check_piece,
}


def verify_data(data: Any, path: str = "$") -> list[str]:
    """Violations found in a parsed certificate (empty means valid)."""
    if isinstance(data, dict) and len(data) == 1 and set(data) <= {"ok", "minor"}:
        key = next(iter(data))
        return verify_data(data[key], f"{path}.{key}")
    if isinstance(data, list):
        return [msg for i, item in enumerate(data) for msg in verify_data(item, f"{path}[{i}]")]
    r = _Reader(data, path)
    kind = r.raw("kind")
    if kind not in _CHECKS:
        raise ParseError(f"unknown certificate kind {kind!r}", f"{path}.kind")
    return [f"{path}: {msg}" for msg in _CHECKS[kind](r)] if path == "$" else _CHECKS[kind](r)


def verify_text(text: str) -> list[str]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"line {exc.lineno} column {exc.colno}") from None
    return verify_data(data)


def verify(path: str) -> list[str]:
    with open(path) as fh:
        return verify_text(fh.read())
