"""Small integer max-flow (Edmonds-Karp) used for connectivity and routing."""

from __future__ import annotations

from collections import deque

INF = 1 << 30


class FlowNetwork:
    """Directed network with integer capacities on nodes ``0..n-1``.

    Residual capacities live in per-node dicts; parallel arcs are summed.
    """

    def __init__(self, n: int):
        self.n = n
        self.res: list[dict[int, int]] = [dict() for _ in range(n)]

    def add_edge(self, u: int, v: int, cap: int) -> None:
        r = self.res
        r[u][v] = r[u].get(v, 0) + cap
        r[v].setdefault(u, 0)

    def max_flow(self, s: int, t: int, cutoff: int | None = None) -> int:
        """Augment along shortest paths; stop early once ``cutoff`` is reached."""
        res = self.res
        flow = 0
        while cutoff is None or flow < cutoff:
            parent = {s: s}
            q = deque([s])
            while q and t not in parent:
                u = q.popleft()
                for v, c in res[u].items():
                    if c > 0 and v not in parent:
                        parent[v] = u
                        q.append(v)
            if t not in parent:
                break
            # bottleneck
            b = INF
            v = t
            while v != s:
                u = parent[v]
                b = min(b, res[u][v])
                v = u
            v = t
            while v != s:
                u = parent[v]
                res[u][v] -= b
                res[v][u] += b
                v = u
            flow += b
        return flow

    def reachable(self, s: int) -> set[int]:
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v, c in self.res[u].items():
                if c > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen


def vertex_flow_network(nbrs, s: int, t: int, blocked=()) -> FlowNetwork:
    """Split-vertex network for vertex-disjoint s-t paths.

    Vertex ``v`` becomes ``2v -> 2v+1`` with capacity 1 (``s`` and ``t``
    uncapacitated); vertices in ``blocked`` are omitted.
    """
    n = len(nbrs)
    net = FlowNetwork(2 * n)
    blocked = set(blocked)
    for v in range(n):
        if v in blocked:
            continue
        net.add_edge(2 * v, 2 * v + 1, INF if v in (s, t) else 1)
        for w in nbrs[v]:
            if w not in blocked:
                net.add_edge(2 * v + 1, 2 * w, INF)
    return net


def local_vertex_connectivity(nbrs, s: int, t: int, cutoff: int | None = None) -> int:
    """Max number of internally disjoint s-t paths (s, t non-adjacent).

    Unit-capacity augmentation on the implicit split graph: node ``2v`` is
    the entry of ``v`` and ``2v+1`` its exit.  No network is materialised.
    """
    n = len(nbrs)
    through = [False] * n
    fwd: list[set[int]] = [set() for _ in range(n)]  # flow arcs exit(u) -> entry(w)
    bwd: list[set[int]] = [set() for _ in range(n)]
    flow = 0
    src, sink = 2 * s + 1, 2 * t
    while cutoff is None or flow < cutoff:
        parent = {src: -1}
        q = deque([src])
        found = False
        while q and not found:
            x = q.popleft()
            v = x >> 1
            if x & 1:  # exit node
                steps = [2 * w for w in nbrs[v]]
                if through[v] and v != s:
                    steps.append(2 * v)
            else:  # entry node
                steps = [2 * u + 1 for u in bwd[v]]
                if not through[v]:
                    steps.append(2 * v + 1)
            for y in steps:
                if y not in parent:
                    parent[y] = x
                    if y == sink:
                        found = True
                        break
                    q.append(y)
        if not found:
            break
        y = sink
        while parent[y] != -1:
            x = parent[y]
            a, b = x >> 1, y >> 1
            if a == b:
                through[a] = not (x & 1)  # entry->exit uses the vertex, exit->entry frees it
            elif x & 1:  # exit(a) -> entry(b): push, cancelling opposite flow first
                if a in fwd[b]:
                    fwd[b].discard(a)
                    bwd[a].discard(b)
                else:
                    fwd[a].add(b)
                    bwd[b].add(a)
            else:  # entry(a) -> exit(b): undo flow b -> a
                fwd[b].discard(a)
                bwd[a].discard(b)
            y = x
        flow += 1
    return flow


def minimum_st_vertex_cut(nbrs, s: int, t: int) -> set[int]:
    net = vertex_flow_network(nbrs, s, t)
    net.max_flow(2 * s + 1, 2 * t)
    reach = net.reachable(2 * s + 1)
    return {v for v in range(len(nbrs)) if 2 * v in reach and 2 * v + 1 not in reach}
