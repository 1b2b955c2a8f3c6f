"""Centroids and peripheral pieces of small trees."""

from __future__ import annotations

from typing import Mapping

from .errors import IsCentroid, NotATree
from .graph import Graph


def _tree_adj(T) -> dict[int, set[int]]:
    if isinstance(T, Graph):
        adj = {v: set(T.nbrs[v]) for v in range(T.n)}
    elif isinstance(T, Mapping):
        adj = {v: set(ws) for v, ws in T.items()}
    else:
        raise TypeError("expected a Graph or an adjacency mapping")
    if not adj:
        raise NotATree("empty tree")
    edges = sum(len(ws) for ws in adj.values())
    if edges != 2 * (len(adj) - 1):
        raise NotATree(f"{edges // 2} edges on {len(adj)} vertices")
    return adj


def _rooted(adj: dict[int, set[int]]):
    """DFS from the lowest vertex: ``(order, parent, subtree size)``."""
    root = min(adj)
    parent = {root: None}
    order = [root]
    stack = [root]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in parent:
                parent[w] = v
                order.append(w)
                stack.append(w)
    if len(order) != len(adj):
        raise NotATree("not connected")
    size = dict.fromkeys(adj, 1)
    for v in reversed(order):
        if parent[v] is not None:
            size[parent[v]] += size[v]
    return order, parent, size


def _sides(adj, parent, size, v):
    """``(neighbour, size of v's side after deleting the edge to it)`` per incident edge."""
    n = len(adj)
    out = []
    for w in sorted(adj[v]):
        out.append((w, n - size[w] if parent.get(w) == v else size[v]))
    return out


def centroids(T) -> list[int]:
    adj = _tree_adj(T)
    _, parent, size = _rooted(adj)
    n = len(adj)
    return sorted(v for v in adj if all(2 * s >= n for _, s in _sides(adj, parent, size, v)))


def peripheral_piece(T, v: int) -> tuple[tuple[int, int], list[int]]:
    """``(central edge, piece)``: the piece is ``v``'s side, of size ``<= (n-1)/2``."""
    adj = _tree_adj(T)
    if v not in adj:
        raise ValueError(f"{v} not in the tree")
    _, parent, size = _rooted(adj)
    n = len(adj)
    for w, s in _sides(adj, parent, size, v):
        if 2 * s <= n - 1:
            piece = {v}
            stack = [v]
            while stack:
                x = stack.pop()
                for y in adj[x]:
                    if y not in piece and not (x == v and y == w):
                        piece.add(y)
                        stack.append(y)
            return (min(v, w), max(v, w)), sorted(piece)
    raise IsCentroid(f"{v} is a centroid")
