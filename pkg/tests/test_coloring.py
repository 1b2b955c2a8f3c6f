from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from minorcert.coloring import (Coloring, coloring_problems, dominate_peel, domination_chain,
                                greedy_degeneracy_color, independent_or_minor, log_partition_color, log_rounds,
                                woodall_split)
from minorcert.generators import gnp
from minorcert.graph import (Graph, complete_graph, cycle_graph, degeneracy, empty_graph, path_graph,
                             petersen_graph)
from minorcert.models import Model, hadwiger_number, validate_model


def _is_independent(G: Graph, vs) -> bool:
    s = set(vs)
    return all(not (G.adj[v] & s) for v in s)


# -- domination peel ----------------------------------------------------------

def test_peel_single_vertex():
    assert dominate_peel(empty_graph(1), 0) == ([0], [0])


def test_peel_star_from_center():
    star = Graph.from_edges(5, [(0, i) for i in range(1, 5)])
    D, I = dominate_peel(star, 0)
    assert sorted(D) == [0] and sorted(I) == [0]


def test_peel_path_grows_by_distance_two():
    D, I = dominate_peel(path_graph(5), 0)
    assert sorted(D) == [0, 1, 2, 3, 4] and sorted(I) == [0, 2, 4]
    assert len(D) <= 2 * len(I) - 1


@given(graphs(min_n=1, max_n=12), st.integers(2, 7))
def test_chain_levels_obey_size_bound(G, t):
    chain, model = domination_chain(G, t)
    for level in chain.levels:
        for D, I in level:
            assert len(D) <= 2 * len(I) - 1
            assert _is_independent(G, I) and set(I) <= set(D)
    if model is not None:
        assert validate_model(model) == [] and model.pattern.n == t


# -- independent set or minor ---------------------------------------------------

def test_independent_c5():
    out = independent_or_minor(cycle_graph(5), 4)
    assert not isinstance(out, Model) and len(out) >= 1 and _is_independent(cycle_graph(5), out)


def test_k4_with_t3_gives_model():
    out = independent_or_minor(complete_graph(4), 3)
    assert isinstance(out, Model) and validate_model(out) == [] and out.pattern.n == 3


def test_edgeless_gives_everything():
    out = independent_or_minor(empty_graph(10), 2)
    assert sorted(out) == list(range(10))


# -- Woodall split ----------------------------------------------------------------

def test_woodall_path():
    X, col = woodall_split(path_graph(4), 3)
    assert len(X) >= 2 and col.palette_size <= 2
    assert coloring_problems(path_graph(4), col, X) == []


def test_woodall_k6_gives_k4_model():
    out = woodall_split(complete_graph(6), 4)
    assert isinstance(out, Model) and out.pattern.n == 4 and validate_model(out) == []


def test_woodall_edgeless():
    X, col = woodall_split(empty_graph(7), 2)
    assert sorted(X) == list(range(7)) and col.palette_size == 1


# -- logarithmic colouring ------------------------------------------------------

def test_log_partition_small_graph_is_trivial():
    G = complete_graph(4)
    out = log_partition_color(G, 5)
    assert isinstance(out, Coloring) and out.palette_size <= 5


def test_log_partition_petersen_bound():
    out = log_partition_color(petersen_graph(), 7)
    assert isinstance(out, Coloring) and out.palette_size <= 21
    assert coloring_problems(petersen_graph(), out) == []


def test_log_partition_random_branch_is_legal():
    G = gnp(12, 0.5, 0)
    out = log_partition_color(G, 3)
    if isinstance(out, Model):
        assert validate_model(out) == [] and hadwiger_number(G) >= 3
    else:
        assert coloring_problems(G, out) == [] and out.palette_size <= 12


def test_log_rounds_values():
    assert [log_rounds(n, 4) for n in (0, 4, 5, 8, 9, 100)] == [0, 0, 1, 1, 2, 5]
    assert all(log_rounds(n, t) == max(0, math.ceil(math.log2(n / t)))
               for n in range(1, 200) for t in range(1, 9))


# -- greedy colouring -------------------------------------------------------------

def test_greedy_tree_two_colours():
    tree = Graph.from_edges(8, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (5, 6), (5, 7)])
    assert greedy_degeneracy_color(tree).palette_size <= 2


def test_greedy_k7():
    assert greedy_degeneracy_color(complete_graph(7)).palette_size == 7


def test_greedy_petersen():
    assert greedy_degeneracy_color(petersen_graph()).palette_size <= 4


@given(graphs(max_n=14))
def test_greedy_is_proper_within_degeneracy_plus_one(G):
    col = greedy_degeneracy_color(G)
    assert coloring_problems(G, col) == []
    assert col.palette_size <= degeneracy(G) + 1


# -- properties shared by every colouring routine ------------------------------------

@given(graphs(max_n=12), st.integers(2, 7))
def test_outputs_always_validate(G, t):
    for out in (independent_or_minor(G, t), log_partition_color(G, t)):
        if isinstance(out, Model):
            assert validate_model(out) == [] and out.pattern.n == t
    col = log_partition_color(G, t)
    if isinstance(col, Coloring):
        assert coloring_problems(G, col) == []
        assert col.palette_size <= (log_rounds(G.n, t) + 2) * t


@given(graphs(max_n=11), st.integers(2, 6))
def test_below_hadwiger_number_bounds_hold(G, t):
    if hadwiger_number(G) >= t:
        return
    n = G.n
    I = independent_or_minor(G, t)
    assert not isinstance(I, Model) and len(I) >= -(-n // (2 * (t - 1))) and _is_independent(G, I)
    X, col = woodall_split(G, t)
    assert 2 * len(X) >= n and col.palette_size <= t - 1
    assert coloring_problems(G, col, X) == []


def test_t_below_two_rejected():
    with pytest.raises(ValueError):
        independent_or_minor(path_graph(3), 1)
