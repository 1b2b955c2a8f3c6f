from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from minorcert.errors import BadParams, HeuristicFailed, NoCoverFound, NoLinkageFound
from minorcert.graph import complete_graph, cycle_graph, grid_graph, path_graph
from minorcert.linkage import (LinkageSpec, brute_force_linkable, find_linkage, knitted_cover, linkage_problems,
                               rooted_model_with_linkage)


# -- linkages -----------------------------------------------------------------

def test_c4_crossing_pairs_proved_unlinkable():
    with pytest.raises(NoLinkageFound) as exc:
        find_linkage(cycle_graph(4), LinkageSpec.of([(0, 2), (1, 3)]))
    assert exc.value.exhaustive


def test_path_end_to_end():
    assert find_linkage(path_graph(4), LinkageSpec.of([(0, 3)])) == [[0, 1, 2, 3]]


def test_k6_three_pairs():
    spec = LinkageSpec.of([(0, 1), (2, 3), (4, 5)])
    paths = find_linkage(complete_graph(6), spec)
    assert linkage_problems(complete_graph(6), spec, paths) == []


def test_spec_rejects_shared_terminals():
    with pytest.raises(BadParams):
        find_linkage(complete_graph(5), LinkageSpec.of([(0, 1), (1, 2)]))


def test_forbidden_vertex_blocks_path():
    with pytest.raises(NoLinkageFound):
        find_linkage(path_graph(4), LinkageSpec.of([(0, 3)], forbidden=[2]))


def test_linkage_checker_names_problems():
    spec = LinkageSpec.of([(0, 2), (1, 3)])
    probs = linkage_problems(complete_graph(4), spec, [[0, 1, 2], [1, 3]])
    assert probs and any("1" in p for p in probs)


@st.composite
def linkage_instances(draw):
    G = draw(graphs(min_n=4, max_n=7))
    k = draw(st.integers(1, min(2, G.n // 2)))
    terms = draw(st.permutations(range(G.n)))[:2 * k]
    return G, LinkageSpec.of([(terms[2 * i], terms[2 * i + 1]) for i in range(k)])


@given(linkage_instances())
def test_linkage_agrees_with_assignment_enumeration(inst):
    G, spec = inst
    try:
        paths = find_linkage(G, spec)
    except NoLinkageFound as exc:
        assert exc.exhaustive and not brute_force_linkable(G, spec)
        return
    assert linkage_problems(G, spec, paths) == []
    assert brute_force_linkable(G, spec)


# -- knitted covers -------------------------------------------------------------

def test_k8_cover_of_three_pairs():
    G = complete_graph(8)
    kc = knitted_cover(G, [[0, 1], [2, 3], [4, 5]])
    assert kc.problems(G) == []
    assert kc.gates == {10: False, 22: False}


def test_grid_opposite_corners_proved_infeasible():
    # planarity: corner pairs 0-15 and 3-12 of a 4x4 grid cross
    with pytest.raises(NoCoverFound) as exc:
        knitted_cover(grid_graph(4, 4), [[0, 15], [3, 12]])
    assert exc.value.exhaustive


def test_cover_rejects_overlapping_sets():
    with pytest.raises(BadParams):
        knitted_cover(complete_graph(5), [[0, 1], [1, 2]])


@given(graphs(min_n=3, max_n=9), st.data())
def test_cover_parts_are_disjoint_connected_supersets(G, data):
    order = data.draw(st.permutations(range(G.n)))
    cut = data.draw(st.integers(1, G.n - 1))
    sets = [order[:1], order[1:cut + 1]] if cut + 1 < G.n else [order[:1]]
    sets = [s for s in sets if s]
    try:
        kc = knitted_cover(G, sets)
    except NoCoverFound:
        return
    assert kc.problems(G) == []


# -- rooted models with a linkage -----------------------------------------------------

def test_k20_rooted_k5_plus_two_pairs():
    rl = rooted_model_with_linkage(complete_graph(20), [0, 1, 2, 3, 4], LinkageSpec.of([(5, 6), (7, 8)]))
    assert rl.problems() == []
    assert rl.rooted.roots == (0, 1, 2, 3, 4)


def test_rooted_model_on_a_path_fails_at_clique_stage():
    with pytest.raises(HeuristicFailed) as exc:
        rooted_model_with_linkage(path_graph(5), [0, 2, 4], attempts=4)
    assert exc.value.stage == "clique"


def test_rooted_roots_must_be_distinct_from_pairs():
    with pytest.raises(BadParams):
        rooted_model_with_linkage(complete_graph(6), [0, 1], LinkageSpec.of([(1, 2)]))


@given(st.integers(8, 16), st.integers(2, 4), st.integers(0, 2), st.integers(0, 100))
def test_rooted_outputs_validate(n, s, pairs, seed):
    G = complete_graph(n)
    spec = LinkageSpec.of([(s + 2 * i, s + 2 * i + 1) for i in range(pairs)])
    rl = rooted_model_with_linkage(G, list(range(s)), spec, seed=seed)
    assert rl.problems() == []
