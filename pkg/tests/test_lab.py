from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import graphs
from minorcert import certificates as cert
from minorcert.bipartite import SmallDenseCert
from minorcert.cli import main
from minorcert.coloring import greedy_degeneracy_color
from minorcert.errors import BadParams, NotHFree, ParseError, PatternTooLarge
from minorcert.generators import gen, gnm, gnp, pg_incidence
from minorcert.graph import complete_bipartite, complete_graph, cycle_graph, empty_graph
from minorcert.models import Model, hadwiger_number
from minorcert.turan import TuranParams, choose_delta, densest_minor_search, subgraph_free, turan_experiment


# -- generators ----------------------------------------------------------------

def test_smallest_plane_incidence_is_heawood():
    H = pg_incidence(2)
    assert (H.n, H.m) == (14, 21)
    assert subgraph_free(H, cycle_graph(4)) and not subgraph_free(H, cycle_graph(6))


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 11])
def test_plane_incidence_counts(q):
    H = pg_incidence(q)
    points = q * q + q + 1
    assert H.n == 2 * points and H.m == points * (q + 1)
    assert all(H.degree(v) == q + 1 for v in range(H.n))


def test_unsupported_field_order():
    with pytest.raises(BadParams):
        pg_incidence(9)


def test_random_generator_edge_cases():
    assert gnp(10, 0, 1).m == 0
    assert gnm(10, 45, 1) == complete_graph(10)
    assert gnp(30, 0.3, 7) == gnp(30, 0.3, 7)
    assert gnp(30, 0.3, 7) != gnp(30, 0.3, 8)


def test_gen_names_missing_parameters():
    with pytest.raises(BadParams):
        gen("gnp", {"n": "5"})
    with pytest.raises(BadParams):
        gen("nonsense", {})


# -- subgraph search -------------------------------------------------------------------

@pytest.mark.parametrize("G,H,free", [(complete_graph(4), cycle_graph(4), False),
                                      (cycle_graph(5), cycle_graph(4), True),
                                      (complete_bipartite(3, 3), complete_bipartite(2, 3), False),
                                      (empty_graph(3), cycle_graph(4), True)])
def test_subgraph_free_examples(G, H, free):
    assert subgraph_free(G, H) == free


def test_pattern_size_limit():
    with pytest.raises(PatternTooLarge):
        subgraph_free(complete_graph(10), empty_graph(9))


@given(graphs(min_n=1, max_n=9))
def test_triangle_free_matches_direct_check(G):
    has_triangle = any(G.adj[u] & G.adj[v] for u, v in G.edges())
    assert subgraph_free(G, complete_graph(3)) == (not has_triangle)


# -- the experiment ------------------------------------------------------------------------

@pytest.mark.parametrize("gamma,eps,delta", [(Fraction(3, 2), Fraction(1, 10), Fraction(13, 512)),
                                             (Fraction(3, 2), Fraction(10), Fraction(8))])
def test_choose_delta_examples(gamma, eps, delta):
    assert choose_delta(gamma, eps) == delta
    assert TuranParams(gamma, eps, delta).problems() == []


def test_choose_delta_needs_gamma_above_one():
    with pytest.raises(BadParams):
        choose_delta(1, Fraction(1, 10))


@given(graphs(min_n=1, max_n=9), st.integers(0, 20))
def test_densest_search_bounds(G, seed):
    m = densest_minor_search(G, seed)
    dens = Fraction(m.pattern.m, m.pattern.n) if m.pattern.n else Fraction(0)
    assert dens >= G.density() and dens * dens <= G.m


def test_experiment_on_empty_family():
    rep = turan_experiment([], cycle_graph(4), Fraction(3, 2), Fraction(1, 10))
    assert rep.rows == [] and rep.to_dict()["delta"] == "13/512"


def test_experiment_rejects_non_free_instances():
    with pytest.raises(NotHFree):
        turan_experiment([("k5", complete_graph(5))], cycle_graph(4), Fraction(3, 2), Fraction(1, 10))


def test_experiment_rows_on_plane_incidences():
    fam = [{"name": f"pg{q}", "kind": "pg_incidence", "params": {"q": q}} for q in (2, 3)]
    rep = turan_experiment(fam, cycle_graph(4), Fraction(3, 2), Fraction(1, 10))
    assert [r["best_density"] for r in rep.rows] == ["13/6", "31/9"]
    assert all(r["floor_ok"] and r["cap_ok"] for r in rep.rows)
    assert json.dumps(rep.to_dict()) == json.dumps(turan_experiment(fam, cycle_graph(4), Fraction(3, 2),
                                                                    Fraction(1, 10)).to_dict())


# -- certificates ----------------------------------------------------------------------------

@given(graphs(min_n=2, max_n=10))
def test_model_certificate_round_trip(G):
    h, m = hadwiger_number(G, witness=True)
    text = cert.dumps(cert.model_cert(m))
    assert cert.verify_text(text) == []
    assert cert.verify_data(json.loads(text)) == []


@given(graphs(min_n=1, max_n=12))
def test_coloring_certificate_round_trip(G):
    c = greedy_degeneracy_color(G)
    assert cert.verify_text(cert.dumps(cert.coloring_cert(G, c))) == []


def test_tampered_branch_set_is_reported():
    data = json.loads(cert.dumps(cert.model_cert(Model.clique(complete_graph(4), [[0], [1], [2], [3]]))))
    # swap in a 4-cycle host where branch set {0, 2} falls apart
    data["host"] = {"n": 4, "edges": [list(e) for e in cycle_graph(4).edges()]}
    data["pattern_edges"], data["pattern_n"], data["branch_sets"] = [[0, 1], [1, 2]], 3, [[0, 2], [1], [3]]
    probs = cert.verify_data(data)
    assert any("not connected" in p for p in probs)


def test_sparse_small_dense_is_reported():
    G = cycle_graph(6)
    data = cert.small_dense_cert(SmallDenseCert.make(G, [0, 1, 2], 3, 2))
    assert cert.verify_data(data) == []
    data["e_bound"] = "3"
    assert any("e_bound" in p for p in cert.verify_data(data))


def test_malformed_certificates_raise_with_location():
    with pytest.raises(ParseError) as exc:
        cert.verify_text('{"kind": 3')
    assert exc.value.location.startswith("line 1")
    with pytest.raises(ParseError) as exc:
        cert.verify_data({"kind": "model"})
    assert exc.value.location == "$"
    with pytest.raises(ParseError):
        cert.verify_data({"kind": "unheard_of"})


# -- command line ------------------------------------------------------------------------------

@pytest.fixture
def graph_file(tmp_path):
    path = tmp_path / "g.txt"
    assert main(["gen", "gnp", "n=12", "p=0.5", "--out", str(path)]) == 0
    return path


def test_cli_stats_and_color(graph_file, capsys):
    assert main(["stats", str(graph_file)]) == 0
    out = json.loads(capsys.readouterr().out)
    assert out["stats"]["v"] == 12
    assert main(["color", str(graph_file), "--t", "5"]) == 0
    assert json.loads(capsys.readouterr().out)["result"]["kind"] == "pipeline"


def test_cli_certificate_verifies(graph_file, tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["--json-out", str(out), "find-minor", str(graph_file), "--t", "3"]) == 0
    capsys.readouterr()
    assert main(["verify", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "ok"


def test_cli_verify_failure_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "small_dense", "host": {"n": 3, "edges": [[0, 1]]}, "vertices": [0, 1, 2],
                               "e": 1, "v_bound": "3", "e_bound": "3"}))
    assert main(["verify", str(bad)]) == 1


def test_cli_bad_input_exit_code(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("p 3 1\ne 0 x\n")
    assert main(["stats", str(bad)]) == 2
    assert main(["stats", str(tmp_path / "missing.txt")]) == 2


def test_cli_no_minor_exit_code(tmp_path):
    path = tmp_path / "c5.txt"
    path.write_text(cycle_graph(5).to_text())
    assert main(["find-minor", str(path), "--t", "4", "--restarts", "1"]) == 3


def test_cli_experiment_is_byte_identical(capsys):
    args = ["experiment", "--family", "pg_incidence:q=2", "--family", "pg_incidence:q=3"]
    assert main(args) == 0
    first = capsys.readouterr().out
    assert main(args) == 0
    assert capsys.readouterr().out == first
