from __future__ import annotations

import itertools
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpath.segraph import (Edge, GraphValidationError, SEGraph, Vertex, cauchon_graph, from_json, full_grid,
                           generate_grid_subgraph, load, relayout, save, to_json, validate)

from conftest import fixture_path


def test_minimal_graph_is_valid(minimal_graph):
    assert validate(minimal_graph).ok
    assert minimal_graph.m == minimal_graph.n == 1
    assert minimal_graph.inner == ("x",)


def test_reversed_vertical_edge_fails_condition_ii():
    g = from_json(json.loads(fixture_path("north_edge.json").read_text()), check=False)
    rep = validate(g)
    assert not rep.ok and "ii" in rep.conditions()
    with pytest.raises(GraphValidationError):
        load(fixture_path("north_edge.json"))


def test_three_by_four_fixture(grid34):
    assert validate(grid34).ok
    assert (grid34.m, grid34.n) == (3, 4)
    assert len(grid34.inner) == 12


def test_save_load_roundtrip(tmp_path, minimal_graph):
    p = tmp_path / "g.json"
    save(minimal_graph, p)
    assert load(p) == minimal_graph


def test_crossing_edges_fail_condition_i():
    V = [Vertex("r1", 0, 1, "source"), Vertex("r2", 0, 2, "source"), Vertex("c1", 2, 0, "sink"),
         Vertex("c2", 1, 0, "sink"), Vertex("x", 2, 1, "inner"), Vertex("y", 1, 2, "inner")]
    E = [Edge("r1", "x"), Edge("x", "c1"), Edge("r2", "y"), Edge("y", "c2")]
    rep = validate(SEGraph(V, E))
    assert "i" in rep.conditions()


def test_commutation_examples(grid34):
    t = grid34.table
    assert t.lam("v1_1", "v1_3") == 1          # same row, left to right
    assert t.lam("v3_2", "v1_2") == -1         # same column, top to bottom
    assert t.lam("v1_1", "v2_2") == 0


def test_generator_examples():
    g = generate_grid_subgraph(1, 1, 3, 1.0)
    assert len(g.inner) == 1 and len(g.edges) == 2
    g = generate_grid_subgraph(3, 4, 7, 1.0)
    assert validate(g).ok and g == full_grid(3, 4)
    assert validate(generate_grid_subgraph(2, 2, 1, 0.5)).ok


def test_generator_is_deterministic():
    assert generate_grid_subgraph(4, 4, 11, 0.6) == generate_grid_subgraph(4, 4, 11, 0.6)


def _shortcut_agrees(g):
    t = g.table
    for u, v in itertools.permutations(g.inner, 2):
        (au, bu), (av, bv) = g.point(u), g.point(v)
        lam = t.lam(u, v)
        # row: left before right gives +1; column: upper before lower gives -1
        expected = 0
        if bu == bv:
            expected = 1 if au < av else -1
        elif au == av:
            expected = -1 if bu > bv else 1
        assert lam == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 10**6), st.floats(0.2, 1.0), st.integers(0, 3))
def test_generated_graphs_valid_and_shortcut(m, n, seed, density, extra):
    g = generate_grid_subgraph(m, n, seed, density, extra)
    assert validate(g).ok
    assert (g.m, g.n) == (m, n)
    _shortcut_agrees(g)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_relayout_preserves_structure(seed):
    g = generate_grid_subgraph(3, 3, seed, 0.6)
    h = relayout(g)
    assert validate(h).ok
    assert set(h.edges) == set(g.edges)
    assert list(h.table.nonzero_pairs()) == list(g.table.nonzero_pairs())


def test_json_roundtrip_of_generated_graph():
    g = generate_grid_subgraph(4, 3, 2, 0.7)
    assert from_json(to_json(g)) == g


# ------------------------------------------------------------ Cauchon graphs

def test_cauchon_all_white_is_full_grid():
    assert cauchon_graph([[0, 0], [0, 0]]) == full_grid(2, 2)


def test_cauchon_all_black_is_rejected():
    with pytest.raises(GraphValidationError):
        cauchon_graph([[1, 1], [1, 1]])


def test_cauchon_one_black_cell():
    g = cauchon_graph([[0, 0, 0], [0, 0, 0], [0, 0, 1]])
    assert validate(g).ok and len(g.inner) == 8


def test_cauchon_inadmissible_diagram():
    with pytest.raises(ValueError):
        cauchon_graph([[1, 0], [0, 0]])


def _admissible(rows):
    m, n = len(rows), len(rows[0])
    return all(not rows[i][j] or all(rows[i][j:]) or all(rows[k][j] for k in range(i, m))
               for i in range(m) for j in range(n))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_cauchon_graphs_valid(m, n, data):
    rows = data.draw(st.lists(st.lists(st.booleans(), min_size=n, max_size=n), min_size=m, max_size=m))
    if not _admissible(rows):
        with pytest.raises(ValueError):
            cauchon_graph(rows)
        return
    try:
        g = cauchon_graph(rows)
    except GraphValidationError as exc:
        # only a source or sink with no route is refused
        assert exc.report.conditions() == {"iv"}
        return
    assert validate(g).ok
    _shortcut_agrees(g)
