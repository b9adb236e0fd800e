from __future__ import annotations

import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpath.exchange import (Couple, DoubleFlow, Matching, case_label, check_decomposition, couple_records, decompose,
                            exchange, exchange_ratio, refine)
from qpath.minors import MinorIndex, enumerate_flows
from qpath.segraph import Edge, SEGraph, Vertex, full_grid, generate_grid_subgraph, require_valid
from qpath.verify import sample_double_flows


def fork_graph():
    """One source whose path forks at ``a``: down-then-right to c1, right to c2."""
    V = [Vertex("r1", 0, 2, "source"), Vertex("a", 1, 2, "inner"), Vertex("d", 1, 1, "inner"),
         Vertex("e", 2, 1, "inner"), Vertex("b", 3, 2, "inner"), Vertex("c1", 2, 0, "sink"),
         Vertex("c2", 3, 0, "sink")]
    E = [Edge("r1", "a"), Edge("a", "d"), Edge("d", "e"), Edge("e", "c1"), Edge("a", "b"), Edge("b", "c2")]
    return require_valid(SEGraph(V, E))


def fork_double_flow(g):
    f = enumerate_flows(g, MinorIndex((1,), (1,)))[0]
    f2 = enumerate_flows(g, MinorIndex((1,), (2,)))[0]
    return DoubleFlow(f, f2)


def test_refine_examples():
    rc = refine((1, 2), (1, 2), (1, 2), (1, 2))
    assert not (rc.Iw or rc.Ib or rc.Jw or rc.Jb) and rc.k == 0
    rc = refine((2, 3), (2, 5), (1, 2, 4), (3, 6, 8))
    assert (rc.Iw, rc.Ib, rc.Jw, rc.Jb) == ({3}, {1, 4}, {2, 5}, {3, 6, 8})
    assert len(rc.Iw) - len(rc.Ib) == len(rc.Jw) - len(rc.Jb) == -1
    rc = refine((1, 2, 3), (1, 3, 4), (2, 4), (2, 3))
    assert (rc.Iw, rc.Ib, rc.Jw, rc.Jb) == ({1, 3}, {4}, {1, 4}, {2}) and rc.k == 3
    with pytest.raises(ValueError):
        refine((1,), (1, 2), (1,), (1,))


def test_couple_normalization_and_labels():
    c = Couple(("c", 4), ("r", 2))
    assert c.a == ("r", 2) and c.kind == "RC" and (c.f, c.g) == (2, 4)
    rc = refine((1, 2, 3), (1, 3, 4), (2, 4), (2, 3))
    assert case_label(Couple(("c", 1), ("c", 2)), rc) == "C"
    assert case_label(Couple(("r", 4), ("r", 3)), rc) == "C2"  # f = 3 is white
    assert case_label(Couple(("r", 1), ("c", 1)), rc) == "C4"


def test_feasibility_detects_crossing_and_color_rule():
    rc = refine((1, 2), (1, 2), (3, 4), (3, 4))
    # circle: r1 r2 r3 r4 c4 c3 c2 c1
    good = Matching(frozenset({Couple(("r", 1), ("c", 1)), Couple(("r", 2), ("c", 2)),
                               Couple(("r", 3), ("c", 3)), Couple(("r", 4), ("c", 4))}))
    assert good.is_feasible(rc)
    crossing = Matching(frozenset({Couple(("r", 1), ("c", 2)), Couple(("r", 2), ("c", 1)),
                                   Couple(("r", 3), ("c", 3)), Couple(("r", 4), ("c", 4))}))
    assert any("cross" in p for p in crossing.problems(rc))
    wrong_color = Matching(frozenset({Couple(("r", 1), ("r", 2)), Couple(("c", 1), ("c", 2)),
                                      Couple(("r", 3), ("c", 3)), Couple(("r", 4), ("c", 4))}))
    assert any("color" in p for p in wrong_color.problems(rc))


def test_equal_flows_have_empty_decomposition():
    g = full_grid(3, 3)
    f = enumerate_flows(g, MinorIndex((1, 2), (2, 3)))[0]
    dec = decompose(DoubleFlow(f, f), g)
    assert not dec.U and not dec.exchange_paths and not dec.cycles and not dec.matching.couples


def test_fork_exchange_ratios():
    g = fork_graph()
    df = fork_double_flow(g)
    (rec,) = couple_records(df, g)
    assert (rec.couple.kind, rec.case, rec.predicted, rec.measured) == ("C", "C", 1, 1)
    swapped = exchange(df, rec.couple, g)
    assert exchange_ratio(swapped, rec.couple, g) == -1
    assert couple_records(swapped, g)[0].case == "C1"
    assert exchange(swapped, rec.couple, g) == df


def test_rc_exchange_on_grid():
    g = full_grid(2, 2)
    df = DoubleFlow(enumerate_flows(g, MinorIndex((1,), (1,)))[0], enumerate_flows(g, MinorIndex((), ()))[0])
    dec = decompose(df, g)
    (p,) = dec.exchange_paths
    assert p.couple.kind == "RC"
    assert exchange_ratio(df, p.couple, g, dec) == 0
    new = exchange(df, p.couple, g, dec)
    assert len(new.phi.I) == len(new.phi.J) and len(new.phi2.I) == len(new.phi2.J)


def _check_double_flow(df, g):
    dec = decompose(df, g)
    assert check_decomposition(df, dec, g) == []
    for rec in couple_records(df, g, dec):
        assert rec.ok, rec.to_dict()
    for p in dec.exchange_paths:
        new = exchange(df, p.couple, g, dec, check=True)
        for f in (new.phi, new.phi2):
            assert len(f.vertex_set) == sum(len(q.vertices) for q in f.paths)
        assert exchange(new, p.couple, g) == df


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.integers(0, 10**6), st.integers(0, 3))
def test_exchange_laws_on_sampled_double_flows(m, n, seed, extra):
    g = generate_grid_subgraph(m, n, seed, 0.6, extra)
    for df in sample_double_flows(g, random.Random(seed), 6, 3):
        _check_double_flow(df, g)


def test_all_double_flows_of_small_grid():
    g = full_grid(3, 3)
    idx = [MinorIndex(I, J) for k in range(0, 3) for I in itertools.combinations((1, 2, 3), k)
           for J in itertools.combinations((1, 2, 3), k)]
    flows = {i: enumerate_flows(g, i) for i in idx}
    rng = random.Random(3)
    for _ in range(150):
        a, b = rng.choice(idx), rng.choice(idx)
        if flows[a] and flows[b]:
            _check_double_flow(DoubleFlow(rng.choice(flows[a]), rng.choice(flows[b])), g)


# --------------------------------------------------------------- running example

def test_running_example(running_example):
    g, df = running_example
    rc = df.cortege
    assert (rc.Iw, rc.Ib, rc.Jw, rc.Jb) == ({1, 3}, {4}, {1, 4}, {2})
    dec = decompose(df, g)
    assert len(dec.exchange_paths) == rc.k == 3 and len(dec.cycles) == 1
    assert check_decomposition(df, dec, g) == []
    for p in dec.exchange_paths:
        new = exchange(df, p.couple, g, dec)
        assert exchange(new, p.couple, g) == df
        assert enumerate_flows(g, MinorIndex(new.phi.I, new.phi.J)).count(new.phi) == 1
        assert enumerate_flows(g, MinorIndex(new.phi2.I, new.phi2.J)).count(new.phi2) == 1
