import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coretruss.decomposition import core_decompose, truss_decompose
from coretruss.graph import Graph
from coretruss.interplay import MeasureSelection, ei_table, vi_table
from conftest import clique_graph, er_graph, gatekeeper_edges, star_graph
from oracles import adjacency_sets, core_oracle, triangle_oracle, truss_oracle

SELECTIONS = [MeasureSelection(v, e) for v in ("core", "degree")
              for e in ("truss", "triangle_support")]


def lin_quantile(xs, p):
    xs = sorted(xs)
    h = (len(xs) - 1) * p
    lo = math.floor(h)
    hi = min(lo + 1, len(xs) - 1)
    return xs[lo] + (h - lo) * (xs[hi] - xs[lo])


def oracle_tables(n, edges, sel):
    """VI rows and EI cells recomputed from the brute-force decompositions."""
    adj = adjacency_sets(n, edges)
    if sel.vertex_measure == "core":
        vval = core_oracle(n, edges)
    else:
        vval = [len(a) for a in adj]
    if sel.edge_measure == "truss":
        emeas = truss_oracle(n, edges)
    else:
        emeas, _ = triangle_oracle(n, edges)
    groups = {}
    for u in range(n):
        if not adj[u]:
            continue
        vals = [emeas[(min(u, v), max(u, v))] for v in adj[u]]
        groups.setdefault(vval[u], []).append((min(vals), max(vals)))
    vi = []
    for c in sorted(groups):
        mins = [a for a, _ in groups[c]]
        maxs = [b for _, b in groups[c]]
        vi.append((c, len(mins), sum(mins) / len(mins), lin_quantile(mins, .25),
                   lin_quantile(mins, .75), sum(maxs) / len(maxs), lin_quantile(maxs, .25),
                   lin_quantile(maxs, .75)))
    cells = {}
    for (u, v), t in emeas.items():
        key = (min(vval[u], vval[v]), max(vval[u], vval[v]))
        cells.setdefault(key, []).append(t)
    ei = [(a, b, len(ts), sum(ts) / len(ts)) for (a, b), ts in sorted(cells.items())]
    return vi, ei


def vi_tuple(r):
    return (r.value, r.population, r.min_mean, r.min_q1, r.min_q3, r.max_mean, r.max_q1, r.max_q3)


def tables(g, sel=MeasureSelection()):
    core, truss = core_decompose(g), truss_decompose(g)
    return vi_table(g, core, truss, sel), ei_table(g, core, truss, sel)


def test_six_clique_tables():
    vi, ei = tables(clique_graph(6))
    assert [vi_tuple(r) for r in vi] == [(5, 6, 4, 4, 4, 4, 4, 4)]
    assert [(c.value_lo, c.value_hi, c.population, c.mean) for c in ei] == [(5, 5, 15, 4.0)]


def test_triangle_ei():
    _, ei = tables(clique_graph(3))
    assert [(c.value_lo, c.value_hi, c.population, c.mean) for c in ei] == [(2, 2, 3, 1.0)]


def test_star_vi():
    vi, ei = tables(star_graph(5))
    assert [vi_tuple(r) for r in vi] == [(1, 6, 0, 0, 0, 0, 0, 0)]
    assert all(c.mean == 0 for c in ei)


def test_gatekeeper_row():
    n, edges = gatekeeper_edges()
    g = Graph(n, edges)
    vi, _ = tables(g)
    vi_o, _ = oracle_tables(n, edges, MeasureSelection())
    assert [vi_tuple(r) for r in vi] == pytest.approx(vi_o)
    # every vertex has K = 3; the hub is the only one whose max adjacent truss is 0
    (row,) = vi
    assert row.value == 3 and row.population == 13
    assert row.min_q1 == 0
    assert row.max_mean == pytest.approx(12 * 2 / 13)


def test_edgeless_tables_are_empty():
    g = Graph(3, [])
    assert tables(g) == ([], [])


def test_isolated_vertices_skipped():
    g = Graph(5, [(0, 1), (1, 2), (0, 2)])
    vi, _ = tables(g)
    assert sum(r.population for r in vi) == 3


@pytest.mark.parametrize("sel", SELECTIONS, ids=lambda s: f"{s.vertex_measure}-{s.edge_measure}")
@pytest.mark.parametrize("seed", range(3))
def test_er_against_recomputation(sel, seed):
    g = er_graph(30, 110, seed)
    vi, ei = tables(g, sel)
    vi_o, ei_o = oracle_tables(30, g.edges.tolist(), sel)
    assert [vi_tuple(r) for r in vi] == pytest.approx(vi_o)
    assert [(c.value_lo, c.value_hi, c.population, c.mean) for c in ei] == pytest.approx(ei_o)


def test_selection_validation():
    assert MeasureSelection("core", "triangles").edge_measure == "triangle_support"
    with pytest.raises(ValueError):
        MeasureSelection("pagerank", "truss")
    with pytest.raises(ValueError):
        MeasureSelection("core", "clustering")


graphs = st.integers(2, 16).flatmap(
    lambda n: st.tuples(st.just(n), st.lists(st.tuples(st.integers(0, n - 1),
                                                       st.integers(0, n - 1)), max_size=50)))


@given(graphs, st.sampled_from(SELECTIONS))
@settings(max_examples=80, deadline=None)
def test_population_conservation_and_ordering(case, sel):
    n, pairs = case
    g = Graph(n, pairs)
    vi, ei = tables(g, sel)
    assert sum(r.population for r in vi) == int((g.degrees > 0).sum())
    assert sum(c.population for c in ei) == g.num_edges
    assert [r.value for r in vi] == sorted({r.value for r in vi})
    assert [(c.value_lo, c.value_hi) for c in ei] == sorted({(c.value_lo, c.value_hi) for c in ei})
    for r in vi:
        assert r.population >= 1
        assert r.min_mean <= r.max_mean
        assert r.min_q1 <= r.min_q3 and r.max_q1 <= r.max_q3
    truss = truss_decompose(g)
    ev = truss.truss_numbers if sel.edge_measure == "truss" else truss.triangle_support
    for c in ei:
        assert c.value_lo <= c.value_hi and c.population >= 1
        assert ev.min() <= c.mean <= ev.max()


@given(st.integers(2, 12), st.data())
@settings(max_examples=40, deadline=None)
def test_triangle_free_graphs_measure_zero(n, data):
    # bipartite graphs contain no triangles
    left = n // 2
    pairs = data.draw(st.lists(st.tuples(st.integers(0, left - 1) if left else st.just(0),
                                         st.integers(left, n - 1)), max_size=30))
    g = Graph(n, pairs)
    for sel in SELECTIONS:
        vi, ei = tables(g, sel)
        assert all(r.min_mean == r.max_mean == 0 for r in vi)
        assert all(c.mean == 0 for c in ei)
