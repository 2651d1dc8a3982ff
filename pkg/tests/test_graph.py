from __future__ import annotations

import pytest
from hypothesis import given

from ghmoy.corpus import bouquet3, circle2, diagram, theta3, theta4, trefoil5_knot, unknot2_vertex
from ghmoy.graph import (
    GraphError,
    InconsistentEdgeWeights,
    SourceOrSinkVertex,
    UnbalancedVertex,
    balance_report,
    diagram_weights,
    recover_graph,
    scale_weights,
    weight_map,
)
from ghmoy.grid import OSTAR, Marking, GridDiagram

from .conftest import grid_diagrams


def test_unknot_vertex_is_a_loop():
    m = recover_graph(unknot2_vertex())
    assert len(m.vertices) == 1 and len(m.edges) == 1
    assert m.incoming[0] == m.outgoing[0] == [0]


def test_closed_knot_has_no_vertices():
    m = recover_graph(trefoil5_knot())
    assert m.vertices == [] and len(m.edges) == 1
    assert m.edges[0].closed


def test_theta_weights_balance():
    g, _ = theta3(1, 2)
    w = diagram_weights(g)
    assert sorted(w.edge_weights) == [1, 2, 3]
    m = recover_graph(g)
    for i in range(len(m.vertices)):
        assert sum(w.edge_weights[k] for k in m.incoming[i]) == w[m.vertices[i].cell]


def test_vertex_weight_is_in_sum():
    w = diagram_weights(circle2(2))
    m = recover_graph(circle2(2))
    assert all(w[v.cell] == 2 for v in m.vertices)


def test_edges_alternate_x_and_o():
    for g in (theta4(), bouquet3()):
        for e in recover_graph(g).edges:
            kinds = [mk.kind for mk in e.markings]
            assert kinds[0] == "X" and kinds[-1] == "X"
            assert all(k == "O" for k in kinds[1::2])


def test_inconsistent_weights():
    g = unknot2_vertex()
    bad = g.with_weights({(0, 1): 3})
    with pytest.raises(InconsistentEdgeWeights):
        diagram_weights(bad)


def test_unbalanced_vertex():
    g, _ = theta3(1, 1)
    m = recover_graph(g)
    k = m.incoming[0][0]
    x = next(mk for mk in m.edges[k].markings if mk.kind == "X")
    cells = {mk.cell: 5 for mk in m.edges[k].markings if mk.kind == "X"}
    with pytest.raises(UnbalancedVertex):
        diagram_weights(g.with_weights(cells))
    rep = balance_report(g.with_weights(cells))
    assert rep["ok"] is False and rep["error"] == "UnbalancedVertex"
    assert x.cell in cells


def test_every_vertex_has_both_edge_directions():
    # each X in a vertex column ends an incoming edge, each X in its row starts an outgoing one
    g = diagram(2, [(0, 0), (1, 1)], [(1, 0, 1), (0, 1, 1)], [(0, 0), (1, 1)])
    m = recover_graph(g)
    assert len(m.vertices) == 2 and len(m.edges) == 2
    assert all(m.incoming[i] and m.outgoing[i] for i in range(2))
    assert issubclass(SourceOrSinkVertex, GraphError)


def test_invalid_grid_rejected():
    g = GridDiagram(2, (Marking(0, 0, OSTAR), Marking(1, 0, "X", 1)))
    with pytest.raises(ValueError):
        recover_graph(g)
    assert balance_report(g)["ok"] is False


def test_scale_weights():
    w = diagram_weights(theta3(1, 2)[0])
    s = scale_weights(w, 3)
    assert s.edge_weights == tuple(3 * v for v in w.edge_weights)
    with pytest.raises(ValueError):
        scale_weights(w, 0)


@given(grid_diagrams())
def test_random_diagrams_are_balanced(g):
    m = recover_graph(g)
    w = weight_map(m, g)
    assert all(v == 1 for v in w.edge_weights)
    cells = {mk.cell for e in m.edges for mk in e.markings}
    assert cells | {v.cell for v in m.vertices} == {mk.cell for mk in g.markings}
