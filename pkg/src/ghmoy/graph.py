"""Recover the transverse spatial graph under a grid diagram and its weight map.

Orientation: horizontal segments run from a row's O to each X of that row,
vertical segments from each X to its column's O.  So at an O* vertex the
column carries the incoming edges and the row the outgoing ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .grid import OSTAR, X, GridDiagram, Marking, require_valid


class GraphError(ValueError):
    pass


class SourceOrSinkVertex(GraphError):
    def __init__(self, vertex: int, cell: tuple[int, int], missing: str):
        super().__init__(f"vertex {vertex} at {cell} has no {missing} edges")
        self.vertex, self.cell, self.missing = vertex, cell, missing


class InconsistentEdgeWeights(GraphError):
    def __init__(self, edge: int, weights: list[int]):
        super().__init__(f"edge {edge} carries conflicting X weights {sorted(set(weights))}")
        self.edge, self.weights = edge, weights


class UnbalancedVertex(GraphError):
    def __init__(self, vertex: int, in_sum: int, out_sum: int):
        super().__init__(f"vertex {vertex}: in-sum {in_sum} != out-sum {out_sum}")
        self.vertex, self.in_sum, self.out_sum = vertex, in_sum, out_sum


@dataclass(frozen=True)
class Edge:
    markings: tuple[Marking, ...]  # X, O, X, ..., X in travel order
    source: Optional[int]  # vertex index, None for a closed component
    target: Optional[int]

    @property
    def closed(self) -> bool:
        return self.source is None


@dataclass
class SpatialGraphModel:
    vertices: list[Marking]
    edges: list[Edge]
    incoming: dict[int, list[int]] = field(default_factory=dict)
    outgoing: dict[int, list[int]] = field(default_factory=dict)

    def edge_of(self, cell: tuple[int, int]) -> int:
        for i, e in enumerate(self.edges):
            if any(m.cell == cell for m in e.markings):
                return i
        raise KeyError(cell)

    def to_json(self) -> dict:
        return {
            "vertices": [{"id": i, "cell": list(v.cell)} for i, v in enumerate(self.vertices)],
            "edges": [
                {
                    "id": i,
                    "source": e.source,
                    "target": e.target,
                    "markings": [[m.kind, m.col, m.row] for m in e.markings],
                }
                for i, e in enumerate(self.edges)
            ],
        }


def recover_graph(g: GridDiagram) -> SpatialGraphModel:
    require_valid(g)
    vertices = [m for m in g.os if m.kind == OSTAR]
    vid = {v.cell: i for i, v in enumerate(vertices)}
    for m in g.os:
        if m.kind != OSTAR and (len(g.xs_in_row(m.row)) != 1 or len(g.xs_in_col(m.col)) != 1):
            raise GraphError(f"plain O at {m.cell} must have exactly one X in its row and column")

    def walk(x: Marking) -> tuple[list[Marking], Marking]:
        chain = [x]
        while True:
            o = g.o_in_col(chain[-1].col)
            if o.kind == OSTAR or o is chain[0] or o in chain:
                return chain, o
            chain.append(o)
            nxt = g.xs_in_row(o.row)[0]
            if nxt is chain[0]:
                return chain, nxt
            chain.append(nxt)

    edges: list[Edge] = []
    seen: set = set()
    for v in vertices:
        for x in sorted(g.xs_in_row(v.row)):
            chain, end = walk(x)
            edges.append(Edge(tuple(chain), vid[v.cell], vid[end.cell]))
            seen.update(m.cell for m in chain)
    for x in g.xs:
        if x.cell in seen:
            continue
        chain, _ = walk(x)
        edges.append(Edge(tuple(chain), None, None))
        seen.update(m.cell for m in chain)

    incoming = {i: [] for i in range(len(vertices))}
    outgoing = {i: [] for i in range(len(vertices))}
    for k, e in enumerate(edges):
        if e.source is not None:
            outgoing[e.source].append(k)
            incoming[e.target].append(k)
    for i, v in enumerate(vertices):
        if not incoming[i]:
            raise SourceOrSinkVertex(i, v.cell, "incoming")
        if not outgoing[i]:
            raise SourceOrSinkVertex(i, v.cell, "outgoing")
    return SpatialGraphModel(vertices, edges, incoming, outgoing)


@dataclass(frozen=True)
class WeightAssignment:
    omega: dict  # cell -> weight, for every O, O* and X
    edge_weights: tuple[int, ...] = ()

    def __getitem__(self, cell):
        return self.omega[cell]

    def to_json(self) -> dict:
        return {
            "edges": list(self.edge_weights),
            "markings": [[c[0], c[1], w] for c, w in sorted(self.omega.items())],
        }


def weight_map(m: SpatialGraphModel, g: GridDiagram) -> WeightAssignment:
    omega: dict = {}
    edge_w = []
    for k, e in enumerate(m.edges):
        ws = [mk.weight for mk in e.markings if mk.kind == X]
        if len(set(ws)) != 1:
            raise InconsistentEdgeWeights(k, ws)
        edge_w.append(ws[0])
        for mk in e.markings:
            omega[mk.cell] = ws[0]
    for i, v in enumerate(m.vertices):
        s_in = sum(edge_w[k] for k in m.incoming[i])
        s_out = sum(edge_w[k] for k in m.outgoing[i])
        if s_in != s_out:
            raise UnbalancedVertex(i, s_in, s_out)
        omega[v.cell] = s_in
    return WeightAssignment(omega, tuple(edge_w))


def scale_weights(w: WeightAssignment, n: int) -> WeightAssignment:
    if n == 0:
        raise ValueError("scale factor must be nonzero")
    return WeightAssignment({c: n * v for c, v in w.omega.items()}, tuple(n * v for v in w.edge_weights))


def diagram_weights(g: GridDiagram) -> WeightAssignment:
    """Graph recovery plus weight map in one step."""
    return weight_map(recover_graph(g), g)


def balance_report(g: GridDiagram) -> dict:
    """Best-effort JSON summary used by the CLI; never raises on graph errors."""
    try:
        model = recover_graph(g)
    except (GraphError, ValueError) as e:
        return {"ok": False, "error": type(e).__name__, "message": str(e)}
    out = {"ok": True, "graph": model.to_json()}
    try:
        w = weight_map(model, g)
    except GraphError as e:
        out.update(ok=False, error=type(e).__name__, message=str(e))
        return out
    out["weights"] = w.to_json()
    out["vertices"] = [
        {
            "id": i,
            "in": [w.edge_weights[k] for k in model.incoming[i]],
            "out": [w.edge_weights[k] for k in model.outgoing[i]],
            "balanced": True,
        }
        for i in range(len(model.vertices))
    ]
    return out
