"""Fixture diagrams and the versioned corpus directory.

The builders produce concrete realizations of the block configurations used
by the verifiers.  ``python -m ghmoy.corpus`` regenerates ``corpus_data/``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional

from .grid import O, OSTAR, X, GridDiagram, Marking, PatternMismatch, collapse, expand_block, load_diagram

CORPUS_DIR = Path(__file__).parent / "corpus_data"


def diagram(n: int, os_: Iterable, xs: Iterable, stars: Iterable = ()) -> GridDiagram:
    """Build from O cells, (col, row, weight) X triples and the set of O* cells."""
    stars = {tuple(s) for s in stars}
    ms = [Marking(c, r, OSTAR if (c, r) in stars else O) for c, r in os_]
    ms += [Marking(c, r, X, w) for c, r, w in xs]
    return GridDiagram(n, tuple(ms))


def mirror(g: GridDiagram) -> GridDiagram:
    """Reflect the columns: the diagram of the mirror image."""
    n = g.n
    return GridDiagram(n, tuple(Marking(n - 1 - m.col, m.row, m.kind, m.weight) for m in g.markings))


def split_vertex(
    g: GridDiagram,
    cell: tuple[int, int],
    move_col: Iterable[tuple[int, int]] = (),
    move_row: Iterable[tuple[int, int]] = (),
    diagonal: str = "NWSE",
) -> tuple[GridDiagram, tuple[int, int]]:
    """Blow the O* at ``cell`` up into a 2x2 block holding two O* markings.

    A column and a row are inserted after the O*; X cells in ``move_col``
    (from the O*'s column) go to the new column and those in ``move_row``
    (from its row) to the new row.  The O* pair sits on the NW-SE or SW-NE
    diagonal of the new lattice point, which is returned with the diagram.
    """
    a, b = cell
    v = g.at(a, b)
    if v is None or v.kind != OSTAR:
        raise PatternMismatch(f"no O* at {cell}")
    move_col, move_row = set(move_col), set(move_row)
    out = []
    for m in g.markings:
        if m.cell == cell:
            continue
        col = m.col if m.col <= a else m.col + 1
        row = m.row if m.row <= b else m.row + 1
        if m.cell in move_col:
            col = a + 1
        if m.cell in move_row:
            row = b + 1
        out.append(Marking(col, row, m.kind, m.weight))
    if diagonal == "NWSE":
        out += [Marking(a, b + 1, OSTAR), Marking(a + 1, b, OSTAR)]
    elif diagonal == "SWNE":
        out += [Marking(a, b, OSTAR), Marking(a + 1, b + 1, OSTAR)]
    else:
        raise ValueError("diagonal must be NWSE or SWNE")
    return GridDiagram(g.n + 1, tuple(out)), (a + 1, b + 1)


# -- named diagrams --------------------------------------------------------------


def unknot2() -> GridDiagram:
    return diagram(2, [(0, 0), (1, 1)], [(0, 1, 1), (1, 0, 1)])


def unknot2_vertex() -> GridDiagram:
    return diagram(2, [(0, 0), (1, 1)], [(0, 1, 1), (1, 0, 1)], stars=[(0, 0)])


def trefoil5() -> GridDiagram:
    """Trefoil on a 5x5 grid (O on the diagonal, X two steps up), one O* marking."""
    return diagram(5, [(i, i) for i in range(5)], [(i, (i + 2) % 5, 1) for i in range(5)], stars=[(0, 0)])


def trefoil5_knot() -> GridDiagram:
    return diagram(5, [(i, i) for i in range(5)], [(i, (i + 2) % 5, 1) for i in range(5)])


def circle2(w: int = 2) -> GridDiagram:
    """Two vertices joined by two oppositely oriented edges of weight w."""
    return diagram(2, [(0, 0), (1, 1)], [(0, 1, w), (1, 0, w)], stars=[(0, 0), (1, 1)])


def theta3(w1: int = 1, w2: int = 1) -> tuple[GridDiagram, tuple[int, int]]:
    """Theta graph: v0 -> v1 by e1 (weight w1, through a plain O) and e2 (w2), v1 -> v0 by e3.

    The returned lattice point is the parallel-edge block whose collapse
    merges e1 and e2.
    """
    g = expand_block(circle2(w1 + w2), (1, 0), O, new_x_weight=w1, old_x_weight=w1, sw_weight=w2)
    return g, (2, 1)


def theta4() -> GridDiagram:
    """Theta graph on a 4x4 grid: the 3x3 one stabilized at the X of e3."""
    g, _ = theta3()
    return expand_block(g, (0, 2))


def bouquet3(w: int = 1) -> GridDiagram:
    """One vertex with two loops of weight w (the O* has weight 2w)."""
    return diagram(3, [(0, 0), (1, 1), (2, 2)], [(1, 0, w), (1, 2, w), (0, 1, w), (2, 1, w)], stars=[(1, 1)])


@dataclass
class Triple:
    g: GridDiagram
    first: GridDiagram
    second: GridDiagram
    c: tuple[int, int]
    kind: str


def skein_from_vertex(g: GridDiagram, cell, move_col, move_row, kind: str = "positive") -> Triple:
    first, c = split_vertex(g, cell, move_col, move_row, "NWSE")
    second, c2 = split_vertex(g, cell, move_col, move_row, "SWNE")
    assert c == c2
    return Triple(g, first, second, c, kind)


def skein_positive(w: int = 1) -> Triple:
    """Bouquet of two loops; the split puts the two loops through a crossing."""
    return skein_from_vertex(bouquet3(w), (1, 1), [(1, 2)], [(2, 1)], "positive")


def mirror_triple(t: Triple) -> Triple:
    """Column mirror of a positive triple: the roles of crossing and resolution swap."""
    n = t.first.n
    c = (n - t.c[0], t.c[1])
    # after mirroring, the NW-SE diagonal of one diagram becomes SW-NE of the other
    return Triple(mirror(t.g), mirror(t.second), mirror(t.first), c, "negative")


def skein_negative(w: int = 1) -> Triple:
    return mirror_triple(skein_positive(w))


def clasp3() -> GridDiagram:
    """One vertex with two loops that clasp; every member of its skein triple has nonzero Euler characteristic."""
    return diagram(3, [(0, 1), (1, 0), (2, 2)], [(0, 2, 1), (1, 2, 1), (2, 0, 1), (2, 1, 1)], stars=[(2, 2)])


def skein_positive_clasp() -> Triple:
    return skein_from_vertex(clasp3(), (2, 2), [(2, 0)], [(0, 2)], "positive")


def skein_negative_clasp() -> Triple:
    return mirror_triple(skein_positive_clasp())


@dataclass
class Pair:
    g: GridDiagram
    gp: GridDiagram
    c: tuple[int, int]
    note: str = ""


def stabilization_pair() -> Pair:
    g0 = unknot2_vertex()
    return Pair(expand_block(g0, (0, 1)), g0, (1, 2), "stabilization' of the 2x2 unknot with a vertex")


def trefoil_stabilization_pair() -> Pair:
    g0 = trefoil5()
    return Pair(expand_block(g0, (1, 3)), g0, (2, 4), "stabilization' of the trefoil")


def merge_pair() -> Pair:
    g, c = theta3()
    return Pair(g, collapse(g, c, Marking(0, 0, X, 2)), c, "theta graph e1, e2 merged into weight 2")


def contraction_pair(w: int = 2) -> Pair:
    """Subdivide e3 of the theta graph by a 2-valent vertex, then contract the edge into it.

    The new vertex's only incoming edge passes through the SE X of the block
    (column variant).  ``w`` is the weight of e3 (= w1 + w2).
    """
    w1 = 1
    w2 = w - w1
    gp, _ = theta3(w1, w2)
    g = expand_block(gp, (0, 2), OSTAR)
    return Pair(g, gp, (1, 3), f"theta graph with e3 (weight {w}) subdivided by a vertex")


def contraction_pair_w1() -> Pair:
    """Subdivide e1 (weight 1) next to its X in the vertex column."""
    gp, _ = theta3()
    g = expand_block(gp, (1, 1), OSTAR)
    return Pair(g, gp, (2, 2), "theta graph with e1 (weight 1) subdivided by a vertex")


def contraction_pair_w0() -> Pair:
    """An edge of weight zero: theta with e1 weight 1, e2 weight 0, e2 subdivided."""
    gp, _ = theta3(1, 0)
    # the X of e2 sits in the SW cell of the theta block: (1, 0)
    g = expand_block(gp, (1, 0), OSTAR)
    return Pair(g, gp, (2, 1), "theta graph with weights (1, 0, 1), the weight-0 edge subdivided")


def contraction_pair_row() -> Pair:
    """Row variant: the new vertex has one outgoing edge and two incoming ones."""
    gp, _ = theta3()
    # split v1's incoming column: X(1,1) stays as X_old, X(1,0) moves to the new column
    g = expand_block(gp, (1, 1), OSTAR, new_x_weight=2, move_col=[(1, 0)])
    return Pair(g, gp, (2, 2), "theta graph: e1, e2 enter a new vertex whose single outgoing edge is contracted")


def parallel_pair(w: int = 1) -> tuple[GridDiagram, GridDiagram]:
    """A circle with two vertices and its 2-fold parallel (every edge doubled)."""
    g = circle2(w)
    g2 = expand_block(g, (1, 0), O, w, w, sw_weight=w)
    # the X of the other edge moved to (0, 2) after the insertion
    g2 = expand_block(g2, (0, 2), O, w, w, sw_weight=w)
    return g, g2


# -- corpus directory ---------------------------------------------------------------


@dataclass
class Entry:
    name: str
    description: str
    diagram: GridDiagram
    tags: list[str] = field(default_factory=list)


def corpus_entries() -> list[Entry]:
    sp, sn = skein_positive(), skein_negative()
    cp_, cn_ = skein_positive_clasp(), skein_negative_clasp()
    stab, tstab = stabilization_pair(), trefoil_stabilization_pair()
    mp = merge_pair()
    cp, c1, c0, cr = contraction_pair(), contraction_pair_w1(), contraction_pair_w0(), contraction_pair_row()
    pg, pg2 = parallel_pair()
    return [
        Entry("unknot2", "2x2 unknot, no vertex", unknot2(), ["knot"]),
        Entry("unknot2_vertex", "2x2 unknot with one O* vertex", unknot2_vertex(), ["knot"]),
        Entry("trefoil5", "5x5 trefoil with one O* vertex", trefoil5(), ["knot"]),
        Entry("circle2", "two vertices, two edges of weight 2", circle2(), ["graph"]),
        Entry("theta3", "theta graph, weights (1,1,2)", mp.g, ["graph", "merge"]),
        Entry("theta4", "theta graph on a 4x4 grid", theta4(), ["graph"]),
        Entry("bouquet3", "one vertex with two loops", bouquet3(), ["graph", "skein"]),
        Entry("skein_pos_first", "positive triple: crossing member", sp.first, ["skein"]),
        Entry("skein_pos_second", "positive triple: resolution member", sp.second, ["skein"]),
        Entry("skein_neg_g", "negative triple: singular member", sn.g, ["skein"]),
        Entry("skein_neg_first", "negative triple: resolution member", sn.first, ["skein"]),
        Entry("skein_neg_second", "negative triple: crossing member", sn.second, ["skein"]),
        Entry("clasp3", "one vertex with two clasped loops", cp_.g, ["graph", "skein"]),
        Entry("skein_clasp_pos_first", "clasp positive triple: crossing member", cp_.first, ["skein"]),
        Entry("skein_clasp_pos_second", "clasp positive triple: resolution member", cp_.second, ["skein"]),
        Entry("skein_clasp_neg_g", "clasp negative triple: singular member", cn_.g, ["skein"]),
        Entry("skein_clasp_neg_first", "clasp negative triple: resolution member", cn_.first, ["skein"]),
        Entry("skein_clasp_neg_second", "clasp negative triple: crossing member", cn_.second, ["skein"]),
        Entry("stab_unknot", "stabilized unknot with vertex (3x3)", stab.g, ["destab"]),
        Entry("stab_trefoil", "stabilized trefoil (6x6)", tstab.g, ["destab", "large"]),
        Entry("contract_w2", "theta with a 2-valent vertex on e3", cp.g, ["contract"]),
        Entry("contract_w1", "theta with a 2-valent vertex on e1", c1.g, ["contract"]),
        Entry("contract_w0", "theta, weights (1,0,1), vertex on the weight-0 edge", c0.g, ["contract"]),
        Entry("contract_row", "theta with e1, e2 entering a new vertex", cr.g, ["contract"]),
        Entry("theta_w101", "theta graph with weights (1,0,1)", c0.gp, ["graph"]),
        Entry("parallel2", "2-fold parallel of the two-vertex circle", pg2, ["parallel"]),
        Entry("circle2_w1", "two vertices, two edges of weight 1", pg, ["parallel"]),
    ]


def write_corpus(directory: Path = CORPUS_DIR) -> Path:
    from .homology import table_hash
    from .complex import GridComplex
    from .theorems import HAT_BUDGET, table, window_for

    directory.mkdir(parents=True, exist_ok=True)
    manifest = []
    for e in corpus_entries():
        path = directory / f"{e.name}.ggd"
        path.write_text(e.diagram.dumps() + "\n")
        item = {"name": e.name, "file": path.name, "description": e.description, "n": e.diagram.n, "tags": e.tags}
        if e.diagram.n <= 5:
            cx = GridComplex(e.diagram, "hat")
            item["hat_hash"] = table_hash(table(cx, window_for([cx], HAT_BUDGET)))
        manifest.append(item)
    (directory / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
    return directory


def load_manifest(directory: Path = CORPUS_DIR) -> list[dict]:
    return json.loads((directory / "manifest.json").read_text())


def load_entry(name: str, directory: Path = CORPUS_DIR) -> GridDiagram:
    return load_diagram(directory / f"{name}.ggd")


if __name__ == "__main__":
    print(write_corpus())
