"""Executable checks of the structural results for MOY-graph grid homology.

Every verifier returns a :class:`VerificationReport`: a list of named checks,
each with a pass flag and, on failure, a witness (a generator key or a
bidegree).  Maps between complexes are built from state bijections at a
lattice point ``c = (col, row)`` whose surrounding 2x2 block of cells is
collapsed to a single cell in the smaller diagram.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

from .complex import (
    HAT,
    MINUS,
    ChainMap,
    Cone,
    GridComplex,
    Restricted,
    block_form,
    check_chain_map,
    component,
    in_part,
    map_degrees,
    mod2,
    state_keys,
)
from .graph import diagram_weights, recover_graph, scale_weights
from .grid import O, OSTAR, X, GridDiagram, Marking, PatternMismatch, block_cells, collapse
from .homology import (
    PoincareTable,
    W_poly,
    compare_up_to_shift,
    euler,
    euler_from_states,
    homology_dims,
    induced_rank,
    poly_eq_up_to_unit,
    tensor_W,
    unit_between,
)

HAT_BUDGET = 2
MINUS_BUDGET = 3


class PositionMismatch(ValueError):
    pass


class LoopEdge(ValueError):
    pass


def _jsonable(v):
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


@dataclass
class Check:
    name: str
    ok: bool
    witness: object = None
    detail: object = None

    def to_json(self) -> dict:
        return {"name": self.name, "ok": self.ok, "witness": _jsonable(self.witness), "detail": _jsonable(self.detail)}


@dataclass
class VerificationReport:
    name: str
    checks: list[Check] = field(default_factory=list)

    @property
    def summary(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, witness=None, detail=None) -> Check:
        c = Check(name, bool(ok), None if ok else witness, detail)
        self.checks.append(c)
        return c

    def get(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def to_json(self) -> dict:
        return {"name": self.name, "summary": self.summary, "checks": [c.to_json() for c in self.checks]}

    def text(self) -> str:
        lines = [f"{self.name}: {'PASS' if self.summary else 'FAIL'}"]
        for c in self.checks:
            extra = f"  witness={_jsonable(c.witness)}" if not c.ok else ""
            lines.append(f"  [{'ok' if c.ok else 'FAIL'}] {c.name}{extra}")
        return "\n".join(lines)


# -- state and variable transfer through a collapsed block ----------------------


def delete_point(perm: tuple[int, ...], c: tuple[int, int]) -> tuple[int, ...]:
    col, row = c
    if perm[row] != col:
        raise ValueError(f"state {perm} does not contain {c}")
    return tuple(x if x < col else x - 1 for r, x in enumerate(perm) if r != row)


def insert_point(perm: tuple[int, ...], c: tuple[int, int]) -> tuple[int, ...]:
    col, row = c
    out = []
    for r in range(len(perm) + 1):
        if r == row:
            out.append(col)
        else:
            v = perm[r if r < row else r - 1]
            out.append(v if v < col else v + 1)
    return tuple(out)


def collapse_cell(cell: tuple[int, int], c: tuple[int, int]) -> tuple[int, int]:
    a, b = cell
    return (a if a < c[0] else a - 1, b if b < c[1] else b - 1)


def in_block(cell, c) -> bool:
    return cell[0] in (c[0] - 1, c[0]) and cell[1] in (c[1] - 1, c[1])


def var_transfer(big: GridComplex, small: GridComplex, c) -> dict[int, Optional[int]]:
    """Free position in ``big`` -> free position in ``small`` (None for block O's)."""
    out: dict[int, Optional[int]] = {}
    for kb, i in enumerate(big.free):
        cell = big.o_marks[i].cell
        if in_block(cell, c):
            out[kb] = None
            continue
        j = collapse_cell(cell, c)[0]
        if j not in small.free_pos:
            raise PositionMismatch(f"O at {cell} has no free counterpart after collapsing at {c}")
        out[kb] = small.free_pos[j]
    return out


def _require_collapse(big: GridDiagram, small: GridDiagram, c, merged: Marking) -> None:
    try:
        expect = collapse(big, c, merged)
    except ValueError as e:
        raise PositionMismatch(str(e)) from e
    if expect.markings != small.markings or expect.n != small.n:
        raise PositionMismatch(f"diagrams differ outside the block at {c}")


def insertion_map(small: GridComplex, big: GridComplex, c, target=None, name="c+") -> ChainMap:
    """x -> x u {c}: small complex onto the I part of the big one."""
    vt = var_transfer(big, small, c)
    back = {ks: kb for kb, ks in vt.items() if ks is not None}
    nb = len(big.free)

    def fn(key):
        idx, mono = key
        bm = [0] * nb
        for ks, e in enumerate(mono):
            bm[back[ks]] = e
        return [(big.index[insert_point(small.states[idx], c)], tuple(bm))]

    return ChainMap(small, target or big, fn, None, name)


def deletion_map(big: GridComplex, small: GridComplex, c, source=None, extra: bool = False, name="c0") -> ChainMap:
    """x u {c} -> x.  With ``extra`` the block variable becomes a trailing exponent."""
    vt = var_transfer(big, small, c)
    ns = len(small.free)

    def fn(key):
        idx, mono = key
        sm = [0] * ns
        k = 0
        for kb, e in enumerate(mono):
            if vt[kb] is None:
                k += e
            elif e:
                sm[vt[kb]] = e
        out = (small.index[delete_point(big.states[idx], c)], tuple(sm))
        return [out + (k,)] if extra else [out]

    return ChainMap(source or big, small, fn, None, name)


def bijection_map(kind: str, source, target, c) -> ChainMap:
    """State-bijection chain maps of the skein argument.

    ``cplus``: S(g) -> I(first), ``czero``: I(second) -> S(g),
    ``alpha``/``beta``: identity on states N(first) -> N(second).
    ``source``/``target`` are grid complexes or their I/N restrictions.
    """
    base_s = getattr(source, "base", source)
    base_t = getattr(target, "base", target)
    if kind == "cplus":
        return insertion_map(base_s, base_t, c, target=target, name=kind)
    if kind == "czero":
        return deletion_map(base_s, base_t, c, source=source, name=kind)
    if kind in ("alpha", "beta"):
        if base_s.n != base_t.n or base_s.free != base_t.free:
            raise PositionMismatch("identity on states needs equal grids with the same free variables")
        return ChainMap(source, target, lambda k: [k], None, kind)
    raise ValueError(f"unknown bijection {kind!r}")


def _degree_check(rep: VerificationReport, name: str, f: ChainMap, keys, maslov: int, s2: Optional[int]):
    degs = map_degrees(f, keys)
    ok = len(degs) == 1 and next(iter(degs))[0] == maslov and (s2 is None or next(iter(degs))[1] == s2)
    rep.add(f"{name} homogeneous of degree ({maslov}, {'*' if s2 is None else s2})", ok, sorted(degs), sorted(degs))
    if len(degs) == 1:
        f.degree = next(iter(degs))
    return degs


def _bijective(f: ChainMap, keys, target_keys) -> bool:
    img = [t for k in keys for t in f(k)]
    return len(img) == len(set(img)) == len(keys) == len(target_keys) and set(img) == set(target_keys)


# -- windows and tables ---------------------------------------------------------


def window_for(cxs, budget: int) -> tuple[int, int]:
    lo = min(min(cx.M) for cx in cxs) - 2 * budget - 2
    hi = max(max(cx.M) for cx in cxs) + 2
    return lo, hi


def table(cx, window, threads: int = 1) -> PoincareTable:
    return homology_dims(cx, window=window, threads=threads)


def _table_eq(rep, name, a: PoincareTable, b: PoincareTable):
    lo, hi = max(a.window[0], b.window[0]), min(a.window[1], b.window[1])
    ea, eb = a.restrict(lo, hi).entries, b.restrict(lo, hi).entries
    diff = sorted(k for k in set(ea) | set(eb) if ea.get(k, 0) != eb.get(k, 0))
    rep.add(name, not diff, diff[:1], {"bidegrees": len(ea)})


def _shift_check(rep, name, a: PoincareTable, b: PoincareTable, expect: Optional[int] = None):
    s = compare_up_to_shift(a, b)
    ok = s is not None and (expect is None or s == expect)
    witness = None
    lo, hi = max(a.window[0], b.window[0]), min(a.window[1], b.window[1])
    if s is None:
        ma = {}
        for (m, _), v in a.restrict(lo, hi).entries.items():
            ma[m] = ma.get(m, 0) + v
        mb = {}
        for (m, _), v in b.restrict(lo, hi).entries.items():
            mb[m] = mb.get(m, 0) + v
        bad = sorted(m for m in set(ma) | set(mb) if ma.get(m, 0) != mb.get(m, 0))
        witness = {"maslov": bad[:1], "a": a.restrict(lo, hi).entries, "b": b.restrict(lo, hi).entries}
    rep.add(name, ok, witness if s is None else {"shift": s, "expected": expect}, {"shift": s, "total": a.restrict(lo, hi).total})
    return s


def _euler_complete(rep, name, cx, t: PoincareTable):
    want = euler_from_states(cx)
    if want is None:
        return
    got = euler(t)
    rep.add(name, got == want, {"table": str(got), "states": str(want)})


def les_accounting(f: ChainMap, cone_table: PoincareTable, ta: PoincareTable, tb: PoincareTable):
    """First bidegree where dim H(Cone f) != coker f_* + ker f_*, or None."""
    a, p = f.degree
    lo, hi = cone_table.window
    keys = set(cone_table.entries)
    keys |= {(d + a + 1, s + p) for (d, s) in ta.entries}
    keys |= set(tb.entries)
    for d, s in sorted(keys):
        if not lo <= d <= hi:
            continue
        src_a = (d - a, s - p)  # H_A -> H_B(d, s)
        src_b = (d - a - 1, s - p)  # H_A(d-a-1) -> H_B(d-1, s)
        if not (ta.window[0] <= src_b[0] and src_a[0] <= ta.window[1]):
            continue
        r1 = induced_rank(f, *src_a) if ta.entries.get(src_a) and tb.entries.get((d, s)) else 0
        r2 = induced_rank(f, *src_b) if ta.entries.get(src_b) and tb.entries.get((d - 1, s)) else 0
        want = (tb.entries.get((d, s), 0) - r1) + (ta.entries.get(src_b, 0) - r2)
        if cone_table.entries.get((d, s), 0) != want:
            return (d, s, cone_table.entries.get((d, s), 0), want)
    return None


# -- skein triangles -------------------------------------------------------------


@dataclass
class SkeinTriple:
    """g plus the two resolutions at lattice point c of the larger grids.

    ``first`` carries O* markings NW and SE of c (its N part is a subcomplex),
    ``second`` carries them SW and NE (its I part is a subcomplex); g is the
    common collapse of the block with a single O*.  For a positive triple
    first = crossing, second = resolution; for a negative triple
    first = resolution, second = crossing.
    """

    g: GridDiagram
    first: GridDiagram
    second: GridDiagram
    c: tuple[int, int]
    kind: str = "positive"
    m: int = field(init=False)

    def __post_init__(self):
        if self.kind not in ("positive", "negative"):
            raise ValueError("kind must be positive or negative")
        n = self.first.n
        if self.second.n != n or self.g.n != n - 1:
            raise PositionMismatch("triple must be (n-1, n, n) sized")
        cells = block_cells(n, self.c)
        for dg, diag, name in (("NW", "SE", "first"), ("SW", "NE", "second")):
            d = getattr(self, name)
            for pos, cell in cells.items():
                mk = d.at(*cell)
                want = OSTAR if pos in (dg, diag) else None
                if (mk.kind if mk else None) != want:
                    raise PositionMismatch(f"{name}: block cell {pos} holds {mk.kind if mk else 'nothing'}")
        out1 = {m for m in self.first.markings if not in_block(m.cell, self.c)}
        out2 = {m for m in self.second.markings if not in_block(m.cell, self.c)}
        if out1 != out2:
            raise PositionMismatch("first and second differ outside the block")
        _require_collapse(self.first, self.g, self.c, Marking(self.c[0] - 1, self.c[1] - 1, OSTAR))
        w1, w2 = diagram_weights(self.first), diagram_weights(self.second)
        sums = [w1[cells["NW"]], w1[cells["SE"]], w2[cells["SW"]], w2[cells["NE"]]]
        if len(set(sums)) != 1:
            raise ValueError(f"weight sums of the four edge groups differ: {sums}")
        self.m = sums[0]


def skein_euler_identity(p0, pplus, pg, m: int, search: int = 24) -> Optional[tuple[int, int, int]]:
    """(s2 shift of the second term, sign, overall shift) making the Euler identity hold."""
    rhs = W_poly(m) * pg
    for s in range(-search, search + 1):
        lhs = p0 - pplus.shift(s)
        u = unit_between(rhs, lhs)
        if u is not None:
            return (s, u[0], u[1])
    return None


def verify_skein(t: SkeinTriple, budget: int = HAT_BUDGET, threads: int = 1, les: bool = True) -> VerificationReport:
    rep = VerificationReport(f"skein ({t.kind})")
    cg, c1, c2 = GridComplex(t.g, HAT), GridComplex(t.first, HAT), GridComplex(t.second, HAT)
    I1, N1 = in_part(c1, t.c)
    I2, N2 = in_part(c2, t.c)
    bf1, bf2 = block_form(c1, t.c), block_form(c2, t.c)
    rep.add("first: no differential from N to I", bf1.get("N->I", 0) == 0, bf1, bf1)
    rep.add("second: no differential from I to N", bf2.get("I->N", 0) == 0, bf2, bf2)
    m2 = 2 * t.m

    # (a) the three state bijections
    cplus = bijection_map("cplus", cg, I1, t.c)
    czero = bijection_map("czero", I2, cg, t.c)
    alpha = bijection_map("alpha" if t.kind == "positive" else "beta", N1, N2, t.c)
    kg, kI1, kI2 = state_keys(cg), state_keys(c1, I1), state_keys(c2, I2)
    kN1, kN2 = state_keys(c1, N1), state_keys(c2, N2)
    for f, keys, tkeys in ((cplus, kg, kI1), (czero, kI2, kg), (alpha, kN1, kN2)):
        bad = check_chain_map(f, keys)
        rep.add(f"{f.name} is a chain map", bad is None, bad)
        rep.add(f"{f.name} is a bijection on generators", _bijective(f, keys, tkeys))
    _degree_check(rep, "cplus", cplus, kg, 0, None)
    _degree_check(rep, "czero", czero, kI2, 1, None)
    _degree_check(rep, alpha.name, alpha, kN1, 1, None)
    # single Alexander degrees depend on the planar cuts; their sum around
    # g -> I(first) -> N(first) -> N(second) -> I(second) -> g does not
    loop = None
    if cplus.degree and czero.degree and alpha.degree:
        loop = cplus.degree[1] + alpha.degree[1] + czero.degree[1]
    rep.add("Alexander degrees around the loop sum to 2m", loop == m2, loop, loop)

    # (b) composite vanishes identically
    dIN = component(c1, I1, N1, "dIN")
    dNI = component(c2, N2, I2, "dNI")
    a_dIN = dIN.then(alpha, "alpha.dIN")
    comp = a_dIN.then(dNI, "dNI.alpha.dIN")
    nz = next(((k, comp(k)) for k in kI1 if comp(k)), None)
    rep.add("composite dNI.alpha.dIN is zero", nz is None, nz)
    rep.add("composite zero on every slice", _slice_zero(comp, c1, I1))

    # (c)-(e) cone homologies
    win = window_for([cg, c1, c2], budget)
    tg, t1, t2 = table(cg, win, threads), table(c1, win, threads), table(c2, win, threads)
    _euler_complete(rep, "window holds all of H(g)", cg, tg)
    _euler_complete(rep, "window holds all of H(first)", c1, t1)
    _euler_complete(rep, "window holds all of H(second)", c2, t2)
    cone_c = Cone(dNI)
    cone_d = Cone(a_dIN)
    cone_e = Cone(comp)
    tc, td, te = table(cone_c, win, threads), table(cone_d, win, threads), table(cone_e, win, threads)
    _table_eq(rep, "(c) H(Cone(dNI)) = H(second)", tc, t2)
    _table_eq(rep, "(d) H(Cone(alpha.dIN)) = H(first) shifted by Maslov +1", td, t1.shifted(1, 0))
    expect = cplus.degree[1] if cplus.degree else None
    _shift_check(rep, "(e) H(Cone(composite)) = H(g) x W(m)", tensor_W(tg, t.m), te, expect=expect)

    # (f) long exact sequences of the three cones, rank by rank
    if les:
        tI1, tN1 = table(I1, win, threads), table(N1, win, threads)
        tI2, tN2 = table(I2, win, threads), table(N2, win, threads)
        for name, f, tc_, ta, tb in (
            ("Cone(dNI)", dNI, tc, tN2, tI2),
            ("Cone(alpha.dIN)", a_dIN, td, tI1, tN2),
            ("Cone(composite)", comp, te, tI1, tI2),
        ):
            bad = les_accounting(f, tc_, ta, tb)
            rep.add(f"(f) exactness of the long exact sequence of {name}", bad is None, bad)

    # Euler characteristic identity
    e0, ep, eg = (euler(t2), euler(t1), euler(tg)) if t.kind == "positive" else (euler(t1), euler(t2), euler(tg))
    sol = skein_euler_identity(e0, ep, eg, t.m)
    detail = {"shifts": sol, "nondegenerate": bool(e0) and bool(ep) and bool(eg)}
    rep.add("Euler identity with searched shifts", sol is not None, {"e0": str(e0), "e+-": str(ep), "eg": str(eg)}, detail)
    return rep


def _slice_zero(f: ChainMap, cx, part) -> bool:
    """The composite applied to every generator of every slice in a small window vanishes."""
    hi = max(cx.M)
    for d in range(hi - 4, hi + 1):
        for keys in part.level(d).values():
            if any(f(k) for k in keys):
                return False
    return True


# -- destabilization-like moves ------------------------------------------------


@dataclass
class DestabData:
    g: GridDiagram
    gp: GridDiagram
    c: tuple[int, int]
    axis: str  # "row": A's row holds one X; "col": A's column holds one X
    a_kind: str
    cells: dict
    x_special: tuple[int, int]  # X_{j+1} (row case) or X_j (column case)
    o_n: tuple[int, int]  # O paired with the distinguished X for the U rule
    two_term: bool  # U = U_{n+1} + U_n when true


def destab_data(g: GridDiagram, gp: GridDiagram, c, axis: str = "row", a_kind: Optional[str] = None) -> DestabData:
    """Check the block pattern and the alignment/one-X conditions."""
    if axis not in ("row", "col"):
        raise ValueError("axis must be row or col")
    n = g.n
    cells = block_cells(n, c)
    at = {pos: g.at(*cell) for pos, cell in cells.items()}
    a = at["NE"]
    if a is None or not a.is_o:
        raise PatternMismatch("block NE cell must hold the O or O* marking A")
    if a_kind is not None and a.kind != a_kind:
        raise PatternMismatch(f"A is {a.kind}, expected {a_kind}")
    for pos in ("NW", "SE"):
        if at[pos] is None or at[pos].kind != X:
            raise PatternMismatch(f"block {pos} cell must hold an X")
    if at["SW"] is not None and at["SW"].kind != X:
        raise PatternMismatch("block SW cell must be empty or hold an X")
    col, row = c
    outside = [m for m in g.xs if not in_block(m.cell, c)]
    rows = [m.col for m in outside if m.row in (row - 1, row)]
    if len(rows) != len(set(rows)):
        raise PatternMismatch("X markings on the two rows at c line up vertically")
    cols = [m.row for m in outside if m.col in (col - 1, col)]
    if len(cols) != len(set(cols)):
        raise PatternMismatch("X markings on the two columns at c line up horizontally")
    if axis == "row":
        if len(g.xs_in_row(a.row)) != 1:
            raise PatternMismatch("row variant needs exactly one X in the row of A")
        special = at["NW"]
        o_n = g.o_in_col(special.col)
        two = len(g.xs_in_col(special.col)) == 1
    else:
        if len(g.xs_in_col(a.col)) != 1:
            raise PatternMismatch("column variant needs exactly one X in the column of A")
        special = at["SE"]
        o_n = g.o_in_row(special.row)
        two = len(g.xs_in_row(special.row)) == 1
    # the merged X continues the edge that survives the collapse
    through = at["SE"] if (a.kind == OSTAR and axis == "row") else at["NW"]
    merged_w = through.weight + (at["SW"].weight if at["SW"] else 0)
    _require_collapse(g, gp, c, Marking(col - 1, row - 1, X, merged_w))
    return DestabData(g, gp, c, axis, a.kind, cells, special.cell, o_n.cell, two)


def homotopy_ops(cx: GridComplex, data: DestabData):
    """(H_O: I -> N, H_X: N -> I, H_OX: N -> N) on the minus complex of g."""
    if cx.version != MINUS:
        raise ValueError("homotopy operators live on the minus complex")
    I, N = in_part(cx, data.c)
    a_bit = 1 << data.cells["NE"][0]
    x_bit = next(1 << k for k, m in enumerate(cx.x_marks) if m.cell == data.x_special)

    def rect_map(source_keep, target_keep, pred):
        def fn(key):
            idx, mono = key
            out = []
            for yi, om, xm, _ in cx.rectangles(idx):
                if not pred(om, xm):
                    continue
                tkey = (yi, mono)
                if not target_keep(tkey):
                    continue
                # A's own variable is left out of the coefficient
                inc = cx._inc(om & ~a_bit)
                out.append((yi, tuple(p + q for p, q in zip(mono, inc))))
            return out

        return fn

    h_o = ChainMap(I, N, rect_map(I.keep, N.keep, lambda om, xm: xm == 0 and om & a_bit), None, "H_O")
    h_x = ChainMap(N, I, rect_map(N.keep, I.keep, lambda om, xm: xm == x_bit), None, "H_X")
    h_ox = ChainMap(N, N, rect_map(N.keep, N.keep, lambda om, xm: xm == x_bit and om & a_bit), None, "H_OX")
    return h_o, h_x, h_ox


def verify_destab(
    g: GridDiagram,
    gp: GridDiagram,
    c,
    axis: str = "row",
    a_kind: Optional[str] = None,
    budget: int = MINUS_BUDGET,
    threads: int = 1,
    tables: bool = True,
) -> VerificationReport:
    data = destab_data(g, gp, c, axis, a_kind)
    rep = VerificationReport(f"destabilization ({data.axis} variant, A={data.a_kind})")
    cx = GridComplex(g, MINUS)
    cxp = GridComplex(gp, MINUS)
    I, N = in_part(cx, c)
    kI, kN = state_keys(cx, I), state_keys(cx, N)
    bf = block_form(cx, c)
    rep.add("N is a subcomplex", bf.get("N->I", 0) == 0, bf, bf)
    h_o, h_x, h_ox = homotopy_ops(cx, data)
    wa = cx.weights[data.cells["NE"]]
    _degree_check(rep, "H_O", h_o, kI, 1, 2 * wa)
    _degree_check(rep, "H_X", h_x, kN, -1, -2 * wa)

    bad = next(((k, h_x.apply(h_o(k))) for k in kI if h_x.apply(h_o(k)) != [k]), None)
    rep.add("H_X H_O = Id on I", bad is None, bad)
    dNN = component(cx, N, N, "dNN")

    def lhs(k):
        terms = h_o.apply(h_x(k)) + h_ox.apply(dNN(k)) + dNN.apply(h_ox(k))
        return mod2(terms)

    bad = next(((k, lhs(k)) for k in kN if lhs(k) != [k]), None)
    rep.add("H_O H_X + H_OX d + d H_OX = Id on N", bad is None, bad)

    # commutative square: c H_X dIN = U c, with U = U_{n+1} (+ U_n)
    cmap = deletion_map(cx, cxp, c, source=I, extra=True, name="c")
    dIN = component(cx, I, N, "dIN")
    on_col = collapse_cell(data.o_n, c)[0]
    on_pos = cxp.free_pos[on_col]

    def u_times(key):
        idx, mono, k = key
        out = [(idx, mono, k + 1)]
        if data.two_term:
            mm = list(mono)
            mm[on_pos] += 1
            out.append((idx, tuple(mm), k))
        return out

    def square(k):
        left = cmap.apply(h_x.apply(dIN(k)))
        right = mod2(t for j in cmap(k) for t in u_times(j))
        return left, right

    bad = next(((k,) + square(k) for k in kI if square(k)[0] != square(k)[1]), None)
    rep.add(f"square commutes with U = U_A{' + U_n' if data.two_term else ''}", bad is None, bad)
    deg = map_degrees(cmap.__class__(I, cxp, lambda k: [t[:2] for t in cmap(k)], None), kI)
    # the square's lower-left corner is the g' complex shifted by [[1, w(A)]]
    rep.add("c is homogeneous of Maslov degree 1 into the unshifted g' complex", len(deg) == 1 and next(iter(deg))[0] == 1, sorted(deg))

    if tables:
        win = _minus_window([cx, cxp], budget)
        _shift_check(rep, "minus tables agree up to shift", table(cx, win, threads), table(cxp, win, threads))
    return rep


def _minus_window(cxs, budget: int) -> tuple[int, int]:
    hi = max(max(cx.M) for cx in cxs)
    return hi - 2 * budget, hi


def verify_merge(
    g: GridDiagram, gp: GridDiagram, c, budget: int = MINUS_BUDGET, threads: int = 1
) -> VerificationReport:
    """Two parallel edges at the block (X at NW, O at NE, X at SE and SW) versus their merge."""
    rep = VerificationReport("merge of parallel edges")
    if g == gp:
        cx = GridComplex(g, HAT)
        t = table(cx, window_for([cx], HAT_BUDGET), threads)
        _shift_check(rep, "hat tables agree up to shift", t, t, expect=0)
        return rep
    data = destab_data(g, gp, c, "row", O)
    if g.at(*data.cells["SW"]) is None:
        raise PositionMismatch("merge block needs an X in its SW cell (the second parallel edge)")
    model = recover_graph(g)
    e1 = model.edge_of(data.cells["NW"])
    e2 = model.edge_of(data.cells["SW"])
    p1, p2 = model.edges[e1], model.edges[e2]
    rep.add("the two block edges are parallel", e1 != e2 and (p1.source, p1.target) == (p2.source, p2.target), (p1.source, p1.target, p2.source, p2.target))
    h, hp = GridComplex(g, HAT), GridComplex(gp, HAT)
    win = window_for([h, hp], HAT_BUDGET)
    th, thp = table(h, win, threads), table(hp, win, threads)
    _euler_complete(rep, "window holds all of H(g)", h, th)
    _shift_check(rep, "hat tables agree up to shift", th, thp)
    mn, mnp = GridComplex(g, MINUS), GridComplex(gp, MINUS)
    mw = _minus_window([mn, mnp], budget)
    _shift_check(rep, "windowed minus tables agree up to shift", table(mn, mw, threads), table(mnp, mw, threads))
    return rep


def contracted_edge(g: GridDiagram, data: DestabData) -> int:
    model = recover_graph(g)
    e = model.edge_of(data.x_special)
    edge = model.edges[e]
    if edge.closed or edge.source == edge.target:
        raise LoopEdge(f"edge {e} through {data.x_special} is a loop")
    return e


def verify_contract(
    g: GridDiagram,
    gp: GridDiagram,
    c,
    e_weight: Optional[int] = None,
    axis: str = "col",
    budget: int = MINUS_BUDGET,
    threads: int = 1,
    minus: bool = True,
) -> VerificationReport:
    """Contracting edge e at the vertex A: hat gains W(w(e)), minus is unchanged."""
    data = destab_data(g, gp, c, axis, OSTAR)
    contracted_edge(g, data)
    w = diagram_weights(g)
    actual = w[data.x_special]
    if e_weight is None:
        e_weight = actual
    rep = VerificationReport(f"contraction of an edge (weight {e_weight})")
    h, hp = GridComplex(g, HAT), GridComplex(gp, HAT)
    win = window_for([h, hp], HAT_BUDGET)
    th, thp = table(h, win, threads), table(hp, win, threads)
    _euler_complete(rep, "window holds all of H(g)", h, th)
    _euler_complete(rep, "window holds all of H(g')", hp, thp)
    _shift_check(rep, f"hat(g) = hat(g') x W({e_weight}) up to shift", tensor_W(thp, e_weight), th)
    if minus:
        mn, mnp = GridComplex(g, MINUS), GridComplex(gp, MINUS)
        mw = _minus_window([mn, mnp], budget)
        _shift_check(rep, "windowed minus tables agree up to shift", table(mn, mw, threads), table(mnp, mw, threads))
    return rep


# -- weight scaling and parallel powers -------------------------------------------


def verify_scale(g: GridDiagram, n: int, version: str = HAT, budget: Optional[int] = None, threads: int = 1) -> VerificationReport:
    rep = VerificationReport(f"weight scaling by {n} ({version})")
    w = diagram_weights(g)
    a, b = GridComplex(g, version, w), GridComplex(g, version, scale_weights(w, n))
    rep.add("Maslov gradings unchanged", a.M == b.M)
    rep.add("doubled Alexander gradings scaled", all(y == n * x for x, y in zip(a.S2, b.S2)))
    if version == HAT:
        win = window_for([a], HAT_BUDGET if budget is None else budget)
    else:
        win = _minus_window([a], MINUS_BUDGET if budget is None else budget)
    ta, tb = table(a, win, threads), table(b, win, threads)
    _table_eq(rep, "table dilates exactly", ta.dilated(n), tb)
    return rep


def verify_parallel_power(
    g: GridDiagram, g_n: GridDiagram, n: int, version: str = MINUS, budget: Optional[int] = None, threads: int = 1
) -> VerificationReport:
    rep = VerificationReport(f"parallel power n={n} ({version})")
    m1, mn = recover_graph(g), recover_graph(g_n)
    w1, wn = diagram_weights(g), diagram_weights(g_n)
    ok = len(mn.edges) == n * len(m1.edges) and len(mn.vertices) == len(m1.vertices)
    rep.add("edge count multiplied by n", ok, (len(m1.edges), len(mn.edges)))
    if sorted(wn.edge_weights) != sorted(v for v in w1.edge_weights for _ in range(n)):
        raise ValueError("parallel copies must carry the original edge weights")
    a, b = GridComplex(g, version), GridComplex(g_n, version)
    if version == HAT:
        win = window_for([a, b], HAT_BUDGET if budget is None else budget)
    else:
        win = _minus_window([a, b], MINUS_BUDGET if budget is None else budget)
    _shift_check(rep, "table(g_n) = table(g) with s2 scaled by n, up to shift", table(a, win, threads).dilated(n), table(b, win, threads))
    return rep
