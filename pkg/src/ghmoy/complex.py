"""Grid chain complexes: states, gradings, empty rectangles, differentials.

O markings are indexed by their column (each column holds exactly one O or
O*), so the variable ``U_i`` belongs to the O in column ``i``.  A generator
of a grid complex is a pair ``(state index, monomial)`` where the monomial is
an exponent tuple over the complex's *free* variables: every O in the minus
version, only the plain O's in the hat version.

Alexander gradings are stored doubled (``s2 = 2A``) so everything is integral.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property, lru_cache
from itertools import permutations
from typing import Callable, Hashable, Iterable, Optional, Sequence

from .graph import WeightAssignment, diagram_weights
from .grid import OSTAR, GridDiagram, PlanarRealization, planar_realization, require_valid

MINUS, HAT = "minus", "hat"


class NotAChainMap(ValueError):
    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class GridState:
    perm: tuple[int, ...]  # perm[row] = column of the state point on that row line

    def points(self) -> list[tuple[int, int]]:
        return [(c, r) for r, c in enumerate(self.perm)]


@dataclass(frozen=True)
class Rectangle:
    col_start: int
    width: int
    row_start: int
    height: int
    o_cells: tuple[tuple[int, int], ...]
    x_cells: tuple[tuple[int, int], ...]

    @property
    def corners(self) -> tuple[tuple[int, int], ...]:
        # lower-left, upper-right (source state); upper-left, lower-right (target state)
        return rect_corners(self.col_start, self.width, self.row_start, self.height, 0)


@dataclass(frozen=True)
class Generator:
    mono: tuple[int, ...]
    state: GridState
    m: int
    s2: int


@dataclass
class BidegreeSlice:
    version: str
    d: int
    s2: int
    basis: list[Generator]
    boundary: list[int]  # column j: bitmask over the basis of slice (d-1, s2)


def rect_corners(c0, w, r0, h, n):
    c1, r1 = c0 + w, r0 + h
    if n:
        c1, r1 = c1 % n, r1 % n
    return ((c0, r0), (c1, r1), (c0, r1), (c1, r0))


# -- gradings (direct evaluation of the J-count formulas) ---------------------


def _I(a: Iterable, b: Iterable) -> float:
    """Weighted count of pairs a < b (strict in both coordinates)."""
    b = list(b)
    return sum(wa * wb for (pa, wa) in a for (pb, wb) in b if pa[0] < pb[0] and pa[1] < pb[1])


def _J(a, b) -> float:
    a, b = list(a), list(b)
    return (_I(a, b) + _I(b, a)) / 2


def maslov(p: PlanarRealization, x: GridState) -> int:
    """M(x) = J(x - O, x - O) + 1 with O running over all O and O* markings."""
    xs = [(pt, 1) for pt in p.state_points2(x.perm)]
    os_ = [(p.marking_point2(m), 1) for m in p.diagram.os]
    val = _J(xs, xs) - 2 * _J(xs, os_) + _J(os_, os_) + 1
    return int(round(val))


def alexander2(p: PlanarRealization, w: WeightAssignment, x: GridState) -> int:
    """Doubled Alexander grading 2 J(x, sum w(X) X - sum w(O) O)."""
    xs = [(pt, 1) for pt in p.state_points2(x.perm)]
    marks = [(p.marking_point2(m), w[m.cell] if m.kind == "X" else -w[m.cell]) for m in p.diagram.markings]
    return int(round(2 * _J(xs, marks)))


# -- the grid complex --------------------------------------------------------


@lru_cache(maxsize=None)
def monomials(nvars: int, degree: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of the given total degree, lexicographically sorted."""
    if nvars == 0:
        return ((),) if degree == 0 else ()
    out = []
    for first in range(degree, -1, -1):
        for rest in monomials(nvars - 1, degree - first):
            out.append((first,) + rest)
    return tuple(sorted(out))


class GridComplex:
    """CF^-(g, w) or the hat quotient, built lazily Maslov level by Maslov level."""

    def __init__(
        self,
        g: GridDiagram,
        version: str = HAT,
        weights: Optional[WeightAssignment] = None,
        cut: tuple[int, int] = (0, 0),
    ):
        if version not in (MINUS, HAT):
            raise ValueError(f"unknown version {version!r}")
        require_valid(g)
        self.g = g
        self.n = n = g.n
        self.version = version
        self.weights = diagram_weights(g) if weights is None else weights
        self.planar = planar_realization(g, cut)
        self.o_marks = [g.o_in_col(i) for i in range(n)]
        self.o_weight = [self.weights[m.cell] for m in self.o_marks]
        self.star = [m.kind == OSTAR for m in self.o_marks]
        self.star_mask = sum(1 << i for i in range(n) if self.star[i])
        self.free = [i for i in range(n) if version == MINUS or not self.star[i]]
        self.free_pos = {i: k for k, i in enumerate(self.free)}
        self.x_marks = g.xs
        self.x_weight = [self.weights[m.cell] for m in self.x_marks]
        self.states = list(permutations(range(n)))
        self.index = {s: i for i, s in enumerate(self.states)}
        self.M, self.S2 = self._gradings()
        self._rects: dict[int, list] = {}
        self._terms: dict[int, list] = {}
        self._levels: dict[int, dict[int, list]] = {}

    # gradings, via per-lattice-point dominance counts
    def _gradings(self):
        n, p = self.n, self.planar
        opts = [p.marking_point2(m) for m in self.o_marks]
        wo = self.o_weight
        xpts = [p.marking_point2(m) for m in self.x_marks]
        wx = self.x_weight
        o_cnt = [[0] * n for _ in range(n)]
        a_cnt = [[0] * n for _ in range(n)]
        for i in range(n):  # planar column of a lattice point
            for j in range(n):
                px, py = 2 * i, 2 * j
                for (mx, my), w in zip(opts, wo):
                    if (mx > px and my > py) or (mx < px and my < py):
                        o_cnt[i][j] += 1
                        a_cnt[i][j] -= w
                for (mx, my), w in zip(xpts, wx):
                    if (mx > px and my > py) or (mx < px and my < py):
                        a_cnt[i][j] += w
        j_oo = sum(1 for a in opts for b in opts if a[0] < b[0] and a[1] < b[1])
        M, S2 = [], []
        for perm in self.states:
            pts = [(p.col(c), p.row(r)) for r, c in enumerate(perm)]
            pts.sort(key=lambda t: t[1])
            cols = [c for c, _ in pts]
            inc = sum(1 for a in range(n) for b in range(a + 1, n) if cols[a] < cols[b])
            jxo2 = sum(o_cnt[c][r] for c, r in pts)  # = 2 J(x, O)
            M.append(inc - jxo2 + j_oo + 1)
            S2.append(sum(a_cnt[c][r] for c, r in pts))
        return M, S2

    @cached_property
    def _contents(self):
        """(o_mask, x_mask) of every torus rectangle keyed by (col0, width, row0, height)."""
        n = self.n
        ocell = {}
        for i, m in enumerate(self.o_marks):
            ocell[m.cell] = 1 << i
        xcell = {m.cell: 1 << k for k, m in enumerate(self.x_marks)}
        table = {}
        for c0 in range(n):
            for r0 in range(n):
                for w in range(1, n):
                    for h in range(1, n):
                        om = xm = 0
                        for dc in range(w):
                            for dr in range(h):
                                cell = ((c0 + dc) % n, (r0 + dr) % n)
                                om |= ocell.get(cell, 0)
                                xm |= xcell.get(cell, 0)
                        table[(c0, w, r0, h)] = (om, xm)
        return table

    def rectangles(self, idx: int) -> list[tuple[int, int, int, tuple]]:
        """Empty rectangles out of a state: (target index, o_mask, x_mask, shape)."""
        got = self._rects.get(idx)
        if got is not None:
            return got
        n, x = self.n, self.states[idx]
        content = self._contents
        out = []
        for r1 in range(n):
            for r2 in range(r1 + 1, n):
                a, b = x[r1], x[r2]
                y = list(x)
                y[r1], y[r2] = b, a
                yi = self.index[tuple(y)]
                # lower-left and upper-right corners belong to x
                for c0, c1, ra, rb in ((a, b, r1, r2), (b, a, r2, r1)):
                    w, h = (c1 - c0) % n, (rb - ra) % n
                    empty = True
                    for k in range(1, h):
                        if 0 < (x[(ra + k) % n] - c0) % n < w:
                            empty = False
                            break
                    if empty:
                        om, xm = content[(c0, w, ra, h)]
                        out.append((yi, om, xm, (c0, w, ra, h)))
        self._rects[idx] = out
        return out

    def _inc(self, omask: int) -> tuple[int, ...]:
        inc = [0] * len(self.free)
        for i in self.free:
            if omask >> i & 1:
                inc[self.free_pos[i]] = 1
        return tuple(inc)

    def terms(self, idx: int) -> list[tuple[int, tuple[int, ...]]]:
        """The differential of a bare state: (target index, monomial increment) pairs."""
        got = self._terms.get(idx)
        if got is not None:
            return got
        out = []
        for yi, om, xm, _ in self.rectangles(idx):
            if xm:
                continue
            if self.version == HAT and om & self.star_mask:
                continue
            out.append((yi, self._inc(om)))
        self._terms[idx] = out
        return out

    # -- generic complex protocol ------------------------------------------

    def mono_s2(self, mono: tuple[int, ...]) -> int:
        return -2 * sum(k * self.o_weight[i] for k, i in zip(mono, self.free))

    def grading(self, key) -> tuple[int, int]:
        idx, mono = key
        return self.M[idx] - 2 * sum(mono), self.S2[idx] + self.mono_s2(mono)

    def level(self, d: int) -> dict[int, list]:
        got = self._levels.get(d)
        if got is not None:
            return got
        out: dict[int, list] = {}
        nf = len(self.free)
        for idx, m in enumerate(self.M):
            if m < d or (m - d) % 2:
                continue
            for mono in monomials(nf, (m - d) // 2):
                out.setdefault(self.S2[idx] + self.mono_s2(mono), []).append((idx, mono))
        self._levels[d] = out
        return out

    def boundary(self, key) -> list:
        idx, mono = key
        c = Counter((yi, tuple(a + b for a, b in zip(mono, inc))) for yi, inc in self.terms(idx))
        return sorted(k for k, v in c.items() if v % 2)

    @property
    def max_maslov(self) -> int:
        return max(self.M)

    @property
    def min_maslov(self) -> int:
        return min(self.M)

    def generator(self, key) -> Generator:
        m, s2 = self.grading(key)
        return Generator(self.full_mono(key[1]), GridState(self.states[key[0]]), m, s2)

    def full_mono(self, mono: tuple[int, ...]) -> tuple[int, ...]:
        full = [0] * self.n
        for k, i in zip(mono, self.free):
            full[i] = k
        return tuple(full)

    def state_key(self, perm) -> tuple:
        return (self.index[tuple(perm)], (0,) * len(self.free))


# -- operations on single states ----------------------------------------------


def empty_rectangles(g: GridDiagram, x: GridState, y: GridState) -> list[Rectangle]:
    n = g.n
    diff = [r for r in range(n) if x.perm[r] != y.perm[r]]
    if len(diff) != 2:
        return []
    r1, r2 = diff
    a, b = x.perm[r1], x.perm[r2]
    if y.perm[r1] != b or y.perm[r2] != a:
        return []
    out = []
    for c0, c1, ra, rb in ((a, b, r1, r2), (b, a, r2, r1)):
        w, h = (c1 - c0) % n, (rb - ra) % n
        if any(0 < (x.perm[(ra + k) % n] - c0) % n < w for k in range(1, h)):
            continue
        cells = {((c0 + i) % n, (ra + j) % n) for i in range(w) for j in range(h)}
        os_ = tuple(sorted(m.cell for m in g.os if m.cell in cells))
        xs = tuple(sorted(m.cell for m in g.xs if m.cell in cells))
        out.append(Rectangle(c0, w, ra, h, os_, xs))
    return out


def differential(
    version: str, g: GridDiagram, w: Optional[WeightAssignment], x: GridState
) -> list[tuple[tuple[int, ...], GridState]]:
    """Differential of a bare state as (monomial over all O columns, state) pairs."""
    cx = GridComplex(g, version, w)
    key = cx.state_key(x.perm)
    return [(cx.full_mono(mono), GridState(cx.states[yi])) for yi, mono in cx.boundary(key)]


def bidegree_slice(version: str, g: GridDiagram, w, d: int, s2: int, cx: GridComplex = None) -> BidegreeSlice:
    cx = cx or GridComplex(g, version, w)
    basis = cx.level(d).get(s2, [])
    target = cx.level(d - 1).get(s2, [])
    tindex = {k: i for i, k in enumerate(target)}
    cols = []
    for k in basis:
        v = 0
        for t in cx.boundary(k):
            v ^= 1 << tindex[t]
        cols.append(v)
    return BidegreeSlice(version, d, s2, [cx.generator(k) for k in basis], cols)


# -- sub/quotient complexes, chain maps, cones ----------------------------


class Restricted:
    """The part of a complex spanned by generators whose state passes ``keep``.

    A valid complex when that part is a subcomplex or a quotient complex.
    """

    def __init__(self, base, keep: Callable[[Hashable], bool], name: str = ""):
        self.base, self.keep, self.name = base, keep, name
        self._levels: dict = {}

    def level(self, d):
        got = self._levels.get(d)
        if got is None:
            got = {}
            for s2, keys in self.base.level(d).items():
                ks = [k for k in keys if self.keep(k)]
                if ks:
                    got[s2] = ks
            self._levels[d] = got
        return got

    def boundary(self, key):
        return [k for k in self.base.boundary(key) if self.keep(k)]

    def grading(self, key):
        return self.base.grading(key)


def split_IN(cx: GridComplex, c: tuple[int, int]):
    """States through lattice point c = (col, row), and the rest."""
    col, row = c[0] % cx.n, c[1] % cx.n
    I = [i for i, s in enumerate(cx.states) if s[row] == col]
    N = [i for i, s in enumerate(cx.states) if s[row] != col]
    return I, N


def in_part(cx: GridComplex, c) -> tuple[Restricted, Restricted]:
    col, row = c[0] % cx.n, c[1] % cx.n
    states = cx.states
    I = Restricted(cx, lambda k: states[k[0]][row] == col, "I")
    N = Restricted(cx, lambda k: states[k[0]][row] != col, "N")
    return I, N


def block_form(cx: GridComplex, c) -> dict[str, int]:
    """Count nonzero differential terms between the I and N parts, by block."""
    col, row = c[0] % cx.n, c[1] % cx.n
    counts = Counter()
    for idx, s in enumerate(cx.states):
        src = "I" if s[row] == col else "N"
        for yi, _ in cx.terms(idx):
            dst = "I" if cx.states[yi][row] == col else "N"
            counts[f"{src}->{dst}"] += 1
    return dict(counts)


def mod2(keys: Iterable) -> list:
    c = Counter(keys)
    return sorted(k for k, v in c.items() if v % 2)


@dataclass
class ChainMap:
    source: object
    target: object
    fn: Callable[[Hashable], list]
    degree: Optional[tuple[int, int]] = None
    name: str = ""

    def __call__(self, key) -> list:
        return mod2(self.fn(key))

    def apply(self, keys: Iterable) -> list:
        return mod2(k2 for k in keys for k2 in self.fn(k))

    def then(self, other: "ChainMap", name: str = "") -> "ChainMap":
        """``other`` after ``self``."""
        deg = None
        if self.degree is not None and other.degree is not None:
            deg = (self.degree[0] + other.degree[0], self.degree[1] + other.degree[1])
        return ChainMap(self.source, other.target, lambda k: other.apply(self(k)), deg, name)


def component(cx, source: Restricted, target: Restricted, name: str = "") -> ChainMap:
    """The block of the differential from ``source`` to ``target`` (degree (-1, 0))."""
    return ChainMap(source, target, lambda k: [t for t in cx.boundary(k) if target.keep(t)], (-1, 0), name)


def check_chain_map(f: ChainMap, keys: Iterable) -> Optional[tuple]:
    """First generator where f d != d f, or None."""
    for k in keys:
        lhs = f.apply(f.source.boundary(k))
        rhs = mod2(t for j in f(k) for t in f.target.boundary(j))
        if lhs != rhs:
            return (k, lhs, rhs)
    return None


def map_degrees(f: ChainMap, keys: Iterable) -> set[tuple[int, int]]:
    out = set()
    for k in keys:
        dm, ds = f.source.grading(k)
        for t in f(k):
            tm, ts = f.target.grading(t)
            out.add((tm - dm, ts - ds))
    return out


class Cone:
    """Mapping cone of f: C -> C'.  Source generators sit at grading + (a+1, p)."""

    def __init__(self, f: ChainMap):
        if f.degree is None:
            raise ValueError("cone needs a homogeneous map with known degree")
        self.f = f
        self.a, self.p = f.degree
        self._levels: dict = {}

    def level(self, d):
        got = self._levels.get(d)
        if got is None:
            got = {}
            for s2, keys in self.f.source.level(d - self.a - 1).items():
                got.setdefault(s2 + self.p, []).extend(("s", k) for k in keys)
            for s2, keys in self.f.target.level(d).items():
                got.setdefault(s2, []).extend(("t", k) for k in keys)
            self._levels[d] = got
        return got

    def boundary(self, key):
        side, k = key
        if side == "t":
            return [("t", j) for j in self.f.target.boundary(k)]
        return [("s", j) for j in self.f.source.boundary(k)] + [("t", j) for j in self.f(k)]

    def grading(self, key):
        side, k = key
        m, s = (self.f.source if side == "s" else self.f.target).grading(k)
        if side == "s":
            return m + self.a + 1, s + self.p
        return m, s


def cone(f: ChainMap, check_keys: Optional[Iterable] = None) -> Cone:
    """Mapping cone; with ``check_keys`` the chain-map property is verified first."""
    if check_keys is not None:
        bad = check_chain_map(f, check_keys)
        if bad is not None:
            raise NotAChainMap(f"{f.name or 'map'} does not commute with the differentials", bad)
    return Cone(f)


def zero_map(source, target, degree) -> ChainMap:
    return ChainMap(source, target, lambda k: [], degree, "0")


def identity_map(cx) -> ChainMap:
    return ChainMap(cx, cx, lambda k: [k], (0, 0), "id")


def state_keys(cx, restrict: Optional[Restricted] = None) -> list:
    """Every bare state (monomial 1) of a grid complex, optionally filtered."""
    zero = (0,) * len(cx.free)
    keys = [(i, zero) for i in range(len(cx.states))]
    if restrict is not None:
        keys = [k for k in keys if restrict.keep(k)]
    return keys


def window_keys(cx, d_lo: int, d_hi: int) -> list:
    out = []
    for d in range(d_lo, d_hi + 1):
        for s2 in sorted(cx.level(d)):
            out.extend(cx.level(d)[s2])
    return out


def check_d_squared(cx, keys: Sequence) -> Optional[tuple]:
    for k in keys:
        dd = mod2(t for j in cx.boundary(k) for t in cx.boundary(j))
        if dd:
            return (k, dd)
    return None
