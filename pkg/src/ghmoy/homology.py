"""GF(2) linear algebra, Poincaré tables, Euler characteristics, W(i) tensoring.

Works with any complex exposing ``level(d) -> {s2: [keys]}``, ``boundary(key)``
and ``grading(key)`` (grid complexes, restrictions, cones).  Column vectors
over GF(2) are Python ints used as bitsets.
"""

from __future__ import annotations

import hashlib
import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

DEFAULT_BUDGET = 8


class WindowTooSmall(ValueError):
    pass


# -- GF(2) elimination ---------------------------------------------------------


def reduce_columns(columns: Iterable[int]) -> dict[int, int]:
    """Column-sweep elimination; returns {pivot bit: reduced column}.

    Each column is reduced against the current pivots until its lowest set
    bit is new, which then becomes a pivot (lowest-row-index rule).
    """
    pivots: dict[int, int] = {}
    for v in columns:
        while v:
            low = v & -v
            p = pivots.get(low)
            if p is None:
                pivots[low] = v
                break
            v ^= p
    return pivots


def gf2_rank(columns: Iterable[int]) -> int:
    return len(reduce_columns(columns))


def gf2_rank_dense(rows: Sequence[Sequence[int]]) -> int:
    """Textbook Gaussian elimination on a dense 0/1 matrix (reference oracle)."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank = 0
    for c in range(ncols):
        piv = next((r for r in range(rank, nrows) if a[r][c] % 2), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        for r in range(nrows):
            if r != rank and a[r][c] % 2:
                a[r] = [(x + y) % 2 for x, y in zip(a[r], a[rank])]
        rank += 1
    return rank


def kernel(columns: Sequence[int]) -> list[int]:
    """Basis of the null space, each vector a bitmask over column indices."""
    pivots: dict[int, tuple[int, int]] = {}
    out = []
    for j, v in enumerate(columns):
        combo = 1 << j
        while v:
            low = v & -v
            p = pivots.get(low)
            if p is None:
                pivots[low] = (v, combo)
                break
            v ^= p[0]
            combo ^= p[1]
        if not v:
            out.append(combo)
    return out


def to_dense(columns: Sequence[int], nrows: int) -> list[list[int]]:
    return [[(c >> r) & 1 for c in columns] for r in range(nrows)]


# -- boundary matrices ---------------------------------------------------------


def boundary_columns(cx, d: int, s2: int) -> tuple[list, list[int], int]:
    """(basis, columns, target size) of the boundary from slice (d,s2) to (d-1,s2)."""
    basis = cx.level(d).get(s2, [])
    target = cx.level(d - 1).get(s2, [])
    tindex = {k: i for i, k in enumerate(target)}
    cols = []
    for k in basis:
        v = 0
        for t in cx.boundary(k):
            i = tindex.get(t)
            if i is None:
                raise WindowTooSmall(f"boundary of {k!r} leaves bidegree ({d - 1}, {s2})")
            v ^= 1 << i
        cols.append(v)
    return basis, cols, len(target)


# -- Poincaré tables -----------------------------------------------------------


@dataclass
class PoincareTable:
    entries: dict[tuple[int, int], int]
    version: str = "hat"
    window: tuple[int, int] = (0, 0)  # Maslov range [lo, hi] that was computed
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.entries = {k: v for k, v in sorted(self.entries.items()) if v}

    def __eq__(self, other) -> bool:
        return isinstance(other, PoincareTable) and self.entries == other.entries

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def restrict(self, lo: int, hi: int) -> "PoincareTable":
        return PoincareTable({k: v for k, v in self.entries.items() if lo <= k[0] <= hi}, self.version, (lo, hi), dict(self.meta))

    def shifted(self, dm: int = 0, ds2: int = 0) -> "PoincareTable":
        w = (self.window[0] + dm, self.window[1] + dm)
        return PoincareTable({(m + dm, s + ds2): v for (m, s), v in self.entries.items()}, self.version, w, dict(self.meta))

    def dilated(self, n: int) -> "PoincareTable":
        return PoincareTable({(m, n * s): v for (m, s), v in self.entries.items()}, self.version, self.window, dict(self.meta))

    def to_json(self) -> dict:
        return {
            "version": self.version,
            "window": list(self.window),
            "entries": [[m, s, d] for (m, s), d in self.entries.items()],
            "euler": euler(self).to_json(),
            "meta": self.meta,
        }


def maslov_window(cx, version: str, budget: int) -> tuple[int, int]:
    """Default Maslov range: all state gradings plus ``budget`` U-powers below."""
    hi = max(cx.M)
    return (min(cx.M) - 2 * budget, hi)


def homology_dims(cx, window: Optional[tuple[int, int]] = None, budget: int = DEFAULT_BUDGET, threads: int = 1, meta=None) -> PoincareTable:
    """Bigraded dimensions of H(cx) for Maslov degrees in the window.

    Every bidegree slice is finite, so each reported entry is exact; the
    window only limits which Maslov degrees are reported.
    """
    version = getattr(cx, "version", "hat")
    if window is None:
        window = maslov_window(cx, version, budget)
    lo, hi = window
    # levels are cached lazily, so build them serially before fanning out
    for d in range(lo - 1, hi + 2):
        cx.level(d)
    jobs = sorted({(d, s2) for d in range(lo, hi + 2) for s2 in cx.level(d)})

    def rank(job):
        _, cols, _ = boundary_columns(cx, *job)
        return gf2_rank(cols)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            ranks = dict(zip(jobs, ex.map(rank, jobs)))
    else:
        ranks = {j: rank(j) for j in jobs}
    entries = {}
    for d in range(lo, hi + 1):
        for s2, keys in cx.level(d).items():
            dim = len(keys) - ranks[(d, s2)] - ranks.get((d + 1, s2), 0)
            if dim:
                entries[(d, s2)] = dim
    return PoincareTable(entries, version, (lo, hi), dict(meta or {}))


def homology_dims_dense(cx, window: tuple[int, int]) -> PoincareTable:
    """Same table via dense elimination; only sensible for small slices."""
    lo, hi = window

    def rank(d, s2):
        _, cols, nt = boundary_columns(cx, d, s2)
        return gf2_rank_dense(to_dense(cols, nt)) if cols and nt else 0

    entries = {}
    for d in range(lo, hi + 1):
        for s2, keys in cx.level(d).items():
            entries[(d, s2)] = len(keys) - rank(d, s2) - rank(d + 1, s2)
    return PoincareTable(entries, getattr(cx, "version", "hat"), window)


# -- Laurent polynomials in t^(1/2) --------------------------------------------


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial; keys are doubled exponents of t."""

    coeffs: tuple[tuple[int, int], ...] = ()

    @staticmethod
    def of(mapping: dict) -> "LaurentPoly":
        return LaurentPoly(tuple(sorted((k, v) for k, v in mapping.items() if v)))

    @staticmethod
    def t(s2: int, c: int = 1) -> "LaurentPoly":
        return LaurentPoly.of({s2: c})

    @property
    def dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, o: "LaurentPoly") -> "LaurentPoly":
        d = self.dict
        for k, v in o.coeffs:
            d[k] = d.get(k, 0) + v
        return LaurentPoly.of(d)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly.of({k: -v for k, v in self.coeffs})

    def __sub__(self, o: "LaurentPoly") -> "LaurentPoly":
        return self + (-o)

    def __mul__(self, o: "LaurentPoly") -> "LaurentPoly":
        d: dict[int, int] = {}
        for a, x in self.coeffs:
            for b, y in o.coeffs:
                d[a + b] = d.get(a + b, 0) + x * y
        return LaurentPoly.of(d)

    def shift(self, s2: int) -> "LaurentPoly":
        return LaurentPoly(tuple((k + s2, v) for k, v in self.coeffs))

    def normalized(self) -> "LaurentPoly":
        """Representative with lowest exponent 0 and positive leading coefficient."""
        if not self.coeffs:
            return self
        p = self.shift(-self.coeffs[0][0])
        return -p if p.coeffs[0][1] < 0 else p

    def divide(self, o: "LaurentPoly") -> Optional["LaurentPoly"]:
        """Exact quotient self / o, or None if o does not divide self."""
        if not o:
            raise ZeroDivisionError("division by the zero polynomial")
        rem = self.dict
        lead_k, lead_v = o.coeffs[0]
        q: dict[int, int] = {}
        while rem:
            k = min(rem)
            if rem[k] % lead_v:
                return None
            c = rem[k] // lead_v
            e = k - lead_k
            q[e] = c
            for kk, vv in o.coeffs:
                rem[kk + e] = rem.get(kk + e, 0) - c * vv
                if rem[kk + e] == 0:
                    del rem[kk + e]
            if len(q) > 10_000:
                return None
        return LaurentPoly.of(q)

    def to_json(self) -> list:
        return [[k, v] for k, v in self.coeffs]

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for k, v in reversed(self.coeffs):
            e = str(k // 2) if k % 2 == 0 else f"{k}/2"
            mono = "" if k == 0 else ("t" if k == 2 else f"t^{e}")
            if mono and abs(v) == 1:
                body = mono
            elif mono:
                body = f"{abs(v)}*{mono}"
            else:
                body = str(abs(v))
            parts.append(("-" if v < 0 else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


def parse_poly(terms: dict[int, int]) -> LaurentPoly:
    return LaurentPoly.of(terms)


def euler(t: PoincareTable) -> LaurentPoly:
    d: dict[int, int] = {}
    for (m, s2), dim in t.entries.items():
        d[s2] = d.get(s2, 0) + (dim if m % 2 == 0 else -dim)
    return LaurentPoly.of(d)


def poly_eq_up_to_unit(p: LaurentPoly, q: LaurentPoly) -> bool:
    return p.normalized() == q.normalized()


def unit_between(p: LaurentPoly, q: LaurentPoly) -> Optional[tuple[int, int]]:
    """(sign, s2 shift) with q = sign * t^(s2/2) * p, or None."""
    if not p and not q:
        return (1, 0)
    if not p or not q:
        return None
    shift = q.coeffs[0][0] - p.coeffs[0][0]
    for sign in (1, -1):
        cand = p.shift(shift)
        if sign < 0:
            cand = -cand
        if cand == q:
            return (sign, shift)
    return None


def state_sum(cx) -> LaurentPoly:
    """Graded Euler characteristic of the generators over the U-ring: sum of (-1)^M t^A."""
    d: dict[int, int] = {}
    for m, s2 in zip(cx.M, cx.S2):
        d[s2] = d.get(s2, 0) + (1 if m % 2 == 0 else -1)
    return LaurentPoly.of(d)


def euler_from_states(cx) -> Optional[LaurentPoly]:
    """Euler characteristic of H(cx) from states alone, when every free weight is nonzero.

    Each free variable U_i contributes a factor 1/(1 - t^(-w_i)).
    """
    denom = LaurentPoly.t(0)
    for i in cx.free:
        w = cx.o_weight[i]
        if w == 0:
            return None
        denom = denom * (LaurentPoly.t(0) - LaurentPoly.t(-2 * w))
    return state_sum(cx).divide(denom)


# -- comparisons and W(i) -------------------------------------------------------


def _overlap(a: PoincareTable, b: PoincareTable) -> tuple[int, int]:
    return max(a.window[0], b.window[0]), min(a.window[1], b.window[1])


def compare_up_to_shift(a: PoincareTable, b: PoincareTable) -> Optional[int]:
    """The s0 with a(m, s2) = b(m, s2 + s0) on the common Maslov window, else None."""
    lo, hi = _overlap(a, b)
    ea = a.restrict(lo, hi).entries
    eb = b.restrict(lo, hi).entries
    if not ea and not eb:
        return 0
    if not ea or not eb or sum(ea.values()) != sum(eb.values()):
        return None
    s0 = min(s for _, s in eb) - min(s for _, s in ea)
    return s0 if {(m, s + s0): v for (m, s), v in ea.items()} == eb else None


def tensor_W(a: PoincareTable, i: int) -> PoincareTable:
    """a tensor (F + F[[1, i]]): dim'(m, s2) = dim(m, s2) + dim(m + 1, s2 + 2i).

    dim'(lo - 1) would need dim(lo - 1), which lies outside the window, so the
    result keeps the window of ``a``.  The top of the window is exact when
    ``a.window[1]`` bounds every state grading, as the default windows do.
    """
    out = dict(a.entries)
    for (m, s2), d in a.entries.items():
        key = (m - 1, s2 - 2 * i)
        out[key] = out.get(key, 0) + d
    lo, hi = a.window
    return PoincareTable(out, a.version, (lo, hi), dict(a.meta)).restrict(lo, hi)


def W_poly(i: int) -> LaurentPoly:
    """Euler characteristic of W(i): 1 - t^(-i)."""
    return LaurentPoly.t(0) - LaurentPoly.t(-2 * i)


def table_hash(t: PoincareTable) -> str:
    return hashlib.sha256(json.dumps(t.to_json(), sort_keys=True).encode()).hexdigest()[:16]


# -- induced maps --------------------------------------------------------------


def homology_basis_data(cx, d: int, s2: int):
    """(basis, index, cycle vectors, boundary pivots) for slice (d, s2)."""
    basis, cols, _ = boundary_columns(cx, d, s2)
    cycles = []
    for combo in kernel(cols):
        cycles.append(combo)
    above = cx.level(d + 1).get(s2, [])
    index = {k: i for i, k in enumerate(basis)}
    bcols = []
    for k in above:
        v = 0
        for t in cx.boundary(k):
            v ^= 1 << index[t]
        bcols.append(v)
    return basis, index, cycles, reduce_columns(bcols)


def _reduce(v: int, pivots: dict[int, int]) -> int:
    while v:
        p = pivots.get(v & -v)
        if p is None:
            return v
        v ^= p
    return v


def induced_rank(f, d: int, s2: int) -> int:
    """Rank of f_* on homology from source bidegree (d, s2)."""
    a, p = f.degree
    src_basis, _, cycles, _ = homology_basis_data(f.source, d, s2)
    tb, tindex, _, bpiv = homology_basis_data(f.target, d + a, s2 + p)
    images = []
    for combo in cycles:
        v = 0
        j = 0
        c = combo
        while c:
            if c & 1:
                for t in f(src_basis[j]):
                    v ^= 1 << tindex[t]
            c >>= 1
            j += 1
        images.append(_reduce(v, bpiv))
    # rank of images modulo boundaries: reduce against boundary pivots then rank
    piv = dict(bpiv)
    r = 0
    for v in images:
        while v:
            low = v & -v
            q = piv.get(low)
            if q is None:
                piv[low] = v
                r += 1
                break
            v ^= q
    return r
