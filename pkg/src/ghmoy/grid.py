"""Graph grid diagrams: data model, .ggd parsing, validity, planar realization, grid moves.

Coordinates are (col, row) with row 0 at the bottom.  Markings sit in cells
(drawn at ``(col + 1/2, row + 1/2)``); state points sit on lattice points.
All row/column arithmetic is cyclic modulo ``n``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Optional

O, OSTAR, X = "O", "O*", "X"
KINDS = (O, OSTAR, X)


class DiagramParseError(ValueError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class CommutationIllegal(ValueError):
    def __init__(self, message: str, endpoint_count: int):
        super().__init__(message)
        self.endpoint_count = endpoint_count


class PatternMismatch(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Marking:
    col: int
    row: int
    kind: str
    weight: Optional[int] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown marking kind {self.kind!r}")
        if (self.kind == X) != (self.weight is not None):
            raise ValueError(f"weight must be given exactly for X markings: {self}")

    @property
    def cell(self) -> tuple[int, int]:
        return (self.col, self.row)

    @property
    def is_o(self) -> bool:
        return self.kind != X

    def to_json(self) -> dict:
        d = {"kind": self.kind, "col": self.col, "row": self.row}
        if self.kind == X:
            d["weight"] = self.weight
        return d


@dataclass(frozen=True)
class GridDiagram:
    n: int
    markings: tuple[Marking, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("grid size must be positive")
        object.__setattr__(self, "markings", tuple(sorted(self.markings)))
        cells = [m.cell for m in self.markings]
        if len(set(cells)) != len(cells):
            raise ValueError("two markings share a cell")
        for m in self.markings:
            if not (0 <= m.col < self.n and 0 <= m.row < self.n):
                raise ValueError(f"marking out of range: {m}")

    # -- accessors -------------------------------------------------------

    @property
    def os(self) -> list[Marking]:
        return [m for m in self.markings if m.is_o]

    @property
    def xs(self) -> list[Marking]:
        return [m for m in self.markings if m.kind == X]

    def at(self, col: int, row: int) -> Optional[Marking]:
        col, row = col % self.n, row % self.n
        for m in self.markings:
            if m.col == col and m.row == row:
                return m
        return None

    def o_in_col(self, col: int) -> Marking:
        (m,) = [m for m in self.markings if m.is_o and m.col == col]
        return m

    def o_in_row(self, row: int) -> Marking:
        (m,) = [m for m in self.markings if m.is_o and m.row == row]
        return m

    def xs_in_col(self, col: int) -> list[Marking]:
        return [m for m in self.markings if m.kind == X and m.col == col]

    def xs_in_row(self, row: int) -> list[Marking]:
        return [m for m in self.markings if m.kind == X and m.row == row]

    def with_weights(self, weights: dict[tuple[int, int], int]) -> "GridDiagram":
        """Copy with X weights replaced by ``weights[(col, row)]`` where given."""
        return GridDiagram(
            self.n,
            tuple(
                Marking(m.col, m.row, m.kind, weights.get(m.cell, m.weight)) if m.kind == X else m
                for m in self.markings
            ),
        )

    def scaled(self, factor: int) -> "GridDiagram":
        return GridDiagram(
            self.n,
            tuple(
                Marking(m.col, m.row, X, m.weight * factor) if m.kind == X else m
                for m in self.markings
            ),
        )

    def to_json(self) -> dict:
        return {"n": self.n, "markings": [m.to_json() for m in self.markings]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, sort_keys=True) + "\n"

    def ascii(self) -> str:
        rows = []
        for r in reversed(range(self.n)):
            line = []
            for c in range(self.n):
                m = self.at(c, r)
                line.append("." if m is None else ("*" if m.kind == OSTAR else m.kind.lower()))
            rows.append(" ".join(line))
        return "\n".join(rows)


# -- parsing -----------------------------------------------------------------


def parse_diagram(text: str) -> GridDiagram:
    """Parse .ggd content, JSON or the plain ``grid N`` text form.

    Grid conditions are not checked here; see :func:`validate`.
    """
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_json(text)
    return _parse_plain(text)


def _check_marking(n, kind, col, row, weight, seen, line, column) -> Marking:
    if kind == X and weight is None:
        raise DiagramParseError("X marking without weight", line, column)
    if kind != X and weight is not None:
        raise DiagramParseError(f"{kind} marking must not carry a weight", line, column)
    if not (0 <= col < n and 0 <= row < n):
        raise DiagramParseError(f"coordinate ({col},{row}) outside a {n}x{n} grid", line, column)
    if (col, row) in seen:
        raise DiagramParseError(f"duplicate cell ({col},{row})", line, column)
    seen.add((col, row))
    return Marking(col, row, kind, weight)


def _parse_json(text: str) -> GridDiagram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise DiagramParseError(e.msg, e.lineno, e.colno) from None
    if not isinstance(data, dict) or "n" not in data or "markings" not in data:
        raise DiagramParseError("expected an object with 'n' and 'markings'", 1, 1)
    n = data["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise DiagramParseError("'n' must be a positive integer", 1, 1)
    seen: set = set()
    out = []
    for i, rec in enumerate(data["markings"]):
        where = (0, i)  # JSON records are located by index, not line
        if not isinstance(rec, dict):
            raise DiagramParseError(f"marking #{i} is not an object", *where)
        kind = rec.get("kind")
        if kind not in KINDS:
            raise DiagramParseError(f"marking #{i}: bad kind {kind!r}", *where)
        try:
            col, row = int(rec["col"]), int(rec["row"])
        except (KeyError, TypeError, ValueError):
            raise DiagramParseError(f"marking #{i}: missing or bad col/row", *where) from None
        weight = rec.get("weight")
        if weight is not None and (not isinstance(weight, int) or isinstance(weight, bool)):
            raise DiagramParseError(f"marking #{i}: weight must be an integer", *where)
        out.append(_check_marking(n, kind, col, row, weight, seen, *where))
    return GridDiagram(n, tuple(out))


def _parse_plain(text: str) -> GridDiagram:
    n = None
    seen: set = set()
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        col0 = len(line) - len(line.lstrip()) + 1
        tok = line.split()
        if n is None:
            if len(tok) != 2 or tok[0].lower() != "grid" or not tok[1].isdigit() or int(tok[1]) < 1:
                raise DiagramParseError("expected header 'grid N'", lineno, col0)
            n = int(tok[1])
            continue
        head = tok[0].lower()
        kind = {"o": O, "o*": OSTAR, "x": X}.get(head)
        if kind is None:
            raise DiagramParseError(f"unknown marking {tok[0]!r}", lineno, col0)
        want = 4 if kind == X else 3
        if len(tok) != want:
            if kind == X and len(tok) == 3:
                raise DiagramParseError("X marking without weight", lineno, col0)
            raise DiagramParseError(f"expected {want} fields, got {len(tok)}", lineno, col0)
        try:
            nums = [int(t) for t in tok[1:]]
        except ValueError:
            raise DiagramParseError("non-integer field", lineno, col0) from None
        weight = nums[2] if kind == X else None
        out.append(_check_marking(n, kind, nums[0], nums[1], weight, seen, lineno, col0))
    if n is None:
        raise DiagramParseError("empty input", 1, 1)
    return GridDiagram(n, tuple(out))


def load_diagram(path) -> GridDiagram:
    with open(path, encoding="utf-8") as f:
        return parse_diagram(f.read())


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    condition: str  # "i", "ii" or "iii"
    axis: str  # "row", "col" or "cell"
    index: tuple[int, ...]
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "valid": self.ok,
            "violations": [
                {"condition": v.condition, "axis": v.axis, "index": list(v.index), "message": v.message}
                for v in self.violations
            ],
        }


def validate(g: GridDiagram) -> ValidationReport:
    report = ValidationReport()
    for axis in ("row", "col"):
        for k in range(g.n):
            ms = [m for m in g.markings if (m.row if axis == "row" else m.col) == k]
            n_o = sum(m.is_o for m in ms)
            n_x = sum(m.kind == X for m in ms)
            if n_o != 1:
                report.violations.append(Violation("i", axis, (k,), f"{axis} {k} has {n_o} O/O* markings"))
            if n_x < 1:
                report.violations.append(Violation("ii", axis, (k,), f"{axis} {k} has no X marking"))
    # Condition (iii) is structural: cells are unique by construction, so an O
    # and an X can never share one.  Kept for report completeness.
    return report


def require_valid(g: GridDiagram) -> None:
    rep = validate(g)
    if not rep.ok:
        raise ValueError("; ".join(v.message for v in rep.violations))


# -- planar realization ------------------------------------------------------


@dataclass(frozen=True)
class PlanarRealization:
    """The toroidal diagram cut open along row line ``cut[0]`` and column line ``cut[1]``.

    Coordinates are stored doubled so that comparisons stay in integers:
    lattice point ``k`` becomes ``2k``, cell centre ``k + 1/2`` becomes ``2k + 1``.
    """

    diagram: GridDiagram
    cut: tuple[int, int] = (0, 0)

    def col(self, c: int) -> int:
        return (c - self.cut[1]) % self.diagram.n

    def row(self, r: int) -> int:
        return (r - self.cut[0]) % self.diagram.n

    def marking_point2(self, m: Marking) -> tuple[int, int]:
        return (2 * self.col(m.col) + 1, 2 * self.row(m.row) + 1)

    def marking_point(self, m: Marking) -> tuple[float, float]:
        return (self.col(m.col) + 0.5, self.row(m.row) + 0.5)

    def state_points2(self, perm: tuple[int, ...]) -> list[tuple[int, int]]:
        return [(2 * self.col(c), 2 * self.row(r)) for r, c in enumerate(perm)]

    def points(self, kind: str) -> set[tuple[float, float]]:
        return {self.marking_point(m) for m in self.diagram.markings if m.kind == kind}


def planar_realization(g: GridDiagram, cut: tuple[int, int] = (0, 0)) -> PlanarRealization:
    return PlanarRealization(g, (cut[0] % g.n, cut[1] % g.n))


# -- grid moves --------------------------------------------------------------


def cyclic_permute(g: GridDiagram, axis: str, k: int) -> GridDiagram:
    """Move every row (``axis="rows"``) or column up/right by ``k``, cyclically."""
    if axis not in ("rows", "cols"):
        raise ValueError("axis must be 'rows' or 'cols'")
    out = []
    for m in g.markings:
        if axis == "rows":
            out.append(Marking(m.col, (m.row + k) % g.n, m.kind, m.weight))
        else:
            out.append(Marking((m.col + k) % g.n, m.row, m.kind, m.weight))
    return GridDiagram(g.n, tuple(out))


def _interleaving(n: int, first: Iterable[int], second: Iterable[int]) -> int:
    """Number of label changes going once around the circle.

    Two marking sets can be covered by two complementary arcs exactly when
    this is 2, which is when the projected endpoints are precisely two points.
    """
    labels = {}
    for r in first:
        labels[r] = 0
    for r in second:
        labels[r] = 1
    seq = [labels[r] for r in sorted(labels)]
    return sum(seq[i] != seq[i - 1] for i in range(len(seq)))


def commutation_endpoints(g: GridDiagram, j: int, axis: str = "cols") -> int:
    n = g.n
    a, b = j % n, (j + 1) % n
    if axis == "cols":
        first = [m.row for m in g.markings if m.col == a]
        second = [m.row for m in g.markings if m.col == b]
    else:
        first = [m.col for m in g.markings if m.row == a]
        second = [m.col for m in g.markings if m.row == b]
    return _interleaving(n, first, second)


def commute(g: GridDiagram, j: int, axis: str = "cols") -> GridDiagram:
    """Swap adjacent columns (or rows) ``j`` and ``j+1`` when commutation' is legal."""
    n = g.n
    a, b = j % n, (j + 1) % n
    ends = commutation_endpoints(g, j, axis)
    if ends != 2:
        raise CommutationIllegal(
            f"{axis[:-1]}s {a},{b}: markings interleave, {ends} projected endpoints", ends
        )
    swap = {a: b, b: a}
    out = []
    for m in g.markings:
        if axis == "cols":
            out.append(Marking(swap.get(m.col, m.col), m.row, m.kind, m.weight))
        else:
            out.append(Marking(m.col, swap.get(m.row, m.row), m.kind, m.weight))
    return GridDiagram(n, tuple(out))


def commute_columns(g: GridDiagram, j: int) -> GridDiagram:
    return commute(g, j, "cols")


def commute_rows(g: GridDiagram, j: int) -> GridDiagram:
    return commute(g, j, "rows")


def _insert_line(k: int, at: int) -> int:
    """Index of an old cell after inserting a new line of cells at position ``at``."""
    return k if k < at else k + 1


def expand_block(
    g: GridDiagram,
    x_cell: tuple[int, int],
    a_kind: str = O,
    new_x_weight: Optional[int] = None,
    old_x_weight: Optional[int] = None,
    sw_weight: Optional[int] = None,
    move_col: Iterable[tuple[int, int]] = (),
    move_row: Iterable[tuple[int, int]] = (),
) -> GridDiagram:
    """Insert a row and column next to the X at ``x_cell`` and build the 2x2 block

        X_new  A
        (SW)   X_old

    around the new lattice point ``c = (a+1, b+1)``.  With defaults this is
    stabilization'.  ``move_col`` lists X cells of column ``a`` that move to the
    new column (they become A's other column markings); ``move_row`` lists X
    cells of row ``b`` that move to the new row.  ``sw_weight`` puts a further X
    in the south-west cell.
    """
    a, b = x_cell
    xm = g.at(a, b)
    if xm is None or xm.kind != X:
        raise PatternMismatch(f"no X marking at {x_cell}")
    move_col, move_row = set(move_col), set(move_row)
    for c in move_col:
        if c[0] != a or c == x_cell or g.at(*c) is None or g.at(*c).kind != X:
            raise PatternMismatch(f"{c} is not another X in column {a}")
    for c in move_row:
        if c[1] != b or c == x_cell or g.at(*c) is None or g.at(*c).kind != X:
            raise PatternMismatch(f"{c} is not another X in row {b}")
    w_old = xm.weight if old_x_weight is None else old_x_weight
    w_new = xm.weight if new_x_weight is None else new_x_weight
    out = []
    for m in g.markings:
        if m.cell == x_cell:
            continue
        col = _insert_line(m.col, a + 1)
        row = _insert_line(m.row, b + 1)
        if m.cell in move_col:
            col = a + 1
        if m.cell in move_row:
            row = b + 1
        out.append(Marking(col, row, m.kind, m.weight))
    out.append(Marking(a + 1, b, X, w_old))
    out.append(Marking(a + 1, b + 1, a_kind, None))
    out.append(Marking(a, b + 1, X, w_new))
    if sw_weight is not None:
        out.append(Marking(a, b, X, sw_weight))
    return GridDiagram(g.n + 1, tuple(out))


def stabilize(g: GridDiagram, x: tuple[int, int]) -> GridDiagram:
    """Stabilization' at the X marking in cell ``x``.

    The returned diagram carries its distinguished lattice point at
    ``(x[0] + 1, x[1] + 1)``.
    """
    return expand_block(g, x)


def block_cells(n: int, c: tuple[int, int]) -> dict[str, tuple[int, int]]:
    p, q = c
    return {
        "NW": ((p - 1) % n, q % n),
        "NE": (p % n, q % n),
        "SW": ((p - 1) % n, (q - 1) % n),
        "SE": (p % n, (q - 1) % n),
    }


def collapse(g: GridDiagram, c: tuple[int, int], merged: Optional[Marking] = None) -> GridDiagram:
    """Delete the row line and column line through lattice point ``c``.

    The four block cells around ``c`` merge into one cell at ``(p-1, q-1)``
    whose marking is ``merged`` (a Marking whose coordinates are ignored), or
    none.  Block cells must not wrap: ``1 <= p, q <= n-1``.
    """
    n = g.n
    p, q = c
    if not (1 <= p <= n - 1 and 1 <= q <= n - 1):
        raise PatternMismatch(f"block at {c} wraps around the grid edge")
    block = set(block_cells(n, c).values())
    out = []
    for m in g.markings:
        if m.cell in block:
            continue
        col = m.col if m.col < p else m.col - 1
        row = m.row if m.row < q else m.row - 1
        out.append(Marking(col, row, m.kind, m.weight))
    if merged is not None:
        out.append(Marking(p - 1, q - 1, merged.kind, merged.weight))
    return GridDiagram(n - 1, tuple(out))


def destabilize(g: GridDiagram, c: tuple[int, int]) -> GridDiagram:
    """Inverse of stabilization': ``c`` is the lattice point at the centre of the block."""
    blk = {k: g.at(*v) for k, v in block_cells(g.n, c).items()}
    nw, ne, sw, se = blk["NW"], blk["NE"], blk["SW"], blk["SE"]
    ok = (
        nw is not None and nw.kind == X
        and ne is not None and ne.kind == O
        and se is not None and se.kind == X
        and sw is None
        and len(g.xs_in_row(ne.row)) == 1
        and len(g.xs_in_col(ne.col)) == 1
    )
    if not ok:
        raise PatternMismatch(f"block at {c} is not a stabilization' pattern")
    return collapse(g, c, Marking(0, 0, X, se.weight))
