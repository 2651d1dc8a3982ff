"""Command-line front end: ``ghmoy <command> ...``."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .complex import HAT, MINUS, GridComplex
from .graph import GraphError, balance_report, diagram_weights
from .grid import (
    CommutationIllegal,
    DiagramParseError,
    GridDiagram,
    PatternMismatch,
    commute,
    cyclic_permute,
    destabilize,
    load_diagram,
    stabilize,
    validate,
)
from .homology import DEFAULT_BUDGET, PoincareTable, compare_up_to_shift, euler, euler_from_states, homology_dims, maslov_window
from .theorems import (
    HAT_BUDGET,
    LoopEdge,
    PositionMismatch,
    SkeinTriple,
    VerificationReport,
    verify_contract,
    verify_destab,
    verify_merge,
    verify_parallel_power,
    verify_scale,
    verify_skein,
)

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_IO = 0, 1, 2, 3

EPILOG = """exit codes:
  0  success (valid diagram, verification passed)
  1  invalid diagram, failed verification, or an illegal move
  2  malformed input file or bad command-line arguments
  3  file not found or not writable
environment:
  GHMOY_THREADS  default value of --threads
"""


@dataclass
class RunConfig:
    command: str
    paths: list[str] = field(default_factory=list)
    version: str = HAT
    window: Optional[int] = None
    threads: int = 1
    fmt: str = "text"
    cut: tuple[int, int] = (0, 0)
    out: Optional[str] = None

    def __post_init__(self):
        if self.window is not None and self.window < 0:
            raise ValueError("window budget must be >= 0")
        if self.threads < 1:
            raise ValueError("thread count must be >= 1")

    @property
    def budget(self) -> int:
        if self.window is not None:
            return self.window
        return DEFAULT_BUDGET if self.version == MINUS else HAT_BUDGET


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two integers 'A,B', got {text!r}")


def diagram_hash(g: GridDiagram) -> str:
    return hashlib.sha256(g.dumps().encode()).hexdigest()[:16]


def _emit(cfg: RunConfig, payload: dict, text: str) -> None:
    if cfg.fmt == "json":
        out = json.dumps(payload, sort_keys=True, indent=2)
    else:
        out = text
    if cfg.out and cfg.command not in ("move",):
        Path(cfg.out).write_text(out + "\n")
    else:
        print(out)


def default_window(cx: GridComplex, cfg: RunConfig) -> tuple[int, int]:
    if cfg.version == MINUS:
        hi = max(cx.M)
        return (hi - 2 * cfg.budget, hi)
    return maslov_window(cx, cfg.version, cfg.budget)


def compute_table(g: GridDiagram, cfg: RunConfig, window: Optional[tuple[int, int]] = None) -> PoincareTable:
    w = diagram_weights(g)
    cx = GridComplex(g, cfg.version, w, cut=cfg.cut)
    if window is None:
        window = default_window(cx, cfg)
    meta = {
        "diagram": diagram_hash(g),
        "cut": list(cfg.cut),
        "weights": hashlib.sha256(json.dumps(w.to_json(), sort_keys=True).encode()).hexdigest()[:16],
        "budget": cfg.budget,
    }
    t = homology_dims(cx, window=window, threads=cfg.threads, meta=meta)
    # Every reported entry is exact; this flags whether entries are missing.
    if cfg.version == MINUS:
        t.meta["complete"] = False
        t.meta["truncated_below"] = window[0]
    else:
        want = euler_from_states(cx)
        t.meta["complete"] = None if want is None else euler(t) == want
        if not t.meta["complete"]:
            t.meta["truncated_below"] = window[0]
    return t


def table_text(t: PoincareTable) -> str:
    lines = [f"{t.version} homology, Maslov window {t.window[0]}..{t.window[1]}"]
    lines.append("  maslov  2*alexander  dim")
    for (m, s), d in t.entries.items():
        lines.append(f"  {m:6d}  {s:11d}  {d:3d}")
    lines.append(f"euler: {euler(t)}")
    if "truncated_below" in t.meta:
        lines.append(f"note: homology may continue below Maslov {t.meta['truncated_below']}; widen --window")
    return "\n".join(lines)


# -- commands ----------------------------------------------------------------------


def cmd_validate(cfg: RunConfig) -> int:
    g = load_diagram(cfg.paths[0])
    rep = validate(g)
    payload = {"grid": rep.to_json()}
    ok = rep.ok
    if ok:
        bal = balance_report(g)
        payload["graph"] = bal
        ok = bal["ok"]
    lines = [f"{cfg.paths[0]}: {'valid' if ok else 'INVALID'}"]
    for v in rep.violations:
        lines.append(f"  condition ({v.condition}) {v.axis} {v.index}: {v.message}")
    if rep.ok and not payload["graph"]["ok"]:
        lines.append(f"  {payload['graph']['error']}: {payload['graph']['message']}")
    _emit(cfg, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_graph(cfg: RunConfig) -> int:
    g = load_diagram(cfg.paths[0])
    bal = balance_report(g)
    text = json.dumps(bal, sort_keys=True, indent=2)
    _emit(cfg, bal, text)
    return EXIT_OK if bal["ok"] else EXIT_FAIL


def cmd_homology(cfg: RunConfig) -> int:
    t = compute_table(load_diagram(cfg.paths[0]), cfg)
    _emit(cfg, t.to_json(), table_text(t))
    return EXIT_OK


def cmd_euler(cfg: RunConfig) -> int:
    t = compute_table(load_diagram(cfg.paths[0]), cfg)
    p = euler(t)
    _emit(cfg, {"euler": p.to_json(), "window": list(t.window), "version": t.version}, str(p))
    return EXIT_OK


def cmd_compare(cfg: RunConfig) -> int:
    ga, gb = load_diagram(cfg.paths[0]), load_diagram(cfg.paths[1])
    # one common Maslov window, so neither table is cut short where the other is not
    wa = default_window(GridComplex(ga, cfg.version, cut=cfg.cut), cfg)
    wb = default_window(GridComplex(gb, cfg.version, cut=cfg.cut), cfg)
    window = (min(wa[0], wb[0]), max(wa[1], wb[1]))
    a, b = compute_table(ga, cfg, window), compute_table(gb, cfg, window)
    s = compare_up_to_shift(a, b)
    payload = {"match": s is not None, "shift": s}
    _emit(cfg, payload, "NoMatch" if s is None else f"match, s2 shift {s}")
    return EXIT_OK if s is not None else EXIT_FAIL


def cmd_move(cfg: RunConfig, args) -> int:
    g = load_diagram(cfg.paths[0])
    if args.cyclic:
        axis, k = args.cyclic.split(":")
        g = cyclic_permute(g, axis, int(k))
    elif args.commute:
        axis, j = args.commute.split(":")
        g = commute(g, int(j), axis)
    elif args.stabilize:
        g = stabilize(g, args.stabilize)
    elif args.destabilize:
        g = destabilize(g, args.destabilize)
    else:
        raise argparse.ArgumentTypeError("one of --cyclic, --commute, --stabilize, --destabilize is required")
    text = g.dumps()
    if cfg.out:
        Path(cfg.out).write_text(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_verify(cfg: RunConfig, args) -> int:
    ds = [load_diagram(p) for p in cfg.paths]
    kind = args.theorem
    th = cfg.threads
    if kind == "skein":
        rep = verify_skein(SkeinTriple(ds[0], ds[1], ds[2], args.point, args.kind), budget=cfg.budget, threads=th)
    elif kind == "destab":
        rep = verify_destab(ds[0], ds[1], args.point, args.axis, budget=cfg.budget, threads=th)
    elif kind == "merge":
        rep = verify_merge(ds[0], ds[1], args.point, budget=cfg.budget, threads=th)
    elif kind == "contract":
        rep = verify_contract(ds[0], ds[1], args.point, args.weight, args.axis, budget=cfg.budget, threads=th)
    elif kind == "scale":
        rep = verify_scale(ds[0], args.factor, cfg.version, budget=cfg.window, threads=th)
    else:
        rep = verify_parallel_power(ds[0], ds[1], args.factor, cfg.version, budget=cfg.window, threads=th)
    _emit(cfg, rep.to_json(), rep.text())
    return EXIT_OK if rep.summary else EXIT_FAIL


# -- argument parsing -----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--version", choices=[HAT, MINUS], default=HAT, help="complex version (default hat)")
    common.add_argument("--window", type=int, default=None, help="window budget: U-powers below the state gradings")
    common.add_argument("--threads", type=int, default=None, help="worker threads for slice ranks")
    common.add_argument("--format", choices=["json", "text"], default="text", dest="fmt")
    common.add_argument("--cut", type=_pair, default=(0, 0), help="planar cut as ROW,COL")
    common.add_argument("--out", default=None, help="write output to PATH")

    p = argparse.ArgumentParser(
        prog="ghmoy",
        description="Grid homology for MOY graphs from graph grid diagrams.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)
    for name, nargs, help_ in (
        ("validate", 1, "check grid conditions and the balanced coloring"),
        ("graph", 1, "print the recovered graph and weights as JSON"),
        ("homology", 1, "Poincare table and Euler characteristic"),
        ("euler", 1, "Euler characteristic only"),
        ("compare", 2, "compare two tables up to an Alexander shift"),
    ):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("paths", nargs=nargs)
    mv = sub.add_parser("move", parents=[common], help="apply a grid move and write the new diagram")
    mv.add_argument("paths", nargs=1)
    g = mv.add_mutually_exclusive_group(required=True)
    g.add_argument("--cyclic", help="AXIS:K with AXIS rows or cols")
    g.add_argument("--commute", help="AXIS:J, swap line J and J+1")
    g.add_argument("--stabilize", type=_pair, help="COL,ROW of the X to stabilize at")
    g.add_argument("--destabilize", type=_pair, help="COL,ROW lattice point at the block centre")

    ver = sub.add_parser("verify", help="run a theorem verifier")
    vs = ver.add_subparsers(dest="theorem", required=True)
    specs = {
        "skein": ("G FIRST SECOND", 3),
        "destab": ("G G_PRIME", 2),
        "merge": ("G G_PRIME", 2),
        "contract": ("G G_PRIME", 2),
        "scale": ("G", 1),
        "parallel": ("G G_N", 2),
    }
    for name, (meta, nargs) in specs.items():
        sp = vs.add_parser(name, parents=[common])
        sp.add_argument("paths", nargs=nargs, metavar=meta.split()[0] if nargs == 1 else None)
        if name in ("skein", "destab", "merge", "contract"):
            sp.add_argument("--point", type=_pair, required=True, help="lattice point COL,ROW at the block centre")
        if name == "skein":
            sp.add_argument("--kind", choices=["positive", "negative"], default="positive")
        if name in ("destab", "contract"):
            sp.add_argument("--axis", choices=["row", "col"], default="row" if name == "destab" else "col")
        if name == "contract":
            sp.add_argument("--weight", type=int, default=None, help="W(i) weight to test (default: the edge weight)")
        if name in ("scale", "parallel"):
            sp.add_argument("--factor", type=int, required=True)
    return p


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE if e.code else EXIT_OK
    threads = args.threads if args.threads is not None else int(os.environ.get("GHMOY_THREADS", "1"))
    try:
        cfg = RunConfig(args.command, list(args.paths), args.version, args.window, threads, args.fmt, args.cut, args.out)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        if cfg.command == "move":
            return cmd_move(cfg, args)
        if cfg.command == "verify":
            return cmd_verify(cfg, args)
        return {"validate": cmd_validate, "graph": cmd_graph, "homology": cmd_homology, "euler": cmd_euler, "compare": cmd_compare}[cfg.command](cfg)
    except DiagramParseError as e:
        print(f"parse error at line {e.line}, column {e.column}: {e.message}", file=sys.stderr)
        return EXIT_PARSE
    except (FileNotFoundError, IsADirectoryError, PermissionError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (CommutationIllegal, PatternMismatch, PositionMismatch, LoopEdge, GraphError, ValueError, argparse.ArgumentTypeError) as e:
        print(f"{type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_FAIL


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
