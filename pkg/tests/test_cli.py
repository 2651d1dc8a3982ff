from __future__ import annotations

import json

import pytest

from ghmoy.cli import EXIT_FAIL, EXIT_IO, EXIT_OK, EXIT_PARSE, RunConfig, build_parser, main
from ghmoy.corpus import CORPUS_DIR, theta3, trefoil5
from ghmoy.grid import load_diagram, validate


def path(name: str) -> str:
    return str(CORPUS_DIR / f"{name}.ggd")


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_help_documents_exit_codes(capsys):
    with pytest.raises(SystemExit):
        build_parser().parse_args(["--help"])
    out = capsys.readouterr().out
    for code in (EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_IO):
        assert f"  {code}  " in out
    assert len({EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_IO}) == 4
    assert "GHMOY_THREADS" in out


class TestValidate:
    def test_valid_theta(self, capsys):
        code, out, _ = run(capsys, "validate", path("theta3"))
        assert code == EXIT_OK and "valid" in out

    def test_unbalanced(self, capsys, tmp_path):
        g, _ = theta3(1, 2)
        bad = g.with_weights({g.xs[0].cell: 7})
        f = tmp_path / "bad.ggd"
        f.write_text(bad.dumps())
        code, out, _ = run(capsys, "validate", str(f), "--format", "json")
        assert code == EXIT_FAIL
        rep = json.loads(out)
        assert rep["graph"]["error"] in ("UnbalancedVertex", "InconsistentEdgeWeights")

    def test_unbalanced_vertex_named(self, capsys, tmp_path):
        g, _ = theta3(1, 1)
        # give one whole edge weight 3, leaving both vertices unbalanced
        from ghmoy.graph import recover_graph

        e = recover_graph(g).edges[0]
        bad = g.with_weights({m.cell: 3 for m in e.markings if m.kind == "X"})
        f = tmp_path / "unbalanced.ggd"
        f.write_text(bad.dumps())
        code, out, _ = run(capsys, "validate", str(f))
        assert code == EXIT_FAIL and "UnbalancedVertex" in out

    def test_malformed_json(self, capsys, tmp_path):
        f = tmp_path / "broken.ggd"
        f.write_text('{"n": 2, "markings": [')
        code, _, err = run(capsys, "validate", str(f))
        assert code == EXIT_PARSE and "line" in err

    def test_missing_file(self, capsys):
        code, _, _ = run(capsys, "validate", "/nonexistent/x.ggd")
        assert code == EXIT_IO

    def test_bad_arguments(self, capsys):
        code, _, _ = run(capsys, "homology", path("theta3"), "--cut", "zero")
        assert code == EXIT_PARSE
        code, _, _ = run(capsys, "homology", path("theta3"), "--threads", "0")
        assert code == EXIT_PARSE


class TestHomology:
    def test_unknot_euler(self, capsys):
        code, out, _ = run(capsys, "euler", path("unknot2_vertex"))
        assert code == EXIT_OK and out.strip() == "1"

    def test_trefoil_euler(self, capsys):
        code, out, _ = run(capsys, "euler", path("trefoil5"))
        assert out.strip() == "1 - t^-1 + t^-2"

    def test_json_meta(self, capsys):
        code, out, _ = run(capsys, "homology", path("trefoil5"), "--format", "json")
        js = json.loads(out)
        assert js["meta"]["complete"] is True
        assert set(js["meta"]) >= {"diagram", "cut", "weights", "budget"}
        assert js["entries"] == [[0, -4, 1], [1, -2, 1], [2, 0, 1]]

    def test_minus_budget_zero_is_flagged(self, capsys):
        code, out, _ = run(capsys, "homology", path("unknot2_vertex"), "--version", "minus", "--window", "0", "--format", "json")
        js = json.loads(out)
        assert js["meta"]["complete"] is False and js["meta"]["truncated_below"] == 0

    def test_threads_env_and_flag_give_identical_bytes(self, capsys, monkeypatch):
        monkeypatch.setenv("GHMOY_THREADS", "3")
        _, a, _ = run(capsys, "homology", path("theta4"), "--version", "minus", "--format", "json")
        _, b, _ = run(capsys, "homology", path("theta4"), "--version", "minus", "--format", "json", "--threads", "1")
        assert a == b

    def test_out_file(self, capsys, tmp_path):
        f = tmp_path / "t.json"
        run(capsys, "homology", path("circle2"), "--format", "json", "--out", str(f))
        assert json.loads(f.read_text())["version"] == "hat"

    def test_cut_changes_only_by_shift(self, capsys):
        _, a, _ = run(capsys, "compare", path("theta4"), path("theta4"), "--cut", "1,2")
        assert a.startswith("match")

    def test_compare_no_match(self, capsys):
        code, out, _ = run(capsys, "compare", path("trefoil5"), path("unknot2_vertex"))
        assert code == EXIT_FAIL and out.strip() == "NoMatch"

    def test_graph_command(self, capsys):
        code, out, _ = run(capsys, "graph", path("theta3"))
        assert code == EXIT_OK and json.loads(out)["ok"] is True


class TestMove:
    def test_cyclic(self, capsys, tmp_path):
        f = tmp_path / "c.ggd"
        code, _, _ = run(capsys, "move", path("unknot2_vertex"), "--cyclic", "rows:1", "--out", str(f))
        g = load_diagram(f)
        assert code == EXIT_OK and g.n == 2 and validate(g).ok

    def test_illegal_commutation(self, capsys):
        code, _, err = run(capsys, "move", path("unknot2_vertex"), "--commute", "cols:0")
        assert code == EXIT_FAIL and "CommutationIllegal" in err

    def test_stabilize_then_compare(self, capsys, tmp_path):
        f = tmp_path / "s.ggd"
        col, row = trefoil5().xs[0].cell
        code, _, _ = run(capsys, "move", path("trefoil5"), "--stabilize", f"{col},{row}", "--out", str(f))
        assert code == EXIT_OK
        code, out, _ = run(capsys, "compare", path("trefoil5"), str(f))
        assert code == EXIT_OK and out.startswith("match")

    def test_destabilize_wrong_point(self, capsys):
        code, _, err = run(capsys, "move", path("trefoil5"), "--destabilize", "2,2")
        assert code == EXIT_FAIL and "PatternMismatch" in err


class TestVerify:
    def test_skein_positive(self, capsys):
        code, out, _ = run(
            capsys, "verify", "skein", path("bouquet3"), path("skein_pos_first"), path("skein_pos_second"), "--point", "2,2"
        )
        assert code == EXIT_OK and "PASS" in out

    def test_merge(self, capsys):
        code, _, _ = run(capsys, "verify", "merge", path("theta3"), path("circle2"), "--point", "2,1")
        assert code == EXIT_OK

    def test_contract_wrong_weight(self, capsys):
        code, out, _ = run(
            capsys, "verify", "contract", path("contract_w2"), path("theta3"), "--point", "1,3", "--weight", "1", "--format", "json"
        )
        js = json.loads(out)
        assert code == EXIT_FAIL
        assert any(not c["ok"] and c["witness"] for c in js["checks"])

    def test_scale_and_parallel(self, capsys):
        assert run(capsys, "verify", "scale", path("theta4"), "--factor", "2")[0] == EXIT_OK
        assert run(capsys, "verify", "parallel", path("circle2_w1"), path("parallel2"), "--factor", "2")[0] == EXIT_OK

    def test_destab_mismatch(self, capsys):
        code, _, err = run(capsys, "verify", "destab", path("trefoil5"), path("unknot2_vertex"), "--point", "1,1")
        assert code == EXIT_FAIL and err


def test_run_config_rejects_bad_values():
    with pytest.raises(ValueError):
        RunConfig("homology", window=-1)
    with pytest.raises(ValueError):
        RunConfig("homology", threads=0)
