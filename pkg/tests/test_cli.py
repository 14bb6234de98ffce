import json
import subprocess
import sys

import jsonschema
import pytest

from conftest import FIXTURES, RELATIONS
from webrank.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, schema, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    return code, doc


def test_analyze_bol(capsys, schema):
    code, doc = run_json(capsys, schema, "analyze", FIXTURES / "bol.web.json")
    assert code == 0
    assert doc["rank"]["verdict"]["kind"] == "MaxRank"
    assert set(doc["kappa"]["coefficients"]) == {"0"}
    assert doc["invariants"]["L"] == "0"


def test_analyze_rank_two(capsys, schema):
    code, doc = run_json(capsys, schema, "analyze", FIXTURES / "rank2a.web.json")
    assert code == 0
    assert (doc["rank"]["verdict"]["kind"], doc["rank"]["verdict"]["rank"]) == ("ExactRank", 2)
    assert set(doc["invariants"]["MPQ"]) == {"M", "P", "Q"}
    assert all(c["citation"] for c in doc["rank"]["conditions"])


def test_rank_text(capsys):
    code, out, _ = run(capsys, "rank", FIXTURES / "rank1.web.json")
    assert code == 0
    assert out.startswith("rank 1 (4-web rank-one criterion, case c_0 = 0, c_1 != c_2")


def test_crosscheck_text(capsys):
    code, out, _ = run(capsys, "crosscheck", FIXTURES / "rank2a.web.json")
    assert code == 0
    assert "closed forms of the obstruction coefficients: MATCH" in out
    assert "uniform constant ratio: None" in out


def test_invariants_json(capsys, schema):
    code, doc = run_json(capsys, schema, "invariants", FIXTURES / "4pencils.web.json", "--depth", "1")
    assert code == 0
    assert doc["kappa"]["coordinates"] == ["v_2", "v", "u"]
    assert "a_11" not in doc["invariants"]["jets"]


def test_verify_relation(capsys, schema):
    code, doc = run_json(capsys, schema, "verify-relation", FIXTURES / "bol.web.json", RELATIONS / "bol.dilog.relation.json")
    assert code == 0
    assert doc["relation"]["verified"] and doc["relation"]["max_residual"] < 1e-9


def test_verify_relation_failure_exit(capsys):
    code, out, _ = run(capsys, "verify-relation", FIXTURES / "K5.web.json", RELATIONS / "K5.5.printed.relation.json")
    assert code == 1 and out.startswith("NOT verified")


def test_malformed_inputs(capsys, tmp_path):
    bad = tmp_path / "bad.web.json"
    for text in ("not json", '{"label": "x"}', '{"foliations": ["x +"]}', '{"foliations": ["z"]}'):
        bad.write_text(text)
        assert run(capsys, "rank", bad)[0] == 2
    rel = tmp_path / "bad.relation.json"
    rel.write_text('{"terms": [{"foliation": 1}]}')
    assert run(capsys, "verify-relation", FIXTURES / "bol.web.json", rel)[0] == 2


def test_degenerate_web(capsys, tmp_path):
    p = tmp_path / "deg.web.json"
    p.write_text('{"foliations": ["x + y", "2*x + 2*y"]}')
    assert run(capsys, "rank", p)[0] == 3
    p.write_text('{"foliations": ["x + y", "x - y", "x + 2*y", "x - 2*y"]}')
    assert run(capsys, "rank", p)[0] == 3


def test_coordinate_foliations_may_be_listed(capsys, tmp_path):
    p = tmp_path / "w.web.json"
    p.write_text('{"foliations": ["x", "y", "x + y", "x^2 + y^2"]}')
    code, out, _ = run(capsys, "rank", p)
    assert code == 0 and out.startswith("rank 2")


def test_engine_mismatch_exit(capsys, monkeypatch):
    import webrank.cli as cli
    from webrank.classify import EngineMismatch

    def boom(*a, **k):
        raise EngineMismatch("forced")

    monkeypatch.setattr(cli, "classify", boom)
    assert run(capsys, "rank", FIXTURES / "rank2a.web.json")[0] == 4


def test_crosscheck_mismatch_exit(capsys, monkeypatch):
    import webrank.cli as cli

    monkeypatch.setattr(cli, "_mismatch", lambda out: True)
    assert run(capsys, "crosscheck", FIXTURES / "rank2a.web.json")[0] == 4


@pytest.mark.parametrize("engine", ["prolongation", "multibracket"])
def test_single_engine(capsys, engine):
    assert run(capsys, "rank", FIXTURES / "maxrank.web.json", "--engine", engine)[0] == 0


def test_json_is_byte_identical_across_runs():
    cmd = [sys.executable, "-m", "webrank.cli", "analyze", str(FIXTURES / "rank2b.web.json"), "--json"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first


@pytest.mark.slow
def test_crosscheck_five_web_terms(capsys, schema):
    code, doc = run_json(capsys, schema, "crosscheck", FIXTURES / "K5.web.json")
    assert code == 0
    terms = doc["crosscheck"]["appendix_terms"]
    assert all(v["mismatches"] == [] for v in terms["repaired"].values())
    assert "parse_error" in terms["printed"]["j_2"]
    assert terms["printed"]["j_5"]["mismatches"]
