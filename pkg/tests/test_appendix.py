"""Typeset d = 5 coefficient polynomials against the engine over free jets."""

import pytest

from conftest import fixture_web, random_frame
from webrank.classify import engine_coefficients
from webrank.expr import ExprError
from webrank.paperforms import appendix
from webrank.webcalc import frame

pytestmark = pytest.mark.slow

TERM_COUNTS = {1: 44, 2: 58, 3: 28, 4: 103, 5: 79}


def _reading(block, row):
    return next(r for r in appendix.READINGS if (r.block, r.row) == (block, row))


@pytest.mark.parametrize("n", range(1, 6))
def test_repaired_blocks_match_engine_termwise(abstract_engine, n):
    diffs = appendix.term_diff(n)
    assert len(diffs) == TERM_COUNTS[n]
    assert [d.as_dict() for d in diffs if not d.match] == []


@pytest.mark.parametrize("block,row,monomial", [(2, 64, "a_1*a_22"), (5, 360, "K*b_11")])
def test_rejected_readings_are_localized(abstract_engine, block, row, monomial):
    r = _reading(block, row)
    bad = appendix.term_diff(block, choice={r: r.alternatives[0]}, only_mismatch=True)
    assert bad, "alternative reading should not match"
    assert any(d.monomial == monomial and row in list(d.rows) for d in bad)


@pytest.mark.parametrize("n", [2, 3])
def test_typeset_blocks_that_do_not_parse(n):
    with pytest.raises(ExprError):
        appendix.term_diff(n, repaired=False)


def test_typeset_j5_mismatches(abstract_engine):
    bad = appendix.term_diff(5, repaired=False, only_mismatch=True)
    assert sorted(d.monomial for d in bad) == sorted(["K*b_11", "K*b_2^2", "K^2*b_11*b_2^2"])
    # every mismatch is traced to candidate rows that include the damaged one
    assert all(360 in d.rows for d in bad)


@pytest.mark.parametrize("n", [1, 4])
def test_typeset_blocks_that_hold(abstract_engine, n):
    assert appendix.term_diff(n, repaired=False, only_mismatch=True) == []


@pytest.mark.parametrize("name", ["bol", "K5"])
def test_closed_forms_vanish_on_maximum_rank_fixtures(name):
    fr = frame(fixture_web(name))
    rows = appendix.concrete_check(fr, engine_coefficients(fr))
    assert all(r["applicable"] and r["match"] for r in rows)


def test_closed_forms_match_engine_on_random_web():
    fr = random_frame(0, 5)
    rows = appendix.concrete_check(fr, engine_coefficients(fr))
    assert all(r["match"] for r in rows)


def test_typeset_forms_report_discrepancies_on_random_web():
    fr = random_frame(0, 5)
    rows = appendix.concrete_check(fr, engine_coefficients(fr), printed=True)
    bad = {r["coefficient"] for r in rows if not r["match"]}
    assert {"v_2", "w", "u", "v"} <= bad
    assert all(r.get("reason") or r.get("residual") for r in rows if not r["match"])
