import json
import random
from pathlib import Path

import pytest

from webrank.cli import load_web
from webrank.ratfield import RatFunc
from webrank.relations import load_relation
from webrank.webcalc import WebDef, WebError, frame

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
RELATIONS = FIXTURES / "relations"
SCHEMA = ROOT / "schema" / "report.schema.json"

X, Y = RatFunc.var("x"), RatFunc.var("y")

D4 = ["4pencils", "maxrank", "rank2a", "rank2b", "rank1", "rank1_c0"]
D5 = ["bol", "K5"]
# the seven webs named in the acceptance list
GOLDEN = ["4pencils", "maxrank", "rank2a", "rank2b", "rank1", "bol", "K5"]


def web(*fols: str, label: str = "") -> WebDef:
    return WebDef.from_strings(list(fols), label)


def fixture_web(name: str) -> WebDef:
    return load_web(FIXTURES / f"{name}.web.json")


def fixture_relation(name: str):
    return load_relation(RELATIONS / f"{name}.relation.json")


def _rand_poly(rng):
    mons = [X, Y, X * Y, X * X, Y * Y]
    p = RatFunc.const(0)
    for m in rng.sample(mons, 3):
        p = p + RatFunc.const(rng.choice([-3, -2, -1, 1, 2, 3])) * m
    return p


def random_frame(seed: int, d: int = 4):
    """Seeded web with small polynomial or rational first integrals."""
    rng = random.Random(seed)
    while True:
        fols = [X, Y]
        for _ in range(d - 2):
            p = _rand_poly(rng)
            if rng.random() < 0.3:
                p = p / (RatFunc.const(rng.randint(1, 3)) + X)
            fols.append(p)
        try:
            return frame(WebDef(tuple(fols), f"random-{seed}"))
        except WebError:
            continue


@pytest.fixture(scope="session")
def frames():
    """Frames of every fixture web, built once."""
    names = ["three_web"] + D4 + D5
    return {n: frame(fixture_web(n)) for n in names}


@pytest.fixture(scope="session")
def schema():
    return json.loads(SCHEMA.read_text())


@pytest.fixture(scope="session")
def abstract_engine():
    """d = 5 obstruction over free jet symbols; about a minute, computed once."""
    from webrank.paperforms import appendix

    return appendix.engine_coefficients_abstract()
