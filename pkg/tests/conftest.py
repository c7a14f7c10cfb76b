from pathlib import Path

import pytest

from drtool import build_complex, build_lot

FIXTURES = Path(__file__).parent / "fixtures"


def fixture_text(name):
    return (FIXTURES / name).read_text(encoding="utf-8")


@pytest.fixture
def fixtures_dir():
    return FIXTURES


def make_torus():
    return build_complex(
        edges=[("a", "*", "*"), ("b", "*", "*")],
        cells=[("r1", "a b a- b-")],
        vertices=["*"],
    )


def make_m2():
    return build_complex(
        edges=[("a", "*", "*")], cells=[("r1", "a"), ("r2", "a")], vertices=["*"]
    )


def make_trefoil():
    return build_lot("abc", [("e1", "a", "b", "c"), ("e2", "b", "c", "a")])


def make_w5():
    return build_lot(
        "abcde",
        [
            ("e1", "a", "b", "c"),
            ("e2", "b", "c", "a"),
            ("e3", "c", "d", "e"),
            ("e4", "d", "e", "b"),
        ],
    )


def make_chain6():
    return build_lot(
        "abcdef",
        [
            ("e1", "a", "b", "c"),
            ("e2", "b", "c", "a"),
            ("e3", "c", "d", "e"),
            ("e4", "d", "e", "f"),
            ("e5", "e", "f", "d"),
        ],
    )


@pytest.fixture
def torus():
    return make_torus()


@pytest.fixture
def m2():
    return make_m2()


@pytest.fixture
def trefoil():
    return make_trefoil()


@pytest.fixture
def w5():
    return make_w5()


@pytest.fixture
def chain6():
    return make_chain6()
