import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).resolve().parent.parent))

from src.lattice_core import chain, lattice_from_covers
from src.poset_core import antichain_poset, chain_poset, poset_from_relations

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture(autouse=True)
def _no_checkpoints(monkeypatch):
    monkeypatch.setenv("PRINCREP_CACHE_DIR", "")
    from src.config import load_settings

    load_settings.cache_clear()
    yield
    load_settings.cache_clear()


@pytest.fixture
def data_dir():
    return DATA_DIR


@pytest.fixture
def c3():
    return chain(3)


@pytest.fixture
def c5():
    return chain(5)


@pytest.fixture
def b2():
    return lattice_from_covers(["0", "x", "y", "1"], [("0", "x"), ("0", "y"), ("x", "1"), ("y", "1")])


@pytest.fixture
def m3():
    return lattice_from_covers(
        ["0", "x", "y", "z", "1"],
        [("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")],
    )


@pytest.fixture
def n5():
    return lattice_from_covers(
        ["0", "a", "b", "c", "1"],
        [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")],
    )


@pytest.fixture
def grid():
    """The 3x3 grid C3 x C3, elements ij."""
    labels = [f"{i}{j}" for i in range(3) for j in range(3)]
    covers = []
    for i in range(3):
        for j in range(3):
            if i < 2:
                covers.append((f"{i}{j}", f"{i + 1}{j}"))
            if j < 2:
                covers.append((f"{i}{j}", f"{i}{j + 1}"))
    return lattice_from_covers(labels, covers)


@pytest.fixture
def two_chains():
    """Ji of the 3x3 grid: two disjoint 2-element chains."""
    return poset_from_relations(4, [(0, 1), (2, 3)], ["x1", "x2", "y1", "y2"])


@pytest.fixture
def v_poset():
    return poset_from_relations(3, [(0, 1), (0, 2)], ["r", "p0", "p1"])


@pytest.fixture
def antichain3():
    return antichain_poset(3).relabel(["p", "q", "r"])


@pytest.fixture
def chain2():
    return chain_poset(2).relabel(["p", "q"])


@st.composite
def posets(draw, max_size=5):
    """Random naturally labelled posets."""
    n = draw(st.integers(min_value=0, max_value=max_size))
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(slots), unique=True)) if slots else []
    return poset_from_relations(n, chosen)
