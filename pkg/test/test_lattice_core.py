import numpy as np
import pytest
from hypothesis import given, settings

from conftest import posets
from src.distributive import downset_lattice
from src.errors import DuplicateLabel, InvariantViolated, NotACoverChain, NotALattice, NotASublattice
from src.lattice_core import (
    adjoin_relative_complement,
    chain,
    dual,
    glued_sum,
    heights,
    insert_elements,
    irreducibility,
    is_sublattice,
    lattice_from_covers,
    lattice_from_poset,
    length,
    relabel,
    remove_element,
    sublattice,
)
from src.poset_core import Poset, antichain_poset, find_isomorphism


def test_operation_tables_of_n5(n5):
    a, b, c = (n5.index(x) for x in "abc")
    assert n5.label(int(n5.join[a, c])) == "1"
    assert n5.label(int(n5.meet[b, c])) == "0"
    assert int(n5.join[a, b]) == b
    assert n5.label(n5.bottom) == "0" and n5.label(n5.top) == "1"


def test_non_lattices_are_rejected():
    with pytest.raises(NotALattice):
        lattice_from_poset(antichain_poset(2))
    with pytest.raises(NotALattice):
        lattice_from_poset(Poset(np.zeros((0, 0), dtype=bool)))
    with pytest.raises(NotALattice):
        # two maximal elements above a common bottom
        lattice_from_covers(["0", "x", "y"], [("0", "x"), ("0", "y")])


def test_dual_swaps_the_operations(n5):
    d = dual(n5)
    assert d.bottom == n5.top and d.top == n5.bottom
    assert np.array_equal(d.join, n5.meet)
    assert irreducibility(d, n5.index("a")) == tuple(reversed(irreducibility(n5, n5.index("a"))))


def test_glued_sum_of_chains_is_a_chain():
    glued, emb0, emb1 = glued_sum(chain(3), chain(3))
    assert glued.n == 5
    assert length(glued) == 4
    assert emb1[0] == emb0[2]
    assert glued.labels[emb0[2]] == "2"
    assert find_isomorphism(glued.poset, chain(5).poset) is not None


def test_relative_complement_turns_c3_into_a_square(c3):
    square = adjoin_relative_complement(c3, 0, 1, 2, "u")
    u = square.index("u")
    assert square.n == 4 and u == 3
    assert int(square.meet[u, 1]) == 0 and int(square.join[u, 1]) == 2
    assert square.is_cover(0, u) and square.is_cover(u, 2)


def test_relative_complement_preconditions(c3):
    with pytest.raises(NotACoverChain):
        adjoin_relative_complement(chain(4), 0, 1, 3)
    with pytest.raises(DuplicateLabel):
        adjoin_relative_complement(c3, 0, 1, 2, "1")


def test_insert_elements_places_new_covers(c3):
    extended = insert_elements(c3, [("s", ["0"], ["2"])])
    s = extended.index("s")
    assert extended.is_cover(0, s) and extended.is_cover(s, 2)
    assert int(extended.join[s, 1]) == 2
    with pytest.raises(InvariantViolated):
        insert_elements(c3, [("s", ["0", "1"], ["2"])])


def test_remove_element_and_sublattices(m3, b2):
    square = remove_element(m3, m3.index("z"))
    assert find_isomorphism(square.poset, b2.poset) is not None
    assert not is_sublattice(b2, [0, 1, 2])
    with pytest.raises(NotASublattice):
        sublattice(b2, [b2.index("x"), b2.index("y")])


def test_length_heights_and_chains(n5):
    assert length(n5) == 3
    assert heights(n5)[n5.index("b")] == 2
    assert [n5.label(x) for x in n5.maximal_chain(n5.bottom, n5.top)] == ["0", "a", "b", "1"]
    assert irreducibility(n5, n5.index("c")) == (True, True)
    assert irreducibility(n5, n5.top) == (False, False)


def test_relabel_keeps_tables(c3):
    renamed = relabel(c3, ["lo", "mid", "hi"])
    assert renamed.labels == ("lo", "mid", "hi")
    assert np.array_equal(renamed.join, c3.join)


@settings(max_examples=40, deadline=None)
@given(posets(max_size=4))
def test_downset_lattices_satisfy_absorption(P):
    L = downset_lattice(P).lattice
    J, M = L.join, L.meet
    for x in range(L.n):
        assert np.array_equal(J[x][M[x]], np.full(L.n, x))
        assert np.array_equal(M[x][J[x]], np.full(L.n, x))
