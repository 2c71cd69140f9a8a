import pytest
from hypothesis import given, settings

from conftest import posets
from src.distributive import (
    as_distributive,
    corr_dual_atoms_maximal,
    downset_lattice,
    dual_atoms,
    enumerate_downsets,
    is_distributive,
    join_irreducible_elements,
    join_irreducibles,
)
from src.errors import MalformedInput
from src.poset_core import antichain_poset, chain_poset, find_isomorphism, maximal_elements


def test_downsets_of_an_antichain_form_a_cube():
    D = downset_lattice(antichain_poset(3))
    assert D.lattice.n == 8
    assert len(dual_atoms(D)) == 3
    assert D.downsets[0] == 0 and D.downsets[-1] == 0b111


def test_downsets_of_two_chains_form_the_grid(two_chains, grid):
    D = downset_lattice(two_chains)
    assert D.lattice.n == 9
    assert find_isomorphism(D.lattice.poset, grid.poset) is not None
    assert find_isomorphism(join_irreducibles(grid), two_chains) is not None


def test_enumerate_downsets_of_a_chain():
    assert enumerate_downsets(chain_poset(3)) == [0b000, 0b001, 0b011, 0b111]


def test_distributivity(n5, m3, b2):
    assert is_distributive(b2)
    assert not is_distributive(n5)
    assert not is_distributive(m3)
    with pytest.raises(MalformedInput):
        as_distributive(m3)


def test_as_distributive_recovers_the_generators(grid):
    D = as_distributive(grid)
    assert D.generators.n == 4
    assert len(set(D.downsets)) == 9


def test_dual_atoms_match_maximal_join_irreducibles(v_poset):
    D = downset_lattice(v_poset)
    corr = corr_dual_atoms_maximal(D)
    assert len(corr.forward) == 2
    assert set(corr.backward) == set(corr.forward.values())


@settings(max_examples=50, deadline=None)
@given(posets())
def test_birkhoff_roundtrip(P):
    D = downset_lattice(P)
    assert is_distributive(D.lattice)
    assert find_isomorphism(join_irreducibles(D), P) is not None
    assert len(join_irreducible_elements(D)) == P.n
    if P.n:
        assert len(dual_atoms(D)) == len(maximal_elements(P))
