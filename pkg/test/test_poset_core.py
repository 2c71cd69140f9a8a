import numpy as np
import pytest
from hypothesis import given, settings

from conftest import posets
from src.errors import CycleDetected, DuplicateLabel, InvariantViolated
from src.poset_core import (
    Poset,
    all_posets,
    antichain_poset,
    chain_poset,
    convexity_witness,
    downset,
    find_isomorphism,
    free_union,
    is_downset,
    linear_extension,
    maximal_elements,
    minimal_elements,
    poset_from_relations,
    subposet,
    unique_labels,
    upset,
)


def test_relations_are_closed_transitively():
    P = chain_poset(3)
    assert P.lt[0, 2]
    assert P.covers == [(0, 1), (1, 2)]
    assert P.less(0, 2) and not P.less(2, 0)
    assert P.heights == (0, 1, 2)
    assert P.depths == (2, 1, 0)


def test_cycle_is_rejected():
    with pytest.raises(CycleDetected):
        poset_from_relations(3, [(0, 1), (1, 2), (2, 0)])
    with pytest.raises(CycleDetected):
        poset_from_relations(2, [(1, 1)])


def test_duplicate_label_is_rejected():
    with pytest.raises(DuplicateLabel):
        Poset(np.zeros((2, 2), dtype=bool), ["a", "a"])


def test_non_transitive_matrix_is_rejected():
    lt = np.zeros((3, 3), dtype=bool)
    lt[0, 1] = lt[1, 2] = True
    with pytest.raises(InvariantViolated):
        Poset(lt)


def test_extremal_elements_and_shadows(v_poset):
    r, p0, p1 = (v_poset.index(x) for x in ("r", "p0", "p1"))
    assert maximal_elements(v_poset) == {p0, p1}
    assert minimal_elements(v_poset) == {r}
    assert downset(v_poset, p0) == {r, p0}
    assert upset(v_poset, r) == {r, p0, p1}
    assert is_downset(v_poset, {r, p1})
    assert not is_downset(v_poset, {p1})


def test_convexity_witness():
    P = chain_poset(3)
    assert convexity_witness(P, [0, 2]) == (0, 1, 2)
    assert convexity_witness(P, [0, 1]) is None


def test_free_union_keeps_both_sides_apart(chain2):
    U = free_union(chain2, chain2)
    assert U.n == 4
    assert U.labels == ("p", "q", "p'", "q'")
    assert not U.lt[:2, 2:].any() and not U.lt[2:, :2].any()
    assert subposet(U, [2, 3]).lt[0, 1]


def test_unique_labels_appends_suffix():
    assert unique_labels(["a", "a'"], ["a", "b"]) == ["a''", "b"]


def test_isomorphism_found_and_respected(v_poset):
    shuffled = poset_from_relations(3, [(2, 0), (2, 1)], ["x", "y", "z"])
    iso = find_isomorphism(v_poset, shuffled)
    assert iso is not None
    assert iso.respects(v_poset, shuffled)
    assert iso(v_poset.index("r")) == 2


def test_v_is_not_its_dual(v_poset):
    wedge = Poset(v_poset.lt.T, v_poset.labels)
    assert find_isomorphism(v_poset, wedge) is None
    assert find_isomorphism(antichain_poset(3), chain_poset(3)) is None


def test_poset_counts_up_to_four():
    assert [sum(1 for _ in all_posets(n)) for n in range(5)] == [1, 1, 2, 5, 16]


@settings(max_examples=60, deadline=None)
@given(posets())
def test_linear_extension_refines_the_order(P):
    order = linear_extension(P)
    position = {x: k for k, x in enumerate(order)}
    assert sorted(order) == list(range(P.n))
    assert all(position[x] < position[y] for x, y in P.relation_pairs())
    assert linear_extension(P) == order


@settings(max_examples=40, deadline=None)
@given(posets(max_size=4))
def test_isomorphic_to_a_relabelled_copy(P):
    perm = list(reversed(range(P.n)))
    inverse = np.argsort(perm)
    copy = Poset(P.lt[np.ix_(inverse, inverse)])
    iso = find_isomorphism(P, copy)
    assert iso is not None and iso.respects(P, copy)
