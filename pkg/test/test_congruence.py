import itertools

import pytest
from hypothesis import given, settings

from conftest import posets
from src.congruence import (
    Partition,
    all_congruences,
    brute_force_congruences,
    brute_force_principal,
    con_structure,
    congruence_join,
    generate_congruence,
    is_congruence,
    is_minimal_representation,
    monotone_under_embedding,
    one,
    principal_congruence,
    principal_set,
    restriction,
    set_partitions,
    technical_check,
    zero,
)
from src.distributive import downset_lattice
from src.errors import BlocksNotIntervals, HomeMismatch, OracleTooLarge
from src.lattice_core import chain, glued_sum, lattice_from_covers
from src.poset_core import all_posets, antichain_poset


def test_principal_congruence_of_n5(n5):
    a, b, c = (n5.index(x) for x in "abc")
    ab = principal_congruence(n5, a, b)
    assert ab.describe() == [["a", "b"]]
    assert principal_congruence(n5, n5.bottom, c).describe() == [["0", "c"], ["a", "b", "1"]]
    assert ab <= principal_congruence(n5, n5.bottom, a)


def test_m3_is_simple(m3):
    for x, y in m3.covers:
        assert principal_congruence(m3, x, y).is_one()
    assert len(all_congruences(m3)) == 2


def test_chain_congruences_form_a_boolean_lattice(c5):
    s = con_structure(c5)
    assert len(s.ji) == 4
    assert s.ji_poset.lt.sum() == 0
    assert len(all_congruences(c5)) == 16
    assert s.mask(0, 2) == s.down[0] | s.down[1]
    assert not s.is_join_irreducible(s.mask(0, 2))


def test_join_and_bounds(c3):
    lower = principal_congruence(c3, 0, 1)
    upper = principal_congruence(c3, 1, 2)
    assert congruence_join(c3, lower, upper) == one(c3)
    assert zero(c3) < lower
    assert zero(c3).is_zero() and not lower.is_zero()
    assert generate_congruence(c3, [(0, 1), (1, 2)]).is_one()


def test_congruences_of_different_lattices_do_not_compare(c3, b2):
    with pytest.raises(HomeMismatch):
        zero(c3) <= zero(b2)


def test_technical_check_needs_interval_blocks(c3):
    with pytest.raises(BlocksNotIntervals):
        technical_check(c3, Partition.from_blocks(3, [[0, 2]]))


def test_set_partitions_counts():
    assert [sum(1 for _ in set_partitions(n)) for n in range(6)] == [1, 1, 2, 5, 15, 52]


def test_oracle_refuses_large_lattices():
    with pytest.raises(OracleTooLarge):
        brute_force_congruences(chain(9))


def test_minimal_representation_of_small_lattices(c3, c5, m3):
    B2 = downset_lattice(antichain_poset(2)).lattice
    B4 = downset_lattice(antichain_poset(4)).lattice
    C2 = chain(2)
    assert is_minimal_representation(c3, B2).verdict
    assert is_minimal_representation(m3, C2).verdict
    report = is_minimal_representation(c5, B4)
    assert report.checks == {"ji-con-isomorphic": True, "princ-equals-min": False}
    assert len(report.witness["princ-equals-min"]["ji_below"]) == 2


def test_principal_set_of_c3_includes_everything(c3):
    assert len(principal_set(c3)) == 4


def test_restriction_to_a_sublattice(n5):
    theta = principal_congruence(n5, n5.bottom, n5.index("c"))
    keep = [n5.bottom, n5.index("a"), n5.index("b"), n5.top]
    restricted = restriction(n5, theta, keep)
    assert restricted.describe() == [["a", "b", "1"]]


def test_monotone_under_the_glued_embedding(c3):
    glued, emb0, _ = glued_sum(c3, c3)
    assert monotone_under_embedding(c3, glued, emb0)


def _lattices_up_to(n):
    for size in range(1, n + 1):
        for P in all_posets(size):
            yield downset_lattice(P).lattice
    yield lattice_from_covers(
        ["0", "a", "b", "c", "1"], [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")]
    )
    yield lattice_from_covers(
        ["0", "x", "y", "z", "1"], [("0", "x"), ("0", "y"), ("0", "z"), ("x", "1"), ("y", "1"), ("z", "1")]
    )


def _all_lattices(max_n):
    from src.enumeration import lattices_by_size

    for _, level in lattices_by_size(max_n, cache_dir=None):
        yield from level


def _agrees_with_the_oracle(lattices):
    for L in lattices:
        oracle = set(brute_force_congruences(L))
        assert {theta.partition for theta in all_congruences(L)} == oracle
        s = con_structure(L)
        for x, y in itertools.combinations(range(L.n), 2):
            assert principal_congruence(L, x, y).partition == brute_force_principal(L, x, y, list(oracle))
            assert s.congruence(s.mask(x, y)) == principal_congruence(L, x, y)


def test_structure_agrees_with_the_oracle():
    _agrees_with_the_oracle(_all_lattices(6))
    _agrees_with_the_oracle(_lattices_up_to(3))


@pytest.mark.slow
def test_structure_agrees_with_the_oracle_up_to_the_partition_limit():
    from src.config import load_settings

    _agrees_with_the_oracle(_all_lattices(load_settings().max_partition_elements))


def _interval_partitions(L):
    for p in set_partitions(L.n):
        blocks_ok = True
        for block in p.blocks:
            lo = hi = block[0]
            for x in block[1:]:
                lo, hi = int(L.meet[lo, x]), int(L.join[hi, x])
            if sorted(block) != L.interval(lo, hi):
                blocks_ok = False
                break
        if blocks_ok:
            yield p


def test_technical_check_agrees_with_the_definition():
    for L in _all_lattices(6):
        for p in _interval_partitions(L):
            assert technical_check(L, p) == is_congruence(L, p)


@settings(max_examples=25, deadline=None)
@given(posets(max_size=3))
def test_con_of_a_distributive_lattice_is_boolean(P):
    L = downset_lattice(P).lattice
    s = con_structure(L)
    assert len(s.ji) == P.n
    assert s.ji_poset.lt.sum() == 0
    assert all(s.is_join_irreducible(s.mask(x, y)) for x, y in L.covers)


def test_principal_congruences_shrink_with_the_interval():
    for L in _all_lattices(6):
        pairs = [(x, y) for x in range(L.n) for y in range(L.n) if L.leq[x, y]]
        for x, y in pairs:
            outer = principal_congruence(L, x, y)
            for inner_x, inner_y in pairs:
                if L.leq[x, inner_x] and L.leq[inner_y, y]:
                    assert principal_congruence(L, inner_x, inner_y) <= outer


def _oracle_join(alpha, beta, oracle):
    above = [p for p in oracle if alpha.partition.refines(p) and beta.partition.refines(p)]
    return next(p for p in above if all(p.refines(q) for q in above))


def test_join_matches_the_oracle():
    for L in _all_lattices(6):
        oracle = brute_force_congruences(L)
        thetas = all_congruences(L)
        for alpha, beta in itertools.product(thetas, repeat=2):
            joined = congruence_join(L, alpha, beta)
            assert joined == congruence_join(L, beta, alpha)
            assert joined.partition == _oracle_join(alpha, beta, oracle)


def test_join_is_associative():
    for L in _all_lattices(5):
        thetas = all_congruences(L)
        for alpha, beta, gamma in itertools.product(thetas, repeat=3):
            left = congruence_join(L, congruence_join(L, alpha, beta), gamma)
            assert left == congruence_join(L, alpha, congruence_join(L, beta, gamma))
