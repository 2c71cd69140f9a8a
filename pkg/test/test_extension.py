import pytest

from src.congruence import Congruence, all_congruences, one, principal_congruence, zero
from src.distributive import downset_lattice
from src.enumeration import lattices_by_size
from src.errors import AdmissibleInput, NotAMultidiamondTab, ShapeViolation
from src.extension import (
    ExtensionSite,
    bridge_comparison,
    congruence_determining,
    extend_congruence,
    generated_restriction,
    inadmissible_dichotomy,
    is_admissible,
    lifting_exists,
    preserves_congruences,
    tab_restriction,
    three_cover_preserving,
)
from src.lattice_core import Lattice, dual, lattice_from_covers
from src.poset_core import all_posets


def _sites(K: Lattice):
    for a, c in K.covers:
        for b in K.upper_covers(c):
            yield ExtensionSite(K, a, c, b)


def _small_lattices(n5, m3, max_generators=3):
    for size in range(1, max_generators + 1):
        for P in all_posets(size):
            L = downset_lattice(P).lattice
            if L.n < 8:
                yield L
    yield n5
    yield m3


def test_site_on_a_chain_builds_a_square(c3):
    site = ExtensionSite(c3, 0, 1, 2)
    assert site.extended.n == 4 and site.u == 3
    assert site.embedding == [0, 1, 2]
    with pytest.raises(ShapeViolation):
        site.square_partner()


def test_lower_collapse_is_admissible_and_extends(c3):
    site = ExtensionSite(c3, 0, 1, 2)
    alpha = principal_congruence(c3, 0, 1)
    assert is_admissible(site, alpha).admissible
    theta = extend_congruence(site, alpha)
    assert theta.collapses(site.u, 2) and theta.collapses(0, 1)
    assert generated_restriction(site, alpha).case == "a"


def test_full_congruence_is_admissible(n5):
    a, b = n5.index("a"), n5.index("b")
    site = ExtensionSite(n5, n5.bottom, a, b)
    result = generated_restriction(site, one(n5))
    assert result.case == "a"
    assert result.congruence == one(n5)


def test_chain_extension_preserves_congruences(c3):
    site = ExtensionSite(c3, 0, 1, 2)
    assert three_cover_preserving(site)
    assert congruence_determining(site)
    assert preserves_congruences(c3, site.extended, site.embedding)


def test_square_turns_into_m3(b2):
    x, y = b2.index("x"), b2.index("y")
    site = ExtensionSite(b2, b2.bottom, x, b2.top)
    assert site.square_partner() == y

    alpha = principal_congruence(b2, b2.bottom, x)
    verdict = is_admissible(site, alpha)
    assert verdict.failed == ("iii", "iv")
    assert extend_congruence(site, alpha) is None
    assert not lifting_exists(site, alpha)
    assert inadmissible_dichotomy(site, alpha) == "ac"
    assert generated_restriction(site, alpha).congruence == one(b2)

    with pytest.raises(AdmissibleInput):
        inadmissible_dichotomy(site, zero(b2))


def test_bridge_comparison_on_the_square(b2):
    x, y = b2.index("x"), b2.index("y")
    site = ExtensionSite(b2, b2.bottom, x, b2.top)
    assert bridge_comparison(site, b2.bottom, x, y, b2.top) == (True, "a")
    with pytest.raises(ShapeViolation):
        bridge_comparison(site, b2.bottom, b2.top, y, b2.top)


def test_tab_restriction_on_m3(m3):
    z = m3.index("z")
    report = tab_restriction(m3, z, m3.bottom, m3.top)
    assert report.verdict
    assert report.witness["branches"] == {"apart": 1, "collapsed": 3}


def test_tab_needs_three_atoms(b2):
    with pytest.raises(NotAMultidiamondTab):
        tab_restriction(b2, b2.index("x"), b2.bottom, b2.top)


def test_admissibility_matches_the_lifting_oracle(n5, m3):
    mismatches = []
    for K in _small_lattices(n5, m3):
        for site in _sites(K):
            for alpha in all_congruences(K):
                if bool(is_admissible(site, alpha)) != lifting_exists(site, alpha):
                    mismatches.append((K.fingerprint, site, alpha))
                generated_restriction(site, alpha)
    assert mismatches == []


@pytest.mark.slow
def test_admissibility_oracle_on_all_lattices_up_to_seven():
    for _, level in lattices_by_size(7, cache_dir=None):
        for K in level:
            for site in _sites(K):
                for alpha in all_congruences(K):
                    assert bool(is_admissible(site, alpha)) == lifting_exists(site, alpha)
                    generated_restriction(site, alpha)


def test_dichotomy_second_branch(b2):
    x = b2.index("x")
    site = ExtensionSite(b2, b2.bottom, x, b2.top)
    alpha = principal_congruence(b2, x, b2.top)
    assert is_admissible(site, alpha).failed == ("i", "ii")
    assert inadmissible_dichotomy(site, alpha) == "bc"


def test_bridge_comparison_through_the_new_diamond(b2):
    x, y = b2.index("x"), b2.index("y")
    site = ExtensionSite(b2, b2.bottom, x, b2.top)
    assert bridge_comparison(site, b2.bottom, x, b2.bottom, y) == (True, "b")
    assert bridge_comparison(site, b2.bottom, y, b2.bottom, x) == (True, "c")


def test_bridge_comparison_below_the_square():
    # a prime interval under the square stays apart from the square's congruences
    K = lattice_from_covers(["0", "p", "x", "y", "1"], [("0", "p"), ("p", "x"), ("p", "y"), ("x", "1"), ("y", "1")])
    p, x = K.index("p"), K.index("x")
    site = ExtensionSite(K, p, x, K.top)
    assert bridge_comparison(site, K.bottom, p, p, x) == (False, None)
    assert bridge_comparison(site, p, x, K.bottom, p) == (False, None)


def test_tab_restriction_on_m4():
    atoms = ["w", "x", "y", "z"]
    M4 = lattice_from_covers(["0", *atoms, "1"], [("0", v) for v in atoms] + [(v, "1") for v in atoms])
    report = tab_restriction(M4, M4.index("w"), M4.bottom, M4.top)
    assert report.verdict
    assert report.witness["branches"] == {"apart": 1, "collapsed": 1}


_SWAPPED = {"i": "iii", "ii": "iv", "iii": "i", "iv": "ii"}


def _tab_sites(L: Lattice):
    for u in range(L.n):
        if len(L.lower_covers(u)) == 1 and len(L.upper_covers(u)) == 1:
            yield u, L.lower_covers(u)[0], L.upper_covers(u)[0]


def _extension_sweep(max_n):
    branches, tags, collapsed = set(), set(), 0
    for _, level in lattices_by_size(max_n, cache_dir=None):
        for K in level:
            flipped = dual(K)
            for site in _sites(K):
                assert congruence_determining(site)
                mirror = ExtensionSite(flipped, site.b, site.c, site.a)
                square = len(K.upper_covers(site.a)) == 2 and sorted(K.upper_covers(site.a)) == sorted(K.lower_covers(site.b))
                for alpha in all_congruences(K):
                    verdict = is_admissible(site, alpha)
                    mirrored = is_admissible(mirror, Congruence(flipped, alpha.partition))
                    assert {_SWAPPED[tag] for tag in verdict.failed} == set(mirrored.failed)
                    if square and not verdict:
                        branches.add(inadmissible_dichotomy(site, alpha))
                if square:
                    for x0, y0 in K.covers:
                        for x1 in range(K.n):
                            for y1 in range(K.n):
                                if K.lt[x1, y1]:
                                    tags.add(bridge_comparison(site, x0, y0, x1, y1)[1])
            for u, a, b in _tab_sites(K):
                try:
                    report = tab_restriction(K, u, a, b)
                except NotAMultidiamondTab:
                    continue
                assert report.verdict
                collapsed += report.witness["branches"]["collapsed"]
    return branches, tags, collapsed


def test_extension_sweep_up_to_five():
    branches, tags, collapsed = _extension_sweep(5)
    assert branches == {"ac", "bc"}
    assert tags == {"a", "b", "c", None}
    assert collapsed > 0


@pytest.mark.slow
def test_extension_sweep_up_to_seven():
    branches, tags, collapsed = _extension_sweep(7)
    assert branches == {"ac", "bc"}
    assert tags == {"a", "b", "c", None}
    assert collapsed > 0
