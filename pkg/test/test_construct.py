import logging
from collections import Counter

import pytest

from src.anchored import Obstruction
from src.congruence import con_structure, is_minimal_representation
from src.construct import (
    _prime,
    attach_bridge,
    base,
    bridge_gadget,
    frame,
    framew,
    minimal_representation,
    replay_trace,
    split_intersection,
)
from src.distributive import downset_lattice
from src.errors import HypothesisViolated
from src.lattice_core import lattice_from_covers, length, remove_element, sublattice
from src.poset_core import (
    all_posets,
    antichain_poset,
    chain_poset,
    find_isomorphism,
    free_union,
    maximal_elements,
    poset_from_relations,
)

logger = logging.getLogger(__name__)


def test_prime_moves_the_mark_before_the_subscript():
    assert _prime("o") == "o'"
    assert _prime("a[p]") == "a'[p]"
    assert _prime("w0[p<q]") == "w0'[p<q]"


def test_frame_of_two_points():
    al = frame(antichain_poset(2))
    assert al.lattice.n == 6
    assert length(al.lattice) == 3
    a0, a1 = al.element("a[0]"), al.element("a[1]")
    assert int(al.lattice.join[a0, a1]) == al.anchor("i")
    assert int(al.lattice.meet[al.element("b[0]"), al.element("b[1]")]) == al.anchor("o")
    assert frame(chain_poset(1)).lattice.n == 4


def test_framew_of_a_two_chain(chain2):
    al = framew(chain2)
    # 2 + 2|P| + 3 + 3 per comparable pair
    assert al.lattice.n == 2 + 4 + 3 + 3
    assert length(al.lattice) == 5
    assert al.certificate.verdict
    L = al.lattice
    w0, w1, w2 = (al.element(f"w{k}[p<q]") for k in range(3))
    assert int(L.meet[al.element("a[p]"), al.element("a[q]")]) == w0
    assert int(L.meet[al.element("a[p]"), al.element("b[q]")]) == w1
    assert int(L.meet[al.element("b[p]"), al.element("b[q]")]) == w2


def test_framew_with_two_points_under_a_top():
    P = poset_from_relations(3, [(0, 2), (1, 2)], ["p", "q", "p0"])
    al = framew(P)
    s = con_structure(al.lattice)
    assert find_isomorphism(s.ji_poset, P) is not None
    # no comparabilities among p, q: one W per pair with the top
    assert sum(1 for label in al.lattice.labels if label.startswith("w0[")) == 2


def test_framew_needs_a_greatest_element():
    with pytest.raises(HypothesisViolated):
        framew(antichain_poset(2))


def test_split_intersection_of_a_v(v_poset):
    Q, made = split_intersection(v_poset, "p0", "p1")
    assert made == [("r", "r#0", "r#1")]
    assert find_isomorphism(Q, free_union(chain_poset(2), chain_poset(2))) is not None


def test_base_of_two_disjoint_chains(two_chains):
    al = base(two_chains, "x2", "y2")
    s = con_structure(al.lattice)
    assert find_isomorphism(s.ji_poset, two_chains) is not None
    assert al.certificate.verdict
    assert al.upper == {"y1": ("a'[y1]", "b'[y1]")}
    assert al.lower == {"x1": ("a[x1]", "b[x1]")}


def test_bridge_gadget_shape():
    al = bridge_gadget("r")
    L = al.lattice
    assert L.n == 10
    assert length(L) == 4
    assert len(L.covers) == 14
    grid = downset_lattice(free_union(chain_poset(2), chain_poset(2))).lattice
    assert find_isomorphism(remove_element(L, L.index("m[r]")).poset, grid.poset) is not None
    m3 = sublattice(L, [L.index(x) for x in ("u[r]", "t[r]", "s[r]", "m[r]", "u'[r]")])
    assert all(len(m3.upper_covers(x)) == 1 for x in range(m3.n) if x not in (m3.bottom, m3.top))
    assert len(m3.upper_covers(m3.bottom)) == 3


def test_bridge_gadget_congruences():
    al = bridge_gadget("r")
    L = al.lattice
    s = con_structure(L)
    idx = L.index
    ab = s.mask(idx("a[r]"), idx("b[r]"))
    assert s.mask(idx("u[r]"), idx("m[r]")) == ab
    assert s.mask(idx("u'[r]"), idx("m[r]")) == ab
    assert s.mask(idx("b'[r]"), idx("a'[r]")) == ab
    assert find_isomorphism(s.ji_poset, antichain_poset(3)) is not None
    assert al.certificate.verdict


def test_attach_bridge_checks_its_hypotheses():
    spine = ["a", "b", "i", "b'", "a'"]
    K = lattice_from_covers(spine + ["x"], list(zip(spine, spine[1:])) + [("a", "x"), ("x", "i")])
    al = bridge_gadget("r")
    hollow = al.with_lattice(K)
    with pytest.raises(HypothesisViolated):
        # a has two upper covers
        attach_bridge(hollow, "a", "b", "i", "b'", "a'")


def test_grid_synthesis(two_chains):
    al = minimal_representation(two_chains)
    assert not isinstance(al, Obstruction)
    assert al.certificate.verdict
    assert length(al.lattice) <= 10
    assert is_minimal_representation(al.lattice, downset_lattice(two_chains).lattice).verdict


def test_v_synthesis_attaches_one_bridge(v_poset):
    al = minimal_representation(v_poset)
    assert al.certificate.verdict
    assert "m[r]" in al.lattice.labels
    assert sorted(al.poset.labels) == ["p0", "p1", "r"]
    assert replay_trace(al.trace) == al.lattice


def test_obstruction_for_three_maximal(antichain3):
    outcome = minimal_representation(antichain3)
    assert isinstance(outcome, Obstruction)
    assert outcome.dual_atoms == 3


def test_trivial_inputs():
    one_point = minimal_representation(antichain_poset(0))
    assert one_point.lattice.n == 1
    c2 = minimal_representation(chain_poset(1))
    assert c2.lattice.n == 2 and c2.certificate.verdict


def test_lattice_input_is_accepted(grid):
    al = minimal_representation(grid)
    assert al.certificate.verdict


def test_replay_reproduces_framew(chain2):
    al = framew(chain2)
    assert replay_trace(al.trace) == al.lattice


def _sweep(max_size):
    lengths = Counter()
    for n in range(max_size + 1):
        for P in all_posets(n):
            if len(maximal_elements(P)) > 2:
                continue
            al = minimal_representation(P)
            assert al.certificate.verdict
            if len(maximal_elements(P)) == 2:
                lengths[length(al.lattice)] += 1
    logger.info("lengths of two-sided representations up to %d: %s", max_size, dict(sorted(lengths.items())))
    return lengths


def test_synthesis_sweep_up_to_three():
    lengths = _sweep(3)
    # two maximal elements: the 2-antichain, the V and a 2-chain beside a point
    assert sum(lengths.values()) == 3
    assert max(lengths) <= 10


@pytest.mark.slow
def test_synthesis_sweep_up_to_five():
    lengths = _sweep(5)
    assert max(lengths) <= 10
    assert sum(lengths.values()) > 3
