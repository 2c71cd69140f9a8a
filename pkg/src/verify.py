"""Certifying checkers.

Every checker recomputes the congruences it talks about from the lattice
itself; stored zeta pairs and anchors are only used to name elements.
"""

import logging
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.anchored import AnchoredLattice, Obstruction
from src.congruence import ConStructure, Congruence, con_structure, is_minimal_representation
from src.distributive import DistributiveLattice, LatticeLike, dual_atoms, join_irreducibles
from src.errors import (
    HypothesisViolated,
    InvariantViolated,
    NotConstantOnA,
    NotConvex,
    NotIsotone,
    NotSurjective,
)
from src.extension import preserves_congruences
from src.lattice_core import Lattice, remove_element
from src.order_surgery import fuse_iso_check
from src.poset_core import IsoMap, Poset, maximal_elements
from src.report import VerificationReport

logger = logging.getLogger(__name__)

__all__ = [
    "VerificationReport",
    "antichain_obstruction",
    "certify",
    "check_attach_lemma",
    "check_bridge_fusion",
    "check_bridge_theorem",
    "check_frame_properties",
    "check_nine_statements",
    "check_tmin",
    "check_zeta_isomorphism",
    "theorem_principal_sweep",
    "tprincipal_witness",
]


def _below(m1: int, m2: int) -> bool:
    return m1 & ~m2 == 0


def _embedding(K: Lattice, L: Lattice) -> List[int]:
    return [L.index(label) for label in K.labels]


def _zeta_masks(al: AnchoredLattice, s: ConStructure) -> Dict[str, int]:
    L = al.lattice
    return {p: s.mask(L.index(lo), L.index(hi)) for p, (lo, hi) in al.zeta_pairs.items()}


def _first(items) -> Optional[object]:
    return next(iter(items), None)


# =====================================================
# ZETA
# =====================================================
def check_zeta_isomorphism(al: AnchoredLattice, report: Optional[VerificationReport] = None) -> VerificationReport:
    """p -> zeta(p) is an order isomorphism from the poset onto Ji(Con L)."""
    s = con_structure(al.lattice)
    report = report or VerificationReport("zeta-isomorphism", f"{al.lattice.n} elements")
    P = al.poset
    masks = _zeta_masks(al, s)

    image: List[Optional[int]] = [s.ji_index(masks.get(p, -1)) for p in P.labels]
    if None in image or len(masks) != P.n:
        bad = [p for p, j in zip(P.labels, image) if j is None]
        report.record("zeta-isomorphism", False, {"not_join_irreducible": bad})
        return report
    iso = IsoMap(tuple(image))
    ok = len(set(image)) == P.n == s.ji_poset.n and iso.respects(P, s.ji_poset)
    report.record(
        "zeta-isomorphism", ok,
        None if ok else {"zeta": {p: s.describe(masks[p]) for p in P.labels}},
    )
    return report


def certify(al: AnchoredLattice, P: Poset, D: LatticeLike) -> VerificationReport:
    """Final certificate: minimal representation of D and zeta onto Ji(Con L)."""
    report = VerificationReport("certificate", f"L({al.lattice.n} elements) for a {P.n}-element poset")
    report.attach(is_minimal_representation(al.lattice, D))
    check_zeta_isomorphism(al, report)
    same_poset = sorted(P.labels) == sorted(al.poset.labels) and all(
        bool(P.lt[x, y]) == bool(al.poset.lt[al.poset.index(P.labels[x]), al.poset.index(P.labels[y])])
        for x in range(P.n) for y in range(P.n)
    )
    report.record("poset-restored", same_poset, {"expected": list(P.labels), "got": list(al.poset.labels)})
    return report


# =====================================================
# FRAME AND BASE STATEMENTS
# =====================================================
def _greatest(P: Poset) -> str:
    tops = maximal_elements(P)
    if len(tops) != 1:
        raise HypothesisViolated("greatest element", sorted(P.labels[x] for x in tops))
    return P.labels[tops.pop()]


def check_frame_properties(
    al: AnchoredLattice, P: Optional[Poset] = None, zeta: Optional[Dict[str, Tuple[str, str]]] = None
) -> VerificationReport:
    """The five frame statements plus zeta: P -> Ji(Con L)."""
    if P is not None or zeta is not None:
        al = AnchoredLattice(al.lattice, P or al.poset, dict(zeta or al.zeta_pairs), al.anchors, al.lower, al.upper)
    L, P = al.lattice, al.poset
    s = con_structure(L)
    p0 = _greatest(P)
    i = al.anchor("i")
    masks = _zeta_masks(al, s)
    report = VerificationReport("frame-properties", f"L({L.n} elements), P({P.n} elements)")

    bad = _first((L.labels[x], L.labels[y]) for x, y in s.comparable_pairs()
                 if not s.is_join_irreducible(s.mask(x, y)))
    report.record("i", bad is None, bad)

    bad = _first(L.labels[x] for x in range(L.n) if x != i and s.mask(x, i) != s.full)
    report.record("ii", bad is None, bad)

    others = [p for p in P.labels if p != p0]
    missing = [p for p in others if p not in al.lower]
    if missing:
        report.record("iii", False, {"missing_anchors": missing})
    else:
        bad = None
        for p in others:
            a, b = (L.index(v) for v in al.lower[p])
            if not (L.is_cover(a, b) and L.is_cover(b, i)) or s.mask(a, b) != masks[p]:
                bad = p
                break
        report.record("iii", bad is None, bad)

        bad = _first(L.labels[v] for p in others for v in (L.index(w) for w in al.lower[p])
                     if len(L.upper_covers(v)) != 1)
        report.record("iv", bad is None, bad)

        bad = None
        for p in others:
            a, b = (L.index(v) for v in al.lower[p])
            for x in np.flatnonzero(L.lt[:, b]):
                if x != a and s.mask(int(x), b) != s.full:
                    bad = (L.labels[int(x)], L.labels[b])
                    break
            if bad:
                break
        report.record("v", bad is None, bad)

    check_zeta_isomorphism(al, report)
    logger.debug("frame properties: %s", report.checks)
    return report


def check_nine_statements(al: AnchoredLattice, p0: str, p1: str) -> VerificationReport:
    L, P = al.lattice, al.poset
    s = con_structure(L)
    i = al.anchor("i")
    z = _zeta_masks(al, s)
    report = VerificationReport("nine-statements", f"L({L.n} elements), P({P.n} elements)")
    down0 = {P.labels[x] for x in np.flatnonzero(P.leq[:, P.index(p0)])}
    down1 = {P.labels[x] for x in np.flatnonzero(P.leq[:, P.index(p1)])}

    bad = _first((L.labels[x], L.labels[y]) for x, y in s.comparable_pairs()
                 if s.mask(x, y) != s.full and not s.is_join_irreducible(s.mask(x, y)))
    report.record("i", bad is None, bad)

    bad = _first(L.labels[x] for x in np.flatnonzero(L.lt[:, i]) if s.mask(int(x), i) != z[p0])
    report.record("ii", bad is None, bad)
    bad = _first(L.labels[x] for x in np.flatnonzero(L.lt[i]) if s.mask(int(x), i) != z[p1])
    report.record("iii", bad is None, bad)

    def anchored_chain(p: str, pairs: Dict, upward: bool) -> bool:
        if p not in pairs:
            return False
        a, b = (L.index(v) for v in pairs[p])
        chain_ok = L.is_cover(i, b) and L.is_cover(b, a) if upward else L.is_cover(a, b) and L.is_cover(b, i)
        return chain_ok and s.mask(a, b) == z[p]

    bad = _first(p for p in down0 - {p0} if not anchored_chain(p, al.lower, upward=False))
    report.record("iv", bad is None, bad)
    bad = _first(p for p in down1 - {p1} if not anchored_chain(p, al.upper, upward=True))
    report.record("v", bad is None, bad)

    rest = set(P.labels) - {p0, p1}
    bad = _first(v for p in sorted(rest - down1) if p in al.lower for v in al.lower[p]
                 if len(L.upper_covers(L.index(v))) != 1)
    report.record("vi", bad is None, bad)
    bad = _first(v for p in sorted(rest - down0) if p in al.upper for v in al.upper[p]
                 if len(L.lower_covers(L.index(v))) != 1)
    report.record("vii", bad is None, bad)

    def collapses_to(pairs: Dict, target: int, upward: bool) -> Optional[Tuple[str, str]]:
        for p in sorted(rest & set(pairs)):
            a, b = (L.index(v) for v in pairs[p])
            strict = L.lt[b] if upward else L.lt[:, b]
            for x in np.flatnonzero(strict):
                if x != a and s.mask(int(x), b) != target:
                    return L.labels[int(x)], L.labels[b]
        return None

    bad = collapses_to(al.lower, z[p0], upward=False)
    report.record("viii", bad is None, bad)
    bad = collapses_to(al.upper, z[p1], upward=True)
    report.record("ix", bad is None, bad)

    check_zeta_isomorphism(al, report)
    logger.debug("nine statements: %s", report.checks)
    return report


# =====================================================
# BRIDGES
# =====================================================
def check_bridge_theorem(K: Lattice, L: Lattice, anchors: Sequence[str], m: str) -> VerificationReport:
    """The six bridge statements for L obtained from K by attaching a bridge
    at anchors (a, b, i, b', a'), where m is the element completing the M3."""
    a, b, i, b1, a1 = (K.index(v) for v in anchors)
    emb = _embedding(K, L)
    report = VerificationReport("bridge-theorem", f"K({K.n}) -> L({L.n}) at {anchors[0]}..{anchors[-1]}")

    bad = _first((K.labels[x], K.labels[y]) for x, y in K.covers if not L.is_cover(emb[x], emb[y]))
    report.record("i", bad is None, bad)
    bad = _first(K.labels[x] for x in range(K.n) if x not in (a, b)
                 and len(K.upper_covers(x)) == 1 and len(L.upper_covers(emb[x])) != 1)
    report.record("ii", bad is None, bad)
    bad = _first(K.labels[x] for x in range(K.n) if x not in (a1, b1)
                 and len(K.lower_covers(x)) == 1 and len(L.lower_covers(emb[x])) != 1)
    report.record("iii", bad is None, bad)

    M = remove_element(L, L.index(m))
    report.record("iv", preserves_congruences(K, M, _embedding(K, M)), f"restriction Con(L - {m}) -> Con K")

    sK, sL = con_structure(K), con_structure(L)
    from_covers = {sL.mask(emb[x], emb[y]) for x, y in K.covers}
    bad = _first(sL.ji_poset.labels[j] for j, down in enumerate(sL.down) if down not in from_covers)
    report.record("v", bad is None, bad)

    ab, ab1 = sK.mask(a, b), sK.mask(b1, a1)
    bad = None
    pairs = list(sK.comparable_pairs())
    for x0, y0 in K.covers:
        low, low_L = sK.mask(x0, y0), sL.mask(emb[x0], emb[y0])
        for x1, y1 in pairs:
            high = sK.mask(x1, y1)
            in_L = _below(low_L, sL.mask(emb[x1], emb[y1]))
            in_K = (_below(low, high) or (_below(low, ab) and _below(ab1, high))
                    or (_below(low, ab1) and _below(ab, high)))
            if in_L != in_K:
                bad = {"quadruple": [K.labels[v] for v in (x0, y0, x1, y1)], "in_L": in_L, "in_K": in_K}
                break
        if bad:
            break
    report.record("vi", bad is None, bad)
    logger.debug("bridge theorem: %s", report.checks)
    return report


def check_bridge_fusion(K: Lattice, L: Lattice, anchors: Sequence[str]) -> VerificationReport:
    """Fuse(Ji(Con K), {con(a,b), con(a',b')}) -> Ji(Con L), x,y -> con_L(x,y)."""
    a, b, _, b1, a1 = (K.index(v) for v in anchors)
    sK, sL = con_structure(K), con_structure(L)
    emb = _embedding(K, L)
    report = VerificationReport("bridge-fusion", f"K({K.n}) -> L({L.n})")

    j0, j1 = sK.ji_index(sK.mask(a, b)), sK.ji_index(sK.mask(b1, a1))
    report.record("incomparable", j0 is not None and j1 is not None and not sK.ji_poset.comparable(j0, j1),
                  [sK.describe(sK.mask(a, b)), sK.describe(sK.mask(b1, a1))])
    if not report.verdict:
        return report

    phi = []
    for x, y in sK.ji_cover:
        target = sL.ji_index(sL.mask(emb[x], emb[y]))
        if target is None:
            report.record("images-join-irreducible", False, (K.labels[x], K.labels[y]))
            return report
        phi.append(target)
    report.record("images-join-irreducible", True)

    try:
        outcome = fuse_iso_check(sK.ji_poset, [j0, j1], phi, sL.ji_poset)
    except (NotSurjective, NotConstantOnA, NotIsotone, NotConvex, InvariantViolated) as exc:
        report.record("isomorphism", False, str(exc))
        return report
    ok = isinstance(outcome, IsoMap)
    report.record("isomorphism", ok, None if ok else [sK.ji_poset.labels[v] for v in outcome])
    return report


def check_tmin(L: Lattice, anchors: Sequence[str], statements: Sequence[str] = ("i", "ii", "iii", "iv", "v")) -> VerificationReport:
    a, b, i, b1, a1 = (L.index(v) for v in anchors)
    s = con_structure(L)
    report = VerificationReport("tmin", f"L({L.n} elements) at {anchors[0]}..{anchors[-1]}")
    bi, b1i = s.mask(b, i), s.mask(b1, i)

    def first_bad(candidates, pivot: int, target: int, skip: int = -1):
        return _first(L.labels[int(x)] for x in candidates if int(x) != skip and s.mask(int(x), pivot) != target)

    checks = {
        "i": lambda: first_bad(np.flatnonzero(L.lt[:, i]), i, bi),
        "ii": lambda: first_bad(np.flatnonzero(L.lt[i]), i, b1i),
        "iii": lambda: _first((L.labels[x], L.labels[y]) for x, y in s.comparable_pairs()
                              if s.mask(x, y) != s.full and not s.is_join_irreducible(s.mask(x, y))),
        "iv": lambda: first_bad(np.flatnonzero(L.lt[:, b]), b, bi, skip=a),
        "v": lambda: first_bad(np.flatnonzero(L.lt[b1]), b1, b1i, skip=a1),
    }
    for name in statements:
        bad = checks[name]()
        report.record(name, bad is None, bad)
    return report


def check_attach_lemma(K: Lattice, L: Lattice, a0: str, b0: str, i: str, upward: bool = False) -> VerificationReport:
    """If con_K(x, b0) = con_K(b0, i) for all x < b0 other than a0, the same
    holds in L. With upward=True the dual (x > b0) is checked."""
    report = VerificationReport("attach-lemma", f"anchor {b0}")
    for name, M in (("hypothesis", K), ("conclusion", L)):
        s = con_structure(M)
        a, b, top = M.index(a0), M.index(b0), M.index(i)
        strict = M.lt[b] if upward else M.lt[:, b]
        target = s.mask(b, top)
        bad = _first(M.labels[int(x)] for x in np.flatnonzero(strict) if int(x) != a and s.mask(int(x), b) != target)
        report.record(name, bad is None, bad)
    return report


# =====================================================
# OBSTRUCTIONS AND PRINCIPAL WITNESSES
# =====================================================
def antichain_obstruction(D: LatticeLike) -> Optional[Obstruction]:
    """Three or more maximal join-irreducibles (equivalently dual atoms)."""
    L = D.lattice if isinstance(D, DistributiveLattice) else D
    P = join_irreducibles(L)
    tops = sorted(maximal_elements(P))
    if len(tops) < 3:
        return None
    top = L.bottom
    for x in tops:
        top = int(L.join[top, L.index(P.labels[x])])
    if top != L.top or len(dual_atoms(L)) != len(tops):
        raise HypothesisViolated("maximal join-irreducibles join to 1", [P.labels[x] for x in tops])
    return Obstruction(len(tops), tuple(P.labels[x] for x in tops))


def _maximal_members(s: ConStructure, mask: int) -> List[int]:
    members = [j for j in range(len(s.ji)) if mask >> j & 1]
    return [j for j in members if not any(s.ji_poset.lt[j, k] for k in members)]


def tprincipal_witness(L: Lattice, x: int, y: int, A: Sequence[Congruence], alpha: Congruence) -> Congruence:
    """beta with alpha v beta principal and join-reducible, by walking a maximal chain of [x, y]."""
    s = con_structure(L)
    if not L.lt[x, y]:
        raise HypothesisViolated("x < y", (L.labels[x], L.labels[y]))
    masks = [s.mask_of(theta) for theta in A]
    if len(masks) < 2 or any(not s.is_join_irreducible(m) for m in masks):
        raise HypothesisViolated("A is a set of at least two join-irreducible congruences", [theta.describe() for theta in A])
    if any(_below(m1, m2) for k, m1 in enumerate(masks) for m2 in masks[k + 1:]) or \
            any(_below(m2, m1) for k, m1 in enumerate(masks) for m2 in masks[k + 1:]):
        raise HypothesisViolated("A is an antichain", [theta.describe() for theta in A])
    joined = 0
    for m in masks:
        joined |= m
    if joined != s.mask(x, y):
        raise HypothesisViolated("join of A is con(x, y)", s.describe(joined))
    target = s.mask_of(alpha)
    if target not in masks:
        raise HypothesisViolated("alpha in A", alpha.describe())

    c = L.maximal_chain(x, y)
    n = len(c) - 1
    j = next(k for k in range(n) if s.mask(c[k], c[k + 1]) == target)
    lo, hi = j, j + 1
    while hi < n and s.mask(c[lo], c[hi + 1]) == target:
        hi += 1
    while lo > 0 and s.mask(c[lo - 1], c[hi]) == target:
        lo -= 1
    if hi < n:
        beta_mask, joined_mask = s.mask(c[hi], c[hi + 1]), s.mask(c[lo], c[hi + 1])
    else:
        beta_mask, joined_mask = s.mask(c[lo - 1], c[lo]), s.mask(c[lo - 1], c[hi])

    if _below(beta_mask, target) or not s.is_join_irreducible(beta_mask):
        raise HypothesisViolated("beta join-irreducible and not below alpha", s.describe(beta_mask))
    if joined_mask != target | beta_mask or s.is_join_irreducible(joined_mask):
        raise HypothesisViolated("alpha v beta principal and join-reducible", s.describe(joined_mask))
    return s.congruence(beta_mask)


def theorem_principal_sweep(L: Lattice) -> VerificationReport:
    """Run the witness procedure for every x < y whose con(x, y) has two or
    more maximal join-irreducibles below it, once per maximal member."""
    s = con_structure(L)
    report = VerificationReport("principal-witness-sweep", f"L({L.n} elements)")
    runs, failure = 0, None
    for x, y in s.comparable_pairs():
        tops = _maximal_members(s, s.mask(x, y))
        if len(tops) < 2:
            continue
        A = [s.ji[j] for j in tops]
        for alpha in A:
            runs += 1
            try:
                tprincipal_witness(L, x, y, A, alpha)
            except HypothesisViolated as exc:
                failure = failure or {"pair": (L.labels[x], L.labels[y]), "error": str(exc)}
    report.record("witness-found", failure is None, failure)
    report.witness["runs"] = runs
    return report
