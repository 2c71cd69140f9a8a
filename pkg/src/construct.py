"""Frames, W gadgets, the glued base and bridges: building a lattice whose
principal congruences are exactly 0, 1 and the join-irreducible ones.

Anchors are tracked by element label throughout; every adjunction renumbers
nothing that already exists, but relabelling and gluing do.
"""

import logging
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from src.anchored import AnchoredLattice, ConstructionTrace, Obstruction, Pair
from src.distributive import DistributiveLattice, as_distributive, downset_lattice
from src.errors import (
    CertificateFailed,
    FrameContractViolated,
    HypothesisViolated,
    InvariantViolated,
    MalformedInput,
    NineStatementViolation,
)
from src.lattice_core import (
    Lattice,
    adjoin_relative_complement,
    dual,
    glued_sum,
    insert_elements,
    lattice_from_covers,
    length,
    relabel,
)
from src.order_surgery import fuse, split_all
from src.poset_core import (
    Poset,
    antichain_poset,
    find_isomorphism,
    free_union,
    linear_extension,
    maximal_elements,
    subposet,
)
from src.verify import (
    antichain_obstruction,
    certify,
    check_attach_lemma,
    check_bridge_fusion,
    check_bridge_theorem,
    check_frame_properties,
    check_nine_statements,
    check_tmin,
)

logger = logging.getLogger(__name__)

Source = Union[Poset, Lattice, DistributiveLattice]

MAX_TWO_SIDED_LENGTH = 10


def _prime(label: str) -> str:
    """o -> o', a[p] -> a'[p], w0[p<q] -> w0'[p<q]."""
    cut = label.find("[")
    return label + "'" if cut < 0 else label[:cut] + "'" + label[cut:]


def _tagged(name: str, tag: Optional[str]) -> str:
    return name if tag is None else f"{name}[{tag}]"


def _fail(error: Exception, report) -> None:
    logger.error("%s\n%s", error, report.render())
    raise error


# =====================================================
# FRAMES
# =====================================================
def frame(P: Poset, slot: str = "main", trace: Optional[ConstructionTrace] = None) -> AnchoredLattice:
    """Bottom o, top i and a chain o < a[p] < b[p] < i for every p."""
    if P.n == 0:
        raise HypothesisViolated("nonempty poset")
    trace = trace if trace is not None else ConstructionTrace(result_slot=slot)
    labels = ["o"]
    covers: List[Tuple[str, str]] = []
    for p in P.labels:
        a, b = f"a[{p}]", f"b[{p}]"
        labels += [a, b]
        covers += [("o", a), (a, b), (b, "i")]
    labels.append("i")

    L = lattice_from_covers(labels, covers)
    trace.record("frame", slot, {"labels": labels, "covers": covers}, 0, L.n)
    pairs = {p: (f"a[{p}]", f"b[{p}]") for p in P.labels}
    return AnchoredLattice(L, P, dict(pairs), {"o": "o", "i": "i"}, lower=dict(pairs), trace=trace)


def _insert(al: AnchoredLattice, specs, slot: str, what: str) -> AnchoredLattice:
    before = al.lattice.n
    L = insert_elements(al.lattice, specs)
    al.trace.record("insert", slot, {"specs": [[s[0], list(s[1]), list(s[2])] for s in specs]}, before, L.n)
    logger.info("framew: inserted %s, %d -> %d elements", what, before, L.n)
    return al.with_lattice(L)


def framew(P: Poset, slot: str = "main", trace: Optional[ConstructionTrace] = None) -> AnchoredLattice:
    """Frame P with spoilers, a tab under b[p0] and a W gadget for every p < q.

    Con of the result is Down(P - {p0}) plus a new top, with zeta(p) =
    con(a[p], b[p]) below p0 and zeta(p0) = con(o, i) = 1.
    """
    tops = maximal_elements(P)
    if len(tops) != 1:
        raise HypothesisViolated("greatest element", sorted(P.labels[x] for x in tops))
    p0 = P.labels[tops.pop()]

    al = frame(P, slot, trace)
    al = _insert(al, [("sp1", ["o"], ["i"]), ("sp2", ["o"], ["i"])], slot, "spoilers")
    al = _insert(al, [("tab", ["o"], [f"b[{p0}]"])], slot, "tab")
    for x, y in sorted(P.relation_pairs()):
        p, q = P.labels[x], P.labels[y]
        w0, w1, w2 = (f"w{k}[{p}<{q}]" for k in range(3))
        specs = [
            (w0, ["o"], [w1, f"a[{q}]"]),
            (w1, [w0], [f"a[{p}]", w2]),
            (w2, [w1], [f"b[{p}]", f"b[{q}]"]),
        ]
        al = _insert(al, specs, slot, f"W({p}<{q})")

    lower = {p: pair for p, pair in al.lower.items() if p != p0}
    zeta_pairs = dict(lower)
    zeta_pairs[p0] = ("o", "i")
    al = AnchoredLattice(al.lattice, P, zeta_pairs, dict(al.anchors), lower=lower, trace=al.trace)

    report = check_frame_properties(al)
    al.trace.note(report)
    if not report.verdict:
        which = report.failed()[0] if report.failed() else next(iter(report.witness), "zeta-isomorphism")
        _fail(FrameContractViolated(which, report.witness.get(which)), report)
    al.certificate = report
    return al


# =====================================================
# BASE
# =====================================================
def split_intersection(P: Poset, p0: str, p1: str) -> Tuple[Poset, List[Tuple[str, str, str]]]:
    """Split every element of down(p0) & down(p1), maximal ones first."""
    i0, i1 = P.index(p0), P.index(p1)
    both = P.leq[:, i0] & P.leq[:, i1]
    order = [P.labels[x] for x in linear_extension(P) if both[x]]
    return split_all(P, list(reversed(order)), p0, p1)


def _down(P: Poset, label: str) -> Poset:
    return subposet(P, np.flatnonzero(P.leq[:, P.index(label)]).tolist())


def _base(P: Poset, p0: str, p1: str) -> Tuple[AnchoredLattice, List[Tuple[str, str, str]]]:
    for p in (p0, p1):
        if P.index(p) not in maximal_elements(P):
            raise HypothesisViolated("maximal element", p)
    if p0 == p1:
        raise HypothesisViolated("two distinct maximal elements", p0)
    down0, down1 = _down(P, p0), _down(P, p1)
    if down0.n + down1.n - int((P.leq[:, P.index(p0)] & P.leq[:, P.index(p1)]).sum()) != P.n:
        raise HypothesisViolated("down(p0) and down(p1) cover P", sorted(P.labels))

    Q, made = split_intersection(P, p0, p1)
    if find_isomorphism(Q, free_union(down0, down1)) is None:
        raise InvariantViolated("split poset is not the free union of the two downsets")

    trace = ConstructionTrace()
    lower = framew(down0, "lower", trace)
    upper = framew(down1, "upper", trace)

    flipped = dual(upper.lattice)
    trace.record("dual", "upper", {}, upper.lattice.n, flipped.n)
    primed = [_prime(label) for label in flipped.labels]
    flipped = relabel(flipped, primed)
    trace.record("relabel", "upper", {"labels": primed}, flipped.n, flipped.n)
    # the glued element keeps the label i from the lower side
    L, _, _ = glued_sum(lower.lattice, flipped)
    trace.record("glue", "main", {"lower": "lower", "upper": "upper"}, lower.lattice.n + flipped.n, L.n)
    logger.info("base: glued %d + %d -> %d elements", lower.lattice.n, flipped.n, L.n)

    copies = {c0: r for r, c0, _ in made}
    copies.update({c1: r for r, _, c1 in made})
    side1 = {c1 for _, _, c1 in made}
    zeta_pairs: Dict[str, Pair] = {p0: ("o", "i"), p1: ("i", "o'")}
    lo: Dict[str, Pair] = {}
    up: Dict[str, Pair] = {}
    for q in Q.labels:
        if q in (p0, p1):
            continue
        orig = copies.get(q, q)
        if q in side1 or (q not in copies and orig in down1.labels and orig not in down0.labels):
            a1, b1 = _prime(f"a[{orig}]"), _prime(f"b[{orig}]")
            up[q] = (a1, b1)
            zeta_pairs[q] = (b1, a1)
        else:
            lo[q] = (f"a[{orig}]", f"b[{orig}]")
            zeta_pairs[q] = lo[q]

    al = AnchoredLattice(L, Q, zeta_pairs, {"o": "o", "i": "i", "o'": "o'"}, lower=lo, upper=up, trace=trace)
    trace.result_slot = "main"
    report = check_nine_statements(al, p0, p1)
    trace.note(report)
    if not report.verdict:
        _fail(NineStatementViolation(report.failed()[0], report.witness.get(report.failed()[0])), report)
    al.certificate = report
    return al, made


def base(P: Poset, p0: str, p1: str) -> AnchoredLattice:
    """framew(down p0) glued under the primed dual of framew(down p1).

    Elements of the intersection are split first, so the result represents
    the split poset, in which they appear as r#0 (lower) and r#1 (upper).
    """
    return _base(P, p0, p1)[0]


# =====================================================
# BRIDGES
# =====================================================
def attach_bridge(
    K: AnchoredLattice, a: str, b: str, i: str, b1: str, a1: str, tag: Optional[str] = None, slot: str = "main"
) -> AnchoredLattice:
    """Five adjunctions turning the square [u, u'] into an M3 between [a,b] and [b',a']."""
    L0 = K.lattice
    x = {name: L0.index(v) for name, v in zip(("a", "b", "i", "b1", "a1"), (a, b, i, b1, a1))}
    for lo, hi in (("a", "b"), ("b", "i"), ("i", "b1"), ("b1", "a1")):
        if not L0.is_cover(x[lo], x[hi]):
            raise HypothesisViolated(f"{lo} covered by {hi}", (L0.labels[x[lo]], L0.labels[x[hi]]))
    for name in ("a", "b"):
        if len(L0.upper_covers(x[name])) != 1:
            raise HypothesisViolated(f"{name} meet-irreducible", L0.labels[x[name]])
    for name in ("a1", "b1"):
        if len(L0.lower_covers(x[name])) != 1:
            raise HypothesisViolated(f"{name} join-irreducible", L0.labels[x[name]])

    t, u, u1, s, m = (_tagged(name, tag) for name in ("t", "u", "u'", "s", "m"))
    L = L0
    for lo, mid, hi, label in ((b, i, b1, t), (a, b, t, u), (t, b1, a1, u1), (u, t, u1, s), (u, s, u1, m)):
        before = L.n
        L = adjoin_relative_complement(L, L.index(lo), L.index(mid), L.index(hi), label)
        K.trace.record("adjoin", slot, {"a": lo, "c": mid, "b": hi, "label": label}, before, L.n)
    logger.info("bridge %s: %d -> %d elements", tag or "", L0.n, L.n)

    report = check_bridge_theorem(L0, L, (a, b, i, b1, a1), m)
    K.trace.note(report)
    if not report.verdict:
        _fail(CertificateFailed(report), report)
    result = K.with_lattice(L)
    result.certificate = report
    return result


def bridge_gadget(r: str = "r") -> AnchoredLattice:
    """The bridge attached to the five-element spine a[r] < b[r] < i < b'[r] < a'[r]."""
    a, b, b1, a1 = f"a[{r}]", f"b[{r}]", f"b'[{r}]", f"a'[{r}]"
    spine = [a, b, "i", b1, a1]
    covers = list(zip(spine, spine[1:]))
    trace = ConstructionTrace()
    K = lattice_from_covers(spine, covers)
    trace.record("frame", "main", {"labels": spine, "covers": covers}, 0, K.n)

    P = antichain_poset(3).relabel([r, "lo", "hi"])
    al = AnchoredLattice(
        K, P, {r: (a, b), "lo": (b, "i"), "hi": ("i", b1)},
        {"o": a, "i": "i", "o'": a1}, lower={r: (a, b)}, upper={r: (a1, b1)}, trace=trace,
    )
    return attach_bridge(al, a, b, "i", b1, a1, tag=r)


# =====================================================
# PIPELINE
# =====================================================
def _as_input(source: Source) -> Tuple[Poset, Lattice]:
    if isinstance(source, Poset):
        return source, downset_lattice(source).lattice
    if isinstance(source, DistributiveLattice):
        D = source if source.generators is not None else as_distributive(source.lattice)
        return D.generators, D.lattice
    if isinstance(source, Lattice):
        D = as_distributive(source)
        return D.generators, D.lattice
    raise MalformedInput(f"cannot synthesize from {type(source).__name__}")


def _trivial(P: Poset) -> AnchoredLattice:
    trace = ConstructionTrace()
    labels = ["o"] if P.n == 0 else ["o", "i"]
    covers = [("o", "i")] if P.n else []
    L = lattice_from_covers(labels, covers)
    trace.record("frame", "main", {"labels": labels, "covers": covers}, 0, L.n)
    zeta = {p: ("o", "i") for p in P.labels}
    return AnchoredLattice(L, P, zeta, {"o": "o", "i": labels[-1]}, trace=trace)


def _two_sided(P: Poset, p0: str, p1: str) -> AnchoredLattice:
    K, made = _base(P, p0, p1)
    pending = [(r, c0, c1) for r, c0, c1 in reversed(made)]  # minimal first

    for step, (r, c0, c1) in enumerate(pending):
        a, b = K.lower[c0]
        a1, b1 = K.upper[c1]
        anchors = (a, b, "i", b1, a1)
        before = check_tmin(K.lattice, anchors)
        K.trace.note(before)
        if not before.verdict:
            _fail(CertificateFailed(before), before)

        L = attach_bridge(K, a, b, "i", b1, a1, tag=r)

        fusion = fuse(K.poset, [K.poset.index(c0), K.poset.index(c1)], label=r)
        lower = {p: pair for p, pair in K.lower.items() if p != c0}
        upper = {p: pair for p, pair in K.upper.items() if p != c1}
        lower[r], upper[r] = (a, b), (a1, b1)
        zeta_pairs = {p: pair for p, pair in K.zeta_pairs.items() if p not in (c0, c1)}
        zeta_pairs[r] = (a, b)
        fused = AnchoredLattice(L.lattice, fusion.poset, zeta_pairs, dict(K.anchors), lower, upper, K.trace)

        reports = [
            check_bridge_fusion(K.lattice, L.lattice, anchors),
            check_tmin(L.lattice, anchors, ("i", "ii", "iii")),
        ]
        for _, d0, d1 in pending[step + 1:]:
            (x0, y0), (x1, y1) = K.lower[d0], K.upper[d1]
            reports.append(check_attach_lemma(K.lattice, L.lattice, x0, y0, "i"))
            reports.append(check_attach_lemma(K.lattice, L.lattice, x1, y1, "i", upward=True))
        reports.append(check_nine_statements(fused, p0, p1))
        for report in reports:
            K.trace.note(report)
            if not report.verdict:
                _fail(CertificateFailed(report), report)
        K = fused
    return K


def minimal_representation(source: Source) -> Union[AnchoredLattice, Obstruction]:
    """A certified lattice L with Con L isomorphic to D and Princ L = {0, 1} + Ji(Con L),
    or the obstruction when Ji(D) has three or more maximal elements."""
    P, D = _as_input(source)
    blocked = antichain_obstruction(D)
    if blocked is not None:
        logger.info("obstruction: %d dual atoms", blocked.dual_atoms)
        return blocked

    tops = sorted(maximal_elements(P))
    if P.n <= 1:
        al = _trivial(P)
    elif len(tops) == 1:
        al = framew(P)
    else:
        al = _two_sided(P, P.labels[tops[0]], P.labels[tops[1]])

    report = certify(al, P, D)
    if len(tops) == 2:
        size = length(al.lattice)
        report.record("length", size <= MAX_TWO_SIDED_LENGTH, size)
    al.trace.note(report)
    if not report.verdict:
        _fail(CertificateFailed(report), report)
    al.certificate = report
    logger.info("synthesized %d-element lattice for a %d-element poset", al.lattice.n, P.n)
    return al


def replay_trace(trace: ConstructionTrace) -> Lattice:
    """Rebuild the lattice from the recorded steps alone."""
    slots: Dict[str, Lattice] = {}
    for step in trace.steps:
        params = step.params
        if step.kind == "frame":
            slots[step.slot] = lattice_from_covers(params["labels"], [tuple(c) for c in params["covers"]])
        elif step.kind == "insert":
            specs = [(label, lowers, uppers) for label, lowers, uppers in params["specs"]]
            slots[step.slot] = insert_elements(slots[step.slot], specs)
        elif step.kind == "dual":
            slots[step.slot] = dual(slots[step.slot])
        elif step.kind == "relabel":
            slots[step.slot] = relabel(slots[step.slot], params["labels"])
        elif step.kind == "glue":
            slots[step.slot] = glued_sum(slots[params["lower"]], slots[params["upper"]])[0]
        elif step.kind == "adjoin":
            L = slots[step.slot]
            slots[step.slot] = adjoin_relative_complement(
                L, L.index(params["a"]), L.index(params["c"]), L.index(params["b"]), params["label"]
            )
        else:
            raise MalformedInput(f"unknown trace step {step.kind!r}")
        if slots[step.slot].n != step.after:
            raise InvariantViolated(f"replayed {step.kind} step has {slots[step.slot].n} elements", step.after)
    return slots[trace.result_slot]
