"""Fusing a convex subset of a poset to one element, and splitting a
maximal element of an intersection of two downsets into two copies."""

import logging
from dataclasses import dataclass
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.errors import (
    ContainmentViolated,
    EmptySubset,
    InvariantViolated,
    NotConstantOnA,
    NotConvex,
    NotDownsets,
    NotIsotone,
    NotMaximalInIntersection,
    NotSurjective,
)
from src.poset_core import IsoMap, Poset, convexity_witness, is_downset, unique_labels

logger = logging.getLogger(__name__)

ElementMap = Tuple[int, ...]


@dataclass(frozen=True)
class FusionResult:
    poset: Poset
    iota: int
    psi: ElementMap  # P -> F


@dataclass(frozen=True)
class SplitResult:
    poset: Poset
    a0: int
    a1: int
    eta: ElementMap  # S -> P
    side0: FrozenSet[int]
    side1: FrozenSet[int]


def _check_isotone(P: Poset, Q: Poset, phi: Sequence[int]) -> Optional[Tuple[int, int]]:
    for x, y in P.relation_pairs():
        if not Q.leq[phi[x], phi[y]]:
            return x, y
    return None


# =====================================================
# FUSION
# =====================================================
def fuse(P: Poset, A: Iterable[int], label: Optional[str] = None) -> FusionResult:
    """Fuse(P, A): P - A in index order, then the fused element last."""
    members = sorted(set(A))
    if not members:
        raise EmptySubset()
    witness = convexity_witness(P, members)
    if witness is not None:
        raise NotConvex(*(P.labels[x] for x in witness))

    inside = np.zeros(P.n, dtype=bool)
    inside[members] = True
    rest = [x for x in range(P.n) if not inside[x]]
    below = P.lt[:, members].any(axis=1)   # x < some a
    above = P.lt[members, :].any(axis=0)   # some a < y

    m = len(rest)
    lt = np.zeros((m + 1, m + 1), dtype=bool)
    idx = np.asarray(rest, dtype=int)
    if m:
        lt[:m, :m] = P.lt[np.ix_(idx, idx)] | np.outer(below[idx], above[idx])
        lt[m, :m] = above[idx]
        lt[:m, m] = below[idx]

    if label is None:
        label = "{" + ",".join(P.labels[a] for a in members) + "}"
    labels = [P.labels[x] for x in rest]
    labels.append(unique_labels(labels, [label])[0])
    # Poset() re-validates antisymmetry and transitivity of the fused order
    fused = Poset(lt, labels)

    position = {x: i for i, x in enumerate(rest)}
    psi = tuple(position.get(x, m) for x in range(P.n))
    bad = _check_isotone(P, fused, psi)
    if bad is not None:
        raise InvariantViolated("fusion map is not isotone", bad)
    logger.debug("fused %d elements of a %d-element poset", len(members), P.n)
    return FusionResult(fused, m, psi)


def _constant_on(A: Sequence[int], phi: Sequence[int]) -> None:
    for a in A[1:]:
        if phi[a] != phi[A[0]]:
            raise NotConstantOnA(A[0], a)


def fuse_factor(P: Poset, A: Iterable[int], phi: Sequence[int], Q: Poset) -> ElementMap:
    """The unique phi' on Fuse(P, A) with phi' . psi_A = phi."""
    members = sorted(set(A))
    bad = _check_isotone(P, Q, phi)
    if bad is not None:
        raise NotIsotone(*bad)
    _constant_on(members, phi)

    fusion = fuse(P, members)
    factored = [0] * fusion.poset.n
    for x in range(P.n):
        factored[fusion.psi[x]] = phi[x]
    bad = _check_isotone(fusion.poset, Q, factored)
    if bad is not None:
        raise InvariantViolated("factored map is not isotone", bad)
    return tuple(factored)


def fuse_iso_check(
    P: Poset, A: Iterable[int], phi: Sequence[int], Q: Poset
) -> Union[IsoMap, Tuple[int, int]]:
    """The factored map as an isomorphism, or the pair (x, y) with x not <= y,
    phi(x) <= phi(y) and no a1, a2 in A with x <= a1, a2 <= y."""
    members = sorted(set(A))
    missing = sorted(set(range(Q.n)) - set(phi))
    if missing:
        raise NotSurjective([Q.labels[q] for q in missing])
    _constant_on(members, phi)

    reaches_up = P.leq[:, members].any(axis=1)     # x <= some a
    reaches_down = P.leq[members, :].any(axis=0)   # some a <= y
    for x in range(P.n):
        for y in range(P.n):
            if not P.leq[x, y] and Q.leq[phi[x], phi[y]]:
                if not (reaches_up[x] and reaches_down[y]):
                    return x, y

    iso = IsoMap(fuse_factor(P, members, phi, Q))
    if not iso.respects(fuse(P, members).poset, Q):
        raise InvariantViolated("factored map is not an order isomorphism", iso.forward)
    return iso


# =====================================================
# SPLITTING
# =====================================================
def _split_preconditions(P: Poset, a: int, P0: FrozenSet[int], P1: FrozenSet[int]) -> None:
    if P0 | P1 != frozenset(range(P.n)):
        raise NotDownsets("union")
    for name, side in (("P0", P0), ("P1", P1)):
        if not is_downset(P, side):
            raise NotDownsets(name)
    if P0 <= P1 or P1 <= P0:
        raise ContainmentViolated()
    both = P0 & P1
    if a not in both or any(P.lt[a, x] for x in both):
        raise NotMaximalInIntersection(P.labels[a])


def split(P: Poset, a: int, P0: Iterable[int], P1: Iterable[int]) -> SplitResult:
    """Split(P, a): P - {a} in index order, then a#0 and a#1."""
    P0, P1 = frozenset(P0), frozenset(P1)
    _split_preconditions(P, a, P0, P1)

    rest = [x for x in range(P.n) if x != a]
    m = len(rest)
    a0, a1 = m, m + 1
    idx = np.asarray(rest, dtype=int)
    lt = np.zeros((m + 2, m + 2), dtype=bool)
    if m:
        lt[:m, :m] = P.lt[np.ix_(idx, idx)]
    for j, side in ((a0, P0), (a1, P1)):
        for i, x in enumerate(rest):
            lt[i, j] = P.lt[x, a]
            lt[j, i] = x in side and P.lt[a, x]

    labels = [P.labels[x] for x in rest]
    labels += unique_labels(labels, [f"{P.labels[a]}#0", f"{P.labels[a]}#1"])
    result = Poset(lt, labels)

    eta = tuple(rest) + (a, a)
    bad = _check_isotone(result, P, eta)
    if bad is not None:
        raise InvariantViolated("splitting map is not isotone", bad)

    position = {x: i for i, x in enumerate(rest)}
    side0 = frozenset(position[x] for x in P0 if x != a) | {a0}
    side1 = frozenset(position[x] for x in P1 if x != a) | {a1}
    return SplitResult(result, a0, a1, eta, side0, side1)


def split_fuse_roundtrip(P: Poset, a: int, P0: Iterable[int], P1: Iterable[int]) -> IsoMap:
    """Fuse(Split(P, a), {a0, a1}) -> P, sending the fused element to a."""
    s = split(P, a, P0, P1)
    outcome = fuse_iso_check(s.poset, [s.a0, s.a1], s.eta, P)
    if not isinstance(outcome, IsoMap):
        x, y = outcome
        raise InvariantViolated("split-then-fuse is not an isomorphism", (s.poset.labels[x], s.poset.labels[y]))
    if outcome(_fused_index(s)) != a:
        raise InvariantViolated("fused element does not map back to the split element", a)
    return outcome


def _fused_index(s: SplitResult) -> int:
    """Index of the fused element in Fuse(Split(P, a), {a0, a1})."""
    return s.poset.n - 2


def admissible_splits(P: Poset) -> Iterator[Tuple[int, FrozenSet[int], FrozenSet[int]]]:
    """Every (a, P0, P1) accepted by `split`, in a fixed order."""
    from src.distributive import enumerate_downsets

    everything = (1 << P.n) - 1
    downsets = enumerate_downsets(P)
    for left in downsets:
        for right in downsets:
            if left | right != everything or left & ~right == 0 or right & ~left == 0:
                continue
            both = [x for x in range(P.n) if (left & right) >> x & 1]
            P0 = frozenset(x for x in range(P.n) if left >> x & 1)
            P1 = frozenset(x for x in range(P.n) if right >> x & 1)
            for a in both:
                if not any(P.lt[a, x] for x in both):
                    yield a, P0, P1


def split_all(P: Poset, order: Sequence[str], p0: str, p1: str) -> Tuple[Poset, List[Tuple[str, str, str]]]:
    """Split each label of `order` in turn against the current downsets of p0 and p1.

    Returns the final poset and (original, copy0, copy1) labels per split.
    """
    current = P
    made: List[Tuple[str, str, str]] = []
    for label in order:
        down0 = frozenset(np.flatnonzero(current.leq[:, current.index(p0)]).tolist())
        down1 = frozenset(np.flatnonzero(current.leq[:, current.index(p1)]).tolist())
        result = split(current, current.index(label), down0, down1)
        made.append((label, result.poset.labels[result.a0], result.poset.labels[result.a1]))
        current = result.poset
    return current, made
