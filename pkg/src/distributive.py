"""Birkhoff duality between finite posets and finite distributive lattices."""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple, Union

import numpy as np

from src.errors import InvariantViolated, MalformedInput
from src.lattice_core import Lattice
from src.poset_core import Poset, find_isomorphism, linear_extension, maximal_elements, subposet

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DistributiveLattice:
    lattice: Lattice
    generators: Optional[Poset] = None
    # bitmask over generator indices, one per lattice element
    downsets: Optional[Tuple[int, ...]] = None


@dataclass(frozen=True)
class DualAtomCorrespondence:
    forward: Dict[int, int]   # dual atom -> maximal join-irreducible
    backward: Dict[int, int]  # maximal join-irreducible -> dual atom


LatticeLike = Union[Lattice, DistributiveLattice]


def _as_lattice(D: LatticeLike) -> Lattice:
    return D.lattice if isinstance(D, DistributiveLattice) else D


def _mask_label(P: Poset, mask: int) -> str:
    return "{" + ",".join(P.labels[i] for i in range(P.n) if mask >> i & 1) + "}"


def enumerate_downsets(P: Poset) -> List[int]:
    """All downsets of P as bitmasks, sorted by (size, value)."""
    order = linear_extension(P, minimal_first=True)
    below = [sum(1 << y for y in P.lower_covers(x)) for x in range(P.n)]
    found: List[int] = []

    def extend(position: int, mask: int) -> None:
        if position == len(order):
            found.append(mask)
            return
        x = order[position]
        extend(position + 1, mask)
        if below[x] & ~mask == 0:
            extend(position + 1, mask | 1 << x)

    extend(0, 0)
    return sorted(found, key=lambda m: (bin(m).count("1"), m))


def downset_lattice(P: Poset) -> DistributiveLattice:
    masks = enumerate_downsets(P)
    position = {mask: i for i, mask in enumerate(masks)}
    n = len(masks)

    lt = np.zeros((n, n), dtype=bool)
    join = np.empty((n, n), dtype=np.int64)
    meet = np.empty((n, n), dtype=np.int64)
    for i, left in enumerate(masks):
        for j, right in enumerate(masks):
            lt[i, j] = i != j and left & ~right == 0
            join[i, j] = position[left | right]
            meet[i, j] = position[left & right]

    poset = Poset(lt, [_mask_label(P, mask) for mask in masks])
    logger.debug("Down(P): %d generators -> %d downsets", P.n, n)
    return DistributiveLattice(Lattice(poset, join, meet), P, tuple(masks))


def join_irreducibles(D: LatticeLike) -> Poset:
    L = _as_lattice(D)
    return subposet(L.poset, [x for x in range(L.n) if len(L.lower_covers(x)) == 1])


def join_irreducible_elements(D: LatticeLike) -> List[int]:
    L = _as_lattice(D)
    return [x for x in range(L.n) if len(L.lower_covers(x)) == 1]


def dual_atoms(D: LatticeLike) -> Set[int]:
    L = _as_lattice(D)
    return set(L.lower_covers(L.top))


def corr_dual_atoms_maximal(D: LatticeLike) -> DualAtomCorrespondence:
    L = _as_lattice(D)
    ji = join_irreducible_elements(L)
    ji_poset = subposet(L.poset, ji)
    maximal = {ji[i] for i in maximal_elements(ji_poset)}

    forward: Dict[int, int] = {}
    for a in sorted(dual_atoms(L)):
        outside = [p for p in ji if not L.leq[p, a]]
        if len(outside) != 1 or outside[0] not in maximal:
            raise InvariantViolated("dual atom without a unique maximal join-irreducible outside it", a)
        forward[a] = outside[0]

    backward: Dict[int, int] = {}
    for p in sorted(maximal):
        rest = L.bottom
        for q in ji:
            if q != p:
                rest = int(L.join[rest, q])
        backward[p] = rest

    if any(backward.get(p) != a for a, p in forward.items()) or len(forward) != len(backward):
        raise InvariantViolated("dual-atom correspondence does not compose to the identity", (forward, backward))
    return DualAtomCorrespondence(forward, backward)


def is_distributive(L: Lattice) -> bool:
    J, M = L.join, L.meet
    for x in range(L.n):
        lhs = M[x][J]
        rhs = J[M[x][:, None], M[x][None, :]]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def as_distributive(L: Lattice) -> DistributiveLattice:
    """Accept an explicit distributive lattice and recover its Birkhoff encoding."""
    if not is_distributive(L):
        raise MalformedInput("lattice is not distributive")
    P = join_irreducibles(L)
    rebuilt = downset_lattice(P)
    iso = find_isomorphism(L.poset, rebuilt.lattice.poset)
    if iso is None:
        raise InvariantViolated("lattice is not isomorphic to Down(Ji(D))")
    return DistributiveLattice(L, P, tuple(rebuilt.downsets[iso(x)] for x in range(L.n)))
