"""Congruences of finite lattices.

Con L is never materialised as a lattice. `ConStructure` keeps the
join-irreducible congruences (one per distinct prime-interval congruence),
their order, and for every pair x <= y the bitmask of join-irreducibles
below con(x, y). Every congruence is then a downset bitmask.
"""

import logging
import weakref
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple, Union

import numpy as np

from src.config import load_settings
from src.errors import BlocksNotIntervals, HomeMismatch, InvariantViolated, OracleTooLarge
from src.lattice_core import Lattice, sublattice
from src.poset_core import Poset, find_isomorphism, linear_extension
from src.report import VerificationReport

logger = logging.getLogger(__name__)


# =====================================================
# PARTITIONS
# =====================================================
@dataclass(frozen=True)
class Partition:
    """Block id per element, ids numbered in order of each block's least element."""

    block_of: Tuple[int, ...]

    @staticmethod
    def canonical(ids: Sequence[int]) -> "Partition":
        renumber: Dict[int, int] = {}
        return Partition(tuple(renumber.setdefault(i, len(renumber)) for i in ids))

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Iterable[int]]) -> "Partition":
        ids = list(range(n))
        for block in blocks:
            members = sorted(block)
            for x in members:
                ids[x] = n + members[0]
        return cls.canonical(ids)

    @classmethod
    def identity(cls, n: int) -> "Partition":
        return cls(tuple(range(n)))

    @classmethod
    def full(cls, n: int) -> "Partition":
        return cls(tuple([0] * n))

    @property
    def n(self) -> int:
        return len(self.block_of)

    @cached_property
    def blocks(self) -> List[List[int]]:
        grouped: Dict[int, List[int]] = {}
        for x, b in enumerate(self.block_of):
            grouped.setdefault(b, []).append(x)
        return [grouped[b] for b in sorted(grouped)]

    def same(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]

    def refines(self, other: "Partition") -> bool:
        image: Dict[int, int] = {}
        for mine, theirs in zip(self.block_of, other.block_of):
            if image.setdefault(mine, theirs) != theirs:
                return False
        return True

    def restrict(self, elements: Sequence[int]) -> "Partition":
        return Partition.canonical([self.block_of[x] for x in elements])


class Congruence:
    """A congruence of one lattice, stored as a partition of its indices.

    Comparison is refinement and only makes sense on the same lattice;
    mixing lattices raises HomeMismatch.
    """

    def __init__(self, lattice: Lattice, partition: Partition):
        """
        Args:
            lattice: The lattice the congruence lives on
            partition: Its blocks; not re-checked for compatibility
        """
        self.lattice = lattice
        self.partition = partition

    @property
    def blocks(self) -> List[List[int]]:
        return self.partition.blocks

    def collapses(self, x: int, y: int) -> bool:
        """
        Args:
            x: Element index
            y: Element index

        Returns:
            True when x and y lie in the same block
        """
        return self.partition.same(x, y)

    def is_zero(self) -> bool:
        return len(self.partition.blocks) == self.lattice.n

    def is_one(self) -> bool:
        return len(self.partition.blocks) == 1

    def _check_home(self, other: "Congruence") -> None:
        if self.lattice.fingerprint != other.lattice.fingerprint:
            raise HomeMismatch()

    def __le__(self, other: "Congruence") -> bool:
        self._check_home(other)
        return self.partition.refines(other.partition)

    def __lt__(self, other: "Congruence") -> bool:
        return self <= other and self != other

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Congruence):
            return NotImplemented
        return self.lattice.fingerprint == other.lattice.fingerprint and self.partition == other.partition

    def __hash__(self) -> int:
        return hash((self.lattice.fingerprint, self.partition))

    def describe(self) -> List[List[str]]:
        """Non-singleton blocks by label."""
        return [[self.lattice.labels[x] for x in block] for block in self.blocks if len(block) > 1]

    def __repr__(self) -> str:
        return f"Congruence({self.describe()})"


# =====================================================
# CLOSURE
# =====================================================
_ROWS: "weakref.WeakKeyDictionary[Lattice, Tuple[list, list]]" = weakref.WeakKeyDictionary()


def _rows(L: Lattice) -> Tuple[list, list]:
    rows = _ROWS.get(L)
    if rows is None:
        rows = (L.join.tolist(), L.meet.tolist())
        _ROWS[L] = rows
    return rows


def _close(L: Lattice, pairs: Iterable[Tuple[int, int]]) -> Partition:
    """Least congruence containing the pairs (union-find worklist).

    Only pairs that actually merge two classes have their translates queued;
    any other pair is already implied by earlier merges.
    """
    joins, meets = _rows(L)
    parent = list(range(L.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = deque(pairs)
    while work:
        x, y = work.pop()
        rx, ry = find(x), find(y)
        if rx == ry:
            continue
        parent[max(rx, ry)] = min(rx, ry)
        work.extend(zip(joins[x], joins[y]))
        work.extend(zip(meets[x], meets[y]))

    return Partition.canonical([find(x) for x in range(L.n)])


def _pairs_of(partition: Partition) -> List[Tuple[int, int]]:
    return [(block[0], x) for block in partition.blocks for x in block[1:]]


def principal_congruence(L: Lattice, a: int, b: int) -> Congruence:
    return Congruence(L, _close(L, [(a, b)]))


def generate_congruence(L: Lattice, pairs: Iterable[Tuple[int, int]]) -> Congruence:
    return Congruence(L, _close(L, pairs))


def congruence_join(L: Lattice, alpha: Congruence, beta: Congruence) -> Congruence:
    for theta in (alpha, beta):
        if theta.lattice.fingerprint != L.fingerprint:
            raise HomeMismatch()
    return Congruence(L, _close(L, _pairs_of(alpha.partition) + _pairs_of(beta.partition)))


def zero(L: Lattice) -> Congruence:
    return Congruence(L, Partition.identity(L.n))


def one(L: Lattice) -> Congruence:
    return Congruence(L, Partition.full(L.n))


# =====================================================
# DEFINITIONAL CHECKS
# =====================================================
def is_congruence(L: Lattice, partition: Partition) -> bool:
    ids = np.asarray(partition.block_of)
    for block in partition.blocks:
        rep = block[0]
        for y in block[1:]:
            if not np.array_equal(ids[L.join[rep]], ids[L.join[y]]):
                return False
            if not np.array_equal(ids[L.meet[rep]], ids[L.meet[y]]):
                return False
    return True


def _interval_blocks(L: Lattice, partition: Partition) -> None:
    for block in partition.blocks:
        lo, hi = block[0], block[0]
        for x in block[1:]:
            lo, hi = int(L.meet[lo, x]), int(L.join[hi, x])
        if sorted(block) != L.interval(lo, hi):
            raise BlocksNotIntervals([L.labels[x] for x in block])


def technical_check(L: Lattice, partition: Partition) -> bool:
    """Cover condition: x covered by y, z and x = y implies z = y v z; plus its dual."""
    _interval_blocks(L, partition)
    same = partition.same
    for x in range(L.n):
        ups = L.upper_covers(x)
        for y in ups:
            if same(x, y) and any(not same(z, int(L.join[y, z])) for z in ups if z != y):
                return False
        downs = L.lower_covers(x)
        for y in downs:
            if same(x, y) and any(not same(z, int(L.meet[y, z])) for z in downs if z != y):
                return False
    return True


# =====================================================
# CON L THROUGH ITS JOIN-IRREDUCIBLES
# =====================================================
class ConStructure:
    def __init__(self, L: Lattice):
        self.lattice = L
        self.covers = list(L.covers)

        index_of: Dict[Partition, int] = {}
        self.ji: List[Congruence] = []
        self.ji_cover: List[Tuple[int, int]] = []
        self.cover_ji: Dict[Tuple[int, int], int] = {}
        for x, y in self.covers:
            partition = _close(L, [(x, y)])
            if partition not in index_of:
                index_of[partition] = len(self.ji)
                self.ji.append(Congruence(L, partition))
                self.ji_cover.append((x, y))
            self.cover_ji[(x, y)] = index_of[partition]

        m = len(self.ji)
        order = np.zeros((m, m), dtype=bool)
        for j, (x, y) in enumerate(self.ji_cover):
            for k, theta in enumerate(self.ji):
                order[j, k] = theta.collapses(x, y)
        np.fill_diagonal(order, False)
        labels = [f"con({L.labels[x]},{L.labels[y]})" for x, y in self.ji_cover]
        self.ji_poset = Poset(order, labels)
        self.down: List[int] = [
            (1 << j) | sum(1 << i for i in np.flatnonzero(order[:, j])) for j in range(m)
        ]
        self.full = (1 << m) - 1
        self._down_set = set(self.down)
        self._pair = self._pair_masks()
        self._congruences: Dict[int, Congruence] = {}
        logger.debug("Con(%s): %d covers, %d join-irreducibles", L.fingerprint, len(self.covers), m)

    def _pair_masks(self) -> List[Dict[int, int]]:
        L = self.lattice
        masks: List[Dict[int, int]] = [dict() for _ in range(L.n)]
        for x in reversed(linear_extension(L.poset, minimal_first=True)):
            row = masks[x]
            row[x] = 0
            ups = L.upper_covers(x)
            for y in np.flatnonzero(L.lt[x]):
                y = int(y)
                c = next(c for c in ups if L.leq[c, y])
                row[y] = self.down[self.cover_ji[(x, c)]] | masks[c][y]
        return masks

    # -------------------------------------------------
    # masks
    # -------------------------------------------------
    def mask(self, x: int, y: int) -> int:
        """Join-irreducibles below con(x, y)."""
        L = self.lattice
        lo, hi = int(L.meet[x, y]), int(L.join[x, y])
        return self._pair[lo][hi]

    def is_join_irreducible(self, mask: int) -> bool:
        return mask in self._down_set

    def ji_index(self, mask: int) -> Optional[int]:
        return self.down.index(mask) if mask in self._down_set else None

    def mask_of(self, theta: Congruence) -> int:
        return sum(1 << j for j, (x, y) in enumerate(self.ji_cover) if theta.collapses(x, y))

    def congruence(self, mask: int) -> Congruence:
        theta = self._congruences.get(mask)
        if theta is None:
            L = self.lattice
            parent = list(range(L.n))

            def find(x: int) -> int:
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for j in range(len(self.ji)):
                if mask >> j & 1:
                    for block in self.ji[j].blocks:
                        for x in block[1:]:
                            rx, ry = find(block[0]), find(x)
                            if rx != ry:
                                parent[max(rx, ry)] = min(rx, ry)
            theta = Congruence(L, Partition.canonical([find(x) for x in range(L.n)]))
            self._congruences[mask] = theta
        return theta

    def principal_masks(self) -> Set[int]:
        return {mask for row in self._pair for mask in row.values()}

    def comparable_pairs(self) -> Iterator[Tuple[int, int]]:
        for x, row in enumerate(self._pair):
            for y in row:
                if y != x:
                    yield x, y

    def all_masks(self) -> List[int]:
        from src.distributive import enumerate_downsets

        return enumerate_downsets(self.ji_poset)

    def describe(self, mask: int) -> List[str]:
        return [self.ji_poset.labels[j] for j in range(len(self.ji)) if mask >> j & 1]


_STRUCTURES: "weakref.WeakKeyDictionary[Lattice, ConStructure]" = weakref.WeakKeyDictionary()


def con_structure(L: Lattice) -> ConStructure:
    structure = _STRUCTURES.get(L)
    if structure is None or structure.lattice.fingerprint != L.fingerprint:
        structure = ConStructure(L)
        _STRUCTURES[L] = structure
    return structure


def principal_set(L: Lattice) -> List[Congruence]:
    s = con_structure(L)
    return [s.congruence(mask) for mask in sorted(s.principal_masks(), key=lambda m: (bin(m).count("1"), m))]


def all_congruences(L: Lattice) -> List[Congruence]:
    s = con_structure(L)
    return [s.congruence(mask) for mask in s.all_masks()]


# =====================================================
# MINIMALITY
# =====================================================
def is_minimal_representation(L: Lattice, D: Union[Lattice, "object"]) -> VerificationReport:
    from src.distributive import join_irreducibles

    s = con_structure(L)
    P = join_irreducibles(D)
    report = VerificationReport("minimal-representation", f"L({L.n} elements) against D")

    iso = find_isomorphism(s.ji_poset, P)
    if report.record("ji-con-isomorphic", iso is not None,
                     {"ji_con": list(s.ji_poset.labels), "ji_d": list(P.labels)}):
        report.witness["iso"] = {s.ji_poset.labels[j]: P.labels[iso(j)] for j in range(P.n)}

    offender = None
    for x, y in s.comparable_pairs():
        mask = s.mask(x, y)
        if mask != s.full and mask != 0 and not s.is_join_irreducible(mask):
            offender = {"pair": [L.labels[x], L.labels[y]], "ji_below": s.describe(mask)}
            break
    report.record("princ-equals-min", offender is None, offender)
    logger.debug("minimal representation check: %s", report.checks)
    return report


# =====================================================
# RESTRICTION AND EMBEDDINGS
# =====================================================
def restriction(L: Lattice, alpha: Congruence, elements: Sequence[int]) -> Congruence:
    """alpha restricted to the sublattice on `elements`."""
    K = sublattice(L, elements)
    members = sorted(set(elements))
    theta = Congruence(K, alpha.partition.restrict(members))
    if not is_congruence(K, theta.partition):
        raise InvariantViolated("restriction is not a congruence of the sublattice", theta.describe())
    return theta


def restrict_along(alpha: Congruence, K: Lattice, embedding: Sequence[int]) -> Congruence:
    """Pull alpha back along an index embedding K -> alpha.lattice."""
    return Congruence(K, alpha.partition.restrict(embedding))


def generated_by(L: Lattice, alpha: Congruence, embedding: Sequence[int]) -> Congruence:
    """con_L(alpha) for a congruence alpha of a sublattice embedded by index."""
    return generate_congruence(L, [(embedding[x], embedding[y]) for x, y in _pairs_of(alpha.partition)])


def monotone_under_embedding(K0: Lattice, K1: Lattice, embedding: Sequence[int]) -> bool:
    """con_K0(x,y) <= con_K0(z,w) implies the same in K1, over all comparable pairs of K0."""
    s0, s1 = con_structure(K0), con_structure(K1)
    pairs = list(s0.comparable_pairs())
    for x, y in pairs:
        m0 = s0.mask(x, y)
        m1 = s1.mask(embedding[x], embedding[y])
        for z, w in pairs:
            if m0 & ~s0.mask(z, w) == 0 and m1 & ~s1.mask(embedding[z], embedding[w]) != 0:
                return False
    return True


# =====================================================
# BRUTE-FORCE ORACLE
# =====================================================
def set_partitions(n: int) -> Iterator[Partition]:
    """All partitions of range(n) as restricted growth strings."""
    if n == 0:
        yield Partition(())
        return
    ids = [0] * n

    def grow(position: int, blocks: int) -> Iterator[Partition]:
        if position == n:
            yield Partition(tuple(ids))
            return
        for b in range(blocks + 1):
            ids[position] = b
            yield from grow(position + 1, max(blocks, b + 1))

    yield from grow(1, 1)


def brute_force_congruences(L: Lattice, limit: Optional[int] = None) -> List[Partition]:
    limit = load_settings().max_partition_elements if limit is None else limit
    if L.n > limit:
        raise OracleTooLarge(L.n, limit)
    return [p for p in set_partitions(L.n) if is_congruence(L, p)]


def brute_force_principal(L: Lattice, a: int, b: int, congruences: Optional[List[Partition]] = None) -> Partition:
    candidates = [p for p in (congruences or brute_force_congruences(L)) if p.same(a, b)]
    least = [p for p in candidates if all(p.refines(q) for q in candidates)]
    return least[0]
