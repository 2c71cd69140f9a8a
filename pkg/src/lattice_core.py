"""Finite lattices: validation, operation tables and the basic constructions.

A Lattice wraps a Poset together with its join and meet tables. Every
constructor in this module goes through `lattice_from_poset`, so a Lattice
value is always a validated lattice.
"""

import hashlib
import logging
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.errors import (
    DuplicateLabel,
    InvariantViolated,
    NotACoverChain,
    NotALattice,
    NotASublattice,
)
from src.poset_core import Poset, poset_from_relations, unique_labels

logger = logging.getLogger(__name__)

ElementSpec = Tuple[str, Sequence[str], Sequence[str]]


class Lattice:
    """A finite lattice: its order plus read-only join and meet tables.

    Elements are indices 0..n-1 into `labels`; the tables are validated by
    the constructors in this module, not here.
    """

    def __init__(self, poset: Poset, join: np.ndarray, meet: np.ndarray):
        """
        Args:
            poset: The underlying order
            join: n x n int table, join[x, y] = x v y
            meet: n x n int table, meet[x, y] = x ^ y
        """
        self.poset = poset
        self.n = poset.n
        self.labels = poset.labels
        self.join = join
        self.meet = meet
        self.join.setflags(write=False)
        self.meet.setflags(write=False)

    # -------------------------------------------------
    # order
    # -------------------------------------------------
    @property
    def leq(self) -> np.ndarray:
        return self.poset.leq

    @property
    def lt(self) -> np.ndarray:
        return self.poset.lt

    @property
    def covers(self) -> List[Tuple[int, int]]:
        return self.poset.covers

    def is_cover(self, x: int, y: int) -> bool:
        return bool(self.poset.cover_matrix[x, y])

    def upper_covers(self, x: int) -> List[int]:
        return self.poset.upper_covers(x)

    def lower_covers(self, x: int) -> List[int]:
        return self.poset.lower_covers(x)

    @cached_property
    def bottom(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=1))[0])

    @cached_property
    def top(self) -> int:
        return int(np.flatnonzero(self.leq.all(axis=0))[0])

    def index(self, label: str) -> int:
        return self.poset.index(label)

    def label(self, x: int) -> str:
        return self.labels[x]

    def interval(self, x: int, y: int) -> List[int]:
        """
        Args:
            x: Lower end
            y: Upper end

        Returns:
            Every z with x <= z <= y, in index order (empty unless x <= y)
        """
        return [int(z) for z in np.flatnonzero(self.leq[x] & self.leq[:, y])]

    def maximal_chain(self, x: int, y: int) -> List[int]:
        """x = c0 < c1 < ... < cn = y, each step a cover, lowest-index cover first."""
        if not self.leq[x, y]:
            raise ValueError(f"{x} is not below {y}")
        chain = [x]
        while chain[-1] != y:
            chain.append(next(c for c in self.upper_covers(chain[-1]) if self.leq[c, y]))
        return chain

    @cached_property
    def fingerprint(self) -> str:
        digest = hashlib.sha1()
        digest.update("\x1f".join(self.labels).encode())
        digest.update(repr(self.covers).encode())
        return digest.hexdigest()[:16]

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Lattice):
            return NotImplemented
        return self.poset == other.poset

    def __hash__(self) -> int:
        return hash(self.poset)

    def __repr__(self) -> str:
        return f"Lattice(n={self.n}, covers={len(self.covers)}, id={self.fingerprint})"


# =====================================================
# VALIDATION
# =====================================================
def _least_bounds(leq: np.ndarray, x: int, upward: bool) -> Tuple[np.ndarray, Optional[int]]:
    """For a fixed x, the least upper (or greatest lower) bound with every y.

    The bound set U of x and y is an upset; z in U is its least element iff
    the upset of z has |U| elements.
    """
    order = leq if upward else leq.T
    bounds = order[x][None, :] & order
    sizes = bounds.sum(axis=1)
    reach = order.sum(axis=1)
    candidates = bounds & (reach[None, :] == sizes[:, None])
    counts = candidates.sum(axis=1)
    bad = np.flatnonzero(counts != 1)
    return candidates.argmax(axis=1), (int(bad[0]) if bad.size else None)


def lattice_from_poset(P: Poset) -> Lattice:
    """Validate P as a lattice and tabulate its operations."""
    if P.n == 0:
        raise NotALattice(0, 0, "no-elements")
    n = P.n
    join = np.empty((n, n), dtype=np.int64)
    meet = np.empty((n, n), dtype=np.int64)
    for x in range(n):
        row, bad = _least_bounds(P.leq, x, upward=True)
        if bad is not None:
            raise NotALattice(x, bad, "no-lub")
        join[x] = row
        row, bad = _least_bounds(P.leq, x, upward=False)
        if bad is not None:
            raise NotALattice(x, bad, "no-glb")
        meet[x] = row
    return Lattice(P, join, meet)


def lattice_from_covers(labels: Sequence[str], covers: Iterable[Tuple[str, str]]) -> Lattice:
    index = {label: i for i, label in enumerate(labels)}
    pairs = [(index[lo], index[hi]) for lo, hi in covers]
    return lattice_from_poset(poset_from_relations(len(labels), pairs, labels))


def lattice_from_index_covers(labels: Sequence[str], covers: Iterable[Tuple[int, int]]) -> Lattice:
    return lattice_from_poset(poset_from_relations(len(labels), list(covers), labels))


def chain(n: int) -> Lattice:
    return lattice_from_index_covers([str(i) for i in range(n)], [(i, i + 1) for i in range(n - 1)])


# =====================================================
# CONSTRUCTIONS
# =====================================================
def dual(L: Lattice) -> Lattice:
    return Lattice(Poset(L.lt.T, L.labels), L.meet.copy(), L.join.copy())


def relabel(L: Lattice, labels: Sequence[str]) -> Lattice:
    return Lattice(Poset(L.lt, labels), L.join.copy(), L.meet.copy())


def glued_sum(L0: Lattice, L1: Lattice) -> Tuple[Lattice, List[int], List[int]]:
    """Identify the top of L0 with the bottom of L1.

    Returns the sum and the index embeddings of L0 and L1. The glued element
    keeps the label it has in L0.
    """
    n0, n1 = L0.n, L1.n
    rest = [y for y in range(n1) if y != L1.bottom]
    emb0 = list(range(n0))
    emb1 = [0] * n1
    emb1[L1.bottom] = L0.top
    for offset, y in enumerate(rest):
        emb1[y] = n0 + offset

    n = n0 + n1 - 1
    lt = np.zeros((n, n), dtype=bool)
    lt[:n0, :n0] = L0.lt
    for x, y in np.argwhere(L1.lt):
        lt[emb1[x], emb1[y]] = True
    lt[:n0, n0:] = True
    labels = list(L0.labels) + unique_labels(L0.labels, [L1.labels[y] for y in rest])

    glued = lattice_from_poset(Poset(lt, labels))
    logger.debug("glued sum: %d + %d -> %d elements", n0, n1, glued.n)
    return glued, emb0, emb1


def adjoin_relative_complement(K: Lattice, a: int, c: int, b: int, label: str = "u") -> Lattice:
    """K plus a new element u with u ^ c = a and u v c = b, appended at index K.n."""
    if not (K.is_cover(a, c) and K.is_cover(c, b)):
        raise NotACoverChain(a, c, b)
    if label in K.labels:
        raise DuplicateLabel(label)

    n = K.n
    lt = np.zeros((n + 1, n + 1), dtype=bool)
    lt[:n, :n] = K.lt
    lt[:n, n] = K.leq[:, a]
    lt[n, :n] = K.leq[b, :]
    extended = lattice_from_poset(Poset(lt, list(K.labels) + [label]))

    u = n
    for x in range(n):
        expected_join = u if K.leq[x, a] else int(K.join[b, x])
        expected_meet = u if K.leq[b, x] else int(K.meet[a, x])
        if extended.join[u, x] != expected_join or extended.meet[u, x] != expected_meet:
            raise InvariantViolated("one-point extension disagrees with the adjunction rule", x)
    if extended.meet[u, c] != a or extended.join[u, c] != b:
        raise InvariantViolated("new element is not a relative complement", (a, c, b))
    return extended


def insert_elements(L: Lattice, specs: Sequence[ElementSpec]) -> Lattice:
    """Add new elements at once, each given by (label, lower covers, upper covers).

    Neighbour labels may name other new elements. The result is validated as
    a lattice and every requested cover must be a cover of the result, with
    no other covers touching the new elements.
    """
    labels = list(L.labels)
    for label, _, _ in specs:
        if label in labels:
            raise DuplicateLabel(label)
        labels.append(label)
    index = {label: i for i, label in enumerate(labels)}

    requested = set()
    for label, lowers, uppers in specs:
        requested.update((index[lo], index[label]) for lo in lowers)
        requested.update((index[label], index[hi]) for hi in uppers)

    extended = lattice_from_poset(poset_from_relations(len(labels), list(L.covers) + sorted(requested), labels))

    fresh = set(range(L.n, len(labels)))
    touching = {(x, y) for x, y in extended.covers if x in fresh or y in fresh}
    if touching != requested:
        raise InvariantViolated("inserted elements do not sit where requested", sorted(touching ^ requested))
    return extended


def remove_element(L: Lattice, x: int) -> Lattice:
    keep = [y for y in range(L.n) if y != x]
    return sublattice(L, keep)


def sublattice_witness(L: Lattice, elements: Iterable[int]) -> Optional[Tuple[int, int, str]]:
    members = sorted(set(elements))
    inside = np.zeros(L.n, dtype=bool)
    inside[members] = True
    idx = np.asarray(members, dtype=int)
    for name, table in (("join", L.join), ("meet", L.meet)):
        block = table[np.ix_(idx, idx)]
        bad = np.argwhere(~inside[block])
        if bad.size:
            i, j = bad[0]
            return int(idx[i]), int(idx[j]), name
    return None


def is_sublattice(L: Lattice, elements: Iterable[int]) -> bool:
    return sublattice_witness(L, elements) is None


def sublattice(L: Lattice, elements: Iterable[int]) -> Lattice:
    """The sublattice on the given elements, in increasing index order."""
    members = sorted(set(elements))
    witness = sublattice_witness(L, members)
    if witness is not None:
        raise NotASublattice(*witness)
    position = {x: i for i, x in enumerate(members)}
    idx = np.asarray(members, dtype=int)
    remap = np.vectorize(position.__getitem__, otypes=[np.int64])
    poset = Poset(L.lt[np.ix_(idx, idx)], [L.labels[x] for x in members])
    return Lattice(poset, remap(L.join[np.ix_(idx, idx)]), remap(L.meet[np.ix_(idx, idx)]))


# =====================================================
# STRUCTURAL QUERIES
# =====================================================
def irreducibility(L: Lattice, x: int) -> Tuple[bool, bool]:
    """(meet_irreducible, join_irreducible) by cover counts; bounds are neither."""
    return len(L.upper_covers(x)) == 1, len(L.lower_covers(x)) == 1


def length(L: Lattice) -> int:
    graph = nx.DiGraph()
    graph.add_nodes_from(range(L.n))
    graph.add_edges_from(L.covers)
    return int(nx.dag_longest_path_length(graph))


def heights(L: Lattice) -> Dict[int, int]:
    return dict(enumerate(L.poset.heights))
