"""Finite ordered sets stored as dense boolean strict-order matrices."""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import networkx as nx
import numpy as np
from networkx.algorithms.isomorphism import DiGraphMatcher

from src.errors import CycleDetected, DuplicateLabel, InvariantViolated

logger = logging.getLogger(__name__)


def _compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Boolean relational product a;b."""
    return (a.astype(np.int32) @ b.astype(np.int32)) > 0


def unique_labels(taken: Iterable[str], labels: Sequence[str], suffix: str = "'") -> List[str]:
    """Rename colliding labels by appending suffix until they are fresh."""
    used = set(taken)
    result = []
    for label in labels:
        fresh = label
        while fresh in used:
            fresh += suffix
        used.add(fresh)
        result.append(fresh)
    return result


class Poset:
    """A finite strict order `lt` on elements 0..n-1 with unique display labels."""

    def __init__(self, lt: np.ndarray, labels: Optional[Sequence[str]] = None):
        lt = np.array(lt, dtype=bool)
        if lt.ndim != 2 or lt.shape[0] != lt.shape[1]:
            raise ValueError(f"order matrix must be square, got shape {lt.shape}")
        n = lt.shape[0]
        if labels is None:
            labels = [str(i) for i in range(n)]
        labels = tuple(str(label) for label in labels)
        if len(labels) != n:
            raise ValueError(f"{len(labels)} labels for {n} elements")
        if len(set(labels)) != n:
            seen: Set[str] = set()
            for label in labels:
                if label in seen:
                    raise DuplicateLabel(label)
                seen.add(label)

        if n and lt.diagonal().any():
            x = int(np.flatnonzero(lt.diagonal())[0])
            raise InvariantViolated("strict order is reflexive", x)
        both = lt & lt.T
        if both.any():
            x, y = map(int, np.argwhere(both)[0])
            raise InvariantViolated("strict order is not antisymmetric", (x, y))
        if n and (_compose(lt, lt) & ~lt).any():
            x, y = map(int, np.argwhere(_compose(lt, lt) & ~lt)[0])
            raise InvariantViolated("strict order is not transitive", (x, y))

        lt.setflags(write=False)
        self.n = n
        self.lt = lt
        self.labels: Tuple[str, ...] = labels
        self._index = {label: i for i, label in enumerate(labels)}

    # -------------------------------------------------
    # queries
    # -------------------------------------------------
    @cached_property
    def leq(self) -> np.ndarray:
        leq = self.lt | np.eye(self.n, dtype=bool)
        leq.setflags(write=False)
        return leq

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        covers = self.lt & ~_compose(self.lt, self.lt) if self.n else self.lt.copy()
        covers.setflags(write=False)
        return covers

    @cached_property
    def covers(self) -> List[Tuple[int, int]]:
        return [(int(x), int(y)) for x, y in np.argwhere(self.cover_matrix)]

    def index(self, label: str) -> int:
        return self._index[label]

    def less(self, x: int, y: int) -> bool:
        return bool(self.lt[x, y])

    def comparable(self, x: int, y: int) -> bool:
        return bool(self.leq[x, y] or self.leq[y, x])

    def upper_covers(self, x: int) -> List[int]:
        return [int(y) for y in np.flatnonzero(self.cover_matrix[x])]

    def lower_covers(self, x: int) -> List[int]:
        return [int(y) for y in np.flatnonzero(self.cover_matrix[:, x])]

    @cached_property
    def heights(self) -> Tuple[int, ...]:
        """Length of the longest chain ending at each element."""
        height = [0] * self.n
        for x in linear_extension(self, minimal_first=True):
            for y in self.upper_covers(x):
                height[y] = max(height[y], height[x] + 1)
        return tuple(height)

    @cached_property
    def depths(self) -> Tuple[int, ...]:
        """Length of the longest chain starting at each element."""
        depth = [0] * self.n
        for x in linear_extension(self, minimal_first=False):
            for y in self.lower_covers(x):
                depth[y] = max(depth[y], depth[x] + 1)
        return tuple(depth)

    def hasse_graph(self) -> nx.DiGraph:
        """Cover digraph with structural invariants attached to the nodes."""
        graph = nx.DiGraph()
        for x in range(self.n):
            graph.add_node(x, rank=(self.heights[x], self.depths[x]))
        graph.add_edges_from(self.covers)
        return graph

    def relation_pairs(self) -> List[Tuple[int, int]]:
        return [(int(x), int(y)) for x, y in np.argwhere(self.lt)]

    def relabel(self, labels: Sequence[str]) -> "Poset":
        return Poset(self.lt, labels)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Poset):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.lt, other.lt)

    def __hash__(self) -> int:
        return hash((self.labels, self.lt.tobytes()))

    def __repr__(self) -> str:
        return f"Poset(n={self.n}, covers={[(self.labels[x], self.labels[y]) for x, y in self.covers]})"


@dataclass(frozen=True)
class IsoMap:
    """Order isomorphism given by the image of each element index."""

    forward: Tuple[int, ...]

    @cached_property
    def inverse(self) -> Tuple[int, ...]:
        inverse = [0] * len(self.forward)
        for x, y in enumerate(self.forward):
            inverse[y] = x
        return tuple(inverse)

    def __call__(self, x: int) -> int:
        return self.forward[x]

    def __len__(self) -> int:
        return len(self.forward)

    def respects(self, P: Poset, Q: Poset) -> bool:
        if P.n != Q.n or sorted(self.forward) != list(range(P.n)):
            return False
        image = np.asarray(self.forward, dtype=int)
        return bool(np.array_equal(Q.lt[np.ix_(image, image)], P.lt))


# =====================================================
# CONSTRUCTION
# =====================================================
def poset_from_relations(
    n: int,
    pairs: Iterable[Tuple[int, int]],
    labels: Optional[Sequence[str]] = None,
) -> Poset:
    """Close a generating set of (lo, hi) pairs into a strict order."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(n))
    for lo, hi in pairs:
        if not (0 <= lo < n and 0 <= hi < n):
            raise IndexError(f"relation ({lo}, {hi}) outside 0..{n - 1}")
        if lo == hi:
            raise CycleDetected([lo])
        graph.add_edge(lo, hi)

    if not nx.is_directed_acyclic_graph(graph):
        cycle = nx.find_cycle(graph)
        raise CycleDetected([edge[0] for edge in cycle])

    lt = np.zeros((n, n), dtype=bool)
    for lo, hi in nx.transitive_closure_dag(graph).edges():
        lt[lo, hi] = True
    return Poset(lt, labels)


def chain_poset(n: int) -> Poset:
    return poset_from_relations(n, [(i, i + 1) for i in range(n - 1)])


def antichain_poset(n: int) -> Poset:
    return Poset(np.zeros((n, n), dtype=bool))


def maximal_elements(P: Poset) -> Set[int]:
    return {int(x) for x in np.flatnonzero(~P.lt.any(axis=1))}


def minimal_elements(P: Poset) -> Set[int]:
    return {int(x) for x in np.flatnonzero(~P.lt.any(axis=0))}


def downset(P: Poset, x: int) -> Set[int]:
    return {int(y) for y in np.flatnonzero(P.leq[:, x])}


def upset(P: Poset, x: int) -> Set[int]:
    return {int(y) for y in np.flatnonzero(P.leq[x])}


def is_downset(P: Poset, subset: Iterable[int]) -> bool:
    members = set(subset)
    return all(downset(P, x) <= members for x in members)


def convexity_witness(P: Poset, subset: Iterable[int]) -> Optional[Tuple[int, int, int]]:
    """(x, y, z) with x <= y <= z, x and z inside, y outside; None if convex."""
    members = sorted(set(subset))
    for x in members:
        for z in members:
            if not P.lt[x, z]:
                continue
            between = np.flatnonzero(P.lt[x] & P.lt[:, z])
            for y in between:
                if int(y) not in members:
                    return x, int(y), z
    return None


def subposet(P: Poset, elements: Iterable[int]) -> Poset:
    keep = sorted(set(elements))
    return Poset(P.lt[np.ix_(keep, keep)], [P.labels[x] for x in keep])


def free_union(P0: Poset, P1: Poset) -> Poset:
    """Disjoint union with no relations across; P1 labels are renamed on collision."""
    n0, n1 = P0.n, P1.n
    lt = np.zeros((n0 + n1, n0 + n1), dtype=bool)
    lt[:n0, :n0] = P0.lt
    lt[n0:, n0:] = P1.lt
    return Poset(lt, list(P0.labels) + unique_labels(P0.labels, P1.labels))


# =====================================================
# ISOMORPHISM AND LINEAR EXTENSIONS
# =====================================================
def find_isomorphism(P: Poset, Q: Poset) -> Optional[IsoMap]:
    """VF2 search over the Hasse diagrams, pruned by element height and depth."""
    if P.n != Q.n or int(P.lt.sum()) != int(Q.lt.sum()) or len(P.covers) != len(Q.covers):
        return None
    if sorted(P.heights) != sorted(Q.heights):
        return None

    matcher = DiGraphMatcher(
        P.hasse_graph(),
        Q.hasse_graph(),
        node_match=lambda left, right: left["rank"] == right["rank"],
    )
    for mapping in matcher.isomorphisms_iter():
        iso = IsoMap(tuple(mapping[x] for x in range(P.n)))
        if iso.respects(P, Q):
            return iso
        # Hasse isomorphisms are order isomorphisms; reaching here means a bug upstream.
        raise InvariantViolated("cover isomorphism does not preserve the order", iso.forward)
    return None


def linear_extension(P: Poset, minimal_first: bool = True) -> List[int]:
    """Deterministic total order refining P; ties broken by smallest index."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(P.n))
    if minimal_first:
        graph.add_edges_from(P.covers)
    else:
        graph.add_edges_from((y, x) for x, y in P.covers)
    return list(nx.lexicographical_topological_sort(graph, key=lambda v: v))


# =====================================================
# SMALL-POSET CATALOGUE
# =====================================================
def all_posets(n: int) -> Iterator[Poset]:
    """Every poset on n elements, one per isomorphism class, in a fixed order.

    Each class has a naturally labelled member (x < y implies x < y as
    integers), so it is enough to close subsets of the upper triangle.
    """
    slots = [(i, j) for i in range(n) for j in range(i + 1, n)]
    buckets: Dict[Tuple, List[Poset]] = {}
    for mask in range(1 << len(slots)):
        lt = np.zeros((n, n), dtype=bool)
        for bit, (i, j) in enumerate(slots):
            if mask >> bit & 1:
                lt[i, j] = True
        if n and (_compose(lt, lt) & ~lt).any():
            continue
        P = Poset(lt)
        key = (tuple(sorted(P.heights)), tuple(sorted(P.depths)), len(P.covers))
        bucket = buckets.setdefault(key, [])
        if any(find_isomorphism(P, Q) is not None for Q in bucket):
            continue
        bucket.append(P)
        yield P
