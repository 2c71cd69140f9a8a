"""All lattices up to isomorphism by element count, with congruence data.

Level n comes from level n - 1 by adding a new atom under a nonempty
antichain of non-bottom elements; removing an atom from any lattice leaves
a lattice, so every isomorphism class is reached.
"""

import itertools
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from src.config import load_settings
from src.congruence import con_structure
from src.errors import EnumerationBoundExceeded, MalformedInput, NotALattice
from src.lattice_core import Lattice, chain, lattice_from_poset
from src.poset_core import Poset, find_isomorphism
from src.serialization import lattice_from_dict, lattice_to_dict, load_json, poset_to_dict, write_json

logger = logging.getLogger(__name__)

LATTICE_COUNTS = (1, 1, 1, 2, 5, 15, 53, 222, 1078)


@dataclass(frozen=True)
class EnumerationRecord:
    key: str
    lattice: Lattice
    n: int
    ji_con: Poset
    princ: int
    min: int
    minimal: bool
    represents: str

    def to_dict(self) -> Dict:
        return {
            "key": self.key,
            "n": self.n,
            "lattice": lattice_to_dict(self.lattice),
            "ji_con": poset_to_dict(self.ji_con),
            "princ": self.princ,
            "min": self.min,
            "minimal": self.minimal,
            "represents": self.represents,
        }


def shape_hash(P: Poset) -> str:
    graph = nx.DiGraph()
    for x in range(P.n):
        graph.add_node(x, rank=f"{P.heights[x]}.{P.depths[x]}")
    graph.add_edges_from(P.covers)
    return nx.weisfeiler_lehman_graph_hash(graph, node_attr="rank")


# =====================================================
# GENERATION
# =====================================================
def _antichains(L: Lattice) -> Iterator[Tuple[int, ...]]:
    candidates = [x for x in range(L.n) if x != L.bottom]
    for size in range(1, len(candidates) + 1):
        for subset in itertools.combinations(candidates, size):
            if not any(L.lt[x, y] or L.lt[y, x] for x, y in itertools.combinations(subset, 2)):
                yield subset


def add_atom(L: Lattice, below: Sequence[int]) -> Optional[Lattice]:
    """L plus a new atom whose upper covers are `below`, or None if that is not a lattice."""
    n = L.n
    lt = np.zeros((n + 1, n + 1), dtype=bool)
    lt[:n, :n] = L.lt
    lt[L.bottom, n] = True
    lt[n, :n] = L.leq[list(below)].any(axis=0)
    try:
        return lattice_from_poset(Poset(lt, [str(x) for x in range(n + 1)]))
    except NotALattice:
        return None


def _children(L: Lattice) -> List[Tuple[str, Lattice]]:
    found = []
    for antichain in _antichains(L):
        child = add_atom(L, antichain)
        if child is not None:
            found.append((shape_hash(child.poset), child))
    return found


def _next_level(level: Sequence[Lattice], jobs: int) -> List[Lattice]:
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            batches = list(pool.map(_children, level, chunksize=max(1, len(level) // (4 * jobs))))
    else:
        batches = [_children(L) for L in level]

    buckets: Dict[str, List[Lattice]] = {}
    kept: List[Lattice] = []
    for batch in batches:
        for key, child in batch:
            bucket = buckets.setdefault(key, [])
            if any(find_isomorphism(child.poset, other.poset) is not None for other in bucket):
                continue
            bucket.append(child)
            kept.append(child)
    return kept


def _checkpoint(cache_dir: Optional[str], n: int) -> Optional[Path]:
    return Path(cache_dir) / f"lattices_{n}.json" if cache_dir else None


def _load_level(cache_dir: Optional[str], n: int) -> Optional[List[Lattice]]:
    path = _checkpoint(cache_dir, n)
    if path is None or not path.exists():
        return None
    try:
        return [lattice_from_dict(entry, str(path)) for entry in load_json(path)]
    except MalformedInput as exc:
        logger.warning("ignoring unreadable checkpoint %s: %s", path, exc)
        return None


def lattices_by_size(max_n: int, jobs: Optional[int] = None, cache_dir: Optional[str] = "default") -> Iterator[Tuple[int, List[Lattice]]]:
    """Yield (n, lattices with n elements) for n = 1..max_n, in a fixed order."""
    settings = load_settings()
    if max_n > settings.bound:
        raise EnumerationBoundExceeded(max_n, settings.bound)
    jobs = jobs or settings.jobs
    if cache_dir == "default":
        cache_dir = settings.cache_dir

    level: List[Lattice] = []
    for n in range(1, max_n + 1):
        if n <= 2:
            level = [chain(n)]
        else:
            stored = _load_level(cache_dir, n)
            if stored is not None:
                level = stored
                logger.debug("level %d: %d lattices from checkpoint", n, len(level))
            else:
                level = _next_level(level, jobs)
                path = _checkpoint(cache_dir, n)
                if path is not None:
                    write_json(path, [lattice_to_dict(L) for L in level])
                logger.info("level %d: %d lattices", n, len(level))
        yield n, level


def lattice_counts(max_n: int, **kwargs) -> List[int]:
    return [len(level) for _, level in lattices_by_size(max_n, **kwargs)]


# =====================================================
# CLASSIFICATION
# =====================================================
def classify(L: Lattice, key: str) -> EnumerationRecord:
    s = con_structure(L)
    masks = s.principal_masks()
    minimum = {0, s.full} | set(s.down)
    minimal = masks <= minimum
    return EnumerationRecord(
        key=key,
        lattice=L,
        n=L.n,
        ji_con=s.ji_poset,
        princ=len(masks),
        min=len(minimum),
        minimal=minimal,
        represents=shape_hash(s.ji_poset),
    )


def enumerate_records(
    max_n: int,
    jobs: Optional[int] = None,
    minimal_only: bool = False,
    represents: Optional[Poset] = None,
    size: Optional[int] = None,
    cache_dir: Optional[str] = "default",
) -> Iterator[EnumerationRecord]:
    for n, level in lattices_by_size(max_n, jobs=jobs, cache_dir=cache_dir):
        if size is not None and n != size:
            continue
        for k, L in enumerate(level):
            record = classify(L, f"{n}:{k}")
            if minimal_only and not record.minimal:
                continue
            if represents is not None and find_isomorphism(record.ji_con, represents) is None:
                continue
            yield record
