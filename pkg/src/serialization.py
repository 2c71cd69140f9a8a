"""JSON and DOT for posets, lattices, congruences and reports.

A JSON object with "covers" is a lattice, one with "relations" is a poset;
both list their elements under "elements".
"""

import json
import logging
from collections import defaultdict
from pathlib import Path
from typing import Any, Dict, Iterable, Mapping, Optional, Union

from src.anchored import AnchoredLattice, ConstructionTrace, TraceStep
from src.congruence import Congruence
from src.errors import MalformedInput, PrincRepError
from src.lattice_core import Lattice, heights, lattice_from_covers
from src.poset_core import Poset, poset_from_relations

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def load_json(path: PathLike) -> Any:
    try:
        with open(path, "r") as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise MalformedInput(str(exc), str(path)) from exc


def write_json(path: PathLike, data: Any) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as f:
        json.dump(data, f, indent=2)


# =====================================================
# READING
# =====================================================
def _pairs(data: Mapping, key: str, source: Optional[str]):
    raw = data.get(key, [])
    if not isinstance(raw, list) or any(not isinstance(p, (list, tuple)) or len(p) != 2 for p in raw):
        raise MalformedInput(f"'{key}' must be a list of [lo, hi] pairs", source)
    return [(str(lo), str(hi)) for lo, hi in raw]


def _elements(data: Mapping, source: Optional[str]):
    elements = data.get("elements")
    if not isinstance(elements, list):
        raise MalformedInput("'elements' must be a list", source)
    return [str(e) for e in elements]


def poset_from_dict(data: Mapping, source: Optional[str] = None) -> Poset:
    labels = _elements(data, source)
    index = {label: i for i, label in enumerate(labels)}
    pairs = _pairs(data, "relations", source)
    unknown = sorted({v for pair in pairs for v in pair} - set(index))
    if unknown:
        raise MalformedInput(f"relations name unknown elements {unknown}", source)
    return poset_from_relations(len(labels), [(index[lo], index[hi]) for lo, hi in pairs], labels)


def lattice_from_dict(data: Mapping, source: Optional[str] = None) -> Lattice:
    labels = _elements(data, source)
    pairs = _pairs(data, "covers", source)
    unknown = sorted({v for pair in pairs for v in pair} - set(labels))
    if unknown:
        raise MalformedInput(f"covers name unknown elements {unknown}", source)
    return lattice_from_covers(labels, pairs)


def read_structure(data: Union[Mapping, PathLike]) -> Union[Poset, Lattice]:
    """Auto-detect a poset or a lattice from a dict or a JSON file."""
    source = None
    if not isinstance(data, Mapping):
        source = str(data)
        data = load_json(data)
    if not isinstance(data, Mapping):
        raise MalformedInput("top level must be an object", source)
    if "covers" in data:
        return lattice_from_dict(data, source)
    if "relations" in data:
        return poset_from_dict(data, source)
    raise MalformedInput("expected a 'covers' (lattice) or 'relations' (poset) key", source)


def read_lattice(data: Union[Mapping, PathLike]) -> Lattice:
    structure = read_structure(data)
    if not isinstance(structure, Lattice):
        raise MalformedInput("expected a lattice (a 'covers' list)", None if isinstance(data, Mapping) else str(data))
    return structure


# =====================================================
# WRITING
# =====================================================
def poset_to_dict(P: Poset) -> Dict[str, Any]:
    return {"elements": list(P.labels), "relations": [[P.labels[x], P.labels[y]] for x, y in P.covers]}


def lattice_to_dict(L: Lattice, anchors: Optional[Mapping[str, str]] = None) -> Dict[str, Any]:
    data: Dict[str, Any] = {
        "elements": list(L.labels),
        "covers": [[L.labels[x], L.labels[y]] for x, y in L.covers],
    }
    if anchors:
        data["anchors"] = dict(anchors)
    return data


def congruence_to_dict(theta: Congruence) -> Dict[str, Any]:
    return {"blocks": [[theta.lattice.labels[x] for x in block] for block in theta.blocks]}


def anchored_to_dict(al: AnchoredLattice) -> Dict[str, Any]:
    return {
        "lattice": lattice_to_dict(al.lattice, al.anchors),
        "poset": poset_to_dict(al.poset),
        "zeta": {p: list(pair) for p, pair in al.zeta_pairs.items()},
        "lower": {p: list(pair) for p, pair in al.lower.items()},
        "upper": {p: list(pair) for p, pair in al.upper.items()},
        "trace": al.trace.to_dict(),
        "certificate": al.certificate.to_dict() if al.certificate else None,
    }


def trace_from_dict(data: Mapping) -> ConstructionTrace:
    try:
        steps = [
            TraceStep(s["kind"], s["slot"], dict(s["params"]), int(s["before"]), int(s["after"]), dict(s.get("checks", {})))
            for s in data["steps"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise MalformedInput(f"bad trace: {exc}") from exc
    return ConstructionTrace(steps, data.get("result_slot", "main"))


# =====================================================
# DOT
# =====================================================
def to_dot(L: Lattice, anchors: Optional[Iterable[str]] = None, name: str = "L") -> str:
    """Hasse diagram bottom-up, one rank per height, anchors filled."""
    marked = set(anchors or ())
    lines = [f'digraph "{name}" {{', "  rankdir=BT;", "  node [shape=circle, fontsize=10];"]
    for x, label in enumerate(L.labels):
        style = ', style=filled, fillcolor="lightblue"' if label in marked else ""
        lines.append(f'  n{x} [label="{label}"{style}];')

    ranks = defaultdict(list)
    for x, h in heights(L).items():
        ranks[h].append(x)
    for h in sorted(ranks):
        members = "; ".join(f"n{x}" for x in sorted(ranks[h]))
        lines.append(f"  {{ rank=same; {members}; }}")

    for x, y in sorted(L.covers):
        lines.append(f"  n{x} -> n{y};")
    lines.append("}")
    return "\n".join(lines)


def dump_trace_dots(al: AnchoredLattice, directory: PathLike) -> int:
    """Write one DOT file per replayed construction step; returns the count."""
    from src.construct import replay_trace

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    written = 0
    for k in range(1, len(al.trace.steps) + 1):
        step = al.trace.steps[k - 1]
        partial = ConstructionTrace(al.trace.steps[:k], step.slot)
        try:
            L = replay_trace(partial)
        except PrincRepError as exc:
            logger.warning("trace step %d (%s) not replayable on its own: %s", k, step.kind, exc)
            continue
        (out / f"step{k:03d}_{step.kind}_{step.slot}.dot").write_text(to_dot(L, al.anchors.values(), f"step {k}"))
        written += 1
    logger.info("wrote %d trace diagrams to %s", written, out)
    return written
