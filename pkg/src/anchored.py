"""Value types shared by the constructions and the certifying checkers."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from src.congruence import Congruence, principal_congruence
from src.lattice_core import Lattice
from src.poset_core import Poset
from src.report import VerificationReport

Pair = Tuple[str, str]


@dataclass
class TraceStep:
    kind: str  # frame | insert | relabel | dual | glue | adjoin
    slot: str
    params: Dict[str, Any]
    before: int
    after: int
    checks: Dict[str, bool] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "slot": self.slot,
            "params": self.params,
            "before": self.before,
            "after": self.after,
            "checks": dict(self.checks),
        }


@dataclass
class ConstructionTrace:
    steps: List[TraceStep] = field(default_factory=list)
    result_slot: str = "main"

    def record(self, kind: str, slot: str, params: Dict[str, Any], before: int, after: int) -> TraceStep:
        step = TraceStep(kind, slot, params, before, after)
        self.steps.append(step)
        return step

    def note(self, report: VerificationReport) -> None:
        """Attach a check verdict to the latest step."""
        if self.steps:
            self.steps[-1].checks[report.claim] = report.verdict

    def extend(self, other: "ConstructionTrace") -> None:
        self.steps.extend(other.steps)

    def to_dict(self) -> Dict[str, Any]:
        return {"result_slot": self.result_slot, "steps": [step.to_dict() for step in self.steps]}


@dataclass
class AnchoredLattice:
    """A lattice with named anchors and the generating pair of zeta(p) for
    every element p of the poset it claims to represent.

    `lower[p]` is (a_p, b_p) below i, `upper[p]` is (a'_p, b'_p) above i.
    All entries are element labels, so they survive re-indexing.
    """

    lattice: Lattice
    poset: Poset
    zeta_pairs: Dict[str, Pair]
    anchors: Dict[str, str]
    lower: Dict[str, Pair] = field(default_factory=dict)
    upper: Dict[str, Pair] = field(default_factory=dict)
    trace: ConstructionTrace = field(default_factory=ConstructionTrace)
    certificate: Optional[VerificationReport] = None

    def element(self, label: str) -> int:
        return self.lattice.index(label)

    def anchor(self, role: str) -> int:
        return self.lattice.index(self.anchors[role])

    def zeta(self) -> Dict[str, Congruence]:
        L = self.lattice
        return {
            p: principal_congruence(L, L.index(lo), L.index(hi))
            for p, (lo, hi) in self.zeta_pairs.items()
        }

    def with_lattice(self, lattice: Lattice) -> "AnchoredLattice":
        return AnchoredLattice(
            lattice, self.poset, dict(self.zeta_pairs), dict(self.anchors),
            dict(self.lower), dict(self.upper), self.trace,
        )


@dataclass(frozen=True)
class Obstruction:
    """Three or more maximal join-irreducibles: no minimal representation."""

    dual_atoms: int
    antichain: Tuple[str, ...]

    def to_dict(self) -> Dict[str, Any]:
        return {"obstruction": True, "dual_atoms": self.dual_atoms, "antichain": list(self.antichain)}
