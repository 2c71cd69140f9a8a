"""Exception hierarchy for princrep.

Every error carries the witness that triggered it so callers (and the CLI)
can report something more useful than a message string.
"""

from typing import Any, Optional, Sequence


class PrincRepError(Exception):
    """Base class for all princrep errors."""


# =====================================================
# ORDERS AND LATTICES
# =====================================================
class CycleDetected(PrincRepError):
    def __init__(self, cycle: Sequence[int]):
        self.cycle = list(cycle)
        super().__init__(f"relations contain a cycle through {self.cycle}")


class NotALattice(PrincRepError):
    def __init__(self, x: int, y: int, reason: str):
        self.x, self.y, self.reason = x, y, reason
        super().__init__(f"elements {x} and {y} have {reason}")


class NotACoverChain(PrincRepError):
    def __init__(self, a: int, c: int, b: int):
        self.a, self.c, self.b = a, c, b
        super().__init__(f"{a} < {c} < {b} is not a chain of covers")


class NotASublattice(PrincRepError):
    def __init__(self, x: int, y: int, op: str):
        self.x, self.y, self.op = x, y, op
        super().__init__(f"subset not closed under {op} at ({x}, {y})")


class DuplicateLabel(PrincRepError):
    def __init__(self, label: str):
        self.label = label
        super().__init__(f"duplicate element label {label!r}")


# =====================================================
# CONGRUENCES
# =====================================================
class BlocksNotIntervals(PrincRepError):
    def __init__(self, block: Sequence[int]):
        self.block = list(block)
        super().__init__(f"block {self.block} is not an interval")


class HomeMismatch(PrincRepError):
    def __init__(self):
        super().__init__("congruences live on different lattices")


class OracleTooLarge(PrincRepError):
    def __init__(self, n: int, limit: int):
        self.n, self.limit = n, limit
        super().__init__(f"brute force over partitions of {n} elements exceeds limit {limit}")


# =====================================================
# POSET SURGERY
# =====================================================
class EmptySubset(PrincRepError):
    def __init__(self):
        super().__init__("subset to fuse is empty")


class NotConvex(PrincRepError):
    def __init__(self, x: int, y: int, z: int):
        self.x, self.y, self.z = x, y, z
        super().__init__(f"{x} <= {y} <= {z} with {y} outside the subset")


class NotIsotone(PrincRepError):
    def __init__(self, x: int, y: int):
        self.x, self.y = x, y
        super().__init__(f"map is not isotone on {x} < {y}")


class NotConstantOnA(PrincRepError):
    def __init__(self, a1: int, a2: int):
        self.a1, self.a2 = a1, a2
        super().__init__(f"map separates {a1} and {a2} of the fused subset")


class NotSurjective(PrincRepError):
    def __init__(self, missing: Sequence[int]):
        self.missing = list(missing)
        super().__init__(f"map misses {self.missing}")


class NotDownsets(PrincRepError):
    def __init__(self, which: str):
        self.which = which
        super().__init__(f"{which} is not a downset covering the poset")


class NotMaximalInIntersection(PrincRepError):
    def __init__(self, a: int):
        self.a = a
        super().__init__(f"{a} is not maximal in the intersection of the two downsets")


class ContainmentViolated(PrincRepError):
    def __init__(self):
        super().__init__("one downset contains the other")


# =====================================================
# EXTENSIONS AND CONSTRUCTIONS
# =====================================================
class ShapeViolation(PrincRepError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class AdmissibleInput(PrincRepError):
    def __init__(self):
        super().__init__("congruence is admissible; the dichotomy needs an inadmissible one")


class NotAMultidiamondTab(PrincRepError):
    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)


class HypothesisViolated(PrincRepError):
    def __init__(self, which: str, witness: Any = None):
        self.which, self.witness = which, witness
        super().__init__(f"hypothesis {which} fails (witness: {witness})")


class FrameContractViolated(PrincRepError):
    def __init__(self, statement: str, witness: Any = None):
        self.statement, self.witness = statement, witness
        super().__init__(f"frame statement {statement} fails (witness: {witness})")


class NineStatementViolation(PrincRepError):
    def __init__(self, statement: str, witness: Any = None):
        self.statement, self.witness = statement, witness
        super().__init__(f"base statement {statement} fails (witness: {witness})")


class CertificateFailed(PrincRepError):
    def __init__(self, report: Any):
        self.report = report
        super().__init__(f"certificate failed: {getattr(report, 'claim', report)}")


class InvariantViolated(PrincRepError):
    def __init__(self, what: str, witness: Any = None):
        self.what, self.witness = what, witness
        super().__init__(f"{what} (witness: {witness})")


# =====================================================
# SURFACE
# =====================================================
class EnumerationBoundExceeded(PrincRepError):
    def __init__(self, requested: int, bound: int):
        self.requested, self.bound = requested, bound
        super().__init__(f"max_n={requested} exceeds the configured bound {bound}")


class MalformedInput(PrincRepError):
    def __init__(self, reason: str, source: Optional[str] = None):
        self.reason, self.source = reason, source
        where = f" in {source}" if source else ""
        super().__init__(f"malformed input{where}: {reason}")
