"""One-point extensions K -> K+ = K + {u}, u a relative complement of c in [a, b].

Which congruences of K extend to K+, what con_{K+}(alpha) restricts to, and
the comparison of prime-interval congruences when [a, b] is a square.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from src.congruence import (
    Congruence,
    Partition,
    all_congruences,
    brute_force_congruences,
    con_structure,
    congruence_join,
    generated_by,
    is_congruence,
    principal_congruence,
    restrict_along,
    technical_check,
)
from src.errors import (
    AdmissibleInput,
    HypothesisViolated,
    InvariantViolated,
    NotAMultidiamondTab,
    NotASublattice,
    ShapeViolation,
)
from src.lattice_core import Lattice, adjoin_relative_complement, irreducibility, remove_element
from src.report import VerificationReport

logger = logging.getLogger(__name__)

CONDITIONS = ("i", "ii", "iii", "iv")


class ExtensionSite:
    """K with a < c < b (covers) and its extension by u, appended at index K.n."""

    def __init__(self, K: Lattice, a: int, c: int, b: int, label: str = "u"):
        self.K = K
        self.a, self.c, self.b = a, c, b
        self.extended = adjoin_relative_complement(K, a, c, b, label)
        self.u = K.n

    @property
    def embedding(self) -> List[int]:
        return list(range(self.K.n))

    def square_partner(self) -> int:
        """c' for the square shape: a and b have exactly the covers c, c' between them."""
        K, a, c, b = self.K, self.a, self.c, self.b
        ups, downs = K.upper_covers(a), K.lower_covers(b)
        if len(ups) != 2 or sorted(ups) != sorted(downs) or c not in ups:
            raise ShapeViolation(f"[{K.labels[a]}, {K.labels[b]}] is not a covering square around {K.labels[c]}")
        return next(x for x in ups if x != c)

    def __repr__(self) -> str:
        K = self.K
        return f"ExtensionSite({K.labels[self.a]} < {K.labels[self.c]} < {K.labels[self.b]}, n={K.n})"


@dataclass(frozen=True)
class Admissibility:
    failed: Tuple[str, ...] = ()

    @property
    def admissible(self) -> bool:
        return not self.failed

    @property
    def first(self) -> Optional[str]:
        return self.failed[0] if self.failed else None

    def __bool__(self) -> bool:
        return self.admissible


@dataclass(frozen=True)
class RestrictionCase:
    congruence: Congruence
    case: str


# =====================================================
# ADMISSIBILITY
# =====================================================
def is_admissible(site: ExtensionSite, alpha: Congruence) -> Admissibility:
    """Evaluate the four admissibility conditions independently."""
    K, a, c, b = site.K, site.a, site.c, site.b
    same = alpha.collapses
    a_meet_reducible = len(K.upper_covers(a)) > 1
    b_join_reducible = len(K.lower_covers(b)) > 1

    holds = {
        "i": all(same(c, a) for x in K.upper_covers(a) if same(x, a)),
        "ii": not (a_meet_reducible and same(c, b)) or same(a, b),
        "iii": all(same(c, b) for x in K.lower_covers(b) if same(x, b)),
        "iv": not (b_join_reducible and same(a, c)) or same(a, b),
    }
    return Admissibility(tuple(tag for tag in CONDITIONS if not holds[tag]))


def extend_congruence(site: ExtensionSite, alpha: Congruence) -> Optional[Congruence]:
    """The extension of an admissible alpha to K+, else None."""
    if not is_admissible(site, alpha):
        return None
    ids = list(alpha.partition.block_of)
    if alpha.collapses(site.a, site.c):
        ids.append(ids[site.b])
    elif alpha.collapses(site.c, site.b):
        ids.append(ids[site.a])
    else:
        ids.append(max(ids) + 1)
    partition = Partition.canonical(ids)

    Kp = site.extended
    if not technical_check(Kp, partition) or not is_congruence(Kp, partition):
        raise InvariantViolated("placement of u does not give a congruence", Congruence(Kp, partition).describe())
    theta = Congruence(Kp, partition)
    if restrict_along(theta, site.K, site.embedding).partition != alpha.partition:
        raise InvariantViolated("extension does not restrict to the original congruence")
    return theta


def generated_restriction(site: ExtensionSite, alpha: Congruence) -> RestrictionCase:
    """con_{K+}(alpha) restricted to K, with the matching case a | b | c | d."""
    K, a, c, b = site.K, site.a, site.c, site.b
    generic = restrict_along(generated_by(site.extended, alpha, site.embedding), K, site.embedding)

    verdict = is_admissible(site, alpha)
    if verdict.admissible:
        case, expected = "a", alpha
    elif len(K.lower_covers(b)) == 1 and verdict.failed == ("i",):
        case, expected = "b", congruence_join(K, alpha, principal_congruence(K, a, c))
    elif len(K.upper_covers(a)) == 1 and verdict.failed == ("iii",):
        case, expected = "c", congruence_join(K, alpha, principal_congruence(K, b, c))
    else:
        case, expected = "d", congruence_join(K, alpha, principal_congruence(K, a, b))

    if expected.partition != generic.partition:
        raise InvariantViolated(
            f"case ({case}) formula disagrees with the generated congruence",
            {"formula": expected.describe(), "generated": generic.describe()},
        )
    return RestrictionCase(generic, case)


def lifting_exists(site: ExtensionSite, alpha: Congruence) -> bool:
    """Brute force: some congruence of K+ restricts to alpha."""
    n = site.K.n
    return any(p.restrict(range(n)) == alpha.partition for p in brute_force_congruences(site.extended))


def congruence_determining(site: ExtensionSite) -> bool:
    """Distinct congruences of K+ have distinct restrictions to K."""
    restrictions = [restrict_along(theta, site.K, site.embedding).partition for theta in all_congruences(site.extended)]
    return len(set(restrictions)) == len(restrictions)


def preserves_congruences(K: Lattice, L: Lattice, embedding: Sequence[int]) -> bool:
    """Restriction Con L -> Con K along the embedding is a bijection."""
    restricted = []
    for theta in all_congruences(L):
        partition = theta.partition.restrict(embedding)
        if not is_congruence(K, partition):
            return False
        restricted.append(partition)
    targets = {theta.partition for theta in all_congruences(K)}
    return len(set(restricted)) == len(restricted) and set(restricted) == targets


def three_cover_preserving(site: ExtensionSite) -> bool:
    """With a meet-irreducible and b join-irreducible, K+ preserves congruences."""
    K = site.K
    if not irreducibility(K, site.a)[0]:
        raise HypothesisViolated("a meet-irreducible", K.labels[site.a])
    if not irreducibility(K, site.b)[1]:
        raise HypothesisViolated("b join-irreducible", K.labels[site.b])
    return preserves_congruences(K, site.extended, site.embedding)


# =====================================================
# THE SQUARE SHAPE
# =====================================================
def inadmissible_dichotomy(site: ExtensionSite, alpha: Congruence) -> str:
    """'ac' when con(a,c) <= alpha (restriction alpha v con(b,c)),
    'bc' when con(b,c) <= alpha (restriction alpha v con(a,c))."""
    site.square_partner()
    if is_admissible(site, alpha):
        raise AdmissibleInput()
    K, a, c, b = site.K, site.a, site.c, site.b
    if alpha.collapses(a, c):
        branch, expected = "ac", congruence_join(K, alpha, principal_congruence(K, b, c))
    elif alpha.collapses(b, c):
        branch, expected = "bc", congruence_join(K, alpha, principal_congruence(K, a, c))
    else:
        raise InvariantViolated("inadmissible congruence collapses neither a,c nor b,c", alpha.describe())

    if generated_restriction(site, alpha).congruence != expected:
        raise InvariantViolated(f"dichotomy branch {branch} disagrees with the generated restriction")
    return branch


def bridge_comparison(site: ExtensionSite, x0: int, y0: int, x1: int, y1: int) -> Tuple[bool, Optional[str]]:
    """Decide con_{K+}(x0,y0) <= con_{K+}(x1,y1) from K alone.

    (a) con(x0,y0) <= con(x1,y1); (b) con(x0,y0) <= con(a,c) and
    con(b,c) <= con(x1,y1); (c) the same with a and b exchanged.
    """
    site.square_partner()
    K, a, c, b = site.K, site.a, site.c, site.b
    if not K.is_cover(x0, y0):
        raise ShapeViolation(f"{K.labels[x0]} is not covered by {K.labels[y0]}")
    if not K.lt[x1, y1]:
        raise ShapeViolation(f"{K.labels[x1]} is not below {K.labels[y1]}")

    s = con_structure(K)
    low, high = s.mask(x0, y0), s.mask(x1, y1)
    ac, bc = s.mask(a, c), s.mask(b, c)

    def below(m1: int, m2: int) -> bool:
        return m1 & ~m2 == 0

    tag = None
    if below(low, high):
        tag = "a"
    elif below(low, ac) and below(bc, high):
        tag = "b"
    elif below(low, bc) and below(ac, high):
        tag = "c"

    extended = con_structure(site.extended)
    direct = below(extended.mask(x0, y0), extended.mask(x1, y1))
    if direct != (tag is not None):
        raise InvariantViolated(
            "comparison in K disagrees with K+",
            {"quadruple": [K.labels[v] for v in (x0, y0, x1, y1)], "direct": direct, "tag": tag},
        )
    return direct, tag


# =====================================================
# TABS
# =====================================================
def _multidiamond(L: Lattice, u: int, a: int, b: int) -> List[int]:
    if L.lower_covers(u) != [a] or L.upper_covers(u) != [b]:
        raise NotAMultidiamondTab(f"{L.labels[u]} is not doubly irreducible between {L.labels[a]} and {L.labels[b]}")
    atoms = [x for x in L.interval(a, b) if x not in (a, b)]
    if any(not (L.is_cover(a, x) and L.is_cover(x, b)) for x in atoms):
        raise NotAMultidiamondTab(f"[{L.labels[a]}, {L.labels[b]}] is not a covering multidiamond")
    if len(atoms) < 3:
        raise NotAMultidiamondTab(f"[{L.labels[a]}, {L.labels[b]}] has only {len(atoms)} atoms")
    return atoms


def tab_restriction(L: Lattice, u: int, a: int, b: int) -> VerificationReport:
    """For every congruence alpha of K = L - {u} and beta = con_L(alpha):
    beta restricts to alpha when a, b are apart under beta, and to
    alpha v con_K(a, b) when beta collapses them."""
    _multidiamond(L, u, a, b)
    try:
        K = remove_element(L, u)
    except NotASublattice as exc:
        raise NotAMultidiamondTab(f"L - {L.labels[u]} is not a sublattice") from exc
    embedding = [x for x in range(L.n) if x != u]
    ka, kb = embedding.index(a), embedding.index(b)
    ab = principal_congruence(K, ka, kb)

    report = VerificationReport("tab-restriction", f"L({L.n} elements), tab {L.labels[u]}")
    branches = {"apart": 0, "collapsed": 0}
    ok = {"apart": True, "collapsed": True}
    for alpha in all_congruences(K):
        beta = generated_by(L, alpha, embedding)
        restricted = restrict_along(beta, K, embedding)
        if beta.collapses(a, b):
            branch, expected = "collapsed", congruence_join(K, alpha, ab)
        else:
            branch, expected = "apart", alpha
        branches[branch] += 1
        if restricted != expected and ok[branch]:
            ok[branch] = False
            report.witness.setdefault(branch, {"alpha": alpha.describe(), "restricted": restricted.describe()})
    for branch in ("apart", "collapsed"):
        report.record(branch, ok[branch])
    report.witness["branches"] = branches
    logger.debug("tab restriction on %s: %s", L.fingerprint, branches)
    return report
