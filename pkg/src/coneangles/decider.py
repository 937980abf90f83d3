"""Admissibility decisions for angle multisets and residue/partition pairs.

The multiset decision runs in three stages: enumerate reduced arrangements
(none means not admissible), build the residue vector of one of them (they
are all equivalent for the final bound), then either accept outright when
the residues are incommensurable or test the integer bound

    2 * max(integer angles) <= sum_j |b_j|

against the gcd-1 integer shape b of the residues.  The residue/partition
decision is the same bound with 1 + max multiplicity in place of the
maximal integer angle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

from coneangles.arrangements import (
    AngleMultiset,
    Arrangement,
    ResidueVector,
    enumerate_general_arrangements,
    enumerate_reduced_arrangements,
    reduce_arrangement,
    residue_vector,
)
from coneangles.exactreal import Commensurable

__all__ = [
    "PartitionP",
    "Reason",
    "Verdict",
    "angles_to_partition",
    "decide_admissible",
    "decide_partition_admissible",
    "exceptional_vectors",
]


class Reason(str, Enum):
    NO_ARRANGEMENT = "no_arrangement"
    INCOMMENSURABLE_WITNESS = "incommensurable_witness"
    INEQUALITY_HOLDS = "inequality_holds"
    INEQUALITY_FAILS = "inequality_fails"


@dataclass(frozen=True)
class PartitionP:
    """Multiplicities of the zeros, a partition of q - 2."""

    parts: tuple[int, ...]

    def __init__(self, parts):
        parts = tuple(sorted((int(p) for p in parts), reverse=True))
        if any(p < 1 for p in parts):
            raise ValueError("partition parts must be positive integers")
        object.__setattr__(self, "parts", parts)

    @property
    def total(self) -> int:
        return sum(self.parts)

    @property
    def max_part(self) -> int:
        return max(self.parts, default=0)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)


@dataclass(frozen=True)
class Verdict:
    """Decision outcome with an auditable witness.

    ``lhs``/``rhs`` are the two sides of the integer bound whenever the
    residues are commensurable; ``degree`` is sum|b|/2 in that case.
    """

    admissible: bool
    reason: Reason
    arrangement: Arrangement | None = None
    residues: ResidueVector | None = None
    b: tuple[int, ...] | None = None
    eta: object | None = None
    lhs: int | None = None
    rhs: int | None = None
    degree: int | None = None


def angles_to_partition(arr: Arrangement) -> PartitionP:
    """Zero multiplicities of a reduced arrangement: alpha - 1 over B."""
    if not arr.reduced:
        raise ValueError("angles_to_partition requires a reduced arrangement")
    parts = PartitionP([a - 1 for a in arr.integer_angles if a >= 2])
    if parts.total != arr.q - 2:
        raise ValueError(
            f"inconsistent arrangement: parts sum to {parts.total}, expected {arr.q - 2}"
        )
    return parts


def _bound_verdict(arr: Arrangement, rv: ResidueVector) -> Verdict:
    cls = rv.commensurability
    if cls is None:
        return Verdict(
            admissible=True,
            reason=Reason.INCOMMENSURABLE_WITNESS,
            arrangement=arr,
            residues=rv,
        )
    parts = angles_to_partition(arr)
    lhs = 2 * max(arr.integer_angles, default=0)
    if arr.integer_angles:
        # The two formulations of the bound must coincide on reduced
        # arrangements; fail loudly rather than assume it.
        if lhs != 2 * (1 + parts.max_part):
            raise RuntimeError("integer-angle bound disagrees with partition bound")
    rhs = cls.abs_sum
    return Verdict(
        admissible=lhs <= rhs,
        reason=Reason.INEQUALITY_HOLDS if lhs <= rhs else Reason.INEQUALITY_FAILS,
        arrangement=arr,
        residues=rv,
        b=cls.b,
        eta=cls.eta,
        lhs=lhs,
        rhs=rhs,
        degree=rhs // 2,
    )


def decide_admissible(alpha: AngleMultiset, *, exhaustive: bool = False) -> Verdict:
    """Decide whether the angle multiset is admissible.

    With ``exhaustive=True`` every general arrangement is also scored and
    the union of their verdicts is asserted to agree with the reduced one.
    """
    arrangements = enumerate_reduced_arrangements(alpha)
    if not arrangements:
        if exhaustive and enumerate_general_arrangements(alpha):
            raise RuntimeError(
                "general arrangement exists but no reduced one; reduction broken"
            )
        return Verdict(admissible=False, reason=Reason.NO_ARRANGEMENT)
    verdict = _bound_verdict(arrangements[0], residue_vector(arrangements[0]))
    if exhaustive:
        any_admissible = False
        for g in enumerate_general_arrangements(alpha):
            entries = [s * a for s, a in zip(g.signs, g.members)]
            entries.extend(g.ctx.rational(d) for d in g.deltas)
            rv = ResidueVector(entries)
            parts = PartitionP([a - 1 for a in g.integer_angles if a >= 2])
            if decide_partition_admissible(rv, parts):
                any_admissible = True
                break
        if any_admissible != verdict.admissible:
            raise RuntimeError(
                "exhaustive arrangement sweep disagrees with the reduced verdict"
            )
    return verdict


def decide_partition_admissible(c: ResidueVector, partition: PartitionP) -> bool:
    """Can these residues produce zeros with exactly these multiplicities?

    True outright for incommensurable residues; otherwise the integer shape
    b must satisfy 2 * (1 + max multiplicity) <= sum |b_j|.
    """
    if partition.total != c.q - 2:
        raise ValueError(
            f"partition sums to {partition.total}, expected q - 2 = {c.q - 2}"
        )
    cls = c.commensurability
    if cls is None:
        return True
    return 2 * (1 + partition.max_part) <= cls.abs_sum


def _partitions_exact(total: int, count: int, cap: int) -> list[tuple[int, ...]]:
    """Partitions of ``total`` into exactly ``count`` parts, each <= cap."""
    if count == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(min(total - count + 1, cap), 0, -1):
        for rest in _partitions_exact(total - first, count - 1, first):
            out.append((first,) + rest)
    return out


def exceptional_vectors(partition: PartitionP, q: int) -> list[tuple[int, ...]]:
    """All gcd-1 integer residue shapes of length q failing the bound.

    Finiteness: entries are nonzero so sum |b_j| >= q, and failing vectors
    satisfy sum |b_j| < 2 * (1 + max multiplicity), a fixed bound, so the
    enumeration terminates.  Vectors are canonical descending tuples; the
    bound is permutation-invariant so reorderings are not listed.
    """
    import math

    if partition.total != q - 2:
        raise ValueError(f"partition sums to {partition.total}, expected {q - 2}")
    bound = 2 * (1 + partition.max_part)
    found: list[tuple[int, ...]] = []
    for abs_sum in range(q + q % 2, bound, 2):
        half = abs_sum // 2
        for pos_count in range(1, q):
            neg_count = q - pos_count
            for pos in _partitions_exact(half, pos_count, half):
                for neg in _partitions_exact(half, neg_count, half):
                    vec = pos + tuple(-v for v in reversed(neg))
                    if math.gcd(*(abs(v) for v in vec)) != 1:
                        continue
                    found.append(tuple(sorted(vec, reverse=True)))
    return sorted(set(found), reverse=True)
