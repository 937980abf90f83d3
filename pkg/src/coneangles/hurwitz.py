"""Branch-data realizability: the degree bound and the permutation oracle.

A branch datum (degree d, zero multiplicities, pole multiplicities, extra
critical multiplicities k_j) is realizable by a rational function iff
max k_j <= d, given the Riemann-Hurwitz identity

    sum(zeros - 1) + sum(poles - 1) + sum(extras - 1) = 2d - 2.

``song_xu_decide`` applies the bound directly.  At small degree,
``hurwitz_realizable_bruteforce`` certifies the answer with an explicit
tuple of permutations: sigma_zero and sigma_infinity with the two cycle
types, one single-cycle factor per extra critical point, composing to the
identity and generating a transitive group (each extra critical value
taken distinct, which a small perturbation always arranges).

The inner search runs on a compiled kernel when the extension built,
otherwise on the pure-Python twin; ``KERNEL_BACKEND`` names the active one.
"""

from __future__ import annotations

import itertools
import os
import re
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Sequence

from coneangles.decider import PartitionP

if os.environ.get("CONEANGLES_FORCE_PYTHON_KERNEL"):
    from coneangles import _factorsearch_py as _kernel

    KERNEL_BACKEND = "python (forced)"
else:
    try:
        from coneangles import _factorsearch as _kernel  # type: ignore[attr-defined]

        KERNEL_BACKEND = "compiled"
    except ImportError:
        from coneangles import _factorsearch_py as _kernel

        KERNEL_BACKEND = "python"

__all__ = [
    "BranchData",
    "BranchVerdict",
    "DEFAULT_SEARCH_CAP",
    "KERNEL_BACKEND",
    "PermutationWitness",
    "SearchCapExceeded",
    "branch_data_from",
    "cycle_type",
    "decide_branch_data",
    "hurwitz_realizable_bruteforce",
    "parse_cycles",
    "song_xu_decide",
    "verify_witness",
]

DEFAULT_SEARCH_CAP = 7


class SearchCapExceeded(Exception):
    """Degree too large for certification; fall back to the degree bound."""


def _compose(p, q):
    return tuple(p[j] for j in q)


def _identity(d):
    return tuple(range(d))


def cycle_type(perm: Sequence[int]) -> tuple[int, ...]:
    """Cycle lengths in non-increasing order, fixed points included."""
    seen = [False] * len(perm)
    lengths = []
    for i in range(len(perm)):
        if not seen[i]:
            n = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                n += 1
            lengths.append(n)
    return tuple(sorted(lengths, reverse=True))


def _cycles_of(perm) -> list[tuple[int, ...]]:
    seen = [False] * len(perm)
    cycles = []
    for i in range(len(perm)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = perm[j]
            cycles.append(tuple(cyc))
    return cycles


def _is_transitive(d, perms) -> bool:
    parent = list(range(d))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for i, j in enumerate(p):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[ri] = rj
    return len({find(i) for i in range(d)}) == 1


def cycles_to_string(perm: Sequence[int]) -> str:
    """One-based cycle notation with fixed points, e.g. "(1 2)(3)"."""
    return "".join(
        "(" + " ".join(str(x + 1) for x in cyc) + ")" for cyc in _cycles_of(perm)
    )


def parse_cycles(text: str, degree: int) -> tuple[int, ...]:
    """Inverse of :func:`cycles_to_string`."""
    if not re.fullmatch(r"(?:\s*\([^()]*\))+\s*", text):
        raise ValueError(f"cannot parse cycle notation {text!r}")
    groups = re.findall(r"\(([^()]*)\)", text)
    mapping = list(range(degree))
    seen: set[int] = set()
    for g in groups:
        if not g.strip():
            raise ValueError(f"empty cycle in {text!r}")
        points = [int(tok) - 1 for tok in re.split(r"[,\s]+", g.strip()) if tok]
        if any(not 0 <= p < degree for p in points):
            raise ValueError(f"cycle entry out of range in {text!r}")
        if seen.intersection(points) or len(set(points)) != len(points):
            raise ValueError(f"repeated point in {text!r}")
        seen.update(points)
        for a, b in zip(points, points[1:] + points[:1]):
            mapping[a] = b
    return tuple(mapping)


@dataclass(frozen=True)
class BranchData:
    """Degree with zero/pole partitions and extra critical multiplicities."""

    degree: int
    zeros: tuple[int, ...]
    poles: tuple[int, ...]
    extras: tuple[int, ...]

    def __init__(self, degree, zeros, poles, extras=()):
        degree = int(degree)
        zeros = tuple(sorted((int(v) for v in zeros), reverse=True))
        poles = tuple(sorted((int(v) for v in poles), reverse=True))
        extras = tuple(sorted((int(v) for v in extras), reverse=True))
        if degree < 1:
            raise ValueError("degree must be positive")
        if any(v < 1 for v in zeros + poles):
            raise ValueError("multiplicities must be positive")
        if sum(zeros) != degree or sum(poles) != degree:
            raise ValueError("zero and pole multiplicities must partition the degree")
        if any(k < 2 for k in extras):
            raise ValueError("extra critical multiplicities must be at least 2")
        rh = (
            sum(v - 1 for v in zeros)
            + sum(v - 1 for v in poles)
            + sum(k - 1 for k in extras)
        )
        if rh != 2 * degree - 2:
            raise ValueError(
                f"Riemann-Hurwitz identity fails: branch count {rh} != {2 * degree - 2}"
            )
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "extras", extras)


def branch_data_from(b: Sequence[int], partition: PartitionP) -> BranchData:
    """Branch data of the residue shape b with zero multiplicities P.

    Positive entries become zero multiplicities, negated negative entries
    pole multiplicities, each multiplicity l becomes an extra critical
    point of local multiplicity l + 1, and the degree is sum|b| / 2.
    """
    b = tuple(int(v) for v in b)
    if not b or any(v == 0 for v in b):
        raise ValueError("residue shape entries must be nonzero")
    if sum(b) != 0:
        raise ValueError("residue shape must sum to zero")
    if gcd(*(abs(v) for v in b)) != 1:
        raise ValueError("residue shape must have gcd 1")
    if partition.total != len(b) - 2:
        raise ValueError(
            f"partition sums to {partition.total}, expected q - 2 = {len(b) - 2}"
        )
    degree, rem = divmod(sum(abs(v) for v in b), 2)
    assert rem == 0
    return BranchData(
        degree=degree,
        zeros=[v for v in b if v > 0],
        poles=[-v for v in b if v < 0],
        extras=[p + 1 for p in partition],
    )


def song_xu_decide(bd: BranchData) -> bool:
    """Degree bound: realizable iff every extra multiplicity is <= degree.

    The bound is necessary always, and sufficient for branch data coming
    from mutually prime residues (gcd of all zero and pole multiplicities
    equal to 1), which is how :func:`branch_data_from` produces them.
    Without that restriction exceptions exist, e.g. degree 4 with zeros
    (2,2), poles (2,2) and one extra point of multiplicity 3.
    """
    return max(bd.extras, default=0) <= bd.degree


@dataclass(frozen=True)
class PermutationWitness:
    """Certificate for a realizable branch datum."""

    degree: int
    sigma_zero: tuple[int, ...]
    sigma_infinity: tuple[int, ...]
    taus: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "sigma_zero": cycles_to_string(self.sigma_zero),
            "sigma_infinity": cycles_to_string(self.sigma_infinity),
            "taus": [cycles_to_string(t) for t in self.taus],
        }

    @classmethod
    def from_json(cls, data: dict) -> "PermutationWitness":
        d = int(data["degree"])
        return cls(
            degree=d,
            sigma_zero=parse_cycles(data["sigma_zero"], d),
            sigma_infinity=parse_cycles(data["sigma_infinity"], d),
            taus=tuple(parse_cycles(t, d) for t in data["taus"]),
        )


def verify_witness(bd: BranchData, w: PermutationWitness) -> bool:
    """Check all witness invariants from scratch, independent of the search."""
    d = bd.degree
    perms = (w.sigma_zero, w.sigma_infinity) + w.taus
    if w.degree != d or any(sorted(p) != list(range(d)) for p in perms):
        return False
    if cycle_type(w.sigma_zero) != tuple(sorted(bd.zeros, reverse=True)):
        return False
    if cycle_type(w.sigma_infinity) != tuple(sorted(bd.poles, reverse=True)):
        return False
    if len(w.taus) != len(bd.extras):
        return False
    for tau, k in zip(w.taus, bd.extras):
        if cycle_type(tau) != (k,) + (1,) * (d - k):
            return False
    product = w.sigma_zero
    for p in (w.sigma_infinity,) + w.taus:
        product = _compose(product, p)
    if product != _identity(d):
        return False
    return _is_transitive(d, perms)


# -- conjugacy class machinery ----------------------------------------------


@lru_cache(maxsize=None)
def _symmetric_group(d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.permutations(range(d)))


@lru_cache(maxsize=None)
def _conjugacy_class(d: int, parts: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    target = tuple(sorted(parts, reverse=True))
    return tuple(p for p in _symmetric_group(d) if cycle_type(p) == target)


def _canonical_of_type(d: int, parts: tuple[int, ...]) -> tuple[int, ...]:
    """Consecutive cycles (0 1 .. ), longest first."""
    perm = list(range(d))
    start = 0
    for length in sorted(parts, reverse=True):
        for i in range(length):
            perm[start + i] = start + (i + 1) % length
        start += length
    return tuple(perm)


def _centralizer_generators(d: int, perm: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Generators of the centralizer of a canonical-form permutation."""
    cycles = _cycles_of(perm)
    gens: list[tuple[int, ...]] = []
    for cyc in cycles:
        if len(cyc) > 1:
            rot = list(range(d))
            for a, b in zip(cyc, cyc[1:] + cyc[:1]):
                rot[a] = b
            gens.append(tuple(rot))
    by_length: dict[int, list[tuple[int, ...]]] = {}
    for cyc in cycles:
        by_length.setdefault(len(cyc), []).append(cyc)
    for group in by_length.values():
        for c1, c2 in zip(group, group[1:]):
            swap = list(range(d))
            for a, b in zip(c1, c2):
                swap[a], swap[b] = b, a
            gens.append(tuple(swap))
    return gens


def _inverse(p):
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


@lru_cache(maxsize=None)
def _sigma_inf_candidates(
    d: int, zeros: tuple[int, ...], poles: tuple[int, ...]
) -> tuple[tuple[int, ...], ...]:
    """Orbit representatives of the pole class under conjugation by the
    centralizer of the canonical sigma_zero.  Conjugating a solution by a
    centralizer element yields another solution, so one representative per
    orbit preserves completeness."""
    sigma0 = _canonical_of_type(d, zeros)
    gens = _centralizer_generators(d, sigma0)
    gens = gens + [_inverse(g) for g in gens]
    members = set(_conjugacy_class(d, poles))
    reps = []
    while members:
        seed = min(members)
        reps.append(seed)
        orbit = {seed}
        frontier = [seed]
        while frontier:
            current = frontier.pop()
            for g in gens:
                conj = _compose(_compose(g, current), _inverse(g))
                if conj not in orbit:
                    orbit.add(conj)
                    frontier.append(conj)
        members -= orbit
    return tuple(sorted(reps))


@lru_cache(maxsize=None)
def _single_cycle_class(d: int, k: int) -> tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]:
    """All k-cycles in S_d, each with its support, lexicographically sorted."""
    out = []
    for p in _conjugacy_class(d, (k,) + (1,) * (d - k)):
        support = tuple(i for i in range(d) if p[i] != i)
        out.append((p, support))
    return tuple(out)


def hurwitz_realizable_bruteforce(
    bd: BranchData, cap: int = DEFAULT_SEARCH_CAP
) -> PermutationWitness | None:
    """Search for a witness; None is a certificate of non-realizability.

    Raises :class:`SearchCapExceeded` when the degree is beyond ``cap``
    (default 7); callers then fall back to :func:`song_xu_decide`.  The
    search is deterministic: identical branch data yield the identical
    witness.
    """
    d = bd.degree
    if d > cap:
        raise SearchCapExceeded(f"degree {d} exceeds the certification cap {cap}")
    if max(bd.extras, default=0) > d:
        # A cycle longer than d does not exist in S_d: structurally impossible.
        return None
    sigma0 = _canonical_of_type(d, bd.zeros)
    candidates = _sigma_inf_candidates(d, bd.zeros, bd.poles)
    tau_classes = [_single_cycle_class(d, k) for k in bd.extras]
    result = _kernel.search(d, sigma0, candidates, bd.extras, tau_classes)
    if result is None:
        return None
    index, taus = result
    witness = PermutationWitness(
        degree=d,
        sigma_zero=sigma0,
        sigma_infinity=candidates[index],
        taus=tuple(taus),
    )
    assert verify_witness(bd, witness)
    return witness


@dataclass(frozen=True)
class BranchVerdict:
    """Realizability verdict with provenance of the decision."""

    realizable: bool
    certified: bool
    witness: PermutationWitness | None
    method: str


def decide_branch_data(bd: BranchData, cap: int = DEFAULT_SEARCH_CAP) -> BranchVerdict:
    """Witness-certified decision when the degree allows, bound otherwise."""
    try:
        witness = hurwitz_realizable_bruteforce(bd, cap)
    except SearchCapExceeded:
        return BranchVerdict(
            realizable=song_xu_decide(bd),
            certified=False,
            witness=None,
            method="by Song-Xu criterion (uncertified)",
        )
    return BranchVerdict(
        realizable=witness is not None,
        certified=True,
        witness=witness,
        method="permutation search",
    )
