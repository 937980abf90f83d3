"""Angle multisets, sign arrangements and the lattice classifiers.

An arrangement splits a multiset of cone angles into non-integer angles A
(carrying signs) and integer angles B, together with counts of unit
residues.  A reduced arrangement keeps every integer angle in B; its data
is pinned down by the exact identities

    sum_j eps_j * alpha_j = k'                  (signed non-integer sum)
    k'' = sum_B alpha_j - n - k' + 2 >= 0 even  (unit-pole count)

General arrangements allow integer angles inside A and carry an explicit
vector of unit residues delta; they satisfy

    sum_A eps_j * alpha_j + sum_j delta_j = 0   (residue theorem)
    sum_B (alpha_j - 1) = |A| + k - 2           (zero count)
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from coneangles.exactreal import (
    BasisContext,
    Commensurable,
    ExactReal,
    commensurability_class,
    sum_exact,
)

__all__ = [
    "AngleMultiset",
    "Arrangement",
    "GeneralArrangement",
    "MPClass",
    "ResidueVector",
    "enumerate_general_arrangements",
    "enumerate_reduced_arrangements",
    "gauss_bonnet",
    "mp_classify",
    "odd_lattice_distance",
    "reduce_arrangement",
    "residue_vector",
    "split_integer_noninteger",
]

#: Above this many non-integer angles the sign enumeration switches to
#: meet-in-the-middle on the coefficient vectors.
MITM_THRESHOLD = 24


def _angle_sort_key(a: ExactReal):
    return (a.to_float(), a.coeffs)


class AngleMultiset:
    """Unordered multiset of cone angles, each positive and not equal to 1."""

    __slots__ = ("angles", "ctx")

    def __init__(self, angles: Sequence[ExactReal]):
        if not angles:
            raise ValueError("angle multiset must be non-empty")
        ctx = angles[0].ctx
        one = ctx.one()
        zero = ctx.zero()
        for a in angles:
            if a == one:
                raise ValueError(f"angle {a} equal to 1 is not allowed")
            if not a > zero:
                raise ValueError(f"angle {a} is not positive")
        self.angles: tuple[ExactReal, ...] = tuple(sorted(angles, key=_angle_sort_key))
        self.ctx = ctx

    @property
    def n(self) -> int:
        return len(self.angles)

    def __iter__(self):
        return iter(self.angles)

    def __len__(self) -> int:
        return len(self.angles)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AngleMultiset) and self.angles == other.angles

    def __hash__(self) -> int:
        return hash(self.angles)

    def __repr__(self) -> str:
        return "AngleMultiset({" + ", ".join(str(a) for a in self.angles) + "})"


def split_integer_noninteger(
    alpha: AngleMultiset,
) -> tuple[tuple[ExactReal, ...], tuple[ExactReal, ...]]:
    """Split into (non-integer angles, integer angles), canonical order kept."""
    non_int = tuple(a for a in alpha if not a.is_integer())
    ints = tuple(a for a in alpha if a.is_integer())
    return non_int, ints


@dataclass(frozen=True)
class Arrangement:
    """A reduced arrangement: all integer angles live in B."""

    noninteger: tuple[ExactReal, ...]
    signs: tuple[int, ...]
    integer_angles: tuple[int, ...]
    k_prime: int
    k_double_prime: int
    ctx: BasisContext = field(repr=False, compare=False)
    reduced: bool = True

    def __post_init__(self):
        if len(self.signs) != len(self.noninteger):
            raise ValueError("sign vector length mismatch")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")
        if any(a.is_integer() for a in self.noninteger):
            raise ValueError("reduced arrangement cannot keep integer angles in A")
        signed = sum_exact(
            (s * a for s, a in zip(self.signs, self.noninteger)), self.ctx
        )
        if not (signed.is_integer() and signed.as_integer() == self.k_prime):
            raise ValueError("signed non-integer sum does not equal k'")
        if self.k_prime < 0:
            raise ValueError("k' must be non-negative")
        n = len(self.noninteger) + len(self.integer_angles)
        expected = sum(self.integer_angles) - n - self.k_prime + 2
        if expected != self.k_double_prime:
            raise ValueError("k'' inconsistent with the integer angles")
        if self.k_double_prime < 0 or self.k_double_prime % 2:
            raise ValueError("k'' must be non-negative and even")

    @property
    def m(self) -> int:
        return len(self.noninteger)

    @property
    def n(self) -> int:
        return self.m + len(self.integer_angles)

    @property
    def q(self) -> int:
        """Number of residues: m + k' + k''."""
        return self.m + self.k_prime + self.k_double_prime


@dataclass(frozen=True)
class GeneralArrangement:
    """An arrangement that may keep integer angles inside A."""

    members: tuple[ExactReal, ...]
    signs: tuple[int, ...]
    integer_angles: tuple[int, ...]
    deltas: tuple[int, ...]
    ctx: BasisContext = field(repr=False, compare=False)

    def __post_init__(self):
        if len(self.signs) != len(self.members):
            raise ValueError("sign vector length mismatch")
        if any(s not in (-1, 1) for s in self.signs):
            raise ValueError("signs must be +1 or -1")
        if any(d not in (-1, 1) for d in self.deltas):
            raise ValueError("deltas must be +1 or -1")
        signed = sum_exact((s * a for s, a in zip(self.signs, self.members)), self.ctx)
        total = signed + self.ctx.rational(sum(self.deltas))
        if not total.is_zero():
            raise ValueError("residues do not sum to zero")
        m, k = len(self.members), len(self.deltas)
        if sum(a - 1 for a in self.integer_angles) != m + k - 2:
            raise ValueError("zero-count identity fails")

    @property
    def k(self) -> int:
        return len(self.deltas)

    @property
    def reduced(self) -> bool:
        return not any(a.is_integer() for a in self.members)


class ResidueVector:
    """Exact residues of the logarithmic derivative; they sum to zero."""

    def __init__(self, entries: Sequence[ExactReal]):
        if len(entries) < 2:
            raise ValueError("a residue vector needs at least two entries")
        ctx = entries[0].ctx
        for e in entries:
            if e.is_zero():
                raise ValueError("residues must be nonzero")
        if not sum_exact(entries, ctx).is_zero():
            raise ValueError("residues must sum to zero exactly")
        self.entries: tuple[ExactReal, ...] = tuple(entries)
        self.ctx = ctx

    @property
    def q(self) -> int:
        return len(self.entries)

    @cached_property
    def commensurability(self) -> Commensurable | None:
        return commensurability_class(self.entries)

    def scaled(self, factor) -> "ResidueVector":
        return ResidueVector([factor * e for e in self.entries])

    def __iter__(self):
        return iter(self.entries)

    def __repr__(self) -> str:
        return "ResidueVector(" + ", ".join(str(e) for e in self.entries) + ")"


# -- enumeration of reduced arrangements ------------------------------------


def _blocks(values: Sequence[ExactReal]) -> list[tuple[ExactReal, int]]:
    """Runs of equal angles in canonical order."""
    out: list[tuple[ExactReal, int]] = []
    for v in values:
        if out and out[-1][0] == v:
            out[-1] = (v, out[-1][1] + 1)
        else:
            out.append((v, 1))
    return out


def _signs_for_counts(blocks, counts) -> tuple[int, ...]:
    signs: list[int] = []
    for (_, size), plus in zip(blocks, counts):
        signs.extend([1] * plus + [-1] * (size - plus))
    return tuple(signs)


def _count_choices(blocks, ctx) -> Iterable[tuple[tuple[int, ...], ExactReal]]:
    """All per-block plus-sign counts with the exact signed sum."""
    ranges = [range(size + 1) for _, size in blocks]
    for counts in itertools.product(*ranges):
        total = ctx.zero()
        for (value, size), plus in zip(blocks, counts):
            total = total + (2 * plus - size) * value
        yield counts, total


def _mitm_choices(blocks, ctx) -> Iterable[tuple[tuple[int, ...], ExactReal]]:
    """Meet-in-the-middle version of :func:`_count_choices`.

    Only combinations whose total is an integer are produced, which is all
    the caller needs; the straight enumeration yields every combination.
    """
    half = len(blocks) // 2
    left, right = blocks[:half], blocks[half:]
    table: dict[tuple, list[tuple[tuple[int, ...], ExactReal]]] = {}
    for counts, total in _count_choices(right, ctx):
        key = (total.coeffs[1:], total.coeffs[0] % 1)
        table.setdefault(key, []).append((counts, total))
    for lcounts, ltotal in _count_choices(left, ctx):
        need = (
            tuple(-c for c in ltotal.coeffs[1:]),
            (-ltotal.coeffs[0]) % 1,
        )
        for rcounts, rtotal in table.get(need, ()):
            yield lcounts + rcounts, ltotal + rtotal


def enumerate_reduced_arrangements(
    alpha: AngleMultiset, *, mitm_threshold: int = MITM_THRESHOLD
) -> list[Arrangement]:
    """All reduced arrangements of ``alpha``, canonically ordered.

    Sign vectors are deduplicated over equal angles: within a block of equal
    angles only the number of plus signs matters, and the canonical vector
    lists the plus signs first.  The list is empty iff no choice of signs
    produces a non-negative integer k' with k'' non-negative and even.
    """
    ctx = alpha.ctx
    non_int, ints = split_integer_noninteger(alpha)
    int_angles = tuple(sorted(a.as_integer() for a in ints))
    int_sum = sum(int_angles)
    n = alpha.n
    blocks = _blocks(non_int)
    chooser = _mitm_choices if len(non_int) > mitm_threshold else _count_choices
    found: list[Arrangement] = []
    for counts, total in chooser(blocks, ctx):
        if not total.is_integer():
            continue
        k_prime = total.as_integer()
        if k_prime < 0:
            continue
        k_dprime = int_sum - n - k_prime + 2
        if k_dprime < 0 or k_dprime % 2:
            continue
        found.append(
            Arrangement(
                noninteger=non_int,
                signs=_signs_for_counts(blocks, counts),
                integer_angles=int_angles,
                k_prime=k_prime,
                k_double_prime=k_dprime,
                ctx=ctx,
            )
        )
    found.sort(key=lambda arr: (arr.k_prime, arr.signs))
    return found


def enumerate_general_arrangements(alpha: AngleMultiset) -> list[GeneralArrangement]:
    """Every arrangement, including ones keeping integer angles in A.

    Used by the exhaustive cross-check mode; the reduced enumeration is the
    production path.
    """
    ctx = alpha.ctx
    non_int, ints = split_integer_noninteger(alpha)
    int_blocks = _blocks(ints)
    results: list[GeneralArrangement] = []
    for b_counts in itertools.product(*(range(c + 1) for _, c in int_blocks)):
        b_angles: list[int] = []
        a_extra: list[ExactReal] = []
        for (value, size), taken in zip(int_blocks, b_counts):
            b_angles.extend([value.as_integer()] * taken)
            a_extra.extend([value] * (size - taken))
        members = tuple(non_int) + tuple(a_extra)
        m = len(members)
        k = sum(v - 1 for v in b_angles) - m + 2
        if k < 0:
            continue
        for counts, total in _count_choices(_blocks(members), ctx):
            if not total.is_integer():
                continue
            s = total.as_integer()
            if abs(s) > k or (k - s) % 2:
                continue
            plus = (k - s) // 2
            results.append(
                GeneralArrangement(
                    members=members,
                    signs=_signs_for_counts(_blocks(members), counts),
                    integer_angles=tuple(sorted(b_angles)),
                    deltas=(1,) * plus + (-1,) * (k - plus),
                    ctx=ctx,
                )
            )
    return results


def reduce_arrangement(g: GeneralArrangement) -> Arrangement:
    """Move integer angles from A to B one at a time.

    Removing an integer angle alpha_m with sign eps_m deletes the residue
    eps_m * alpha_m, so alpha_m unit residues of the same sign eps_m are
    appended to keep the residues summing to zero, and k grows by alpha_m.
    If the final signed non-integer sum is negative, all signs are flipped
    globally (which negates every residue and preserves both identities).
    """
    members = list(g.members)
    signs = list(g.signs)
    b_angles = list(g.integer_angles)
    deltas = list(g.deltas)
    i = 0
    while i < len(members):
        if members[i].is_integer():
            value = members[i].as_integer()
            eps = signs[i]
            del members[i], signs[i]
            b_angles.append(value)
            deltas.extend([eps] * value)
        else:
            i += 1
    ctx = g.ctx
    signed = sum_exact((s * a for s, a in zip(signs, members)), ctx)
    k_prime = signed.as_integer()
    if k_prime < 0:
        signs = [-s for s in signs]
        deltas = [-d for d in deltas]
        k_prime = -k_prime
    k_dprime = 2 * sum(1 for d in deltas if d == 1)
    order = sorted(range(len(members)), key=lambda j: _angle_sort_key(members[j]))
    members = [members[j] for j in order]
    signs = [signs[j] for j in order]
    canonical_signs: list[int] = []
    pos = 0
    for _value, size in _blocks(members):
        chunk = signs[pos : pos + size]
        canonical_signs.extend(sorted(chunk, reverse=True))
        pos += size
    return Arrangement(
        noninteger=tuple(members),
        signs=tuple(canonical_signs),
        integer_angles=tuple(sorted(b_angles)),
        k_prime=k_prime,
        k_double_prime=k_dprime,
        ctx=ctx,
    )


def residue_vector(arr: Arrangement) -> ResidueVector:
    """Residues of a reduced arrangement.

    Signed non-integer angles come first, then k' entries equal to -1, then
    k'' unit entries in canceling +1/-1 pairs.  The total is exactly zero.
    """
    if not arr.reduced:
        raise ValueError("residue_vector requires a reduced arrangement")
    ctx = arr.ctx
    entries = [s * a for s, a in zip(arr.signs, arr.noninteger)]
    entries.extend([ctx.rational(-1)] * arr.k_prime)
    for j in range(arr.k_double_prime):
        entries.append(ctx.rational(1 if j % 2 == 0 else -1))
    return ResidueVector(entries)


# -- classifiers -------------------------------------------------------------


def gauss_bonnet(alpha: AngleMultiset) -> ExactReal:
    """Total curvature sum: sum(alpha_j - 1) + 2.  Must be positive."""
    ctx = alpha.ctx
    total = ctx.rational(2)
    one = ctx.one()
    for a in alpha:
        total = total + (a - one)
    return total


def odd_lattice_distance(alpha: AngleMultiset) -> float:
    """l1 distance from alpha - 1 to the odd integer lattice.

    Per coordinate the nearest integer leaves residual r_j; the base cost
    sum |r_j| uses the rounded vector, and when its coordinate sum has the
    wrong parity the cheapest single-coordinate flip, costing 1 - 2|r_j|,
    is added.  Evaluated in floating point (symbolic angles included).
    """
    xs = [a.to_float() - 1.0 for a in alpha]
    rounded = [round(x) for x in xs]
    residuals = [x - n for x, n in zip(xs, rounded)]
    base = sum(abs(r) for r in residuals)
    if sum(rounded) % 2 != 0:
        return base
    return base + min(1.0 - 2.0 * abs(r) for r in residuals)


class MPClass(str, Enum):
    """Buckets of the angle classification by total curvature and (H)."""

    GB_FAIL = "GB_fail"
    H_FAIL = "H_fail"
    H_STRICT = "H_strict"
    H_EQUALITY = "H_equality"


def mp_classify(alpha: AngleMultiset, *, tol: float = 1e-9) -> MPClass:
    """Classify by the curvature bound and the odd-lattice distance."""
    if gauss_bonnet(alpha).compare(alpha.ctx.zero()) <= 0:
        return MPClass.GB_FAIL
    d = odd_lattice_distance(alpha)
    if abs(d - 1.0) <= tol:
        return MPClass.H_EQUALITY
    return MPClass.H_STRICT if d > 1.0 else MPClass.H_FAIL
