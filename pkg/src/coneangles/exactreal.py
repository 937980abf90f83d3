"""Exact arithmetic in the Q-vector space spanned by 1 and formal transcendentals.

A value is stored as a vector of rationals over the basis (1, t1, ..., tr),
where the symbols t_i stand for positive real numbers that are linearly
independent over Q.  Equality, integrality and commensurability are decided
exactly on the coefficient vectors and never through floating point; only
strict order falls back to a numeric evaluation of the basis symbols.

Text syntax accepted by :meth:`BasisContext.parse`:

    "3/2"           rational
    "t1"            basis symbol
    "2 + 3/4*t2"    rational combination, terms joined by + or -

Whitespace is ignored.  Decimal literals such as "0.25" are read exactly.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

__all__ = [
    "BasisContext",
    "BasisMismatchError",
    "Commensurable",
    "ExactReal",
    "commensurability_class",
]

Rat = Union[int, Fraction]

#: Reciprocal of the plastic number; the anchor for default basis values.
_DEFAULT_BASE = 0.7548776662466927


def _default_numeric_value(index: int) -> float:
    """Positive, algebraically unremarkable default for t<index>."""
    v = (index * _DEFAULT_BASE) % 1.0
    return v if v > 1e-3 else v + 0.5


class BasisMismatchError(ValueError):
    """Two ExactReals from different basis contexts were combined."""


class BasisContext:
    """Shared basis (1, t1, ..., tr) for a family of ExactReals.

    ``numeric_values`` are used solely to decide strict order; they must be
    finite and positive.  All values participating in one computation must
    share a single context.
    """

    __slots__ = ("r", "numeric_values")

    def __init__(self, r: int = 0, numeric_values: Sequence[float] | None = None):
        if r < 0:
            raise ValueError("transcendental count must be non-negative")
        if numeric_values is None:
            numeric_values = tuple(_default_numeric_value(i) for i in range(1, r + 1))
        else:
            numeric_values = tuple(float(v) for v in numeric_values)
            if len(numeric_values) != r:
                raise ValueError(
                    f"expected {r} numeric values, got {len(numeric_values)}"
                )
        for v in numeric_values:
            if not math.isfinite(v) or v <= 0.0:
                raise ValueError("basis numeric values must be finite and positive")
        self.r = r
        self.numeric_values = numeric_values

    # -- constructors ------------------------------------------------------

    def zero(self) -> "ExactReal":
        return ExactReal(self, (Fraction(0),) + (Fraction(0),) * self.r)

    def one(self) -> "ExactReal":
        return self.rational(1)

    def rational(self, value: Rat) -> "ExactReal":
        coeffs = [Fraction(value)] + [Fraction(0)] * self.r
        return ExactReal(self, tuple(coeffs))

    def tau(self, index: int, scale: Rat = 1) -> "ExactReal":
        """The element scale * t<index>."""
        if not 1 <= index <= self.r:
            raise ValueError(f"t{index} is outside this basis (r={self.r})")
        coeffs = [Fraction(0)] * (self.r + 1)
        coeffs[index] = Fraction(scale)
        return ExactReal(self, tuple(coeffs))

    def build(self, rational: Rat = 0, **taus: Rat) -> "ExactReal":
        """Convenience constructor: build(1, t1=2) -> 1 + 2*t1."""
        coeffs = [Fraction(rational)] + [Fraction(0)] * self.r
        for name, value in taus.items():
            m = re.fullmatch(r"t(\d+)", name)
            if not m:
                raise ValueError(f"unknown basis symbol {name!r}")
            idx = int(m.group(1))
            if not 1 <= idx <= self.r:
                raise ValueError(f"t{idx} is outside this basis (r={self.r})")
            coeffs[idx] = Fraction(value)
        return ExactReal(self, tuple(coeffs))

    def parse(self, text: str) -> "ExactReal":
        """Parse the textual syntax, e.g. "3/2", "t1", "2 + 3/4*t2"."""
        compact = re.sub(r"\s+", "", text)
        if not compact:
            raise ValueError(f"empty expression {text!r}")
        if compact[0] not in "+-":
            compact = "+" + compact
        terms = re.findall(r"([+-])([^+-]+)", compact)
        if "".join(sign + body for sign, body in terms) != compact:
            raise ValueError(f"cannot parse {text!r}")
        coeffs = [Fraction(0)] * (self.r + 1)
        for sign, body in terms:
            coef, index = self._parse_term(body, text)
            if sign == "-":
                coef = -coef
            coeffs[index] += coef
        return ExactReal(self, tuple(coeffs))

    _NUMBER = r"(?:\d+/\d+|\d+\.\d*|\.\d+|\d+)"

    def _parse_term(self, body: str, original: str) -> tuple[Fraction, int]:
        m = re.fullmatch(rf"(?:({self._NUMBER})\*?)?(?:t(\d+))?", body)
        if not m or (m.group(1) is None and m.group(2) is None):
            raise ValueError(f"cannot parse term {body!r} in {original!r}")
        coef = Fraction(m.group(1)) if m.group(1) is not None else Fraction(1)
        if m.group(2) is None:
            return coef, 0
        index = int(m.group(2))
        if not 1 <= index <= self.r:
            raise ValueError(
                f"symbol t{index} in {original!r} is outside this basis (r={self.r})"
            )
        return coef, index

    # -- plumbing ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, BasisContext)
            and self.r == other.r
            and self.numeric_values == other.numeric_values
        )

    def __hash__(self) -> int:
        return hash((self.r, self.numeric_values))

    def __repr__(self) -> str:
        return f"BasisContext(r={self.r}, numeric_values={self.numeric_values!r})"


class ExactReal:
    """Immutable element rational + sum of rational * t_i over a BasisContext."""

    __slots__ = ("ctx", "coeffs")

    def __init__(self, ctx: BasisContext, coeffs: Sequence[Rat]):
        coeffs = tuple(Fraction(c) for c in coeffs)
        if len(coeffs) != ctx.r + 1:
            raise ValueError(
                f"coefficient vector has length {len(coeffs)}, expected {ctx.r + 1}"
            )
        object.__setattr__(self, "ctx", ctx)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, name, value):
        raise AttributeError("ExactReal is immutable")

    # -- arithmetic --------------------------------------------------------

    def _check_ctx(self, other: "ExactReal") -> None:
        if self.ctx is not other.ctx and self.ctx != other.ctx:
            raise BasisMismatchError("operands come from different basis contexts")

    def __add__(self, other: "ExactReal") -> "ExactReal":
        if not isinstance(other, ExactReal):
            return NotImplemented
        self._check_ctx(other)
        return ExactReal(self.ctx, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "ExactReal") -> "ExactReal":
        if not isinstance(other, ExactReal):
            return NotImplemented
        self._check_ctx(other)
        return ExactReal(self.ctx, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "ExactReal":
        return ExactReal(self.ctx, tuple(-a for a in self.coeffs))

    def __mul__(self, factor: Rat) -> "ExactReal":
        if not isinstance(factor, (int, Fraction)):
            return NotImplemented
        f = Fraction(factor)
        return ExactReal(self.ctx, tuple(a * f for a in self.coeffs))

    __rmul__ = __mul__

    # -- exact predicates ----------------------------------------------------

    @property
    def rational_part(self) -> Fraction:
        return self.coeffs[0]

    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def is_integer(self) -> bool:
        """True iff the value is an integer as a formal expression."""
        return self.is_rational() and self.coeffs[0].denominator == 1

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def as_integer(self) -> int:
        if not self.is_integer():
            raise ValueError(f"{self} is not an integer")
        return int(self.coeffs[0])

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- order ---------------------------------------------------------------

    def to_float(self) -> float:
        total = float(self.coeffs[0])
        for c, v in zip(self.coeffs[1:], self.ctx.numeric_values):
            total += float(c) * v
        return total

    def compare(self, other: "ExactReal") -> int:
        """-1, 0 or +1.  Equality is symbolic; strict order is numeric."""
        self._check_ctx(other)
        if self.coeffs == other.coeffs:
            return 0
        diff = (self - other).to_float()
        if diff == 0.0:
            raise ValueError(
                "basis numeric values cannot order these symbolically distinct values"
            )
        return 1 if diff > 0 else -1

    def __lt__(self, other: "ExactReal") -> bool:
        return self.compare(other) < 0

    def __le__(self, other: "ExactReal") -> bool:
        return self.compare(other) <= 0

    def __gt__(self, other: "ExactReal") -> bool:
        return self.compare(other) > 0

    def __ge__(self, other: "ExactReal") -> bool:
        return self.compare(other) >= 0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExactReal):
            return NotImplemented
        self._check_ctx(other)
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    # -- formatting ------------------------------------------------------------

    def __str__(self) -> str:
        parts: list[str] = []
        if self.coeffs[0] != 0 or self.is_zero():
            parts.append(str(self.coeffs[0]))
        for idx, c in enumerate(self.coeffs[1:], start=1):
            if c == 0:
                continue
            if c == 1:
                term = f"t{idx}"
            elif c == -1:
                term = f"-t{idx}"
            else:
                term = f"{c}*t{idx}"
            parts.append(term)
        out = parts[0]
        for term in parts[1:]:
            out += f" - {term[1:]}" if term.startswith("-") else f" + {term}"
        return out

    def __repr__(self) -> str:
        return f"ExactReal({self})"


@dataclass(frozen=True)
class Commensurable:
    """Result of a successful commensurability test.

    ``b`` is the unique integer vector with gcd of absolute values 1,
    first entry positive, such that every input entry equals eta * b_j.
    """

    b: tuple[int, ...]
    eta: ExactReal

    @property
    def abs_sum(self) -> int:
        return sum(abs(x) for x in self.b)


def commensurability_class(values: Sequence[ExactReal]) -> Commensurable | None:
    """Integer shape of a vector of nonzero ExactReals, or None.

    Returns ``Commensurable(b, eta)`` when every entry is a rational multiple
    of the first one, i.e. values = eta * b with b an integer vector whose
    absolute values have gcd 1 and whose first entry is positive.  Returns
    None when the entries are incommensurable.  Raises on a zero entry.
    """
    if not values:
        raise ValueError("empty vector")
    first = values[0]
    ctx = first.ctx
    for v in values:
        first._check_ctx(v)
        if v.is_zero():
            raise ValueError("commensurability is undefined for zero entries")
    pivot = next(i for i, c in enumerate(first.coeffs) if c != 0)
    ratios: list[Fraction] = []
    for v in values:
        lam = v.coeffs[pivot] / first.coeffs[pivot]
        if tuple(lam * c for c in first.coeffs) != v.coeffs:
            return None
        ratios.append(lam)
    denom_lcm = math.lcm(*(lam.denominator for lam in ratios))
    ints = [int(lam * denom_lcm) for lam in ratios]
    g = math.gcd(*ints)
    b = [x // g for x in ints]
    eta = first * Fraction(g, denom_lcm)
    if b[0] < 0:
        b = [-x for x in b]
        eta = -eta
    result = Commensurable(tuple(b), eta)
    assert all(eta * bj == v for bj, v in zip(result.b, values))
    return result


def sum_exact(values: Iterable[ExactReal], ctx: BasisContext) -> ExactReal:
    """Exact sum; returns ctx.zero() for an empty iterable."""
    total = ctx.zero()
    for v in values:
        total = total + v
    return total
