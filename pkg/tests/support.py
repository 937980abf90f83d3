"""Shared test helpers: randomized fixtures built to satisfy the invariants."""

from fractions import Fraction

from coneangles.arrangements import AngleMultiset
from coneangles.exactreal import BasisContext, ExactReal, sum_exact


def random_multiset_with_arrangement(rng, ctx: BasisContext) -> AngleMultiset:
    """A random angle multiset guaranteed to admit a reduced arrangement.

    Samples m - 1 non-integer angles and signs, then solves for the last
    angle so the signed sum hits a chosen non-negative integer k'.  Integer
    angles are appended until k'' comes out non-negative and even.
    """
    one = ctx.one()
    zero = ctx.zero()
    while True:
        m = rng.randint(2, 5)
        angles: list[ExactReal] = []
        signs: list[int] = []
        for _ in range(m - 1):
            if ctx.r >= 1 and rng.random() < 0.4:
                a = ctx.tau(1, scale=Fraction(rng.randint(1, 5), rng.randint(1, 3)))
            else:
                num = rng.randint(1, 9)
                den = rng.choice([2, 3, 4, 5])
                if num % den == 0:
                    num += 1
                a = ctx.rational(Fraction(num, den))
            angles.append(a)
            signs.append(rng.choice([1, -1]))
        k_prime = rng.randint(0, 2)
        partial = sum_exact((s * a for s, a in zip(signs, angles)), ctx)
        last = ctx.rational(k_prime) - partial
        eps = 1
        if not last > zero:
            last = -last
            eps = -1
        if last.is_integer() or last == one or not last > zero:
            continue
        angles.append(last)
        signs.append(eps)
        ints = [rng.randint(2, 5) for _ in range(rng.randint(0, 2))]
        n = m + len(ints)
        k_dprime = sum(ints) - n - k_prime + 2
        if k_dprime % 2:
            ints.append(2)  # shifts k'' by +1
            k_dprime = sum(ints) - (m + len(ints)) - k_prime + 2
        while k_dprime < 0:
            ints.append(3)  # shifts k'' by +2
            k_dprime = sum(ints) - (m + len(ints)) - k_prime + 2
        try:
            return AngleMultiset(angles + [ctx.rational(v) for v in ints])
        except ValueError:
            continue
