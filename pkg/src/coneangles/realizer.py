"""Numerical realization of charge configurations with prescribed zeros.

Given real residues c summing to zero, the rational function
g(z) = sum c_j / (z - z_j) has the zeros of the polynomial

    N(z) = sum_j c_j * prod_{i != j} (z - z_i),

of degree q - 2 (the top coefficient is sum c_j = 0).  ``realize`` hunts
for positions z_j making the zero multiplicities match a target partition
by damped least squares on the coefficients of N against
C * prod_i (z - w_i)^{l_i}, with the gauge z_1 = 0, z_2 = 1 and random
restarts.  When the partition asks for a zero of multiplicity 3 or more,
each restart first runs a coarse stage that drives the roots of N into
clusters of the right sizes (the coefficient objective alone has a very
narrow basin around a high-order coalescence), then hands over to the
coefficient least squares.  A returned configuration is always
re-verified from scratch:
the residual is recomputed and the roots of a fresh N are clustered and
compared against the partition.  A ``None`` outcome is a numerical
failure, not a certificate of non-existence; certificates come from the
decision modules.

Double-precision caveat: companion-matrix roots of an l-fold zero scatter
like eps**(1/l) (about 1e-8 for l = 2, 1e-4 for l = 4), so
``cluster_tol`` must be chosen accordingly; the 1e-6 default certifies
multiplicities up to 2, and parts of size 3 or more need a looser value
such as 1e-3.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import least_squares

from coneangles.decider import PartitionP

__all__ = [
    "Configuration",
    "DevelopingMap",
    "RealizeConfig",
    "developing_map_description",
    "numerator_polynomial",
    "q4_double_zero_exists",
    "realize",
    "verify_realization",
]

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RealizeConfig:
    restarts: int = 64
    max_iterations: int = 500
    residual_tol: float = 1e-10
    separation: float = 1e-6
    cluster_tol: float = 1e-6
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1 or self.max_iterations < 1:
            raise ValueError("restarts and max_iterations must be positive")
        for name in ("residual_tol", "separation", "cluster_tol"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass(frozen=True)
class Configuration:
    """A realized (and re-verified) charge configuration."""

    residues: tuple[float, ...]
    positions: tuple[complex, ...]
    zero_sites: tuple[complex, ...]
    multiplicities: tuple[int, ...]
    residual: float


def _poly_from_roots(roots: np.ndarray) -> np.ndarray:
    """Monic descending coefficients of prod (x - r)."""
    coeffs = np.ones(1, dtype=complex)
    for r in roots:
        coeffs = np.concatenate([coeffs, [0.0]]) - r * np.concatenate([[0.0], coeffs])
    return coeffs


def _synthetic_division(coeffs: np.ndarray, root: complex) -> np.ndarray:
    """Quotient of a descending-coefficient polynomial by (x - root).

    The remainder is dropped; callers divide only by known roots.
    """
    out = np.empty(len(coeffs) - 1, dtype=complex)
    acc = 0.0 + 0.0j
    for i in range(len(out)):
        acc = acc * root + coeffs[i]
        out[i] = acc
    return out


def _numerator_coeffs(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """Descending coefficients of sum_j c_j prod_{i != j} (z - z_i), length q."""
    full = _poly_from_roots(z)
    coeffs = np.zeros(len(z), dtype=complex)
    for j in range(len(z)):
        coeffs += c[j] * _synthetic_division(full, z[j])
    return coeffs


def numerator_polynomial(c, z) -> np.ndarray:
    """Descending complex coefficients of the numerator of g, degree <= q-2.

    The degree-(q-1) coefficient equals sum(c); it is asserted negligible
    (relative to sum |c|) and dropped.  Raises on coincident positions.
    """
    c = np.asarray(c, dtype=float)
    z = np.asarray(z, dtype=complex)
    if len(c) != len(z) or len(c) < 2:
        raise ValueError("need matching residue/position vectors of length >= 2")
    q = len(z)
    for i in range(q):
        for j in range(i + 1, q):
            if z[i] == z[j]:
                raise ValueError(f"coincident positions z[{i}] == z[{j}]")
    coeffs = _numerator_coeffs(c, z)
    total = abs(np.sum(c))
    if total >= 1e-9 * np.sum(np.abs(c)):
        raise ValueError(f"residues sum to {np.sum(c):g}, not zero")
    return coeffs[1:]


def _cluster_sizes(roots: np.ndarray, tol: float) -> tuple[list[int], list[complex]]:
    """Greedy single-linkage clustering; returns (sizes, centroids)."""
    n = len(roots)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if abs(roots[i] - roots[j]) < tol:
                ri, rj = find(i), find(j)
                if ri != rj:
                    parent[ri] = rj
    groups: dict[int, list[complex]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(roots[i])
    sizes = [len(g) for g in groups.values()]
    centroids = [complex(np.mean(g)) for g in groups.values()]
    return sizes, centroids


def verify_realization(cfg: Configuration, partition: PartitionP, cluster_tol: float = 1e-6) -> bool:
    """Independent check: rebuild N, take companion-matrix roots, cluster.

    True iff the cluster-size multiset equals the partition.  Uses none of
    the optimizer's state.
    """
    try:
        coeffs = numerator_polynomial(cfg.residues, cfg.positions)
    except ValueError:
        return False
    if len(coeffs) <= 1:
        roots = np.array([], dtype=complex)
    else:
        roots = np.roots(coeffs)
    if len(roots) != partition.total:
        return False
    sizes, _ = _cluster_sizes(roots, cluster_tol)
    return sorted(sizes, reverse=True) == list(partition.parts)


def _model_coeffs(w: np.ndarray, mults: tuple[int, ...], scale: complex) -> np.ndarray:
    expanded = np.repeat(w, mults) if len(w) else np.array([], dtype=complex)
    return scale * _poly_from_roots(expanded)


def _coefficient_residual(c, z, w, mults, scale) -> float:
    """Relative l2 mismatch between N and scale * prod (z - w_i)^{l_i}."""
    coeffs = _numerator_coeffs(np.asarray(c, float), np.asarray(z, complex))[1:]
    diff = coeffs - _model_coeffs(np.asarray(w, complex), mults, scale)
    denom = max(float(np.linalg.norm(coeffs)), 1e-300)
    return float(np.linalg.norm(diff)) / denom


class _CoefficientProblem:
    """Least-squares system matching N's coefficients to C * prod(x-w)^l.

    Unknowns (real vector): Re/Im of the free positions z_3..z_q, Re/Im of
    the zero sites w_i, Re/Im of the scale C.  The gauge z_1 = 0, z_2 = 1
    removes the affine redundancy.
    """

    def __init__(self, c: np.ndarray, mults: tuple[int, ...]):
        self.c = c
        self.q = len(c)
        self.mults = mults
        self.s = len(mults)
        self.n_free = self.q - 2

    def unpack(self, x):
        q, n_free, s = self.q, self.n_free, self.s
        pos = np.empty(q, dtype=complex)
        pos[0], pos[1] = 0.0, 1.0
        pos[2:] = x[:n_free] + 1j * x[n_free : 2 * n_free]
        w = x[2 * n_free : 2 * n_free + s] + 1j * x[2 * n_free + s : 2 * n_free + 2 * s]
        scale = complex(x[-2], x[-1])
        return pos, w, scale

    def pack(self, pos, w, scale):
        return np.concatenate(
            [pos[2:].real, pos[2:].imag, w.real, w.imag, [scale.real, scale.imag]]
        )

    def objective(self, x):
        pos, w, scale = self.unpack(x)
        diff = _numerator_coeffs(self.c, pos)[1:] - _model_coeffs(w, self.mults, scale)
        return np.concatenate([diff.real, diff.imag])

    def jacobian(self, x):
        # The residual is polynomial in every unknown, so each complex
        # derivative fills a Cauchy-Riemann block of the real Jacobian.
        q, s, n_free, c = self.q, self.s, self.n_free, self.c
        pos, w, scale = self.unpack(x)
        full = _poly_from_roots(pos)
        quotients = [_synthetic_division(full, pos[k]) for k in range(q)]
        n_full = np.zeros(q, dtype=complex)
        for k in range(q):
            n_full += c[k] * quotients[k]
        expanded = np.repeat(w, self.mults) if s else np.array([], dtype=complex)
        model = _poly_from_roots(expanded)
        columns: list[np.ndarray] = []
        for k in range(2, q):
            # d/dz_k of N: every term except c_k's loses its (x - z_k) factor.
            columns.append(-_synthetic_division(n_full - c[k] * quotients[k], pos[k]))
        for i in range(s):
            dm = _synthetic_division(model, w[i])
            columns.append(scale * self.mults[i] * np.concatenate([[0.0], dm]))
        columns.append(-model)
        half = q - 1
        jac = np.empty((2 * half, len(x)))
        for col, dvec in enumerate(columns):
            if col < n_free:
                re_idx, im_idx = col, col + n_free
            elif col < n_free + s:
                i = col - n_free
                re_idx, im_idx = 2 * n_free + i, 2 * n_free + s + i
            else:
                re_idx, im_idx = len(x) - 2, len(x) - 1
            jac[:half, re_idx] = dvec.real
            jac[half:, re_idx] = dvec.imag
            jac[:half, im_idx] = -dvec.imag
            jac[half:, im_idx] = dvec.real
        return jac


def _group_roots(roots, parts):
    """Deterministic min-spread assignment of roots to multiplicity groups.

    Greedy over the parts in non-increasing order; for each part the
    subset with the smallest squared spread around its mean is taken.
    """
    pool = list(roots)
    groups: list[tuple[list[complex], complex]] = []
    for part in parts:
        best = None
        for combo in itertools.combinations(range(len(pool)), part):
            pts = [pool[i] for i in combo]
            mean = sum(pts) / len(pts)
            spread = sum(abs(p - mean) ** 2 for p in pts)
            if best is None or spread < best[0]:
                best = (spread, combo, mean)
        _, combo, mean = best
        groups.append(([pool[i] for i in combo], mean))
        pool = [r for i, r in enumerate(pool) if i not in combo]
    return groups


def _coalescence_stage(c, mults, q, x0, max_nfev):
    """Drive the roots of N toward clusters of the prescribed sizes.

    Operates on the free positions only.  The root-spread objective grows
    like (coefficient mismatch)**(1/l) near an l-fold cluster, so its
    basin of attraction is far wider than the coefficient objective's.
    """
    n_free = q - 2
    penalty = np.full(2 * (q - 2), 1e3)

    def spread(x):
        pos = np.empty(q, dtype=complex)
        pos[0], pos[1] = 0.0, 1.0
        pos[2:] = x[:n_free] + 1j * x[n_free:]
        coeffs = _numerator_coeffs(c, pos)[1:]
        if abs(coeffs[0]) < 1e-14:
            return penalty
        roots = np.roots(coeffs)
        if len(roots) != q - 2:
            return penalty
        deviations = []
        for pts, mean in _group_roots(roots, mults):
            deviations.extend(p - mean for p in pts)
        arr = np.asarray(deviations)
        return np.concatenate([arr.real, arr.imag])

    result = least_squares(
        spread, x0, method="trf", xtol=1e-14, ftol=1e-14, gtol=1e-14, max_nfev=max_nfev
    )
    pos = np.empty(q, dtype=complex)
    pos[0], pos[1] = 0.0, 1.0
    pos[2:] = result.x[:n_free] + 1j * result.x[n_free:]
    coeffs = _numerator_coeffs(c, pos)[1:]
    roots = np.roots(coeffs) if abs(coeffs[0]) > 1e-14 else None
    if roots is None or len(roots) != q - 2:
        return pos, None
    sites = np.array([mean for _, mean in _group_roots(roots, mults)])
    return pos, sites


def realize(c, partition: PartitionP, cfg: RealizeConfig = RealizeConfig()) -> Configuration | None:
    """Search for positions giving zeros with the prescribed multiplicities.

    Returns a verified Configuration or None after exhausting the restarts.
    None means the optimizer failed, nothing more.  All randomness flows
    from ``cfg.rng_seed``; the first successful restart (in index order)
    wins, so results are reproducible.
    """
    c = np.asarray(c, dtype=float)
    if len(c) < 2:
        raise ValueError("need at least two residues")
    shift = float(np.mean(c))
    if abs(shift) > 1e-12:
        logger.warning("projecting residues onto sum=0: shift %.3g", shift)
    c = c - shift
    if np.any(c == 0.0):
        raise ValueError("zero residues are not allowed")
    q = len(c)
    mults = partition.parts
    s = len(mults)
    if partition.total != q - 2:
        raise ValueError(f"partition sums to {partition.total}, expected {q - 2}")

    problem = _CoefficientProblem(c, mults)
    # The coefficient objective's basin is wide enough for double zeros
    # (verified statistically) but practically zero for triple and higher
    # coalescence, so the coarse stage runs only for parts of size >= 3.
    needs_coalescence = partition.max_part >= 3
    for index in range(cfg.restarts):
        rng = np.random.default_rng([cfg.rng_seed, index])
        pos0 = _draw_positions(rng, q, cfg.separation)
        w0 = _draw_disk(rng, s)
        if needs_coalescence:
            x0 = np.concatenate([pos0[2:].real, pos0[2:].imag])
            pos0, sites = _coalescence_stage(c, mults, q, x0, cfg.max_iterations)
            if sites is not None:
                w0 = sites
        lead = complex(_numerator_coeffs(c, pos0)[1])
        if abs(lead) < 1e-12:
            lead = 1.0 + 0.0j
        result = least_squares(
            problem.objective,
            problem.pack(pos0, w0, lead),
            jac=problem.jacobian,
            method="trf",
            xtol=1e-14,
            ftol=1e-14,
            gtol=1e-14,
            max_nfev=cfg.max_iterations,
        )
        pos, w, scale = problem.unpack(result.x)
        if _min_separation(pos) <= cfg.separation:
            continue
        residual = _coefficient_residual(c, pos, w, mults, scale)
        if residual >= cfg.residual_tol:
            continue
        candidate = Configuration(
            residues=tuple(float(v) for v in c),
            positions=tuple(complex(v) for v in pos),
            zero_sites=tuple(complex(v) for v in w),
            multiplicities=mults,
            residual=residual,
        )
        if verify_realization(candidate, partition, cfg.cluster_tol):
            return candidate
    return None


def _draw_disk(rng, count, radius=3.0, center=0.5 + 0.0j):
    r = radius * np.sqrt(rng.uniform(0, 1, size=count))
    theta = rng.uniform(0, 2 * np.pi, size=count)
    return center + r * np.exp(1j * theta)


def _min_separation(pos: np.ndarray) -> float:
    best = np.inf
    for i in range(len(pos)):
        for j in range(i + 1, len(pos)):
            best = min(best, abs(pos[i] - pos[j]))
    return float(best)


def _draw_positions(rng, q, separation, tries=200):
    for _ in range(tries):
        pos = np.empty(q, dtype=complex)
        pos[0], pos[1] = 0.0, 1.0
        pos[2:] = _draw_disk(rng, q - 2)
        if _min_separation(pos) > separation:
            return pos
    raise RuntimeError("could not draw separated starting positions")


def q4_double_zero_exists(a: float, b: float, c: float, d: float) -> bool:
    """Can residues (a, b, -c, -d) produce a single double zero?

    Requires a, b, c, d > 0 with a + b = c + d (within 1e-9 relative).
    The balanced leaf-length equations x = A - D = C - B > 0 admit a
    solution for some labeling of the two positive and the two negative
    residues exactly when the four numbers are not all equal, i.e.
    a != b or c != d.  The all-equal quadruple is the unique exceptional
    shape, matching the integer bound (sum |(1,1,-1,-1)| = 4 < 6).
    """
    if min(a, b, c, d) <= 0:
        raise ValueError("all four residue magnitudes must be positive")
    if abs((a + b) - (c + d)) > 1e-9 * (a + b + c + d):
        raise ValueError("residues must balance: a + b = c + d")
    return a != b or c != d


@dataclass(frozen=True)
class DevelopingMap:
    """Exponent data of prod (z - z_j)^{beta_j} plus the cone points."""

    exponents: tuple[tuple[complex, float], ...]
    cone_points: tuple[tuple[complex, int], ...]


def developing_map_description(cfg: Configuration) -> DevelopingMap:
    """Exponents beta_j = c_j at the positions, angles l_i + 1 at the zeros."""
    return DevelopingMap(
        exponents=tuple(zip(cfg.positions, cfg.residues)),
        cone_points=tuple(
            (site, mult + 1) for site, mult in zip(cfg.zero_sites, cfg.multiplicities)
        ),
    )
