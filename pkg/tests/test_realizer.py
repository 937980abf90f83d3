"""Realizer: exact numerator fixtures, seeded searches, the q=4 oracle."""

from fractions import Fraction

import numpy as np
import pytest

from coneangles.decider import PartitionP
from coneangles.realizer import (
    Configuration,
    RealizeConfig,
    developing_map_description,
    numerator_polynomial,
    q4_double_zero_exists,
    realize,
    verify_realization,
)

FAST = RealizeConfig(restarts=12, rng_seed=7)


def symbolic_numerator(c_fracs, z_fracs):
    """Oracle: expand sum c_j prod_{i!=j} (x - z_i) in exact arithmetic."""
    q = len(c_fracs)
    total = [Fraction(0)] * q  # ascending coefficients
    for j in range(q):
        poly = [Fraction(1)]
        for i in range(q):
            if i == j:
                continue
            nxt = [Fraction(0)] * (len(poly) + 1)
            for k, a in enumerate(poly):
                nxt[k + 1] += a
                nxt[k] -= a * z_fracs[i]
            poly = nxt
        for k, a in enumerate(poly):
            total[k] += c_fracs[j] * a
    assert total[-1] == 0  # leading coefficient is sum(c)
    return list(reversed(total[:-1]))  # descending, degree q-2


class TestNumeratorPolynomial:
    def test_worked_example_double_zero(self):
        # Oracle (exact expansion) first, then the float computation.
        c = [Fraction(2), Fraction(-2), Fraction(1), Fraction(-1)]
        z = [Fraction(1), Fraction(-1), Fraction(-1, 2), Fraction(1, 2)]
        assert symbolic_numerator(c, z) == [3, 0, 0]
        coeffs = numerator_polynomial([2, -2, 1, -1], [1, -1, -0.5, 0.5])
        assert np.max(np.abs(coeffs - np.array([3, 0, 0]))) < 1e-12 * 3

    def test_two_charges_constant(self):
        coeffs = numerator_polynomial([1, -1], [0, 1])
        assert coeffs.shape == (1,)
        assert abs(coeffs[0] - (-1)) < 1e-15

    def test_linear_in_residues(self):
        rng = np.random.default_rng(3)
        z = rng.normal(size=5) + 1j * rng.normal(size=5)
        c = rng.normal(size=5)
        c -= c.mean()
        a = numerator_polynomial(2 * c, z)
        b = numerator_polynomial(c, z)
        assert np.allclose(a, 2 * b, rtol=1e-12)

    def test_coincident_positions_rejected(self):
        with pytest.raises(ValueError, match="coincident"):
            numerator_polynomial([1, -2, 1], [0, 1, 1])

    def test_nonzero_sum_rejected(self):
        with pytest.raises(ValueError, match="sum"):
            numerator_polynomial([1, 1], [0, 1])

    def test_generic_degree_is_exactly_q_minus_2(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            q = rng.integers(3, 7)
            c = rng.normal(size=q)
            c -= c.mean()
            z = rng.normal(size=q) + 1j * rng.normal(size=q)
            coeffs = numerator_polynomial(c, z)
            assert len(coeffs) == q - 1
            assert abs(coeffs[0]) > 1e-9


class TestRealize:
    def test_worked_example_succeeds(self):
        cfg = realize([2, -2, 1, -1], PartitionP([2]), FAST)
        assert cfg is not None
        assert cfg.residual < FAST.residual_tol
        assert verify_realization(cfg, PartitionP([2]))
        assert len(cfg.zero_sites) == 1

    def test_all_equal_not_found(self):
        assert realize([1, 1, -1, -1], PartitionP([2]), FAST) is None

    def test_equal_positives_unequal_negatives_succeeds(self):
        # The case the naive reading would forbid: realizable since the
        # shape (2,2,-3,-1) satisfies the integer bound (6 <= 8).
        cfg = realize([2, 2, -3, -1], PartitionP([2]), FAST)
        assert cfg is not None

    def test_football(self):
        cfg = realize([0.75, -0.75], PartitionP([]), FAST)
        assert cfg is not None
        assert cfg.zero_sites == ()

    def test_seed_reproducibility(self):
        a = realize([2, -2, 1, -1], PartitionP([2]), FAST)
        b = realize([2, -2, 1, -1], PartitionP([2]), FAST)
        assert a == b

    def test_scaling_invariance(self):
        base = realize([2, -2, 1, -1], PartitionP([2]), FAST)
        for lam in (-1, 2, 10):
            scaled = realize([lam * v for v in (2, -2, 1, -1)], PartitionP([2]), FAST)
            assert (scaled is not None) == (base is not None)

    def test_zero_residue_rejected(self):
        with pytest.raises(ValueError):
            realize([1, 0, -1], PartitionP([1]), FAST)

    def test_projection_applied(self):
        cfg = realize([2 + 1e-14, -2, 1, -1], PartitionP([2]), FAST)
        assert cfg is not None
        assert abs(sum(cfg.residues)) < 1e-12


class TestVerifyRealization:
    @pytest.fixture
    def example_config(self):
        return Configuration(
            residues=(2.0, -2.0, 1.0, -1.0),
            positions=(1.0, -1.0, -0.5, 0.5),
            zero_sites=(0.0,),
            multiplicities=(2,),
            residual=0.0,
        )

    def test_known_exact_positions(self, example_config):
        assert verify_realization(example_config, PartitionP([2]))

    def test_wrong_partition_rejected(self, example_config):
        assert not verify_realization(example_config, PartitionP([1, 1]))

    def test_generic_simple_zeros(self):
        rng = np.random.default_rng(5)
        c = np.array([1.5, -0.5, 0.25, -1.25])
        z = rng.normal(size=4) + 1j * rng.normal(size=4)
        cfg = Configuration(
            residues=tuple(c),
            positions=tuple(z),
            zero_sites=(),
            multiplicities=(),
            residual=0.0,
        )
        assert verify_realization(cfg, PartitionP([1, 1]))

    def test_gauge_invariance(self):
        base = realize([2, -2, 1, -1], PartitionP([2]), FAST)
        assert base is not None
        for lam, mu in [(2.0, 0.0), (1.0, 3.5), (0.5 + 1.25j, -2.0 + 1.0j)]:
            moved = Configuration(
                residues=base.residues,
                positions=tuple(lam * z + mu for z in base.positions),
                zero_sites=tuple(lam * w + mu for w in base.zero_sites),
                multiplicities=base.multiplicities,
                residual=base.residual,
            )
            assert verify_realization(moved, PartitionP([2]))


class TestQ4ClosedForm:
    def test_staggered_true(self):
        assert q4_double_zero_exists(2, 1, 2, 1) is True

    def test_all_equal_false(self):
        assert q4_double_zero_exists(1, 1, 1, 1) is False

    def test_equal_negatives_still_true(self):
        # (3,1,-2,-2) satisfies the integer bound (6 <= 8) and the search
        # realizes it; equal negatives alone do not forbid a double zero.
        assert q4_double_zero_exists(3, 1, 2, 2) is True
        assert realize([3, 1, -2, -2], PartitionP([2]), FAST) is not None

    def test_equal_positives_still_true(self):
        assert q4_double_zero_exists(2, 2, 3, 1) is True

    def test_precondition_balance(self):
        with pytest.raises(ValueError):
            q4_double_zero_exists(2, 1, 1, 1)

    def test_precondition_positive(self):
        with pytest.raises(ValueError):
            q4_double_zero_exists(2, -1, 1, 0.0)

    def test_matches_realize_on_all_equal_scalings(self):
        for beta in (0.5, 1.0, 2.5):
            assert realize([beta, beta, -beta, -beta], PartitionP([2]), FAST) is None


class TestTheoryAgreement:
    def test_admissible_commensurable_verdicts_realize(self):
        # Whenever the decision produces a commensurable witness (b, P),
        # the numerical search realizes it.
        from coneangles.arrangements import AngleMultiset
        from coneangles.decider import angles_to_partition, decide_admissible
        from coneangles.exactreal import BasisContext

        ctx = BasisContext(r=1)
        fixtures = [
            ("1/3", "1/3", "2/3", "2/3", "3"),
            ("t1", "t1"),
            ("2", "2"),
            ("1/2", "1/2", "1/2", "3/2", "5"),
        ]
        for specs in fixtures:
            alpha = AngleMultiset([ctx.parse(s) for s in specs])
            verdict = decide_admissible(alpha)
            assert verdict.admissible and verdict.b is not None
            partition = angles_to_partition(verdict.arrangement)
            # Root clusters of an l-fold zero scatter like eps**(1/l), so
            # higher multiplicities need a looser cluster tolerance.
            tol = 1e-3 if partition.max_part >= 3 else 1e-6
            cfg = realize(
                [float(v) for v in verdict.b],
                partition,
                RealizeConfig(restarts=12, rng_seed=7, cluster_tol=tol),
            )
            assert cfg is not None, specs


class TestJacobian:
    def test_matches_finite_differences(self):
        from coneangles.realizer import _CoefficientProblem

        rng = np.random.default_rng(42)
        for c_vals, mults in [
            ([2.0, -2.0, 1.0, -1.0], (2,)),
            ([1.5, -0.5, 0.25, -1.25], (1, 1)),
            ([1.0, 2.0, -0.5, -1.5, -1.0], (2, 1)),
        ]:
            c = np.asarray(c_vals)
            problem = _CoefficientProblem(c - c.mean(), mults)
            x = rng.normal(size=2 * problem.n_free + 2 * problem.s + 2)
            jac = problem.jacobian(x)
            eps = 1e-7
            f0 = problem.objective(x)
            for i in range(len(x)):
                dx = np.zeros_like(x)
                dx[i] = eps
                fd = (problem.objective(x + dx) - f0) / eps
                assert np.max(np.abs(jac[:, i] - fd)) < 1e-5


class TestDevelopingMap:
    def test_worked_example(self):
        cfg = Configuration(
            residues=(2.0, -2.0, 1.0, -1.0),
            positions=(1.0, -1.0, -0.5, 0.5),
            zero_sites=(0.0,),
            multiplicities=(2,),
            residual=0.0,
        )
        dm = developing_map_description(cfg)
        assert dm.exponents == ((1.0, 2.0), (-1.0, -2.0), (-0.5, 1.0), (0.5, -1.0))
        assert dm.cone_points == ((0.0, 3),)

    def test_exponents_sum_to_zero(self):
        cfg = realize([2, -2, 1, -1], PartitionP([2]), FAST)
        dm = developing_map_description(cfg)
        assert abs(sum(e for _, e in dm.exponents)) < 1e-12
