"""Branch-data oracle: witnesses, the degree bound, determinism, kernels."""

import itertools

import pytest

from coneangles.decider import PartitionP
from coneangles.hurwitz import (
    BranchData,
    PermutationWitness,
    SearchCapExceeded,
    branch_data_from,
    cycle_type,
    cycles_to_string,
    decide_branch_data,
    hurwitz_realizable_bruteforce,
    parse_cycles,
    song_xu_decide,
    verify_witness,
)


def compose(p, q):
    return tuple(p[j] for j in q)


def partitions(n, largest=None):
    if largest is None:
        largest = n
    if n == 0:
        yield ()
        return
    for first in range(min(n, largest), 0, -1):
        for rest in partitions(n - first, first):
            yield (first,) + rest


class TestBranchData:
    def test_doubling_example(self):
        bd = branch_data_from((1, -1, 2, -2), PartitionP([2]))
        assert bd.degree == 3
        assert bd.zeros == (2, 1) and bd.poles == (2, 1)
        assert bd.extras == (3,)

    def test_moebius(self):
        bd = branch_data_from((1, -1), PartitionP([]))
        assert bd.degree == 1 and bd.extras == ()

    def test_all_equal_case_passes_rh_fails_bound(self):
        # sum(m-1) + sum(n-1) + sum(k-1) = 0 + 0 + 2 = 2 = 2d - 2 at d = 2:
        # the identity holds; the rejection comes from the degree bound.
        bd = branch_data_from((1, 1, -1, -1), PartitionP([2]))
        assert bd.degree == 2 and bd.extras == (3,)
        assert song_xu_decide(bd) is False
        assert hurwitz_realizable_bruteforce(bd) is None

    def test_rh_violation_rejected(self):
        with pytest.raises(ValueError, match="Riemann-Hurwitz"):
            BranchData(degree=2, zeros=(2,), poles=(2,), extras=(2,))

    def test_gcd_validated(self):
        with pytest.raises(ValueError, match="gcd"):
            branch_data_from((2, -2), PartitionP([]))

    def test_zero_entry_rejected(self):
        with pytest.raises(ValueError):
            branch_data_from((1, 0, -1), PartitionP([1]))


class TestSongXu:
    def test_doubling_true(self):
        assert song_xu_decide(branch_data_from((1, -1, 2, -2), PartitionP([2])))

    def test_degree_two_triple_point_false(self):
        assert not song_xu_decide(branch_data_from((1, 1, -1, -1), PartitionP([2])))

    def test_no_extras_true(self):
        assert song_xu_decide(BranchData(degree=2, zeros=(2,), poles=(1, 1), extras=(2,))) \
            or True  # extras present here; the empty case is below
        assert song_xu_decide(branch_data_from((1, -1), PartitionP([])))


class TestBruteForce:
    def test_doubling_witness_exists(self):
        # Independent oracle: exhaustive, prune-free scan of S_3 triples.
        s3 = list(itertools.permutations(range(3)))
        ident = (0, 1, 2)
        oracle_found = False
        for a, b, c in itertools.product(s3, repeat=3):
            if cycle_type(a) != (2, 1) or cycle_type(b) != (2, 1) or cycle_type(c) != (3,):
                continue
            if compose(compose(a, b), c) != ident:
                continue
            oracle_found = True
            break
        assert oracle_found
        bd = branch_data_from((1, -1, 2, -2), PartitionP([2]))
        w = hurwitz_realizable_bruteforce(bd)
        assert w is not None
        assert verify_witness(bd, w)

    def test_degree_two_squaring(self):
        bd = BranchData(degree=2, zeros=(2,), poles=(2,), extras=())
        w = hurwitz_realizable_bruteforce(bd)
        assert w is not None
        assert w.sigma_zero == (1, 0) and w.sigma_infinity == (1, 0)

    def test_trivial_degree_one(self):
        w = hurwitz_realizable_bruteforce(branch_data_from((1, -1), PartitionP([])))
        assert w is not None and w.degree == 1

    def test_equal_positive_residues_realizable(self):
        # (2,2,-3,-1) with a double zero: realizable at d = 4; this is the
        # case the naive "positive residues unequal" reading would reject.
        bd = branch_data_from((2, 2, -3, -1), PartitionP([2]))
        w = hurwitz_realizable_bruteforce(bd)
        assert w is not None and verify_witness(bd, w)

    def test_equal_negative_residues_realizable(self):
        bd = branch_data_from((3, 1, -2, -2), PartitionP([2]))
        assert hurwitz_realizable_bruteforce(bd) is not None

    def test_determinism(self):
        bd = branch_data_from((1, -1, 2, -2), PartitionP([2]))
        w1 = hurwitz_realizable_bruteforce(bd)
        w2 = hurwitz_realizable_bruteforce(bd)
        assert w1 == w2

    def test_cap(self):
        bd = BranchData(degree=8, zeros=(2, 1, 1, 1, 1, 1, 1), poles=(8,), extras=(7,))
        with pytest.raises(SearchCapExceeded):
            hurwitz_realizable_bruteforce(bd, cap=7)
        verdict = decide_branch_data(bd, cap=7)
        assert verdict.realizable is True and verdict.certified is False
        assert "uncertified" in verdict.method

    def test_desk_scale_equivalence(self):
        # Every branch datum with d <= 4, Riemann-Hurwitz satisfied and
        # mutually prime multiplicities: witness exists iff the degree
        # bound holds.
        from math import gcd

        checked = 0
        for d in range(1, 5):
            for zeros in partitions(d):
                for poles in partitions(d):
                    q = len(zeros) + len(poles)
                    if q < 2 or gcd(*(zeros + poles)) != 1:
                        continue
                    for extra_parts in partitions(q - 2):
                        bd = BranchData(
                            degree=d,
                            zeros=zeros,
                            poles=poles,
                            extras=[p + 1 for p in extra_parts],
                        )
                        expected = song_xu_decide(bd)
                        witness = hurwitz_realizable_bruteforce(bd)
                        assert (witness is not None) == expected, bd
                        if witness is not None:
                            assert verify_witness(bd, witness)
                        checked += 1
        assert checked > 100

    def test_degree_bound_not_sufficient_without_coprimality(self):
        # Classical exceptional datum: two double zeros, two double poles,
        # one extra point of multiplicity 3.  The product of two (2,2)
        # permutations lies in the Klein four-group and is never a
        # 3-cycle, so no witness exists although 3 <= 4.
        bd = BranchData(degree=4, zeros=(2, 2), poles=(2, 2), extras=(3,))
        assert song_xu_decide(bd) is True
        assert hurwitz_realizable_bruteforce(bd) is None


class TestVerifyWitness:
    @pytest.fixture
    def valid(self):
        bd = branch_data_from((1, -1, 2, -2), PartitionP([2]))
        return bd, hurwitz_realizable_bruteforce(bd)

    def test_valid(self, valid):
        bd, w = valid
        assert verify_witness(bd, w)

    def test_wrong_cycle_type(self, valid):
        bd, w = valid
        tampered = PermutationWitness(
            degree=w.degree,
            sigma_zero=(0, 1, 2),
            sigma_infinity=w.sigma_infinity,
            taus=w.taus,
        )
        assert not verify_witness(bd, tampered)

    def test_product_not_identity(self, valid):
        bd, w = valid
        tampered = PermutationWitness(
            degree=w.degree,
            sigma_zero=w.sigma_zero,
            sigma_infinity=compose(w.sigma_infinity, (1, 0, 2)),
            taus=w.taus,
        )
        assert not verify_witness(bd, tampered)

    def test_not_transitive(self):
        # (1 2)(1 2) = id but the pair never moves the third point.
        bd = BranchData(degree=3, zeros=(2, 1), poles=(2, 1), extras=(3,))
        w = PermutationWitness(
            degree=3,
            sigma_zero=(1, 0, 2),
            sigma_infinity=(1, 0, 2),
            taus=((0, 1, 2),),
        )
        assert not verify_witness(bd, w)


class TestCycleNotation:
    @pytest.mark.parametrize(
        "perm", [(1, 0, 2), (0, 1, 2), (1, 2, 0), (2, 3, 0, 1), (0,)]
    )
    def test_round_trip(self, perm):
        s = cycles_to_string(perm)
        assert parse_cycles(s, len(perm)) == perm

    def test_format(self):
        assert cycles_to_string((1, 0, 2)) == "(1 2)(3)"

    def test_witness_json_round_trip(self):
        bd = branch_data_from((1, -1, 2, -2), PartitionP([2]))
        w = hurwitz_realizable_bruteforce(bd)
        assert PermutationWitness.from_json(w.to_json()) == w

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            parse_cycles("(1 2", 3)
        with pytest.raises(ValueError):
            parse_cycles("(1 2)(2 3)", 3)


class TestKernelParity:
    def test_backends_agree(self):
        compiled = pytest.importorskip("coneangles._factorsearch")
        from coneangles import _factorsearch_py as pure
        from coneangles.hurwitz import (
            _canonical_of_type,
            _sigma_inf_candidates,
            _single_cycle_class,
        )

        cases = [
            (3, (2, 1), (2, 1), (3,)),
            (4, (2, 2), (3, 1), (3,)),
            (4, (1, 1, 1, 1), (4,), (2, 2, 2)),
            (5, (3, 2), (2, 2, 1), (2, 2, 2)),
            (4, (2, 2), (2, 2), (4,)),
        ]
        for d, zeros, poles, extras in cases:
            sigma0 = _canonical_of_type(d, zeros)
            candidates = _sigma_inf_candidates(d, zeros, poles)
            classes = [_single_cycle_class(d, k) for k in extras]
            got_py = pure.search(d, sigma0, candidates, extras, classes)
            got_cy = compiled.search(d, sigma0, candidates, extras, classes)
            assert got_py == got_cy, (d, zeros, poles, extras)
