import itertools
from fractions import Fraction

import pytest

from stableperm import (
    CapExceededError,
    Permutation,
    Rng,
    enumerate_profiles,
    enumerate_stable,
    exact_rank_distribution,
    generate_instance,
    invert,
    run_proposals,
    stable_permutations,
    verify_structure,
)


class TestEnumerateStable:
    def test_cyclic_instance(self, cyclic3):
        res = enumerate_stable(cyclic3)
        assert set(res.all_stable) == {Permutation([2, 3, 1]),
                                       Permutation([3, 1, 2])}
        assert res.pi0_like == (Permutation([2, 3, 1]),)
        assert res.fixed_pairs == frozenset()

    def test_pariah_instance(self, pariah3):
        res = enumerate_stable(pariah3)
        assert Permutation([2, 1, 3]) in res.all_stable
        assert res.fixed_pairs == frozenset({(1, 2)})

    def test_n2(self, mutual2):
        res = enumerate_stable(mutual2)
        assert res.all_stable == (Permutation([2, 1]),)
        assert res.pi0_like == (Permutation([2, 1]),)
        assert res.fixed_pairs == frozenset({(1, 2)})

    def test_lexicographic_order(self, cyclic3):
        succs = [p.to_tuple() for p in stable_permutations(cyclic3)]
        assert succs == sorted(succs)

    def test_contains_pi0_and_inverse(self):
        master = Rng(1234)
        for trial in range(20):
            prefs = generate_instance(6, master.stream(trial))
            res = enumerate_stable(prefs)
            pi0 = run_proposals(prefs).pi0
            assert pi0 in res.all_stable
            assert invert(pi0) in res.all_stable
            assert set(res.pi0_like) <= set(res.all_stable)

    def test_pi0_like_count_dichotomy(self):
        # the canonical permutation is itself pi0-like exactly when it has no
        # fixed point; with a fixed point, every stable permutation shares it
        # and no fixed-point-free stable permutation can exist
        master = Rng(4321)
        seen_fixed = seen_free = False
        for trial in range(60):
            prefs = generate_instance(6, master.stream(trial))
            res = enumerate_stable(prefs)
            pi0 = run_proposals(prefs).pi0
            if pi0.is_fixed_point_free():
                seen_free = True
                assert pi0 in res.pi0_like
            else:
                seen_fixed = True
                assert res.pi0_like == ()
        assert seen_fixed and seen_free

    def test_cap(self):
        prefs = generate_instance(10, Rng(0))
        with pytest.raises(CapExceededError):
            enumerate_stable(prefs)


class TestVerifyStructure:
    def test_fixtures(self, cyclic3, pariah3, mutual4, mutual2):
        for prefs in (cyclic3, pariah3, mutual4, mutual2):
            report = verify_structure(prefs)
            assert report.all_passed
            assert report.pi0 == run_proposals(prefs).pi0
            assert report.stable_count == len(enumerate_stable(prefs).all_stable)

    def test_clause_fields(self, cyclic3):
        report = verify_structure(cyclic3)
        for clause in (report.successor_optimal, report.predecessor_pessimal,
                       report.fixed_pairs_universal, report.fixed_point_shared):
            assert clause.passed and clause.witness is None

    @pytest.mark.parametrize("n", [4, 5, 6, 7])
    def test_random_instances(self, n):
        master = Rng(5150)
        for trial in range(10):
            prefs = generate_instance(n, master.stream(n, trial))
            assert verify_structure(prefs).all_passed


class TestEnumerateProfiles:
    def test_three_cycle_probability(self):
        res = enumerate_profiles(3, Permutation([2, 3, 1]))
        assert (res.numerator, res.denominator) == (2, 8)
        assert str(res) == "2/8"
        assert res.fraction == Fraction(1, 4)

    def test_expected_stable_count_n3(self):
        total = sum(
            enumerate_profiles(3, Permutation(list(s))).fraction
            for s in itertools.permutations([1, 2, 3])
        )
        assert total == Fraction(5, 4)

    def test_fixed_point_probability_n3(self):
        res = enumerate_profiles(
            3, lambda prefs: run_proposals(prefs).pariah is not None)
        assert res.fraction == Fraction(6, 8)

    def test_n2(self):
        assert enumerate_profiles(2, Permutation([2, 1])).fraction == 1

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            enumerate_profiles(3, Permutation([2, 1]))

    def test_cap(self):
        with pytest.raises(CapExceededError):
            enumerate_profiles(5, Permutation([2, 3, 4, 5, 1]))


class TestExactRankDistribution:
    def test_three_cycle(self):
        dist = exact_rank_distribution(3, Permutation([2, 3, 1]))
        assert dist == {(3, 6): Fraction(1, 8), (6, 3): Fraction(1, 8)}

    def test_n2(self):
        assert exact_rank_distribution(2, Permutation([2, 1])) == {
            (2, 2): Fraction(1)}

    @pytest.mark.parametrize("succ,total", [
        ([2, 1, 4, 3], Fraction(466, 1296)),
        ([2, 3, 4, 1], Fraction(72, 1296)),
    ])
    def test_mass_matches_stability_probability(self, succ, total):
        target = Permutation(succ)
        dist = exact_rank_distribution(4, target)
        assert sum(dist.values()) == total
        assert sum(dist.values()) == enumerate_profiles(4, target).fraction

    def test_symmetry_under_inversion(self):
        target = Permutation([2, 3, 1])
        dist = exact_rank_distribution(3, target)
        mirrored = exact_rank_distribution(3, invert(target))
        assert mirrored == {(l, k): v for (k, l), v in dist.items()}

    def test_fixed_point_target_rejected(self):
        with pytest.raises(ValueError):
            exact_rank_distribution(3, Permutation([2, 1, 3]))

    def test_cap(self):
        with pytest.raises(CapExceededError):
            exact_rank_distribution(5, Permutation([2, 3, 4, 5, 1]))
