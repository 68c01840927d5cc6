import itertools
import math

import numpy as np
import pytest

from stableperm import (
    CapExceededError,
    MAX_POLYNOMIAL_PAIRS,
    Permutation,
    Rng,
    conditional_stable_probability,
    enumerate_profiles,
    exact_rank_distribution,
    generate_instance,
    invert,
    joint_rank_polynomial,
    mc_rank_distribution,
    mc_stable_probability,
    pair_sets,
    run_proposals,
)

THREE_CYCLE = Permutation([2, 3, 1])


def _random_fpf(n, gen):
    while True:
        succ = gen.permutation(n) + 1
        p = Permutation(succ.tolist())
        if p.is_fixed_point_free():
            return p


class TestPairSets:
    def test_two_pair_matching(self):
        ps = pair_sets(Permutation([2, 1, 4, 3]))
        assert ps.e1_star == ((1, 3), (1, 4), (2, 3), (2, 4))
        assert ps.e1_size == 8
        assert ps.e2 == ()
        assert ps.product_size == 4

    def test_three_cycle(self):
        ps = pair_sets(THREE_CYCLE)
        assert ps.e1_star == ()
        assert ps.e2 == ((1, 2), (2, 3), (3, 1))
        assert ps.product_size == 3

    def test_single_pair(self):
        ps = pair_sets(Permutation([2, 1]))
        assert ps.e1_star == () and ps.e2 == ()
        assert ps.product_size == 0

    @pytest.mark.parametrize("n", [4, 6, 8])
    def test_dedup_involution(self, n):
        # (i, j) -> (p(j), p(i)) is an involution on the full two-cycle pair
        # set E1 that swaps the kept half with the dropped half
        gen = Rng(n).generator()
        for _ in range(10):
            p = _random_fpf(n, gen)
            ps = pair_sets(p)
            c2 = p.two_cycle_agents()
            e1 = {
                (i, j)
                for i in c2 for j in c2
                if i != j and i != p.succ(j)
            }
            kept = set(ps.e1_star)
            assert kept <= e1
            assert len(kept) * 2 == len(e1)
            image = {(p.succ(j), p.succ(i)) for (i, j) in kept}
            assert image == e1 - kept

    def test_fixed_point_rejected(self):
        with pytest.raises(ValueError):
            pair_sets(Permutation([2, 1, 3]))


class TestConditionalProbability:
    def test_uniform_forward_point(self):
        assert conditional_stable_probability(
            THREE_CYCLE, [0.5] * 3, [0.8] * 3) == 1.0

    def test_mixed_orientation_zero(self):
        assert conditional_stable_probability(
            THREE_CYCLE, [0.5] * 3, [0.2, 0.8, 0.2]) == 0.0

    def test_tie_is_inadmissible(self):
        assert conditional_stable_probability(
            THREE_CYCLE, [0.5] * 3, [0.5] * 3) == 0.0

    def test_empty_product(self):
        assert conditional_stable_probability(
            Permutation([2, 1]), [0.3, 0.9], []) == 1.0

    def test_forward_restriction(self):
        backward = conditional_stable_probability(
            THREE_CYCLE, [0.8] * 3, [0.5] * 3)
        assert backward == 1.0
        assert conditional_stable_probability(
            THREE_CYCLE, [0.8] * 3, [0.5] * 3, orientation="forward") == 0.0
        assert conditional_stable_probability(
            THREE_CYCLE, [0.5] * 3, [0.8] * 3, orientation="forward") == 1.0

    def test_validation(self):
        with pytest.raises(ValueError):
            conditional_stable_probability(THREE_CYCLE, [0.5] * 2, [0.8] * 3)
        with pytest.raises(ValueError):
            conditional_stable_probability(THREE_CYCLE, [0.5] * 3, [0.8] * 2)
        with pytest.raises(ValueError):
            conditional_stable_probability(THREE_CYCLE, [0.5, 0.5, 1.5], [0.8] * 3)
        with pytest.raises(ValueError):
            conditional_stable_probability(THREE_CYCLE, [0.5] * 3, [0.8] * 3,
                                           orientation="sideways")
        with pytest.raises(ValueError):
            conditional_stable_probability(Permutation([2, 1, 3]), [0.5] * 3, [])

    def test_bounded(self):
        gen = Rng(2718).generator()
        for n in (4, 5, 6):
            for _ in range(20):
                p = _random_fpf(n, gen)
                n_y = sum(len(c) for c in p.cycles() if len(c) >= 3)
                v = conditional_stable_probability(
                    p, gen.random(n).tolist(), gen.random(n_y).tolist())
                assert 0.0 <= v <= 1.0


class TestJointPolynomial:
    def test_single_pair(self):
        poly = joint_rank_polynomial(Permutation([2, 1]), [0.3, 0.9], [])
        assert poly.coeffs.shape == (1, 1)
        assert poly.coefficient(0, 0) == 1.0

    def test_forward_point_is_eta_cubed(self):
        poly = joint_rank_polynomial(THREE_CYCLE, [0.5] * 3, [0.8] * 3)
        assert poly.coeffs.shape == (4, 4)
        assert poly.coefficient(0, 3) == 1.0
        assert poly.total() == 1.0
        assert np.count_nonzero(poly.coeffs) == 1

    def test_shape_matches_pair_count(self):
        gen = Rng(31415).generator()
        for n in (4, 6, 7):
            p = _random_fpf(n, gen)
            P = pair_sets(p).product_size
            n_y = sum(len(c) for c in p.cycles() if len(c) >= 3)
            poly = joint_rank_polynomial(
                p, gen.random(n).tolist(), gen.random(n_y).tolist())
            assert poly.coeffs.shape == (P + 1, P + 1)

    def test_collapse_to_probability(self):
        # summing the polynomial over all degrees must reproduce the plain
        # conditional stability probability
        gen = Rng(999).generator()
        for n in (3, 4, 5, 6, 8):
            for _ in range(10):
                p = _random_fpf(n, gen)
                n_y = sum(len(c) for c in p.cycles() if len(c) >= 3)
                x = gen.random(n).tolist()
                y = gen.random(n_y).tolist()
                poly = joint_rank_polynomial(p, x, y)
                direct = conditional_stable_probability(p, x, y)
                assert poly.total() == pytest.approx(direct, abs=1e-12)
                assert (poly.coeffs >= -1e-15).all()

    def test_cap(self):
        big = Permutation([*range(2, 11), 1])  # 10-cycle: 80 pairs
        assert pair_sets(big).product_size > MAX_POLYNOMIAL_PAIRS
        with pytest.raises(CapExceededError):
            joint_rank_polynomial(big, [0.5] * 10, [0.5] * 10)
        with pytest.raises(CapExceededError):
            mc_rank_distribution(big, 1000, Rng(0))


class TestMcStableProbability:
    def test_degenerate_pair(self):
        est = mc_stable_probability(Permutation([2, 1]), 1000, Rng(7))
        assert est.mean == 1.0 and est.std_error == 0.0
        assert est.samples == 1000

    @pytest.mark.parametrize("succ,n,exact", [
        ([2, 3, 1], 3, 2 / 8),
        ([2, 1, 4, 3], 4, 466 / 1296),
        ([2, 3, 4, 1], 4, 72 / 1296),
    ])
    def test_matches_exact(self, succ, n, exact):
        est = mc_stable_probability(Permutation(succ), 100_000, Rng(42))
        assert abs(est.mean - exact) <= 4 * est.std_error
        assert est.std_error < 0.01

    def test_forward_orientation_halves_cycle_mass(self):
        both = mc_stable_probability(THREE_CYCLE, 100_000, Rng(5))
        fwd = mc_stable_probability(THREE_CYCLE, 100_000, Rng(5),
                                    orientation="forward")
        tol = 4 * math.hypot(both.std_error, fwd.std_error)
        assert abs(fwd.mean - both.mean / 2) <= tol

    def test_inversion_symmetry(self):
        p = Permutation([2, 3, 1, 5, 4])
        a = mc_stable_probability(p, 80_000, Rng(11))
        b = mc_stable_probability(invert(p), 80_000, Rng(12))
        assert abs(a.mean - b.mean) <= 4 * math.hypot(a.std_error, b.std_error)

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            mc_stable_probability(THREE_CYCLE, 999, Rng(0))

    def test_reproducible(self):
        a = mc_stable_probability(THREE_CYCLE, 2000, Rng(123))
        b = mc_stable_probability(THREE_CYCLE, 2000, Rng(123))
        assert a == b


class TestMcRankDistribution:
    def test_three_cycle_cells(self):
        est = mc_rank_distribution(THREE_CYCLE, 100_000, Rng(77))
        exact = exact_rank_distribution(3, THREE_CYCLE)
        for (k, l), frac in exact.items():
            cell = est.cell(k, l)
            assert abs(cell.mean - float(frac)) <= 4 * cell.std_error
        empty = est.cell(4, 4)
        assert abs(empty.mean) <= max(4 * empty.std_error, 1e-12)

    def test_cell_range_validation(self):
        est = mc_rank_distribution(THREE_CYCLE, 1000, Rng(1))
        est.cell(3, 3)
        est.cell(6, 6)
        with pytest.raises(ValueError):
            est.cell(2, 3)
        with pytest.raises(ValueError):
            est.cell(3, 7)

    def test_mass_matches_probability_estimate(self):
        p = Permutation([2, 1, 4, 3])
        est = mc_rank_distribution(p, 50_000, Rng(88))
        prob = mc_stable_probability(p, 50_000, Rng(88))
        assert est.means.sum() == pytest.approx(prob.mean, abs=1e-12)

    def test_sample_floor(self):
        with pytest.raises(ValueError):
            mc_rank_distribution(THREE_CYCLE, 10, Rng(0))


class TestAgainstProfileOracle:
    def test_rank_cells_match_exact_n4(self):
        target = Permutation([2, 1, 4, 3])
        est = mc_rank_distribution(target, 150_000, Rng(2024))
        exact = exact_rank_distribution(4, target)
        for (k, l), frac in exact.items():
            cell = est.cell(k, l)
            assert abs(cell.mean - float(frac)) <= 4.5 * cell.std_error

    def test_probability_matches_exact_n2(self):
        exact = enumerate_profiles(2, Permutation([2, 1])).fraction
        est = mc_stable_probability(Permutation([2, 1]), 1000, Rng(3))
        assert est.mean == float(exact) == 1.0
