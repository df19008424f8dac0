import math
import warnings
from fractions import Fraction

import pytest

from oracles import (
    brute_double_coset_count,
    brute_matrix_count,
    generated_symmetric,
    partitions,
    vector_of_type,
)
from symsage.combinatorics import (
    contingency_count,
    count_to_float,
    double_coset_count,
    orbit_type,
    pad_exponent,
    partial_injection_count,
    predict_sizes,
    stabilization_threshold,
)
from symsage.errors import CountOverflowError
from symsage.groups import PermutationGroup

PARTIAL_INJECTION_VALUES = (1, 2, 7, 34, 209, 1546)


class TestOrbitType:
    def test_splits_zero_multiplicity(self):
        info = orbit_type((3, 0, 0, 3, 1))
        assert info.full_type == (2, 2, 1)
        assert info.reduced_type == (2, 1)
        assert info.weight == 3
        assert info.length == 3

    def test_all_zero(self):
        info = orbit_type((0, 0))
        assert info.full_type == (2,)
        assert info.reduced_type == ()
        assert info.weight == 0


class TestContingencyCount:
    def test_edge_cases(self):
        assert contingency_count((), ()) == 1
        assert contingency_count((0,), (0,)) == 1
        assert contingency_count((3,), (3,)) == 1
        assert contingency_count((2, 1), (3,)) == 1
        assert contingency_count((2,), (1,)) == 0  # margins disagree
        with pytest.raises(ValueError):
            contingency_count((-1,), (-1,))

    def test_known_small_values(self):
        # margins (1,1) x (1,1): permutation matrices of order 2
        assert contingency_count((1, 1), (1, 1)) == 2
        assert contingency_count((1, 1, 1), (1, 1, 1)) == 6
        assert contingency_count((2, 1), (2, 1)) == 2
        assert contingency_count((2, 2), (2, 2)) == 3

    def test_symmetry_in_margins(self):
        pairs = [((3, 2, 1), (2, 2, 2)), ((4, 1), (2, 2, 1)), ((3, 3), (2, 2, 1, 1))]
        for lam, mu in pairs:
            assert contingency_count(lam, mu) == contingency_count(mu, lam)

    def test_matches_brute_force_small(self):
        for n in range(1, 5):
            for lam in partitions(n):
                for mu in partitions(n):
                    assert contingency_count(lam, mu) == brute_matrix_count(lam, mu), (
                        lam,
                        mu,
                    )

    def test_margin_order_irrelevant(self):
        assert contingency_count((1, 3, 2), (2, 2, 2)) == contingency_count(
            (3, 2, 1), (2, 2, 2)
        )


class TestPartialInjections:
    def test_frozen_values(self):
        for w, expected in enumerate(PARTIAL_INJECTION_VALUES):
            assert partial_injection_count(w) == expected

    def test_recurrence(self):
        # u(w) = 2w u(w-1) - (w-1)^2 u(w-2) for partial injections
        for w in range(2, 12):
            assert partial_injection_count(w) == 2 * w * partial_injection_count(
                w - 1
            ) - (w - 1) ** 2 * partial_injection_count(w - 2)

    def test_equals_contingency_with_hook_margins(self):
        for w in range(4):
            for n in range(2 * w, 2 * w + 3):
                margins = (n - w,) + (1,) * w
                assert partial_injection_count(w) == contingency_count(margins, margins)


class TestDoubleCosetCount:
    def test_young_matches_direct_enumeration(self):
        for n in range(2, 5):
            g = PermutationGroup.symmetric(n)
            types = [vector_of_type(lam) for lam in partitions(n)]
            for a in types:
                for b in types:
                    assert double_coset_count(g, a, b) == brute_double_coset_count(
                        g, a, b
                    )

    def test_young_blocks_multiply(self):
        g = PermutationGroup.young([(0, 1, 2), (3, 4)], 5)
        a = (1, 1, 2, 5, 5)
        b = (3, 3, 3, 1, 2)
        per_block = contingency_count((2, 1), (3,)) * contingency_count((2,), (1, 1))
        assert double_coset_count(g, a, b) == per_block
        assert double_coset_count(g, a, b) == brute_double_coset_count(g, a, b)

    def test_generated_burnside_matches_young(self):
        for n in range(2, 5):
            young = PermutationGroup.symmetric(n)
            gen = generated_symmetric(n)
            types = [vector_of_type(lam) for lam in partitions(n)]
            for a in types:
                for b in types:
                    assert double_coset_count(gen, a, b) == double_coset_count(
                        young, a, b
                    )

    def test_generated_non_symmetric_group(self):
        from symsage.groups import Permutation

        cyc = PermutationGroup.from_generators([Permutation([1, 2, 3, 0])], 4)
        a = (1, 1, 0, 0)
        b = (1, 0, 1, 0)
        assert double_coset_count(cyc, a, b) == brute_double_coset_count(cyc, a, b)


class TestPredictSizes:
    def test_standard_formula(self):
        g = PermutationGroup.symmetric(3)
        a_classes = g.orbit_representatives([(2, 0, 0), (0, 2, 0), (0, 0, 2)])
        b_classes = g.orbit_representatives([(1, 1, 0), (1, 0, 1), (0, 1, 1)])
        pred = predict_sizes(a_classes, b_classes, g, mode="standard")
        assert pred.variables == 2 * 3 * 3
        assert pred.equalities == 3 * 3
        assert pred.inequalities == 3 + 3
        assert pred.constraints == 15
        assert pred.as_tuple() == (18, 15)

    def test_bound_variable_adds_one(self):
        g = PermutationGroup.symmetric(2)
        a = g.orbit_representatives([(1, 0), (0, 1)])
        b = g.orbit_representatives([(1, 1)])
        plain = predict_sizes(a, b, g, mode="reduced")
        with_bound = predict_sizes(a, b, g, mode="reduced", with_bound_variable=True)
        assert with_bound.variables == plain.variables + 1
        assert with_bound.equalities == plain.equalities
        assert with_bound.includes_bound_variable

    def test_trivial_group_reduced_equals_standard(self):
        g = PermutationGroup.trivial(3)
        vecs_a = [(2, 0, 0), (0, 0, 2), (1, 1, 1)]
        vecs_b = [(1, 1, 0), (0, 1, 1)]
        a = g.orbit_representatives(vecs_a)
        b = g.orbit_representatives(vecs_b)
        red = predict_sizes(a, b, g, mode="reduced")
        std = predict_sizes(a, b, g, mode="standard")
        assert red.variables == std.variables
        assert red.equalities == std.equalities
        assert red.inequalities == std.inequalities

    def test_mode_validation(self):
        g = PermutationGroup.trivial(1)
        with pytest.raises(ValueError):
            predict_sizes([], [], g, mode="fast")


class TestHelpers:
    def test_stabilization_threshold(self):
        assert stabilization_threshold([(1, 0, 0), (2, 3, 0)]) == 4
        assert stabilization_threshold([(0, 0)]) == 0

    def test_pad_exponent(self):
        assert pad_exponent((1, 2), 4) == (1, 2, 0, 0)
        assert pad_exponent((1,), 1) == (1,)
        with pytest.raises(ValueError):
            pad_exponent((1, 2, 3), 2)

    def test_count_to_float_exact(self):
        assert count_to_float(7) == 7.0
        assert count_to_float(Fraction(1, 4)) == 0.25
        assert count_to_float(2**53) == float(2**53)

    def test_count_to_float_overflow(self):
        big = 2**53 + 1
        with pytest.raises(CountOverflowError):
            count_to_float(big)
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            count_to_float(big, force=True)
        assert any(issubclass(w.category, RuntimeWarning) for w in caught)

    def test_factorial_orbit_count_sanity(self):
        # the all-distinct vector in the symmetric group has full orbit
        g = PermutationGroup.symmetric(5)
        assert g.orbit_size(tuple(range(1, 6))) == math.factorial(5)
