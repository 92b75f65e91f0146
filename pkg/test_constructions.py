from fractions import Fraction

import pytest

from models import InnerPolicy
from tournaments.constructions import (
    bound_sheet, catalog_base, equitable_sizes, ex34_construction, ex34_lower_degree, ex35_construction,
    fact_deg_check, gnk_construction, linking_instance, turan_extremal, turan_number,
)
from tournaments.errors import DivisibilityError, HypothesisViolation, UnverifiedRangeError
from tournaments.graph import (
    contains_Tk, degree_report, enumerate_Tk_copies, mask_of, random_tournament, rotational_tournament,
    transitive_tournament,
)
from tournaments.tiling import has_perfect_tiling


def test_equitable_sizes():
    assert equitable_sizes(14, 7) == [2] * 7
    assert equitable_sizes(9, 6) == [2, 2, 2, 1, 1, 1]
    assert equitable_sizes(7, 6) == [2, 1, 1, 1, 1, 1]


class TestBases:
    def test_triangle_base(self):
        base = catalog_base(3)
        assert base.n == 3
        assert not contains_Tk(base, 3)

    @pytest.mark.slow
    def test_t4_free_base_from_catalog(self):
        base = catalog_base(4, regular=True)
        assert base.n == 7
        assert not contains_Tk(base, 4)

    def test_supplied_bases(self, paley7):
        assert catalog_base(4, paley7) is paley7
        with pytest.raises(HypothesisViolation):
            catalog_base(4, transitive_tournament(7))
        with pytest.raises(UnverifiedRangeError):
            catalog_base(5)
        with pytest.raises(UnverifiedRangeError):
            catalog_base(5, paley7)
        assert catalog_base(5, paley7, allow_unverified_base=True) is paley7


class TestEx34:
    @pytest.mark.parametrize("n,delta", [(12, 10), (16, 14), (20, 18)])
    def test_min_degree(self, paley7, n, delta):
        gamma = Fraction(1, 12)
        graph = ex34_construction(4, n, gamma, base=paley7)
        assert graph.n == n
        assert degree_report(graph).min_total == delta
        assert ex34_lower_degree(4, n, gamma) == delta

    def test_every_copy_meets_x_twice(self, paley7):
        graph = ex34_construction(4, 14, Fraction(1, 7), base=paley7)
        x_size = 6
        x = mask_of(range(x_size))
        assert all((copy & x).bit_count() >= 2 for copy in enumerate_Tk_copies(graph, 4))

    def test_inner_policies(self, paley7):
        transitive = ex34_construction(4, 12, Fraction(1, 12), base=paley7)
        independent = ex34_construction(4, 12, Fraction(1, 12), InnerPolicy.INDEPENDENT, base=paley7)
        # X has five vertices
        assert transitive.edge_count() - independent.edge_count() == 10
        seeded = ex34_construction(4, 12, Fraction(1, 12), InnerPolicy.SEEDED_RANDOM, seed=3, base=paley7)
        assert seeded == ex34_construction(4, 12, Fraction(1, 12), InnerPolicy.SEEDED_RANDOM, seed=3, base=paley7)

    def test_parameter_checks(self, paley7):
        with pytest.raises(ValueError):
            ex34_construction(4, 12, Fraction(0), base=paley7)
        with pytest.raises(ValueError):
            ex34_construction(4, 7, Fraction(1, 12), base=paley7)
        with pytest.raises(ValueError):
            ex34_construction(4, 8, Fraction(99, 100), base=paley7)

    def test_triangle_version(self):
        graph = ex34_construction(3, 9, Fraction(1, 9))
        x = mask_of(range(5))
        assert all((copy & x).bit_count() >= 2 for copy in enumerate_Tk_copies(graph, 3))


class TestEx35:
    def test_structure(self):
        graph, u = ex35_construction(4)
        assert graph.n == 7
        assert u == 0
        assert graph.out[0] == 0b0001110
        assert not any(copy & 1 for copy in enumerate_Tk_copies(graph, 4))

    def test_supplied_base(self, paley7):
        graph, u = ex35_construction(5, base=paley7, allow_unverified_base=True)
        assert graph.n == 15
        assert not any(copy >> u & 1 for copy in enumerate_Tk_copies(graph, 5))

    def test_range(self):
        with pytest.raises(UnverifiedRangeError):
            ex35_construction(5)


class TestTuran:
    @pytest.mark.parametrize("n,parts,edges", [(14, 7, 84), (6, 3, 12), (7, 7, 21)])
    def test_numbers(self, n, parts, edges):
        assert turan_number(n, parts) == edges

    def test_extremal_graphs(self, paley7):
        graph = turan_extremal(4, 14, base=paley7)
        assert graph.edge_count() == 84
        assert not contains_Tk(graph, 4)
        assert turan_extremal(3, 6).edge_count() == 12

    def test_supplied_base_for_k5(self, paley7):
        assert turan_extremal(5, 10, base=paley7, allow_unverified_base=True).edge_count() == 42

    def test_too_small(self, paley7):
        with pytest.raises(ValueError):
            turan_extremal(4, 6, base=paley7)


class TestGnk:
    def test_orientation_and_parts(self, paley7):
        graph = gnk_construction(24, 4, base=paley7)
        assert graph.n == 24
        a = 24 // 4 - 1
        assert not contains_Tk(graph, 4, within=mask_of(range(a, 24)))
        for i in range(a):
            for j in range(a, 24):
                assert graph.adjacent(i, j)

    def test_small_a(self, paley7):
        # n/k - 1 = 1 puts one vertex in A
        graph = gnk_construction(8, 4, base=paley7)
        assert degree_report(graph).degrees[0] == 7

    def test_triangle_version_has_no_perfect_tiling(self):
        graph = gnk_construction(12, 3)
        a = mask_of(range(3))
        assert all(copy & a for copy in enumerate_Tk_copies(graph, 3))
        assert not has_perfect_tiling(graph, 3).tileable

    def test_every_copy_meets_a(self, paley7):
        graph = gnk_construction(16, 4, base=paley7)
        a = mask_of(range(16 // 4 - 1))
        copies = enumerate_Tk_copies(graph, 4)
        assert copies
        assert all(copy & a for copy in copies)
        assert not has_perfect_tiling(graph, 4).tileable

    def test_divisibility(self, paley7):
        with pytest.raises(DivisibilityError):
            gnk_construction(10, 4, base=paley7)
        with pytest.raises(ValueError):
            gnk_construction(4, 4, base=paley7)


class TestFact:
    def test_transitive_tournament(self):
        check = fact_deg_check(transitive_tournament(10), mask_of(range(10)), 10, 10, Fraction(0))
        assert check.hypotheses_hold
        assert check.conclusion_holds
        assert check.ok

    def test_random_instances_never_violate(self, rng):
        for _ in range(40):
            t = random_tournament(12, rng)
            subset = mask_of(v for v in range(12) if rng.random() < 0.8)
            r = int(rng.integers(2, 6))
            s = int(rng.integers(1, r + 1))
            assert fact_deg_check(t, subset, r, s, Fraction(0)).ok

    def test_argument_checks(self):
        t = rotational_tournament(5)
        with pytest.raises(ValueError):
            fact_deg_check(t, 0b11, 2, 3, Fraction(0))
        with pytest.raises(ValueError):
            fact_deg_check(t, 0b11, 2, 1, Fraction(1, 2))


def test_linking_instance_shape(rng):
    graph, x, y, subset = linking_instance(rng, allow_xy_edge=False)
    assert graph.n == 13
    assert (x, y, subset) == (11, 12, (1 << 11) - 1)
    assert not graph.adjacent(x, y)
    assert all(graph.adjacent(x, t) and graph.adjacent(y, t) for t in range(11))


class TestBoundSheet:
    def test_k4(self):
        sheet = bound_sheet(4)
        assert (sheet.trs_lower, sheet.trs_upper) == (12, 20)
        assert sheet.thm12_threshold == Fraction(19, 20)
        assert sheet.ak1_upper == Fraction(13, 14)
        assert sheet.yuster_upper == Fraction(25, 26)
        assert sheet.dgo_lower == Fraction(11, 12)
        assert sheet.frac_gap_lower == Fraction(10, 11)
        assert sheet.absorbing_pigeonhole == 13
        assert sheet.dg_upper == Fraction(15, 16)
        assert sheet.tr_upper_caro is None
        assert sheet.ramsey_recursion_holds
        assert sheet.semidegree_threshold is None
        assert bound_sheet(4, reg=7).semidegree_threshold == Fraction(25, 56)

    def test_k3(self):
        sheet = bound_sheet(3)
        assert (sheet.trs_lower, sheet.trs_upper) == (6, 6)
        assert sheet.tr_upper_caro == 34
        assert sheet.thm12_threshold == Fraction(5, 6)

    def test_k5_and_beyond(self):
        sheet = bound_sheet(5)
        assert (sheet.trs_lower, sheet.trs_upper) == (20, 60)
        assert sheet.thm12_threshold == Fraction(59, 60)
        assert bound_sheet(6).thm12_threshold == Fraction(137, 138)
        with pytest.raises(UnverifiedRangeError):
            bound_sheet(8)
        assert bound_sheet(8, upper_bound_mode=True).uses_upper_bounds
        with pytest.raises(ValueError):
            bound_sheet(2)

    def test_thresholds_increase(self):
        values = [bound_sheet(k).thm12_threshold for k in (3, 4, 5, 6)]
        assert values == sorted(values)
