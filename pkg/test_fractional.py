"""
Tests for the exact LP layer: simplex, fractional tilings, covers and the link values built on them.
"""
from fractions import Fraction

import pytest

from models import SweepMode
from tournaments.constructions import ex35_construction, ex39_construction
from tournaments.errors import HypothesisViolation, UnverifiedRangeError, VertexLimitError
from tournaments.fractional import (
    TilingHypergraph, average_vertex_deleted, build_hypergraph, claim38_check, cover_from_weights,
    degree_case_extendable, extendability_implication_check, link_hypergraph, min_nu_star_sweep, nu_star,
    nu_star_of, tau_integral, tau_star, v_extendable_value, verify_certificate,
)
from tournaments.graph import enumerate_Tk_copies, random_tournament, rotational_tournament, transitive_tournament
from tournaments.simplex import RationalSimplex, UnboundedProblem
from tournaments.tiling import max_tiling


class TestRationalSimplex:
    def test_triangle_matching(self):
        # three pairwise intersecting edges on three vertices
        matrix = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
        solution = RationalSimplex(matrix, [1, 1, 1], [1, 1, 1]).solve()
        assert solution.value == Fraction(3, 2)
        assert solution.primal == [Fraction(1, 2)] * 3
        assert sum(solution.dual) == Fraction(3, 2)

    def test_degenerate_problem_terminates(self):
        matrix = [[1, 1], [1, 1], [1, 0]]
        solution = RationalSimplex(matrix, [1, 1, 0], [1, 1]).solve()
        assert solution.value == 1

    def test_unbounded(self):
        with pytest.raises(UnboundedProblem):
            RationalSimplex([[0, 1]], [1], [1, 0]).solve()

    def test_input_checks(self):
        with pytest.raises(ValueError):
            RationalSimplex([[1]], [-1], [1])
        with pytest.raises(ValueError):
            RationalSimplex([[1, 1]], [1], [1])


class TestHypergraph:
    def test_basics(self, c3, t4):
        assert build_hypergraph(c3, 3).edges == ()
        assert build_hypergraph(t4, 4).edges == (0b1111,)
        assert len(link_hypergraph(build_hypergraph(t4, 3), 0).edges) == 3

    def test_validation(self):
        with pytest.raises(ValueError):
            TilingHypergraph(3, 2, (0b111,))
        with pytest.raises(ValueError):
            TilingHypergraph(3, 2, (0b101, 0b011))

    def test_link(self, t4):
        link = link_hypergraph(build_hypergraph(t4, 4), 0)
        assert link.k == 3
        assert link.edges == (0b1110,)
        assert link_hypergraph(build_hypergraph(t4, 3), 3).edges == (0b0011, 0b0101, 0b0110)

    def test_link_matches_copy_census(self, rng):
        t = random_tournament(12, rng)
        hypergraph = build_hypergraph(t, 4)
        for v in range(12):
            through_v = [copy for copy in enumerate_Tk_copies(t, 4) if copy >> v & 1]
            assert len(link_hypergraph(hypergraph, v).edges) == len(through_v)


class TestFractionalTilings:
    def test_empty_hypergraph(self, c3):
        value, certificate = nu_star(build_hypergraph(c3, 3))
        assert value == 0
        assert certificate.dual == [0, 0, 0]

    def test_single_edge(self, t4):
        hypergraph = build_hypergraph(t4, 4)
        assert nu_star(hypergraph)[0] == 1
        assert tau_star(hypergraph)[0] == 1

    def test_transitive_tournament_is_perfect(self):
        assert nu_star_of(transitive_tournament(7), 3) == Fraction(7, 3)

    def test_strong_duality_on_random_tournaments(self, rng):
        for _ in range(30):
            k = int(rng.integers(3, 5))
            n = int(rng.integers(k, 10))
            graph = random_tournament(n, rng)
            hypergraph = build_hypergraph(graph, k)
            nu_value, certificate = nu_star(hypergraph)
            tau_value, _ = tau_star(hypergraph)
            assert nu_value == tau_value <= Fraction(n, k)
            assert verify_certificate(hypergraph, certificate)
            assert cover_from_weights(hypergraph, certificate.dual)
            assert max_tiling(graph, k)[0] <= nu_value
            if n <= 8:
                assert tau_integral(hypergraph) >= tau_value

    def test_tampered_certificate_fails(self, rng):
        hypergraph = build_hypergraph(random_tournament(8, rng), 3)
        _, certificate = nu_star(hypergraph)
        tampered = certificate.model_copy(update={"value": certificate.value + 1})
        assert not verify_certificate(hypergraph, tampered)
        shifted = certificate.model_copy(update={"dual": [Fraction(0)] * 8})
        assert not verify_certificate(hypergraph, shifted)

    def test_tau_integral_limit(self):
        with pytest.raises(VertexLimitError):
            tau_integral(build_hypergraph(transitive_tournament(11), 4))

    def test_blown_up_example_values(self, paley7):
        four = build_hypergraph(ex39_construction(4, 11, base=paley7), 4)
        assert nu_star(four)[0] == Fraction(5, 2)
        assert tau_star(four)[0] == Fraction(5, 2)
        three = build_hypergraph(ex39_construction(3, 5), 3)
        assert nu_star(three)[0] == Fraction(3, 2)

    def test_ex39_window(self, paley7):
        with pytest.raises(ValueError):
            ex39_construction(4, 13, base=paley7)

    def test_isolated_vertex_blocks_perfect_tiling(self):
        graph, u = ex35_construction(4)
        assert v_extendable_value(graph, 4, u) == 0
        assert nu_star_of(graph, 4) < Fraction(7, 4)


class TestExtendability:
    def test_transitive_t4(self, t4):
        report = extendability_implication_check(t4, 4)
        assert report.min_link_value == 1
        assert report.nu_star == 1
        assert report.premise_holds and report.conclusion_holds and report.asserted

    def test_non_divisible_order_is_reported_only(self):
        graph, _ = ex35_construction(4)
        report = extendability_implication_check(graph, 4)
        assert not report.divisible
        assert not report.asserted
        assert report.target == 1
        assert report.min_link_value == 0
        assert not report.premise_holds

    def test_twelve_vertex_tournaments_extend(self, rng):
        for _ in range(3):
            report = extendability_implication_check(random_tournament(12, rng), 4)
            assert report.min_link_value >= 3
            assert report.nu_star == 3

    def test_degree_case_is_a_lower_bound(self, rng):
        t = random_tournament(12, rng)
        hypergraph = build_hypergraph(t, 4)
        for v in range(12):
            assert degree_case_extendable(t, v) <= v_extendable_value(t, 4, v, hypergraph)

    def test_average_vertex_deleted(self, rng):
        t = random_tournament(13, rng)
        certificate = average_vertex_deleted(t, 4)
        assert certificate.value == Fraction(13, 4)
        assert verify_certificate(build_hypergraph(t, 4), certificate)

    def test_average_needs_perfect_deletions(self):
        with pytest.raises(HypothesisViolation):
            average_vertex_deleted(rotational_tournament(5), 3)


class TestClaim:
    def test_small_tournaments(self, t4, c3, rng):
        assert claim38_check(t4, 4)
        assert claim38_check(transitive_tournament(7), 4)
        for _ in range(20):
            assert claim38_check(random_tournament(int(rng.integers(4, 11)), rng), 4)
        assert claim38_check(c3, 3)

    def test_hypotheses(self, c3):
        with pytest.raises(HypothesisViolation):
            claim38_check(c3, 4)
        with pytest.raises(UnverifiedRangeError):
            claim38_check(transitive_tournament(20), 5)


class TestSweeps:
    @pytest.mark.parametrize("n,expected", [(4, Fraction(1)), (5, Fraction(3, 2)), (6, Fraction(2))])
    def test_triangle_minima(self, n, expected):
        report = min_nu_star_sweep(n, 3)
        assert report.mode is SweepMode.EXHAUSTIVE
        assert report.minimum == expected == report.bound
        assert report.matches_bound
        assert report.witnesses

    @pytest.mark.slow
    def test_t4_minimum_on_eight_vertices(self):
        report = min_nu_star_sweep(8, 4)
        assert report.classes_examined == 6880
        assert report.minimum == 1
        assert report.matches_bound

    def test_sampled_twelve_vertices(self):
        report = min_nu_star_sweep(12, 4, samples=5, seed=11)
        assert report.mode is SweepMode.SAMPLED
        assert report.classes_examined == 5
        assert report.minimum == 3
        assert report.seed == 11
        assert report.witnesses == min_nu_star_sweep(12, 4, samples=5, seed=11).witnesses

    def test_sampled_sweep_needs_samples(self):
        with pytest.raises(ValueError):
            min_nu_star_sweep(6, 3, samples=0, seed=1)
