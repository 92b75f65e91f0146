"""
Fractional T_k-tilings as exact linear programs over the tiling hypergraph.

The matching LP (maximize total edge weight, every vertex loaded at most 1)
is solved with the rational simplex; its dual, a fractional vertex cover, is
read off the final tableau. Every certificate is re-checked independently
before it is returned.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, Optional, Sequence, Tuple
import logging
import time

import numpy as np

from config import settings
from models import EdgeWeight, ExtendabilityReport, FractionalCertificate, SweepMode, SweepReport
from tournaments.canonical import canonical_form
from tournaments.errors import CertificateError, HypothesisViolation, NotATournamentError, UnverifiedRangeError, VertexLimitError
from tournaments.graph import (
    OrientedGraph, VertexSet, delete_vertex, enumerate_Tk_copies, induced, mask_of, members,
    parse_upper_triangle, random_tournament, serialize_upper_triangle,
)
from tournaments.pool import parallel_map
from tournaments.simplex import RationalSimplex

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class TilingHypergraph:
    n: int
    k: int
    edges: Tuple[VertexSet, ...]

    def __post_init__(self):
        full = (1 << self.n) - 1
        for edge in self.edges:
            if edge.bit_count() != self.k or edge & ~full:
                raise ValueError(f"edge {list(members(edge))} is not a {self.k}-set of 0..{self.n - 1}")
        if list(self.edges) != sorted(set(self.edges)):
            raise ValueError("edges must be distinct and sorted")


def build_hypergraph(graph: OrientedGraph, k: int) -> TilingHypergraph:
    return TilingHypergraph(graph.n, k, tuple(enumerate_Tk_copies(graph, k)))


def link_hypergraph(hypergraph: TilingHypergraph, v: int) -> TilingHypergraph:
    if not 0 <= v < hypergraph.n:
        raise ValueError(f"vertex {v} outside 0..{hypergraph.n - 1}")
    bit = 1 << v
    edges = sorted(edge ^ bit for edge in hypergraph.edges if edge & bit)
    return TilingHypergraph(hypergraph.n, hypergraph.k - 1, tuple(edges))


# -- Certificates -----------------------------------------------------------------

def verify_certificate(hypergraph: TilingHypergraph, certificate: FractionalCertificate) -> bool:
    """Exact re-check of feasibility, equal objectives and complementary slackness."""
    weights: Dict[VertexSet, Fraction] = {}
    for item in certificate.primal:
        edge = mask_of(item.edge)
        if edge not in hypergraph.edges or item.weight < 0 or edge in weights:
            return False
        weights[edge] = item.weight
    dual = list(certificate.dual)
    if len(dual) != hypergraph.n or any(y < 0 for y in dual):
        return False

    load = [Fraction(0)] * hypergraph.n
    for edge, w in weights.items():
        for v in members(edge):
            load[v] += w
    if any(value > 1 for value in load):
        return False
    for edge in hypergraph.edges:
        if sum(dual[v] for v in members(edge)) < 1:
            return False

    total = sum(weights.values(), Fraction(0))
    if total != certificate.value or sum(dual, Fraction(0)) != certificate.value:
        return False
    for edge, w in weights.items():
        if w > 0 and sum(dual[v] for v in members(edge)) != 1:
            return False
    return all(load[v] == 1 for v in range(hypergraph.n) if dual[v] > 0)


@lru_cache(maxsize=4096)
def _solve(hypergraph: TilingHypergraph) -> FractionalCertificate:
    n, edges = hypergraph.n, hypergraph.edges
    if not edges:
        return FractionalCertificate(n=n, k=hypergraph.k, value=0, dual=[Fraction(0)] * n)

    matrix = [[edge >> v & 1 for edge in edges] for v in range(n)]
    solution = RationalSimplex(matrix, [1] * n, [1] * len(edges)).solve()
    certificate = FractionalCertificate(
        n=n,
        k=hypergraph.k,
        value=solution.value,
        primal=[
            EdgeWeight(edge=list(members(edge)), weight=w)
            for edge, w in zip(edges, solution.primal) if w
        ],
        dual=solution.dual,
        pivots=solution.pivots,
    )
    if not verify_certificate(hypergraph, certificate):
        raise CertificateError(f"LP certificate failed its re-check (n={n}, {len(edges)} edges)")
    return certificate


def nu_star(hypergraph: TilingHypergraph) -> Tuple[Fraction, FractionalCertificate]:
    certificate = _solve(hypergraph)
    return certificate.value, certificate


def tau_star(hypergraph: TilingHypergraph) -> Tuple[Fraction, FractionalCertificate]:
    """The fractional cover number, certified by the same optimal basis as ``nu_star``."""
    certificate = _solve(hypergraph)
    cover = sum(certificate.dual, Fraction(0))
    if not cover_from_weights(hypergraph, certificate.dual):
        raise CertificateError("recovered dual is not a fractional cover")
    return cover, certificate


def cover_from_weights(hypergraph: TilingHypergraph, weights: Sequence[Fraction]) -> bool:
    if len(weights) != hypergraph.n or any(y < 0 for y in weights):
        return False
    return all(sum((weights[v] for v in members(edge)), Fraction(0)) >= 1 for edge in hypergraph.edges)


def tau_integral(hypergraph: TilingHypergraph) -> int:
    """Minimum vertex cover by brute force."""
    if hypergraph.n > 10:
        raise VertexLimitError(f"integral covers are brute-forced for n <= 10, got {hypergraph.n}")
    for size in range(hypergraph.n + 1):
        for cover in combinations(range(hypergraph.n), size):
            mask = mask_of(cover)
            if all(edge & mask for edge in hypergraph.edges):
                return size
    return hypergraph.n


# -- Graph-level values ---------------------------------------------------------------

def nu_star_of(graph: OrientedGraph, k: int) -> Fraction:
    return nu_star(build_hypergraph(graph, k))[0]


def v_extendable_value(graph: OrientedGraph, k: int, v: int, hypergraph: Optional[TilingHypergraph] = None) -> Fraction:
    hypergraph = hypergraph or build_hypergraph(graph, k)
    return nu_star(link_hypergraph(hypergraph, v))[0]


def degree_case_extendable(tournament: OrientedGraph, v: int, k: int = 4) -> Fraction:
    """Lower bound on v's extendable value from T_{k-1} tilings inside N+(v) and N-(v)."""
    total = Fraction(0)
    for side in (tournament.out[v], tournament.inn[v]):
        if side.bit_count() >= k - 1:
            total += nu_star_of(induced(tournament, side), k - 1)
    return total


def extendability_implication_check(graph: OrientedGraph, k: int) -> ExtendabilityReport:
    """If every vertex has a v-extendable fractional tiling of size n/k, the tiling is perfect.

    When k does not divide n the target becomes floor(n/k) and the outcome is reported only.
    """
    n = graph.n
    divisible = n % k == 0
    target = Fraction(n, k) if divisible else Fraction(n // k)
    hypergraph = build_hypergraph(graph, k)
    values = [v_extendable_value(graph, k, v, hypergraph) for v in range(n)]
    min_vertex = min(range(n), key=lambda v: (values[v], v))
    value, _ = nu_star(hypergraph)
    premise = values[min_vertex] >= target
    conclusion = value == Fraction(n, k) if divisible else value >= target
    if divisible and premise and not conclusion:
        raise CertificateError(
            f"every link value is at least {target} but nu* = {value} for n={n}, k={k}"
        )
    return ExtendabilityReport(
        k=k,
        n=n,
        divisible=divisible,
        target=target,
        link_values=values,
        min_link_value=values[min_vertex],
        min_vertex=min_vertex,
        nu_star=value,
        premise_holds=premise,
        conclusion_holds=conclusion,
        asserted=divisible,
    )


def claim38_check(tournament: OrientedGraph, k: int) -> bool:
    """nu*_{k-1}(S) >= (s - (R(k-1) - k + 1)) / (k-1) for a tournament S with s >= R(k-1)."""
    from tournaments.generation import ramsey_number

    if k not in (3, 4):
        raise UnverifiedRangeError(f"checked for k in {{3, 4}} only, got {k}")
    if not tournament.is_tournament():
        raise NotATournamentError("the bound is stated for tournaments")
    ramsey_prev = ramsey_number(k - 1)
    s = tournament.n
    if s < ramsey_prev:
        raise HypothesisViolation(f"need at least R({k - 1}) = {ramsey_prev} vertices, got {s}")
    return nu_star_of(tournament, k - 1) >= Fraction(s - (ramsey_prev - k + 1), k - 1)


def average_vertex_deleted(tournament: OrientedGraph, k: int) -> FractionalCertificate:
    """Average the perfect fractional tilings of all T - v into one for T."""
    n = tournament.n
    total: Dict[VertexSet, Fraction] = {}
    for v in range(n):
        rest = delete_vertex(tournament, v)
        value, certificate = nu_star(build_hypergraph(rest, k))
        if value != Fraction(n - 1, k):
            raise HypothesisViolation(f"T - {v} has no perfect fractional tiling (nu* = {value})")
        labels = [u for u in range(n) if u != v]
        for item in certificate.primal:
            edge = mask_of(labels[u] for u in item.edge)
            total[edge] = total.get(edge, Fraction(0)) + item.weight
    hypergraph = build_hypergraph(tournament, k)
    averaged = FractionalCertificate(
        n=n,
        k=k,
        value=Fraction(n, k),
        primal=[
            EdgeWeight(edge=list(members(edge)), weight=w / (n - 1))
            for edge, w in sorted(total.items())
        ],
        # the uniform cover 1/k is optimal against any perfect fractional tiling
        dual=[Fraction(1, k)] * n,
    )
    if not verify_certificate(hypergraph, averaged):
        raise CertificateError("averaged weights are not a perfect fractional tiling")
    return averaged


# -- Sweeps -------------------------------------------------------------------------

def _nu_star_of_bits(item: Tuple[str, int, int]) -> Fraction:
    bits, n, k = item
    return nu_star_of(parse_upper_triangle(bits, n), k)


def min_nu_star_sweep(
    n: int,
    k: int,
    samples: Optional[int] = None,
    seed: Optional[int] = None,
    workers: int = 1,
) -> SweepReport:
    """Minimum nu*_k over all n-vertex classes, or over seeded random tournaments."""
    from tournaments.canonical import format_code
    from tournaments.generation import class_codes, ramsey_number

    if samples is not None and samples < 1:
        raise ValueError(f"a sampled sweep needs at least one sample, got {samples}")
    start = time.perf_counter()
    if samples is None:
        mode = SweepMode.EXHAUSTIVE
        bitstrings = [format_code(code, n) for code in class_codes(n, workers)]
    else:
        mode = SweepMode.SAMPLED
        rng = np.random.default_rng(seed)
        bitstrings = [serialize_upper_triangle(random_tournament(n, rng)) for _ in range(samples)]
    values = parallel_map(_nu_star_of_bits, [(bits, n, k) for bits in bitstrings], workers)

    minimum = min(values)
    witnesses = sorted({
        bits if mode is SweepMode.EXHAUSTIVE or n > settings.canonical_cap
        else canonical_form(parse_upper_triangle(bits, n))
        for bits, value in zip(bitstrings, values) if value == minimum
    })
    bound = Fraction(n - (ramsey_number(k, verify=False) - 2), 2)
    logger.info(f"min nu*_{k} over {len(values)} {mode.value} tournaments on {n} vertices: {minimum} (bound {bound})")
    return SweepReport(
        k=k,
        n=n,
        mode=mode,
        classes_examined=len(values),
        minimum=minimum,
        bound=bound,
        matches_bound=minimum == bound,
        witnesses=witnesses,
        seed=seed,
        wall_time=time.perf_counter() - start,
    )
