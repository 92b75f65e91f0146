"""
Extremal constructions built from T_k-free base tournaments, and closed-form bounds.

Base tournaments for k in {3, 4} come from the search-verified catalog of
T_k-free classes on R(k) - 1 vertices. Other values of k need an explicitly
supplied base together with ``allow_unverified_base=True``.

Every generator checks its defining structural property before returning.
"""
from fractions import Fraction
from math import comb, floor
from typing import List, NamedTuple, Optional
import logging

import numpy as np

from config import settings
from models import BoundSheet, FactCheck, InnerPolicy
from tournaments.errors import DivisibilityError, HypothesisViolation, UnverifiedRangeError, VertexLimitError
from tournaments.fractional import build_hypergraph, cover_from_weights
from tournaments.generation import RAMSEY_CONSTANTS, max_Tk_free_catalog
from tournaments.graph import (
    OrientedGraph, Tournament, blow_up, contains_Tk, degree_report, enumerate_Tk_copies, induced,
    make_graph, mask_of, parse_upper_triangle, random_tournament, rotational_tournament,
)

logger = logging.getLogger(__name__)

TILING_THRESHOLDS = {3: 6, 4: 16}


def equitable_sizes(total: int, parts: int) -> List[int]:
    """Near-equal part sizes, larger parts first."""
    quotient, remainder = divmod(total, parts)
    return [quotient + 1 if i < remainder else quotient for i in range(parts)]


def catalog_base(
    k: int,
    base: Optional[Tournament] = None,
    allow_unverified_base: bool = False,
    regular: bool = False,
) -> Tournament:
    """The T_k-free tournament on R(k) - 1 vertices that the constructions blow up."""
    if base is not None:
        if k in (3, 4) or allow_unverified_base:
            if not base.is_tournament() or contains_Tk(base, k):
                raise HypothesisViolation(f"supplied base is not a T_{k}-free tournament")
            return base
        raise UnverifiedRangeError("pass allow_unverified_base=True to use a supplied base")
    if k not in (3, 4):
        raise UnverifiedRangeError(f"no verified T_{k}-free base; supply one for k={k}")
    entries = [entry for entry in max_Tk_free_catalog(k) if entry.regular or not regular]
    if not entries:
        raise UnverifiedRangeError(f"catalog has no regular T_{k}-free tournament")
    return parse_upper_triangle(entries[0].bits, entries[0].n)


def _ramsey_from_base(base: Tournament) -> int:
    return base.n + 1


def _check_size(n: int) -> None:
    if n > settings.max_vertices:
        raise VertexLimitError(f"construction has {n} vertices, cap is {settings.max_vertices}")


def ex34_construction(
    k: int,
    n: int,
    gamma: Fraction,
    inner: InnerPolicy = InnerPolicy.TRANSITIVE,
    seed: Optional[int] = None,
    base: Optional[Tournament] = None,
    allow_unverified_base: bool = False,
) -> OrientedGraph:
    """Blow base vertex 0 up to a set X of floor((1 - gamma) 2n / k) and spread the rest over independent parts.

    Every T_k copy uses at least two vertices of X, so no tiling covers more than about (1 - gamma) n vertices.
    """
    gamma = Fraction(gamma)
    if not 0 < gamma < 1:
        raise ValueError(f"gamma must lie strictly between 0 and 1, got {gamma}")
    base = catalog_base(k, base, allow_unverified_base)
    ramsey = _ramsey_from_base(base)
    if n < ramsey:
        raise ValueError(f"need n >= R({k}) = {ramsey}, got {n}")
    _check_size(n)
    x_size = floor((1 - gamma) * 2 * n / k)
    rest = n - x_size
    if x_size < 1 or rest < base.n - 1:
        raise ValueError(f"n={n}, gamma={gamma} leaves an empty part")
    sizes = [x_size] + equitable_sizes(rest, base.n - 1)
    inner_policies = [InnerPolicy(inner)] + [InnerPolicy.INDEPENDENT] * (base.n - 1)
    graph = blow_up(base, sizes, inner_policies, seed)

    if n <= 16:
        x = mask_of(range(x_size))
        thin = [copy for copy in enumerate_Tk_copies(graph, k) if (copy & x).bit_count() < 2]
        if thin:
            raise HypothesisViolation(f"T_{k} copy {thin[0]:b} meets X in fewer than two vertices")
    logger.debug(f"ex34: k={k}, n={n}, |X|={x_size}, sizes={sizes}")
    return graph


def ex34_lower_degree(k: int, n: int, gamma: Fraction, ramsey: Optional[int] = None) -> int:
    ramsey = ramsey or RAMSEY_CONSTANTS[k]
    gamma = Fraction(gamma)
    scale = k * (ramsey - 2)
    return floor((1 - Fraction(k - 2, scale)) * n - (2 * gamma * n + k) / scale)


class Ex35Instance(NamedTuple):
    graph: Tournament
    u: int


def ex35_construction(
    k: int,
    base: Optional[Tournament] = None,
    allow_unverified_base: bool = False,
) -> Ex35Instance:
    """A vertex u whose out- and in-neighbourhoods are T_{k-1}-free, with every edge between them forward."""
    if base is None:
        if k != 4:
            raise UnverifiedRangeError(f"verified for k=4 only, got {k}")
        side = catalog_base(3)
    else:
        side = catalog_base(k - 1, base, allow_unverified_base)
    m = side.n
    n = 2 * m + 1
    plus = list(range(1, m + 1))
    minus = list(range(m + 1, n))
    rows = [0] * n
    rows[0] = mask_of(plus)
    for i in range(m):
        rows[plus[i]] = mask_of(plus[j] for j in range(m) if side.has_arc(i, j)) | mask_of(minus)
        rows[minus[i]] = mask_of(minus[j] for j in range(m) if side.has_arc(i, j)) | 1
    graph = Tournament(n, tuple(rows))
    if any(copy & 1 for copy in enumerate_Tk_copies(graph, k)):
        raise HypothesisViolation("u lies in a T_k copy")
    return Ex35Instance(graph, 0)


def ex39_construction(
    k: int,
    n: int,
    base: Optional[Tournament] = None,
    allow_unverified_base: bool = False,
) -> Tournament:
    """Blow base vertex 0 up to a transitive X of size n - (R(k) - 2); the rest stay single vertices."""
    base = catalog_base(k, base, allow_unverified_base)
    ramsey = _ramsey_from_base(base)
    upper = Fraction(k, k - 2) * (ramsey - 2)
    if not ramsey <= n <= upper:
        raise ValueError(f"n must lie in [{ramsey}, {upper}] for k={k}, got {n}")
    x_size = n - (ramsey - 2)
    graph = blow_up(base, [x_size] + [1] * (base.n - 1), InnerPolicy.TRANSITIVE)
    half_on_x = [Fraction(1, 2) if v < x_size else Fraction(0) for v in range(n)]
    if not cover_from_weights(build_hypergraph(graph, k), half_on_x):
        raise HypothesisViolation("weight 1/2 on X does not cover every T_k copy")
    return graph


def turan_number(n: int, parts: int) -> int:
    return comb(n, 2) - sum(comb(size, 2) for size in equitable_sizes(n, parts))


def turan_extremal(
    k: int,
    n: int,
    base: Optional[Tournament] = None,
    allow_unverified_base: bool = False,
) -> OrientedGraph:
    base = catalog_base(k, base, allow_unverified_base)
    if n < base.n:
        raise ValueError(f"need at least {base.n} vertices, got {n}")
    _check_size(n)
    graph = blow_up(base, equitable_sizes(n, base.n), InnerPolicy.INDEPENDENT)
    if graph.edge_count() != turan_number(n, base.n) or contains_Tk(graph, k):
        raise HypothesisViolation("blow-up is not a T_k-free Turan graph")
    return graph


def gnk_construction(
    n: int,
    k: int,
    base: Optional[Tournament] = None,
    allow_unverified_base: bool = False,
) -> OrientedGraph:
    """A near-regular tournament A on n/k - 1 vertices joined to a T_k-free blow-up B of the rest.

    A-B pairs are oriented in lexicographic order, each from the endpoint with the
    smaller current out-degree (from A on ties).
    """
    if n % k:
        raise DivisibilityError(f"{k} does not divide {n}")
    _check_size(n)
    base = catalog_base(k, base, allow_unverified_base, regular=True)
    a = n // k - 1
    b = n - a
    if b < base.n:
        raise ValueError(f"B needs at least {base.n} vertices, got {b}")
    part_b = blow_up(base, equitable_sizes(b, base.n), InnerPolicy.INDEPENDENT)

    rows = [0] * n
    if a:
        part_a = rotational_tournament(a)
        for i in range(a):
            rows[i] = part_a.out[i]
    for j in range(b):
        rows[a + j] = part_b.out[j] << a
    out_degree = [row.bit_count() for row in rows]
    for i in range(a):
        for j in range(a, n):
            if out_degree[i] <= out_degree[j]:
                rows[i] |= 1 << j
                out_degree[i] += 1
            else:
                rows[j] |= 1 << i
                out_degree[j] += 1
    graph = make_graph(n, rows)

    if contains_Tk(graph, k, within=mask_of(range(a, n))):
        raise HypothesisViolation("B contains a T_k copy")
    logger.debug(f"G(n={n}, k={k}): |A|={a}, |B|={b}, degrees {degree_report(graph).out_degrees}")
    return graph


def fact_deg_check(graph: OrientedGraph, subset: int, r: int, s: int, c: Fraction) -> FactCheck:
    """Large vertex subsets of dense oriented graphs inherit a proportional minimum degree."""
    c = Fraction(c)
    if not 1 <= s <= r:
        raise ValueError(f"need 1 <= s <= r, got s={s}, r={r}")
    if abs(c) >= Fraction(1, r):
        raise ValueError(f"need |c| < 1/r, got {c}")
    n = graph.n
    size = subset.bit_count()
    hypotheses = (
        degree_report(graph).min_total >= (Fraction(r - 1, r) + c) * n
        and size >= Fraction(s, r) * n
    )
    threshold = (Fraction(s - 1, s) + c * Fraction(r, s)) * size
    sub_degree = degree_report(induced(graph, subset)).min_total if size else 0
    return FactCheck(
        r=r,
        s=s,
        c=c,
        hypotheses_hold=hypotheses,
        conclusion_holds=sub_degree >= threshold,
        threshold=threshold,
        subgraph_min_degree=sub_degree,
    )


class LinkingInstance(NamedTuple):
    graph: OrientedGraph
    x: int
    y: int
    subset: int


def linking_instance(rng: np.random.Generator, allow_xy_edge: bool = True) -> LinkingInstance:
    """A random 11-vertex tournament T plus x and y joined to all of T."""
    inner = random_tournament(11, rng)
    x, y = 11, 12
    rows = list(inner.out) + [0, 0]
    for v in (x, y):
        for t in range(11):
            if rng.integers(2):
                rows[v] |= 1 << t
            else:
                rows[t] |= 1 << v
    if allow_xy_edge and rng.integers(2):
        if rng.integers(2):
            rows[x] |= 1 << y
        else:
            rows[y] |= 1 << x
    return LinkingInstance(make_graph(13, rows), x, y, (1 << 11) - 1)


# -- Closed-form bounds -----------------------------------------------------------------

def _ramsey_constant(k: int, upper_bound_mode: bool) -> int:
    if k in RAMSEY_CONSTANTS:
        return RAMSEY_CONSTANTS[k]
    if upper_bound_mode:
        return 2 ** (k - 1)
    raise UnverifiedRangeError(f"R({k}) is unknown; use upper-bound mode for 2^(k-1)")


def bound_sheet(k: int, upper_bound_mode: bool = False, reg: Optional[int] = None) -> BoundSheet:
    if k < 3:
        raise ValueError(f"bounds are stated for k >= 3, got {k}")
    ramsey_prev = _ramsey_constant(k - 1, upper_bound_mode)
    ramsey_k = _ramsey_constant(k, upper_bound_mode)
    uses_upper = k not in RAMSEY_CONSTANTS or (k - 1) not in RAMSEY_CONSTANTS

    trs_lower = max(Fraction(2 * ramsey_prev), Fraction(k, k - 2) * (ramsey_k - 2))
    trs_upper = Fraction(k * (2 * ramsey_prev - k + 1))
    if trs_lower > trs_upper:
        raise ArithmeticError(f"trs bounds cross for k={k}: {trs_lower} > {trs_upper}")

    caro = None
    if (2 * k - 1) in RAMSEY_CONSTANTS and k in RAMSEY_CONSTANTS:
        caro = Fraction(RAMSEY_CONSTANTS[2 * k - 1] + (2 * k - 1) * RAMSEY_CONSTANTS[k])
    dg_upper = 1 - Fraction(1, TILING_THRESHOLDS[k]) if k in TILING_THRESHOLDS else None
    semidegree = None
    if reg is not None:
        semidegree = Fraction(1, 2) - Fraction(k - 1, 2 * k * reg)

    return BoundSheet(
        k=k,
        ramsey_prev=ramsey_prev,
        ramsey_k=ramsey_k,
        uses_upper_bounds=uses_upper,
        trs_lower=trs_lower,
        trs_upper=trs_upper,
        tr_upper_caro=caro,
        dg_upper=dg_upper,
        thm12_threshold=1 - 1 / trs_upper,
        ak1_upper=1 - Fraction(1, 4 * ramsey_prev - 2),
        yuster_upper=1 - Fraction(1, k * (2 * ramsey_prev - 2) + 2),
        dgo_lower=1 - Fraction(k - 2, k * (ramsey_k - 2)),
        frac_gap_lower=1 - 1 / (trs_lower - 1),
        absorbing_pigeonhole=4 * ramsey_prev - 3,
        semidegree_threshold=semidegree,
        ramsey_recursion_holds=ramsey_k >= Fraction(2 * (k - 2), k) * ramsey_prev + 2,
    )
