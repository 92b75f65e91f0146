"""
Integral T_k-tilings: perfect-tiling decisions, maximum tilings, witness checks,
the 12-vertex appendix list and linking sets for 12-vertex tournaments.
"""
from hashlib import sha256
from itertools import combinations
from math import floor
from pathlib import Path
from typing import Dict, List, NamedTuple, Optional, Set, Tuple, Union
import logging

from config import settings
from models import AppendixLine, AppendixReport, LinkingSet, TilingWitness
from tournaments.canonical import canonical_form
from tournaments.errors import (
    DivisibilityError, GraphFormatError, HypothesisViolation, LinkingSetNotFound, TilingError,
)
from tournaments.fractional import build_hypergraph, nu_star, nu_star_of
from tournaments.graph import (
    OrientedGraph, VertexSet, enumerate_Tk_copies, induces_transitive, mask_of, members,
    order_from_length, parse_upper_triangle, reverse, split_neighborhoods,
)
from tournaments.pool import parallel_map

logger = logging.getLogger(__name__)

APPENDIX_SIZE = 43


class TilingResult(NamedTuple):
    tileable: bool
    witness: Optional[TilingWitness] = None


def _lowest(mask: VertexSet) -> int:
    return (mask & -mask).bit_length() - 1


def _index_by_lowest(copies: List[VertexSet]) -> Dict[int, List[VertexSet]]:
    index: Dict[int, List[VertexSet]] = {}
    for copy in copies:
        index.setdefault(_lowest(copy), []).append(copy)
    return index


def _index_by_vertex(copies: List[VertexSet]) -> Dict[int, List[VertexSet]]:
    index: Dict[int, List[VertexSet]] = {}
    for copy in copies:
        for v in members(copy):
            index.setdefault(v, []).append(copy)
    return index


def _subset_dp(target: VertexSet, copies: List[VertexSet]) -> Optional[List[VertexSet]]:
    # once every vertex below v is covered, a copy covering v has v as its lowest vertex
    by_lowest = _index_by_lowest(copies)
    failed: Set[VertexSet] = set()

    def cover(uncovered: VertexSet) -> Optional[List[VertexSet]]:
        if not uncovered:
            return []
        if uncovered in failed:
            return None
        for copy in by_lowest.get(_lowest(uncovered), ()):
            if copy & uncovered == copy:
                rest = cover(uncovered ^ copy)
                if rest is not None:
                    return [copy] + rest
        failed.add(uncovered)
        return None

    return cover(target)


def _backtrack(target: VertexSet, copies: List[VertexSet]) -> Optional[List[VertexSet]]:
    by_vertex = _index_by_vertex(copies)

    def cover(uncovered: VertexSet) -> Optional[List[VertexSet]]:
        if not uncovered:
            return []
        options = None
        for v in members(uncovered):
            fitting = [copy for copy in by_vertex.get(v, ()) if copy & uncovered == copy]
            if options is None or len(fitting) < len(options):
                options = fitting
                if not fitting:
                    return None
        for copy in options:
            rest = cover(uncovered ^ copy)
            if rest is not None:
                return [copy] + rest
        return None

    return cover(target)


def find_perfect_tiling(graph: OrientedGraph, k: int, within: Optional[VertexSet] = None) -> Optional[List[VertexSet]]:
    """Vertex sets of a perfect T_k-tiling of ``graph[within]``, or None."""
    target = graph.vertices if within is None else within
    size = target.bit_count()
    if k < 1 or size % k:
        raise DivisibilityError(f"{k} does not divide {size}")
    copies = enumerate_Tk_copies(graph, k, within=target)
    covered = 0
    for copy in copies:
        covered |= copy
    if covered != target:
        return None
    if size <= settings.dp_vertex_limit:
        return _subset_dp(target, copies)
    return _backtrack(target, copies)


def has_perfect_tiling(graph: OrientedGraph, k: int) -> TilingResult:
    blocks = find_perfect_tiling(graph, k)
    if blocks is None:
        return TilingResult(False)
    return TilingResult(True, TilingWitness.from_masks(k, blocks))


def max_tiling(graph: OrientedGraph, k: int) -> Tuple[int, TilingWitness]:
    """Largest set of disjoint T_k copies, searched downward from floor(nu*_k)."""
    copies = enumerate_Tk_copies(graph, k)
    if not copies:
        return 0, TilingWitness(k=k)
    by_lowest = _index_by_lowest(copies)
    bound = min(graph.n // k, floor(nu_star(build_hypergraph(graph, k))[0]))

    def pack(available: VertexSet, need: int, failed: Set[Tuple[VertexSet, int]]) -> Optional[List[VertexSet]]:
        if need == 0:
            return []
        if available.bit_count() < need * k or (available, need) in failed:
            return None
        v = _lowest(available)
        for copy in by_lowest.get(v, ()):
            if copy & available == copy:
                rest = pack(available ^ copy, need - 1, failed)
                if rest is not None:
                    return [copy] + rest
        rest = pack(available ^ (1 << v), need, failed)
        if rest is not None:
            return rest
        failed.add((available, need))
        return None

    for target in range(bound, 0, -1):
        blocks = pack(graph.vertices, target, set())
        if blocks is not None:
            logger.debug(f"nu_{k} = {target} (fractional bound {bound})")
            return target, TilingWitness.from_masks(k, blocks)
    # unreachable: any single copy is a tiling of size 1
    raise TilingError("maximum tiling search failed")


def verify_tiling(graph: OrientedGraph, witness: TilingWitness) -> bool:
    used = 0
    for block in witness.blocks:
        if len(block) != witness.k or len(set(block)) != witness.k:
            return False
        if any(not 0 <= v < graph.n for v in block):
            return False
        mask = mask_of(block)
        if used & mask or not induces_transitive(graph, mask):
            return False
        used |= mask
    return True


# -- Appendix list ---------------------------------------------------------------

def _appendix_line(item: Tuple[int, str]) -> AppendixLine:
    number, bits = item
    tournament = parse_upper_triangle(bits, 12)
    return AppendixLine(
        line=number,
        bits=bits,
        tileable=has_perfect_tiling(tournament, 4).tileable,
        nu_star=nu_star_of(tournament, 4),
        canonical=canonical_form(tournament),
    )


def appendix_checksum(path: Union[str, Path]) -> str:
    return sha256(Path(path).read_bytes()).hexdigest()


def verify_appendix(path: Union[str, Path], workers: int = 1) -> AppendixReport:
    """Check that every listed 12-vertex tournament lacks a perfect T_4-tiling and that no two are isomorphic."""
    errors = []
    items = []
    for number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            if order_from_length(len(line)) != 12:
                raise GraphFormatError(f"expected a 12-vertex tournament, got {len(line)} bits")
            parse_upper_triangle(line, 12)
        except GraphFormatError as exc:
            errors.append(str(GraphFormatError(str(exc), line=number)))
            continue
        items.append((number, line))

    lines = parallel_map(_appendix_line, items, workers)
    colliding = None
    seen = {}
    for line in lines:
        if line.canonical in seen:
            colliding = (seen[line.canonical], line.line)
            break
        seen[line.canonical] = line.line

    checksum = appendix_checksum(path)
    checksum_ok = checksum == settings.appendix_sha256
    if not checksum_ok:
        logger.warning(f"Appendix checksum {checksum} differs from the shipped file's")
    report = AppendixReport(
        count=len(lines),
        all_untileable=not any(line.tileable for line in lines),
        pairwise_nonisomorphic=colliding is None,
        colliding_pair=colliding,
        all_fractional_perfect=all(line.nu_star == 3 for line in lines),
        checksum_ok=checksum_ok,
        lines=lines,
        errors=errors,
    )
    logger.info(
        f"Appendix: {report.count} tournaments, untileable={report.all_untileable}, "
        f"distinct={report.pairwise_nonisomorphic}, nu*=3 for all={report.all_fractional_perfect}"
    )
    return report


# -- Linking sets ------------------------------------------------------------------

def _check_linking_instance(graph: OrientedGraph, x: int, y: int, subset: VertexSet) -> None:
    if subset.bit_count() != 11:
        raise HypothesisViolation(f"T must have 11 vertices, got {subset.bit_count()}")
    if x == y or subset >> x & 1 or subset >> y & 1:
        raise HypothesisViolation("x and y must be distinct and outside T")
    split_neighborhoods(graph, x, y, subset)
    for t in members(subset):
        missing = subset & ~(graph.neighbours(t) | 1 << t)
        if missing:
            raise HypothesisViolation(f"T does not induce a tournament: {t} misses {list(members(missing))}")


def _both_tilings(graph: OrientedGraph, x: int, y: int, z: VertexSet) -> Optional[Tuple[List[VertexSet], List[VertexSet]]]:
    with_x = find_perfect_tiling(graph, 4, within=z | 1 << x)
    if with_x is None:
        return None
    with_y = find_perfect_tiling(graph, 4, within=z | 1 << y)
    if with_y is None:
        return None
    return with_x, with_y


def find_linking_set(graph: OrientedGraph, x: int, y: int, subset: VertexSet) -> LinkingSet:
    """A 7-set Z of T such that both {x} + Z and {y} + Z have perfect T_4-tilings."""
    _check_linking_instance(graph, x, y, subset)
    vertices = list(members(subset))

    for triple in combinations(vertices, 3):
        z = mask_of(triple)
        if not (induces_transitive(graph, z | 1 << x) and induces_transitive(graph, z | 1 << y)):
            continue
        # eight vertices always hold a T_4
        extra = enumerate_Tk_copies(graph, 4, within=subset & ~z)[0]
        linking = z | extra
        return LinkingSet(
            x=x,
            y=y,
            z=list(members(linking)),
            witness_x=TilingWitness.from_masks(4, [z | 1 << x, extra]),
            witness_y=TilingWitness.from_masks(4, [z | 1 << y, extra]),
            via="triple",
        )

    for seven in combinations(vertices, 7):
        z = mask_of(seven)
        tilings = _both_tilings(graph, x, y, z)
        if tilings is not None:
            return LinkingSet(
                x=x,
                y=y,
                z=list(seven),
                witness_x=TilingWitness.from_masks(4, tilings[0]),
                witness_y=TilingWitness.from_masks(4, tilings[1]),
                via="septuple",
            )
    raise LinkingSetNotFound(f"no linking set for x={x}, y={y}, T={vertices}")


# -- Structural helpers --------------------------------------------------------------

def _part(graph: OrientedGraph, x: int, y: int, v: int) -> Tuple[int, int]:
    return int(graph.has_arc(x, v)), int(graph.has_arc(y, v))


def violates_partial_order(graph: OrientedGraph, x: int, y: int, u: int, w: int) -> bool:
    """Whether the edge uw runs against the order N-- < N-+, N+- < N++ of the x/y split.

    Parts compare componentwise on (x -> v, y -> v); an edge between comparable parts must
    point from the lower part to the higher one, and an edge between incomparable parts
    always violates.
    """
    split_neighborhoods(graph, x, y, (1 << u) | (1 << w))
    pu, pw = _part(graph, x, y, u), _part(graph, x, y, w)
    if pu == pw:
        return False
    if pu[0] <= pw[0] and pu[1] <= pw[1]:
        return graph.has_arc(w, u)
    if pw[0] <= pu[0] and pw[1] <= pu[1]:
        return graph.has_arc(u, w)
    return True


def twelve_vertex_tiling_from_case(tournament: OrientedGraph, v: int) -> Optional[TilingWitness]:
    """Perfect T_4-tiling of a 12-vertex tournament where v has 8 out- and 3 in-neighbours
    and every in-neighbour sends at most one edge into N+(v), or the mirrored situation.
    """
    if tournament.n != 12 or not tournament.is_tournament():
        raise HypothesisViolation("expected a 12-vertex tournament")
    if tournament.out[v].bit_count() == 3:
        return twelve_vertex_tiling_from_case(reverse(tournament), v)
    plus, minus = tournament.out[v], tournament.inn[v]
    if plus.bit_count() != 8 or minus.bit_count() != 3:
        return None
    if any((tournament.out[u] & plus).bit_count() > 1 for u in members(minus)):
        return None

    for first in enumerate_Tk_copies(tournament, 4, within=plus | minus):
        if (first & minus).bit_count() != 2:
            continue
        u = _lowest(minus & ~first)
        triangles = find_perfect_tiling(tournament, 3, within=plus & ~first)
        if triangles is None:
            continue
        # u has at most one out-neighbour in N+(v), so it is a sink for one of the triangles
        for near, far in (triangles, triangles[::-1]):
            if not tournament.out[u] & near:
                blocks = [first, near | 1 << u, far | 1 << v]
                witness = TilingWitness.from_masks(4, blocks)
                if verify_tiling(tournament, witness):
                    return witness
    raise TilingError(f"case construction failed at vertex {v}")
