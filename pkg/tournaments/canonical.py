"""
Canonical forms of tournaments.

The canonical form is the lexicographically smallest upper-triangle bitstring
over all labelings reachable by individualization and refinement of the
ordered partition that starts from out-degrees and is refined by the number of
out-neighbours each vertex has in every cell.
"""
from typing import Iterator, List, NamedTuple, Optional, Sequence, Tuple

from config import settings
from tournaments.errors import NotATournamentError, VertexLimitError
from tournaments.graph import OrientedGraph, Tournament, mask_of, pair_count, relabel
from tournaments.pool import parallel_map


class CanonicalLabeling(NamedTuple):
    code: int
    # order[i] is the original vertex placed at canonical position i
    order: Tuple[int, ...]


def _check(tournament: OrientedGraph) -> None:
    if tournament.n > settings.canonical_cap:
        raise VertexLimitError(
            f"canonical forms support at most {settings.canonical_cap} vertices, got {tournament.n}"
        )
    if not tournament.is_tournament():
        raise NotATournamentError("canonical forms are defined for tournaments only")


def refine(graph: OrientedGraph, cells: List[List[int]]) -> List[List[int]]:
    """Split cells by out-neighbour counts per cell until stable."""
    while True:
        masks = [mask_of(cell) for cell in cells]
        refined = []
        changed = False
        for cell in cells:
            if len(cell) == 1:
                refined.append(cell)
                continue
            groups = {}
            for v in cell:
                signature = tuple((graph.out[v] & m).bit_count() for m in masks)
                groups.setdefault(signature, []).append(v)
            if len(groups) == 1:
                refined.append(cell)
                continue
            changed = True
            refined.extend(groups[signature] for signature in sorted(groups))
        cells = refined
        if not changed:
            return cells


def _leaves(graph: OrientedGraph, cells: List[List[int]]) -> Iterator[List[int]]:
    cells = refine(graph, cells)
    target = next((i for i, cell in enumerate(cells) if len(cell) > 1), None)
    if target is None:
        yield [cell[0] for cell in cells]
        return
    cell = cells[target]
    for v in cell:
        rest = [u for u in cell if u != v]
        yield from _leaves(graph, cells[:target] + [[v], rest] + cells[target + 1:])


def encode(graph: OrientedGraph, order: Sequence[int]) -> int:
    code = 0
    out = graph.out
    for i, u in enumerate(order):
        row = out[u]
        for v in order[i + 1:]:
            code = code << 1 | (row >> v & 1)
    return code


def canonical_labeling(tournament: OrientedGraph) -> CanonicalLabeling:
    _check(tournament)
    best: Optional[CanonicalLabeling] = None
    for order in _leaves(tournament, [list(range(tournament.n))]):
        code = encode(tournament, order)
        if best is None or code < best.code:
            best = CanonicalLabeling(code, tuple(order))
    return best


def format_code(code: int, n: int) -> str:
    length = pair_count(n)
    return format(code, f"0{length}b") if length else ""


def canonical_form(tournament: OrientedGraph) -> str:
    return format_code(canonical_labeling(tournament).code, tournament.n)


def canonical_tournament(tournament: OrientedGraph) -> Tournament:
    """The relabeling of ``tournament`` whose upper triangle is its canonical form."""
    labeling = canonical_labeling(tournament)
    perm = [0] * tournament.n
    for position, v in enumerate(labeling.order):
        perm[v] = position
    return relabel(tournament, perm)


def are_isomorphic(first: OrientedGraph, second: OrientedGraph) -> bool:
    if first.n != second.n:
        return False
    return canonical_labeling(first).code == canonical_labeling(second).code


class Distinctness(NamedTuple):
    distinct: bool
    pair: Optional[Tuple[int, int]] = None


def pairwise_distinct(tournaments: Sequence[OrientedGraph], workers: int = 1) -> Distinctness:
    forms = parallel_map(canonical_form, tournaments, workers)
    seen = {}
    for index, form in enumerate(forms):
        key = (tournaments[index].n, form)
        if key in seen:
            return Distinctness(False, (seen[key], index))
        seen[key] = index
    return Distinctness(True)
