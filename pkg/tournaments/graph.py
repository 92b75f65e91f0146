"""
Dense oriented graphs and tournaments on at most 64 vertices.

Every graph stores one bitmask row per vertex: bit ``u`` of ``out[v]`` is set
when the edge between ``v`` and ``u`` is directed ``v -> u``. Vertex sets are
plain ``int`` bitmasks over ``0..n-1``.
"""
from dataclasses import dataclass, field
from math import isqrt
from pathlib import Path
from typing import Iterable, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union
import logging

import networkx as nx
import numpy as np

from config import settings
from models import DegreeReport, GraphRecord, InnerPolicy
from tournaments.errors import (
    GraphFormatError, HypothesisViolation, NotATournamentError, VertexLimitError,
)

logger = logging.getLogger(__name__)

VertexSet = int


def members(mask: VertexSet) -> Iterator[int]:
    """Vertices of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> VertexSet:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


@dataclass(frozen=True)
class OrientedGraph:
    n: int
    out: Tuple[int, ...]
    inn: Tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not 1 <= self.n <= settings.max_vertices:
            raise VertexLimitError(
                f"vertex count {self.n} outside 1..{settings.max_vertices}"
            )
        if len(self.out) != self.n:
            raise ValueError(f"expected {self.n} rows, got {len(self.out)}")
        full = (1 << self.n) - 1
        inn = [0] * self.n
        for v, row in enumerate(self.out):
            if row & ~full:
                raise ValueError(f"row {v} points outside the vertex range")
            if row >> v & 1:
                raise ValueError(f"loop at vertex {v}")
            for u in members(row):
                inn[u] |= 1 << v
        for v in range(self.n):
            if self.out[v] & inn[v]:
                raise ValueError(f"antiparallel edges at vertex {v}")
        object.__setattr__(self, "inn", tuple(inn))

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[Tuple[int, int]]) -> "OrientedGraph":
        rows = [0] * n
        for u, v in arcs:
            rows[u] |= 1 << v
        return make_graph(n, rows)

    @classmethod
    def from_matrix(cls, matrix) -> "OrientedGraph":
        """Build from an n x n matrix with +1 (forward), -1 (backward), 0 (none)."""
        adj = np.asarray(matrix, dtype=np.int8)
        if adj.ndim != 2 or adj.shape[0] != adj.shape[1]:
            raise ValueError("orientation matrix must be square")
        if not np.array_equal(adj, -adj.T):
            raise ValueError("orientation matrix must be antisymmetric")
        n = adj.shape[0]
        rows = [mask_of(np.flatnonzero(adj[v] == 1).tolist()) for v in range(n)]
        return make_graph(n, rows)

    @property
    def vertices(self) -> VertexSet:
        return (1 << self.n) - 1

    def has_arc(self, u: int, v: int) -> bool:
        return bool(self.out[u] >> v & 1)

    def adjacent(self, u: int, v: int) -> bool:
        return bool((self.out[u] | self.inn[u]) >> v & 1)

    def neighbours(self, v: int) -> VertexSet:
        return self.out[v] | self.inn[v]

    def arcs(self) -> Iterator[Tuple[int, int]]:
        for u in range(self.n):
            for v in members(self.out[u]):
                yield u, v

    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.out)

    def is_tournament(self) -> bool:
        full = self.vertices
        return all((self.out[v] | self.inn[v] | 1 << v) == full for v in range(self.n))

    def to_matrix(self) -> np.ndarray:
        adj = np.zeros((self.n, self.n), dtype=np.int8)
        for u, v in self.arcs():
            adj[u, v] = 1
            adj[v, u] = -1
        return adj


@dataclass(frozen=True)
class Tournament(OrientedGraph):

    def __post_init__(self):
        OrientedGraph.__post_init__(self)
        if not self.is_tournament():
            raise NotATournamentError("every pair of vertices needs exactly one edge")


def make_graph(n: int, rows: Sequence[int]) -> OrientedGraph:
    """Tournament when every pair is joined, OrientedGraph otherwise."""
    graph = OrientedGraph(n, tuple(rows))
    if graph.is_tournament():
        return Tournament(n, tuple(rows))
    return graph


# -- Appendix wire format ----------------------------------------------------

def pair_count(n: int) -> int:
    return n * (n - 1) // 2


def order_from_length(length: int) -> int:
    n = (1 + isqrt(1 + 8 * length)) // 2
    if pair_count(n) != length:
        raise GraphFormatError(f"{length} bits is not n(n-1)/2 for any n")
    return n


def parse_upper_triangle(text: str, n: int) -> Tournament:
    bits = text.strip()
    if len(bits) != pair_count(n):
        raise GraphFormatError(
            f"expected {pair_count(n)} bits for n={n}, got {len(bits)}"
        )
    bad = set(bits) - {"0", "1"}
    if bad:
        raise GraphFormatError(f"unexpected characters {sorted(bad)}")
    rows = [0] * n
    pos = 0
    for i in range(n):
        for j in range(i + 1, n):
            if bits[pos] == "1":
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
            pos += 1
    return Tournament(n, tuple(rows))


def serialize_upper_triangle(tournament: OrientedGraph) -> str:
    if not tournament.is_tournament():
        raise NotATournamentError("only tournaments have an upper-triangle encoding")
    out = tournament.out
    return "".join(
        "1" if out[i] >> j & 1 else "0"
        for i in range(tournament.n)
        for j in range(i + 1, tournament.n)
    )


def read_tournament_file(path: Union[str, Path], n: Optional[int] = None) -> List[Tuple[int, Tournament]]:
    """Parse one tournament per non-blank line; returns (line number, tournament)."""
    parsed = []
    for number, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            order = n if n is not None else order_from_length(len(line))
            parsed.append((number, parse_upper_triangle(line, order)))
        except GraphFormatError as exc:
            raise GraphFormatError(str(exc), line=number) from exc
    logger.debug(f"Read {len(parsed)} tournaments from {path}")
    return parsed


def to_record(graph: OrientedGraph) -> GraphRecord:
    bits = serialize_upper_triangle(graph) if graph.is_tournament() else None
    return GraphRecord(n=graph.n, bits=bits, arcs=sorted(graph.arcs()))


def from_record(record: GraphRecord) -> OrientedGraph:
    if record.bits is not None:
        return parse_upper_triangle(record.bits, record.n)
    return OrientedGraph.from_arcs(record.n, record.arcs)


def to_networkx(graph: OrientedGraph) -> nx.DiGraph:
    digraph = nx.DiGraph()
    digraph.add_nodes_from(range(graph.n))
    digraph.add_edges_from(graph.arcs())
    return digraph


# -- Transitive subtournaments -------------------------------------------------

def induces_transitive(graph: OrientedGraph, subset: VertexSet) -> bool:
    # internal out-degrees of a transitive tournament are exactly 0..|S|-1
    degrees = sorted((graph.out[v] & subset).bit_count() for v in members(subset))
    return degrees == list(range(len(degrees)))


def _transitive_sets(graph: OrientedGraph, k: int, candidates: VertexSet) -> Iterator[VertexSet]:
    # every copy of T_k has a unique source; the rest is a T_{k-1} in its out-neighbourhood
    if k == 0:
        yield 0
        return
    for v in members(candidates):
        inside = candidates & graph.out[v]
        if inside.bit_count() < k - 1:
            continue
        for rest in _transitive_sets(graph, k - 1, inside):
            yield rest | 1 << v


def enumerate_Tk_copies(graph: OrientedGraph, k: int, within: Optional[VertexSet] = None) -> List[VertexSet]:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    candidates = graph.vertices if within is None else within
    return sorted(_transitive_sets(graph, k, candidates))


def contains_Tk(graph: OrientedGraph, k: int, within: Optional[VertexSet] = None) -> bool:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    candidates = graph.vertices if within is None else within
    return next(_transitive_sets(graph, k, candidates), None) is not None


# -- Transformations -----------------------------------------------------------

def relabel(graph: OrientedGraph, perm: Sequence[int]) -> OrientedGraph:
    """Vertex ``i`` of ``graph`` becomes vertex ``perm[i]``."""
    if sorted(perm) != list(range(graph.n)):
        raise ValueError("perm must be a permutation of the vertex range")
    rows = [0] * graph.n
    for u, v in graph.arcs():
        rows[perm[u]] |= 1 << perm[v]
    return make_graph(graph.n, rows)


def reverse(graph: OrientedGraph) -> OrientedGraph:
    return make_graph(graph.n, graph.inn)


def induced(graph: OrientedGraph, subset: VertexSet) -> OrientedGraph:
    order = list(members(subset))
    if not order:
        raise ValueError("induced subgraph needs at least one vertex")
    position = {v: i for i, v in enumerate(order)}
    rows = [mask_of(position[u] for u in members(graph.out[v] & subset)) for v in order]
    return make_graph(len(order), rows)


def delete_vertex(graph: OrientedGraph, v: int) -> OrientedGraph:
    return induced(graph, graph.vertices & ~(1 << v))


def blow_up(
    graph: OrientedGraph,
    sizes: Sequence[int],
    inner: Union[InnerPolicy, Sequence[InnerPolicy]] = InnerPolicy.INDEPENDENT,
    seed: Optional[int] = None,
) -> OrientedGraph:
    """Replace vertex i by sizes[i] vertices; seeded-random classes without a seed use ``settings.seed``."""
    if len(sizes) != graph.n:
        raise ValueError(f"need {graph.n} class sizes, got {len(sizes)}")
    if any(size < 1 for size in sizes):
        raise ValueError("every blown-up class needs at least one vertex")
    total = sum(sizes)
    if total > settings.max_vertices:
        raise VertexLimitError(f"blow-up has {total} vertices, cap is {settings.max_vertices}")
    policies = [InnerPolicy(inner)] * graph.n if isinstance(inner, (str, InnerPolicy)) else list(inner)
    if len(policies) != graph.n:
        raise ValueError("one inner policy per class")

    rng = np.random.default_rng(settings.seed if seed is None else seed)
    starts = np.concatenate(([0], np.cumsum(sizes)[:-1])).tolist()
    classes = [mask_of(range(start, start + size)) for start, size in zip(starts, sizes)]
    rows = [0] * total
    for i in range(graph.n):
        heads = 0
        for j in members(graph.out[i]):
            heads |= classes[j]
        for v in members(classes[i]):
            rows[v] |= heads
        block = list(members(classes[i]))
        for a in range(len(block)):
            for b in range(a + 1, len(block)):
                if policies[i] is InnerPolicy.INDEPENDENT:
                    continue
                if policies[i] is InnerPolicy.TRANSITIVE or rng.integers(2):
                    rows[block[a]] |= 1 << block[b]
                else:
                    rows[block[b]] |= 1 << block[a]
    return make_graph(total, rows)


# -- Degrees and neighbourhoods ------------------------------------------------

def degree_report(graph: OrientedGraph) -> DegreeReport:
    out_degrees = [row.bit_count() for row in graph.out]
    in_degrees = [row.bit_count() for row in graph.inn]
    totals = [a + b for a, b in zip(out_degrees, in_degrees)]
    return DegreeReport(
        out_degrees=out_degrees,
        in_degrees=in_degrees,
        degrees=totals,
        min_out=min(out_degrees),
        min_in=min(in_degrees),
        min_semi=min(min(out_degrees), min(in_degrees)),
        min_total=min(totals),
    )


def is_regular(graph: OrientedGraph) -> bool:
    return all(graph.out[v].bit_count() == graph.inn[v].bit_count() for v in range(graph.n))


class NeighborhoodSplit(NamedTuple):
    plus_plus: VertexSet
    plus_minus: VertexSet
    minus_plus: VertexSet
    minus_minus: VertexSet

    def sizes(self) -> Tuple[int, int, int, int]:
        return tuple(part.bit_count() for part in self)


def split_neighborhoods(graph: OrientedGraph, x: int, y: int, subset: VertexSet) -> NeighborhoodSplit:
    if subset >> x & 1 or subset >> y & 1:
        raise HypothesisViolation("x and y must lie outside the split set")
    missing = subset & ~(graph.neighbours(x) & graph.neighbours(y))
    if missing:
        raise HypothesisViolation(
            f"vertices {list(members(missing))} are not adjacent to both {x} and {y}"
        )
    xo, yo = graph.out[x], graph.out[y]
    return NeighborhoodSplit(
        plus_plus=subset & xo & yo,
        plus_minus=subset & xo & ~yo,
        minus_plus=subset & ~xo & yo,
        minus_minus=subset & ~xo & ~yo,
    )


# -- Standard families ------------------------------------------------------

def transitive_tournament(n: int) -> Tournament:
    full = (1 << n) - 1
    return Tournament(n, tuple(full & ~((1 << (v + 1)) - 1) for v in range(n)))


def cyclic_triangle() -> Tournament:
    return Tournament(3, (0b010, 0b100, 0b001))


def rotational_tournament(n: int) -> Tournament:
    """Circulant tournament whose in- and out-degrees differ by at most one."""
    rows = [0] * n
    for i in range(n):
        for d in range(1, (n - 1) // 2 + 1):
            rows[i] |= 1 << ((i + d) % n)
        if n % 2 == 0 and i < n // 2:
            rows[i] |= 1 << (i + n // 2)
    return Tournament(n, tuple(rows))


def random_tournament(n: int, rng: np.random.Generator) -> Tournament:
    bits = rng.integers(0, 2, size=pair_count(n))
    return parse_upper_triangle("".join(map(str, bits.tolist())), n)


def random_oriented_graph(n: int, density: float, rng: np.random.Generator) -> OrientedGraph:
    rows = [0] * n
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() >= density:
                continue
            if rng.integers(2):
                rows[i] |= 1 << j
            else:
                rows[j] |= 1 << i
    return make_graph(n, rows)


def underlying_ramsey_graph(tournament: Tournament, order: Optional[Sequence[int]] = None) -> nx.Graph:
    """Keep v_i v_j (i < j in ``order``) iff v_i -> v_j."""
    order = list(range(tournament.n)) if order is None else list(order)
    graph = nx.Graph()
    graph.add_nodes_from(order)
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if tournament.has_arc(order[a], order[b]):
                graph.add_edge(order[a], order[b])
    return graph
