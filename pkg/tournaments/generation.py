"""
Isomorph-free generation of tournaments and searches over the classes.

Classes of order n are produced from the classes of order n-1 by canonical
augmentation: a parent is extended by every possible row of a new last vertex,
and a child is kept only when deleting its canonically last vertex gives back
the parent's class. Every class therefore has exactly one accepting parent.
"""
from functools import lru_cache
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional, Tuple
import logging
import time

from config import settings
from models import CatalogEntry, Provenance, RamseyEntry, RamseyTable, SearchReport, TilingSearchReport
from tournaments.canonical import canonical_labeling, format_code
from tournaments.errors import DivisibilityError, UnverifiedRangeError, VertexLimitError
from tournaments.graph import Tournament, contains_Tk, delete_vertex, is_regular, parse_upper_triangle
from tournaments.pool import parallel_map
from tournaments.tiling import has_perfect_tiling

logger = logging.getLogger(__name__)

RAMSEY_CONSTANTS: Dict[int, int] = {2: 2, 3: 4, 4: 8, 5: 14, 6: 28}
VERIFIED_RAMSEY_RANGE = (2, 3, 4)


def from_code(code: int, n: int) -> Tournament:
    return parse_upper_triangle(format_code(code, n), n)


def _check_order(n: int) -> None:
    if not 1 <= n <= settings.generation_cap:
        raise VertexLimitError(f"generation supports 1..{settings.generation_cap} vertices, got {n}")


def _extend(item: Tuple[int, int]) -> List[int]:
    """Canonical codes of the accepted children of one parent class."""
    parent_code, m = item
    parent = from_code(parent_code, m)
    new = m
    accepted = set()
    for row in range(1 << m):
        rows = [parent.out[u] | (0 if row >> u & 1 else 1 << new) for u in range(m)]
        rows.append(row)
        child = Tournament(m + 1, tuple(rows))
        labeling = canonical_labeling(child)
        if labeling.code in accepted:
            continue
        last = labeling.order[-1]
        if last == new or canonical_labeling(delete_vertex(child, last)).code == parent_code:
            accepted.add(labeling.code)
    return sorted(accepted)


def _cache_file(n: int) -> Optional[Path]:
    if not settings.class_cache_dir:
        return None
    return Path(settings.class_cache_dir) / f"tournaments_{n}.txt"


_LEVELS: Dict[int, Tuple[int, ...]] = {1: (0,)}


def class_codes(n: int, workers: int = 1) -> Tuple[int, ...]:
    """Canonical codes of all n-vertex classes, in increasing order."""
    _check_order(n)
    if n in _LEVELS:
        return _LEVELS[n]
    cached = _cache_file(n)
    if cached is not None and cached.exists():
        codes = tuple(int(line, 2) if line else 0 for line in cached.read_text().split())
        logger.debug(f"Loaded {len(codes)} classes of order {n} from {cached}")
        _LEVELS[n] = codes
        return codes

    parents = class_codes(n - 1, workers)
    start = time.perf_counter()
    children = parallel_map(_extend, [(code, n - 1) for code in parents], workers)
    codes = tuple(sorted(code for group in children for code in group))
    logger.info(f"Order {n}: {len(codes)} classes from {len(parents)} parents in {time.perf_counter() - start:.2f}s")

    if cached is not None:
        cached.parent.mkdir(parents=True, exist_ok=True)
        cached.write_text("\n".join(format_code(code, n) for code in codes) + "\n")
    _LEVELS[n] = codes
    return codes


def generate_tournaments(n: int, workers: int = 1) -> Iterator[Tournament]:
    """One canonically labeled representative per isomorphism class, in canonical order."""
    for code in class_codes(n, workers):
        yield from_code(code, n)


# -- Predicate searches ----------------------------------------------------------

def _tk_free(item: Tuple[int, int, int]) -> bool:
    code, n, k = item
    return not contains_Tk(from_code(code, n), k)


def _regular(item: Tuple[int, int, int]) -> bool:
    code, n, _ = item
    return is_regular(from_code(code, n))


PREDICATES: Dict[str, Callable[[Tuple[int, int, int]], bool]] = {
    "all": lambda item: True,
    "tk-free": _tk_free,
    "regular": _regular,
}


def search_classes(n: int, predicate: str, k: int = 0, workers: int = 1) -> SearchReport:
    if predicate not in PREDICATES:
        raise ValueError(f"unknown predicate {predicate!r}; choose from {sorted(PREDICATES)}")
    start = time.perf_counter()
    codes = class_codes(n, workers)
    test = PREDICATES[predicate]
    items = [(code, n, k) for code in codes]
    verdicts = [test(item) for item in items] if predicate == "all" else parallel_map(test, items, workers)
    witnesses = [format_code(code, n) for code, ok in zip(codes, verdicts) if ok]
    name = f"{predicate}:{k}" if predicate == "tk-free" else predicate
    return SearchReport(
        n=n,
        predicate=name,
        classes_examined=len(codes),
        classes_satisfying=len(witnesses),
        witnesses=witnesses,
        wall_time=time.perf_counter() - start,
    )


def find_ramsey(k: int, n_max: int = 9, workers: int = 1) -> RamseyEntry:
    """Smallest order at which every class contains T_k, with a T_k-free witness one below."""
    if k < 2:
        raise ValueError(f"k must be at least 2, got {k}")
    _check_order(n_max)
    witness = None
    for n in range(1, n_max + 1):
        free = next((code for code in class_codes(n, workers) if _tk_free((code, n, k))), None)
        if free is None:
            logger.info(f"R({k}) = {n}")
            return RamseyEntry(k=k, value=n, provenance=Provenance.VERIFIED, witness=witness)
        witness = format_code(free, n)
    logger.info(f"R({k}) exceeds {n_max}")
    return RamseyEntry(k=k, provenance=Provenance.VERIFIED, witness=witness, exceeds=n_max)


@lru_cache(maxsize=None)
def _verified_ramsey(k: int) -> int:
    entry = find_ramsey(k, settings.generation_cap)
    if entry.value is None:
        raise UnverifiedRangeError(f"R({k}) is beyond the generation cap")
    return entry.value


def ramsey_number(k: int, verify: bool = True) -> int:
    if verify and k in VERIFIED_RAMSEY_RANGE:
        return _verified_ramsey(k)
    if k not in RAMSEY_CONSTANTS:
        raise UnverifiedRangeError(f"no known value of R({k})")
    return RAMSEY_CONSTANTS[k]


def ramsey_table(verify: bool = True, workers: int = 1) -> RamseyTable:
    """Known R(k) values; k in the verified range is re-derived by exhaustive search when ``verify`` is set."""
    entries = {}
    for k, value in RAMSEY_CONSTANTS.items():
        if verify and k in VERIFIED_RAMSEY_RANGE:
            entries[k] = find_ramsey(k, settings.generation_cap, workers)
        else:
            entries[k] = RamseyEntry(k=k, value=value, provenance=Provenance.CONSTANT)
    return RamseyTable(entries=entries)


def _tileable(item: Tuple[int, int, int]) -> bool:
    code, n, k = item
    return has_perfect_tiling(from_code(code, n), k).tileable


def tiling_threshold_search(k: int, n: int, workers: int = 1) -> TilingSearchReport:
    if k < 1 or n % k:
        raise DivisibilityError(f"{k} does not divide {n}")
    start = time.perf_counter()
    codes = class_codes(n, workers)
    verdicts = parallel_map(_tileable, [(code, n, k) for code in codes], workers)
    counterexamples = [format_code(code, n) for code, ok in zip(codes, verdicts) if not ok]
    logger.info(f"T_{k}-tilings at n={n}: {len(counterexamples)} of {len(codes)} classes untileable")
    return TilingSearchReport(
        k=k,
        n=n,
        classes_examined=len(codes),
        all_tileable=not counterexamples,
        counterexamples=counterexamples,
        wall_time=time.perf_counter() - start,
    )


@lru_cache(maxsize=None)
def max_Tk_free_catalog(k: int) -> Tuple[CatalogEntry, ...]:
    """All T_k-free classes on R(k)-1 vertices, each flagged by regularity."""
    if k not in (3, 4):
        raise UnverifiedRangeError(f"catalog is search-verified for k in {{3, 4}} only, got {k}")
    n = ramsey_number(k) - 1
    entries = []
    for code in class_codes(n):
        if not _tk_free((code, n, k)):
            continue
        tournament = from_code(code, n)
        entries.append(CatalogEntry(
            n=n,
            bits=format_code(code, n),
            regular=is_regular(tournament),
            out_degrees=[row.bit_count() for row in tournament.out],
        ))
    logger.info(f"T_{k}-free catalog on {n} vertices: {len(entries)} classes")
    return tuple(entries)
