"""Worker pool shared by the exhaustive sweeps."""
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, List, TypeVar
import logging

T = TypeVar("T")
R = TypeVar("R")

logger = logging.getLogger(__name__)


def parallel_map(fn: Callable[[T], R], items: Iterable[T], workers: int = 1) -> List[R]:
    """Order-preserving map; ``fn`` must be a picklable top-level function when workers > 1."""
    items = list(items)
    if workers <= 1 or len(items) < 2:
        return [fn(item) for item in items]
    chunksize = max(1, len(items) // (workers * 8))
    logger.debug(f"Mapping {len(items)} items over {workers} workers (chunks of {chunksize})")
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, items, chunksize=chunksize))
