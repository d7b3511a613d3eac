import logging
import os
from concurrent.futures import ThreadPoolExecutor

import more_itertools
import psutil
import tqdm

logger = logging.getLogger(__name__)

__all__ = [
    'worker_count',
    'ordered_map',
]


def worker_count(threads: int | None = None) -> int:
    """Pool size: explicit value, then GZL_THREADS, then physical cores

    >>> worker_count(3)
    3
    >>> worker_count(0)
    1
    """
    if threads is None:
        env = os.environ.get('GZL_THREADS')
        threads = int(env) if env else (psutil.cpu_count(logical=False) or 1)
    return max(1, threads)


def ordered_map(func, items, threads: int | None = None, desc: str | None = None, chunk: int = 8) -> list:
    """[func(x) for x in items], run on a thread pool, results in input order

    >>> ordered_map(lambda x: x * x, range(5), threads=2)
    [0, 1, 4, 9, 16]
    """
    items = list(items)
    n = worker_count(threads)
    show = desc is not None and logger.isEnabledFor(logging.INFO)
    if n == 1 or len(items) <= 1:
        return [func(x) for x in tqdm.tqdm(items, desc=desc, disable=not show)]
    out = []
    with ThreadPoolExecutor(max_workers=n) as pool, tqdm.tqdm(total=len(items), desc=desc, disable=not show) as bar:
        for block in more_itertools.chunked(items, chunk * n):
            out.extend(pool.map(func, block))
            bar.update(len(block))
    logger.debug(f'{len(items)} tasks on {n} workers')
    return out


if __name__ == '__main__':
    __import__('doctest').testmod(optionflags=4 | 8 | 32)
