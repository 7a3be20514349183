import os
from concurrent.futures import ThreadPoolExecutor


def worker_count():
    """Worker bound from ATF_THREADS (default 1, i.e. serial)."""
    try:
        n = int(os.environ.get("ATF_THREADS", "1"))
    except ValueError:
        n = 1
    return max(1, n)


def ordered_map(fn, items):
    items = list(items)
    n = worker_count()
    if n == 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
