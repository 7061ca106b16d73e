"""Ordered trial map, threaded only when ANNIHILATOR_THREADS asks for it."""
from concurrent.futures import ThreadPoolExecutor
import os


def thread_count():
    raw = os.environ.get("ANNIHILATOR_THREADS")
    if not raw:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_map(fn, items):
    items = list(items)
    threads = thread_count()
    if threads == 1 or len(items) < 2:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
