"""
Shared store for q-series coefficient tables.

Rows of q-binomial coefficients and the per-(n, q) Wigner coefficient tables
depend only on integers and q, so every grid point of a run reuses them.
Entries are immutable tuples keyed by ("q_binomial", q) style keys; the least
recently requested table is dropped once max_size tables are held.
"""
import logging
import threading
from collections import OrderedDict
from typing import Callable, Dict, Hashable, Optional

log = logging.getLogger(__name__)


class CoefficientCache:
    """Thread-safe bounded store of coefficient tables, oldest request evicted first"""

    def __init__(self, max_size: int = 256):
        """
        Args:
            max_size: Number of tables kept before the stalest one is dropped
        """
        self.max_size = max_size
        self._tables: "OrderedDict[Hashable, tuple]" = OrderedDict()
        self._lock = threading.Lock()
        self._hits = 0
        self._misses = 0

    def get(self, key: Hashable) -> Optional[tuple]:
        """Table stored under key, or None; a hit marks the table as fresh"""
        with self._lock:
            table = self._tables.get(key)
            if table is None:
                self._misses += 1
                return None
            self._tables.move_to_end(key)
            self._hits += 1
            return table

    def put(self, key: Hashable, table: tuple):
        with self._lock:
            self._store(key, table)

    def _store(self, key: Hashable, table: tuple):
        self._tables[key] = table
        self._tables.move_to_end(key)
        while len(self._tables) > self.max_size:
            stale, _ = self._tables.popitem(last=False)
            log.debug(f"Dropped coefficient table {stale}")

    def get_or_build(self, key: Hashable, builder: Callable[[], tuple]) -> tuple:
        """
        Return the table for key, computing it with builder on a miss.

        The builder runs outside the lock. Two threads missing together may
        both compute the table; whichever stores first is returned to both.
        """
        table = self.get(key)
        if table is not None:
            return table
        built = builder()
        with self._lock:
            existing = self._tables.get(key)
            if existing is not None:
                return existing
            self._store(key, built)
        return built

    def stats(self) -> Dict[str, int]:
        """Hit / miss counters and the number of tables held"""
        with self._lock:
            return {"hits": self._hits, "misses": self._misses, "tables": len(self._tables)}

    def clear(self):
        with self._lock:
            self._tables.clear()
            self._hits = self._misses = 0
        log.debug("Coefficient tables cleared")

    def __len__(self) -> int:
        return len(self._tables)


_shared_tables = CoefficientCache(max_size=512)


def get_cache() -> CoefficientCache:
    """Process-wide coefficient table store"""
    return _shared_tables
