"""
Bounded LRU memo of F evaluations shared by all consumers in a process.
"""

import collections
import logging
import threading
import typing as t

import numpy as np

from poshrink import settings
from poshrink.f_integral.schemas import FEstimate

logger = logging.getLogger(__name__)

CacheKey = t.Tuple[t.Any, ...]


def quantize(values: t.Sequence[float], digits: t.Optional[int] = None) -> t.Tuple[str, ...]:
    """
    Represent floats by ``digits`` significant digits so that equal-up-to-rounding rates share a key.
    """
    digits = digits or settings.F_CACHE_T_DIGITS
    return tuple(f"{float(v):.{digits}g}" for v in np.atleast_1d(values))


class FCache:
    """
    Thread-safe LRU cache of :class:`FEstimate` keyed by ``(prior digest, z, quantized t, settings...)``.
    Inserts are idempotent: concurrent misses on one key store equal values.
    """

    def __init__(self, max_entries: t.Optional[int] = None, enabled: t.Optional[bool] = None):
        self.max_entries = max_entries or settings.F_CACHE_MAX_ENTRIES
        self.enabled = settings.F_CACHE_ENABLED if enabled is None else enabled
        self._entries: "collections.OrderedDict[CacheKey, FEstimate]" = collections.OrderedDict()
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    @staticmethod
    def make_key(digest: str, z: t.Sequence[int], t_vec: t.Sequence[float], *extra: t.Any) -> CacheKey:
        return (digest, tuple(int(v) for v in z), quantize(t_vec)) + tuple(extra)

    def get(self, key: CacheKey) -> t.Optional[FEstimate]:
        if not self.enabled:
            return None
        with self._lock:
            estimate = self._entries.get(key)
            if estimate is None:
                self.misses += 1
                return None
            self._entries.move_to_end(key)
            self.hits += 1
            return estimate

    def put(self, key: CacheKey, estimate: FEstimate) -> None:
        if not self.enabled:
            return
        with self._lock:
            self._entries[key] = estimate
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_entries:
                self._entries.popitem(last=False)

    def get_or_compute(self, key: CacheKey, compute: t.Callable[[], FEstimate]) -> FEstimate:
        estimate = self.get(key)
        if estimate is None:
            estimate = compute()
            self.put(key, estimate)
        return estimate

    def record_hits(self, count: int) -> None:
        """Count lookups served without a cache query, such as repeated rows of one batch."""
        if not self.enabled or count <= 0:
            return
        with self._lock:
            self.hits += int(count)

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self.hits = 0
            self.misses = 0

    @property
    def hit_rate(self) -> float:
        total = self.hits + self.misses
        return self.hits / total if total else 0.0

    def __len__(self) -> int:
        return len(self._entries)

    def log_stats(self) -> None:
        logger.debug(f"F cache: {len(self)} entries, {self.hits} hits, {self.misses} misses ({self.hit_rate:.1%})")


F_cache = FCache()
