from functools import wraps
import logging
import threading


logger = logging.getLogger(__name__)


class Cache:
    NOT_FOUND = object()
    DEFAULT_MAXIMUM_SIZE = 256

    def __init__(self, maxsize=DEFAULT_MAXIMUM_SIZE):
        self._cache = dict()
        self._maxsize = maxsize
        self._lock = threading.Lock()
        self._reset_stats()

    def _increment_metric(self, name):
        self._stats[name] += 1

    def _reset_stats(self):
        self._stats = {
            'maxsize_reached': 0,
            'hits': 0,
            'misses': 0
        }

    @property
    def stats(self):
        return self._stats.copy()

    @property
    def maxsize(self):
        return self._maxsize

    @property
    def current_size(self):
        return len(self._cache)

    def clear(self):
        with self._lock:
            self._reset_stats()
            self._cache.clear()

    def get(self, key):
        with self._lock:
            entry = self._cache.pop(key, self.NOT_FOUND)
            if entry is self.NOT_FOUND:
                self._increment_metric('misses')
                return entry, False

            self._increment_metric('hits')
            # Re-insert so that dictionary order tracks recency of use.
            self._cache[key] = entry
            return entry, True

    def add(self, key, entry):
        with self._lock:
            self._cache.setdefault(key, entry)
            if len(self._cache) > self._maxsize:
                self._increment_metric('maxsize_reached')
                # The first key is the least recently accessed. See .get for details.
                remove_key = next(iter(self._cache.keys()))
                del self._cache[remove_key]


def enable_dict_cache(maxsize=Cache.DEFAULT_MAXIMUM_SIZE):
    """Memoize a function of hashable positional arguments.

    The cache object is exposed as ``wrapper.cache`` so callers can inspect
    statistics or clear it.
    """
    cache = Cache(maxsize=maxsize)

    def cached(func):
        @wraps(func)
        def cached_wrapper(*args):
            entry, found = cache.get(args)
            if found:
                logger.debug('%s cache hit for %r', func.__name__, args)
                return entry
            entry = func(*args)
            cache.add(args, entry)
            return entry
        cached_wrapper.cache = cache
        cached_wrapper.cache_clear = cache.clear
        return cached_wrapper
    return cached
