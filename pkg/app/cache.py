"""
Модуль для кэширования результатов вычислений.
In-memory кэш с вытеснением по суммарному весу (LRU).

Все кэшируемые значения - чистые функции своих ключей, поэтому TTL не нужен:
попадание или промах в кэш никогда не меняет результат.
"""
import threading
from collections import OrderedDict
from functools import wraps
from typing import Any, Dict, Hashable, Optional, Tuple

from app import config
from app.logger import get_logger

logger = get_logger(__name__)


class SimpleCache:
    """Простой in-memory кэш с ограничением суммарного веса; операции потокобезопасны"""

    def __init__(self, max_weight: int, name: str = "cache"):
        """
        Args:
            max_weight: Максимальный суммарный вес записей
            name: Имя кэша для логов
        """
        self._cache: "OrderedDict[Hashable, Tuple[Any, int]]" = OrderedDict()
        self.max_weight = max_weight
        self.name = name
        self.weight = 0
        self.hits = 0
        self.misses = 0
        self._lock = threading.RLock()

    def get(self, key: Hashable) -> Optional[Any]:
        """Получить значение из кэша"""
        with self._lock:
            entry = self._cache.get(key)
            if entry is None:
                self.misses += 1
                return None
            self._cache.move_to_end(key)
            self.hits += 1
            return entry[0]

    def set(self, key: Hashable, value: Any, weight: int = 1) -> None:
        """Сохранить значение в кэш"""
        if weight > self.max_weight:
            logger.debug(f"{self.name}: value of weight {weight} exceeds budget, not cached")
            return
        with self._lock:
            self.delete(key)
            self._cache[key] = (value, weight)
            self.weight += weight
            self.cleanup()

    def delete(self, key: Hashable) -> None:
        """Удалить значение из кэша"""
        with self._lock:
            entry = self._cache.pop(key, None)
            if entry is not None:
                self.weight -= entry[1]

    def clear(self) -> None:
        """Очистить весь кэш"""
        with self._lock:
            self._cache.clear()
            self.weight = 0
            self.hits = 0
            self.misses = 0
        logger.debug(f"{self.name}: cleared")

    def cleanup(self) -> None:
        """Вытеснить самые старые записи, пока вес превышает бюджет"""
        evicted = 0
        with self._lock:
            while self.weight > self.max_weight and self._cache:
                _, (_, weight) = self._cache.popitem(last=False)
                self.weight -= weight
                evicted += 1
        if evicted:
            logger.debug(f"{self.name}: evicted {evicted} entries, weight now {self.weight}")

    def __len__(self) -> int:
        return len(self._cache)

    def stats(self) -> Dict[str, int]:
        with self._lock:
            return {"entries": len(self._cache), "weight": self.weight, "hits": self.hits, "misses": self.misses}


# Глобальные экземпляры кэша
_iterate_cache = SimpleCache(max_weight=config.ITERATE_CACHE_PIECES, name="iterates")
_result_cache = SimpleCache(max_weight=config.RESULT_CACHE_ENTRIES, name="results")


def get_cache() -> SimpleCache:
    """Получить глобальный кэш результатов"""
    return _result_cache


def get_iterate_cache() -> SimpleCache:
    """Получить глобальный кэш итераций (вес = число кусков)"""
    return _iterate_cache


def clear_all() -> None:
    _iterate_cache.clear()
    _result_cache.clear()


def cached(key_prefix: str = ""):
    """
    Декоратор для кэширования результатов чистой функции.
    Аргументы должны быть hashable; результат None не кэшируется.

    Args:
        key_prefix: Префикс для ключа кэша
    """
    def decorator(func):
        @wraps(func)
        def wrapper(*args, **kwargs):
            cache_key = (key_prefix, func.__qualname__, args, tuple(sorted(kwargs.items())))

            cached_value = _result_cache.get(cache_key)
            if cached_value is not None:
                return cached_value

            result = func(*args, **kwargs)

            if result is not None:
                _result_cache.set(cache_key, result)

            return result

        return wrapper

    return decorator
