import threading

from src.qseries.cache import CoefficientCache, get_cache
from src.qseries.pochhammer import q_binomial_row


def test_least_recently_used_entry_is_evicted():
    cache = CoefficientCache(max_size=2)
    cache.put("a", (1.0,))
    cache.put("b", (2.0,))
    assert cache.get("a") == (1.0,)
    cache.put("c", (3.0,))
    assert cache.get("b") is None
    assert cache.get("a") == (1.0,)
    assert len(cache) == 2


def test_builder_runs_once():
    cache = CoefficientCache()
    calls = []

    def build():
        calls.append(1)
        return (1.0, 2.0)

    assert cache.get_or_build("k", build) == (1.0, 2.0)
    assert cache.get_or_build("k", build) == (1.0, 2.0)
    assert len(calls) == 1


def test_clear_empties_cache():
    cache = CoefficientCache()
    cache.put("k", (1.0,))
    cache.clear()
    assert len(cache) == 0
    assert cache.get("k") is None


def test_concurrent_builders_agree():
    cache = CoefficientCache()
    results = []

    def worker():
        results.append(cache.get_or_build("row", lambda: tuple(float(i) for i in range(100))))

    threads = [threading.Thread(target=worker) for _ in range(8)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()
    assert len(results) == 8
    assert all(result == results[0] for result in results)


def test_q_binomial_table_is_cached():
    q_binomial_row(5, 0.37)
    assert get_cache().get(("q_binomial", 0.37)) is not None


def test_stats_count_hits_and_misses():
    cache = CoefficientCache(max_size=1)
    cache.get_or_build(("q_binomial", 0.5), lambda: (1.0,))
    cache.get_or_build(("q_binomial", 0.5), lambda: (2.0,))
    cache.put(("q_binomial", 0.25), (3.0,))
    assert cache.stats() == {"hits": 1, "misses": 1, "tables": 1}
    assert cache.get(("q_binomial", 0.5)) is None
    cache.clear()
    assert cache.stats() == {"hits": 0, "misses": 0, "tables": 0}
