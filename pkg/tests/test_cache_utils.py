import json
import os
from datetime import datetime, timedelta

import cache_utils
from cache_utils import EnumerationCache


def test_make_key_is_canonical():
    a = EnumerationCache.make_key("roots", gram=[[2]], norm=2, box=1)
    b = EnumerationCache.make_key("roots", box=1, norm=2, gram=[[2]])
    assert a == b
    assert a != EnumerationCache.make_key("roots", gram=[[2]], norm=2, box=2)
    assert a != EnumerationCache.make_key("delta", gram=[[2]], norm=2, box=1)


def test_set_get_and_persist(tmp_path):
    cache = EnumerationCache(cache_dir=str(tmp_path))
    key = cache.make_key("roots", gram=[[2]], norm=2, box=1)
    assert cache.get(key) is None
    cache.set(key, [[-1], [1]], "A1 roots")
    assert cache.get(key) == [[-1], [1]]
    reloaded = EnumerationCache(cache_dir=str(tmp_path))
    assert reloaded.get(key) == [[-1], [1]]
    stats = reloaded.get_stats()
    assert stats["total_entries"] == 1
    assert stats["total_vectors"] == 2
    assert stats["cache_size_bytes"] > 0


def test_expired_entries_are_dropped(tmp_path):
    stale = (datetime.now() - timedelta(days=40)).isoformat()
    (tmp_path / "enumeration_cache.json").write_text(json.dumps({
        "old": {"vectors": [[1]], "timestamp": stale, "label": "old"},
        "new": {"vectors": [[2]], "timestamp": datetime.now().isoformat(), "label": "new"},
    }), encoding="utf-8")
    cache = EnumerationCache(cache_dir=str(tmp_path), max_age_days=30)
    assert cache.get("old") is None
    assert cache.get("new") == [[2]]


def test_corrupt_cache_file_is_ignored(tmp_path):
    (tmp_path / "enumeration_cache.json").write_text("{not json", encoding="utf-8")
    cache = EnumerationCache(cache_dir=str(tmp_path))
    assert cache.cache == {}


def test_disabled_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("STABLAB_CACHE_ENABLED", "false")
    cache = EnumerationCache(cache_dir=str(tmp_path))
    cache.set("key", [[1]])
    assert cache.get("key") is None
    assert not os.path.exists(cache.cache_file)


def test_clear(tmp_path):
    cache = EnumerationCache(cache_dir=str(tmp_path))
    cache.set("key", [[1]])
    cache.clear()
    assert cache.get("key") is None
    assert cache.get_stats()["total_entries"] == 0


def test_global_cache_follows_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("STABLAB_CACHE_DIR", str(tmp_path / "elsewhere"))
    cache_utils.reset_cache()
    cache_utils.cache_vectors("key", [[3]], "three")
    assert cache_utils.get_cached_vectors("key") == [[3]]
    assert os.path.exists(tmp_path / "elsewhere" / "enumeration_cache.json")
    cache_utils.clear_cache()
    assert cache_utils.get_cache_stats()["total_entries"] == 0
