import json
import os
import time

import pytest

from weylith import cache


def _entry(directory, key, size, age):
    path = cache.store(directory, key, {"pad": "x" * size})
    t = time.time() - age
    os.utime(path, (t, t))
    return path


def test_resolve_order(monkeypatch, tmp_path):
    monkeypatch.delenv(cache.ENV_VAR, raising=False)
    assert str(cache.resolve_cache_dir()) == cache.DEFAULT_DIR
    monkeypatch.setenv(cache.ENV_VAR, str(tmp_path / "env"))
    assert cache.resolve_cache_dir() == tmp_path / "env"
    assert cache.resolve_cache_dir(tmp_path / "flag") == tmp_path / "flag"


def test_key_ignores_dict_order():
    assert cache.cache_key({"a": 1, "b": [2]}) == cache.cache_key({"b": [2], "a": 1})
    assert cache.cache_key({"a": 1}) != cache.cache_key({"a": 2})


def test_store_load_roundtrip(tmp_path):
    cache.store(tmp_path, "k", {"x": [1, "2/3"]})
    assert cache.load(tmp_path, "k") == {"x": [1, "2/3"]}
    assert cache.load(tmp_path, "missing") is None
    assert not list(tmp_path.glob("*.tmp"))


def test_unreadable_entry_is_a_miss(tmp_path):
    (tmp_path / "bad.json").write_text("{not json")
    assert cache.load(tmp_path, "bad") is None


def test_gc_on_empty_directory(tmp_path):
    rep = cache.cache_gc(tmp_path, 0)
    assert rep.removed == [] and rep.freed_bytes == 0 and rep.remaining_bytes == 0


def test_gc_missing_directory(tmp_path):
    with pytest.raises(FileNotFoundError):
        cache.cache_gc(tmp_path / "nope", 0)


def test_gc_removes_oldest_first(tmp_path):
    old = _entry(tmp_path, "old", 1000, 300)
    mid = _entry(tmp_path, "mid", 1000, 200)
    new = _entry(tmp_path, "new", 1000, 100)
    limit = new.stat().st_size + mid.stat().st_size
    rep = cache.cache_gc(tmp_path, limit)
    assert rep.removed == ["old.json"]
    assert not old.exists() and mid.exists() and new.exists()
    assert rep.remaining_bytes == limit
    assert cache.cache_gc(tmp_path, 10 ** 9).removed == []


def test_load_refreshes_recency(tmp_path):
    a = _entry(tmp_path, "a", 500, 300)
    b = _entry(tmp_path, "b", 500, 200)
    cache.load(tmp_path, "a")
    cache.cache_gc(tmp_path, a.stat().st_size)
    assert a.exists() and not b.exists()


def test_gc_leaves_temporary_files(tmp_path):
    _entry(tmp_path, "a", 100, 10)
    tmp = tmp_path / "a-inflight.tmp"
    tmp.write_text("x" * 5000)
    rep = cache.cache_gc(tmp_path, 0)
    assert rep.removed == ["a.json"] and tmp.exists()


def test_failed_write_leaves_no_debris(tmp_path):
    with pytest.raises(TypeError):
        cache.store(tmp_path, "k", {"x": object()})
    assert list(tmp_path.iterdir()) == []


def test_overwrite_is_atomic(tmp_path):
    cache.store(tmp_path, "k", {"v": 1})
    cache.store(tmp_path, "k", {"v": 2})
    assert json.loads((tmp_path / "k.json").read_text()) == {"v": 2}
