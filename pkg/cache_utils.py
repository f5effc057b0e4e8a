"""
Cache utilities for StabLab.

This module stores the results of expensive box enumerations (ADE root sets,
(-2)-class scans) in a local JSON file so repeated runs skip the scan.
Cached entries are the exact computed lists, so a cache hit never changes
an output.
"""

import hashlib
import json
import os
import threading
from datetime import datetime, timedelta
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv

from console_utils import debug, status, warn

load_dotenv()

Vectors = List[List[int]]


class EnumerationCache:
    """Cache for lattice enumeration results."""

    def __init__(self, cache_dir: Optional[str] = None, max_age_days: Optional[int] = None,
                 enabled: Optional[bool] = None):
        """
        Initialize the cache.

        Args:
            cache_dir (str): Directory to store cache files (STABLAB_CACHE_DIR)
            max_age_days (int): Maximum age of cached data in days
            enabled (bool): Turn the cache off entirely (STABLAB_CACHE_ENABLED)
        """
        self.cache_dir = cache_dir or os.getenv("STABLAB_CACHE_DIR", "data/cache")
        self.max_age_days = max_age_days if max_age_days is not None else int(
            os.getenv("STABLAB_CACHE_MAX_AGE_DAYS", "30"))
        if enabled is None:
            enabled = os.getenv("STABLAB_CACHE_ENABLED", "true").strip().lower() in ("1", "true", "yes")
        self.enabled = enabled
        self.cache_file = os.path.join(self.cache_dir, "enumeration_cache.json")
        self._lock = threading.Lock()
        self.cache: Dict[str, Any] = self._load_cache() if self.enabled else {}

    def _load_cache(self) -> Dict[str, Any]:
        """Load cache from file, dropping expired entries."""
        try:
            if os.path.exists(self.cache_file):
                with open(self.cache_file, "r", encoding="utf-8") as f:
                    cache_data = json.load(f)

                current_time = datetime.now()
                cleaned_cache = {}
                for key, entry in cache_data.items():
                    cached_time = datetime.fromisoformat(entry["timestamp"])
                    if current_time - cached_time < timedelta(days=self.max_age_days):
                        cleaned_cache[key] = entry
                    else:
                        debug(f"Removing expired cache entry: {entry.get('label', key)}")
                return cleaned_cache
            return {}
        except Exception as e:
            warn(f"Error loading cache: {e}")
            return {}

    def _save_cache(self):
        """Save cache to file."""
        try:
            os.makedirs(self.cache_dir, exist_ok=True)
            # selftest workers may store results concurrently
            with self._lock, open(self.cache_file, "w", encoding="utf-8") as f:
                json.dump(self.cache, f, indent=2, sort_keys=True)
        except Exception as e:
            warn(f"Error saving cache: {e}")

    @staticmethod
    def make_key(kind: str, **params: Any) -> str:
        """
        Generate a cache key from a request description.

        Args:
            kind (str): what was enumerated, e.g. "roots" or "delta"
            **params: the JSON-serialisable inputs that determine the result

        Returns:
            str: md5 hex digest of the canonical description
        """
        canonical = json.dumps({"kind": kind, **params}, sort_keys=True, separators=(",", ":"))
        return hashlib.md5(canonical.encode()).hexdigest()

    def get(self, key: str) -> Optional[Vectors]:
        """
        Get a cached enumeration.

        Args:
            key (str): key from make_key

        Returns:
            Optional[List[List[int]]]: the cached vectors if present and fresh
        """
        if not self.enabled or key not in self.cache:
            return None
        entry = self.cache[key]
        cached_time = datetime.fromisoformat(entry["timestamp"])
        if datetime.now() - cached_time < timedelta(days=self.max_age_days):
            debug(f"Using cached {entry.get('label', key)} (cached {cached_time.strftime('%Y-%m-%d %H:%M')})")
            return entry["vectors"]
        debug(f"Cache expired for {entry.get('label', key)}")
        del self.cache[key]
        self._save_cache()
        return None

    def set(self, key: str, vectors: Vectors, label: str = ""):
        """
        Cache an enumeration result.

        Args:
            key (str): key from make_key
            vectors (List[List[int]]): the enumerated vectors
            label (str): human-readable description for messages
        """
        if not self.enabled:
            return
        entry = {
            "vectors": vectors,
            "timestamp": datetime.now().isoformat(),
            "label": label,
        }
        with self._lock:
            self.cache = {**self.cache, key: entry}
        self._save_cache()
        status(f"💾 Cached {len(vectors)} vectors for {label or key}")

    def clear(self):
        """Clear all cached data."""
        self.cache = {}
        self._save_cache()
        status("🗑️  Cache cleared")

    def get_stats(self) -> Dict[str, Any]:
        """Get cache statistics."""
        cache_size = 0
        if os.path.exists(self.cache_file):
            cache_size = os.path.getsize(self.cache_file)
        return {
            "enabled": self.enabled,
            "total_entries": len(self.cache),
            "total_vectors": sum(len(entry["vectors"]) for entry in self.cache.values()),
            "cache_size_bytes": cache_size,
            "cache_size_mb": round(cache_size / (1024 * 1024), 2),
            "max_age_days": self.max_age_days,
        }


# Global cache instance, created on first use so tests can redirect it
_enumeration_cache: Optional[EnumerationCache] = None


def get_cache() -> EnumerationCache:
    global _enumeration_cache
    if _enumeration_cache is None:
        _enumeration_cache = EnumerationCache()
    return _enumeration_cache


def reset_cache(cache: Optional[EnumerationCache] = None):
    """Replace the global cache (None re-reads the environment on next use)."""
    global _enumeration_cache
    _enumeration_cache = cache


def get_cached_vectors(key: str) -> Optional[Vectors]:
    return get_cache().get(key)


def cache_vectors(key: str, vectors: Vectors, label: str = ""):
    get_cache().set(key, vectors, label)


def clear_cache():
    """Clear all cached data."""
    get_cache().clear()


def get_cache_stats() -> Dict[str, Any]:
    """
    Get cache statistics.

    Returns:
        Dict[str, Any]: Cache statistics
    """
    return get_cache().get_stats()
