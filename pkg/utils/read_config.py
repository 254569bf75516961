"""
Configuration module for pfrechet.
Reads settings from environment variables; every key has a default so the
library works without any configuration.
"""

import os
from typing import Any, Dict

from utils.logs import get_logger

# Module logger
config_logger = get_logger("read_config")

# In-memory cache
_config_cache: Dict[str, Any] = {}
_cache_loaded = False


def invalidate_config_cache():
    """Drop the cached configuration so the next read sees the environment again."""
    global _config_cache, _cache_loaded
    _config_cache = {}
    _cache_loaded = False
    config_logger.debug("🔧 Configuration cache invalidated")


def _get_env(key: str, default: Any = None, cast_type: type = str) -> Any:
    """Get environment variable with type casting."""
    value = os.environ.get(key, default)
    if value is None or value == "":
        return default

    if cast_type == bool:
        return str(value).lower() in ("true", "1", "yes", "on")
    elif cast_type == int:
        try:
            return int(value)
        except (ValueError, TypeError):
            config_logger.warning(f"⚠️ {key}={value!r} is not an integer, using {default}")
            return default
    elif cast_type == float:
        try:
            return float(value)
        except (ValueError, TypeError):
            config_logger.warning(f"⚠️ {key}={value!r} is not a number, using {default}")
            return default
    return value


def load_env_config() -> Dict[str, Any]:
    """
    Load configuration from environment variables.

    Returns:
        dict: Nested configuration with ``exact``, ``graph``, ``nn``,
        ``bench`` and ``logging`` sections.
    """
    return {
        "exact": {
            "budget": _get_env("PFRECHET_EXACT_BUDGET", 4_000_000, int),
        },
        "graph": {
            "cache_size": _get_env("PFRECHET_GRAPH_CACHE_SIZE", 4096, int),
        },
        "nn": {
            "leaf_size": _get_env("PFRECHET_NN_LEAF_SIZE", 16, int),
        },
        "bench": {
            "repetitions": _get_env("PFRECHET_BENCH_REPETITIONS", 5, int),
        },
        "logging": {
            "level": _get_env("LOG_LEVEL", "INFO"),
            "file": _get_env("PFRECHET_LOG_FILE", None),
        },
    }


def read_config() -> Dict[str, Any]:
    """
    Return the active configuration, loading it on first use.

    Returns:
        dict: The cached configuration dictionary.
    """
    global _config_cache, _cache_loaded
    if not _cache_loaded:
        _config_cache = load_env_config()
        _cache_loaded = True
        config_logger.debug(f"🔧 Configuration loaded: {_config_cache}")
    return _config_cache


def exact_budget() -> int:
    """Budget for the exact O(nm) baselines."""
    return read_config()["exact"]["budget"]
