#!/usr/bin/env python3
"""
Pytest configuration and fixtures
Shared test fixtures and configuration for all tests.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add project root to path
project_root = Path(__file__).parent.parent
sys.path.insert(0, str(project_root))


@pytest.fixture
def rng():
    """Seeded generator so every test run sees the same instances"""
    return np.random.default_rng(20240611)


@pytest.fixture
def plane():
    """Exact Euclidean oracle in R^2"""
    from engine.metric_oracles import euclidean_oracle

    return euclidean_oracle(2)


@pytest.fixture
def line_oracle():
    """Exact Euclidean oracle in R^1"""
    from engine.metric_oracles import euclidean_oracle

    return euclidean_oracle(1)


@pytest.fixture
def small_graph():
    """Path 0-1-2-3 with unit weights plus a heavy shortcut 0-3"""
    from engine.metric_oracles import WeightedGraph

    return WeightedGraph(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 5.0)])


@pytest.fixture
def square_curve(plane):
    """Unit square walked once: (0,0) (1,0) (1,1) (0,1)"""
    from engine.curve_model import build_curve

    return build_curve([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)], plane)


@pytest.fixture(autouse=True)
def reset_config(monkeypatch):
    """Start every test from the default configuration"""
    from utils.read_config import invalidate_config_cache

    for key in (
        "PFRECHET_EXACT_BUDGET",
        "PFRECHET_GRAPH_CACHE_SIZE",
        "PFRECHET_NN_LEAF_SIZE",
        "PFRECHET_BENCH_REPETITIONS",
    ):
        monkeypatch.delenv(key, raising=False)
    invalidate_config_cache()
    yield
    invalidate_config_cache()


# Markers for different test categories
def pytest_configure(config):
    """Configure custom markers"""
    config.addinivalue_line("markers", "slow: marks tests as slow (deselect with '-m \"not slow\"')")
    config.addinivalue_line("markers", "integration: marks tests as integration tests")
    config.addinivalue_line("markers", "unit: marks tests as unit tests")


# Timing-sensitive tests only run on request
def pytest_collection_modifyitems(config, items):
    """Modify test collection"""
    if not config.getoption("--run-integration", default=False):
        skip_integration = pytest.mark.skip(reason="need --run-integration option to run")
        for item in items:
            if "integration" in item.keywords:
                item.add_marker(skip_integration)


def pytest_addoption(parser):
    """Add custom command line options"""
    parser.addoption(
        "--run-integration",
        action="store_true",
        default=False,
        help="run integration tests"
    )
