"""
pytest Configuration and Fixtures
==================================
Centralized pytest configuration including:
- Test markers
- Configuration fixture (fresh ConfigLoader per test)
- Session caches for enumerated spectra and adjacency structures
- HTML report title (when pytest-html is installed)
"""

import logging

import pytest

from utils.config_loader import ConfigLoader, load_config


# ============================================================================
# pytest Configuration
# ============================================================================

def pytest_configure(config):
    """Register custom markers"""
    config.addinivalue_line(
        "markers", "smoke: mark test as a smoke test"
    )
    config.addinivalue_line(
        "markers", "regression: mark test as a regression test"
    )
    config.addinivalue_line(
        "markers", "oracle: mark test as using the literal Cayley graph"
    )
    config.addinivalue_line(
        "markers", "slow: mark test as slow running"
    )


@pytest.hookimpl(optionalhook=True)
def pytest_html_report_title(report):
    """Customize HTML report title"""
    report.title = "Queen-Spectra Test Report"


# ============================================================================
# Fixtures - Configuration
# ============================================================================

@pytest.fixture(scope="function")
def config():
    """
    Load application configuration.

    Returns:
        dict: Application configuration
    """
    ConfigLoader().reload()
    return load_config()


@pytest.fixture(autouse=True)
def _quiet_package_logs():
    """Reset the package logger after CLI runs that attached handlers to captured streams."""
    yield
    logger = logging.getLogger("src")
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
    logger.setLevel(logging.WARNING)
    logger.propagate = True


# ============================================================================
# Fixtures - Cached Computations
# ============================================================================

@pytest.fixture(scope="session")
def enumerated():
    """
    Memoized spectrum_by_enumeration(n).

    Usage:
        table = enumerated(11)
    """
    from src.spectrum import spectrum_by_enumeration

    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = spectrum_by_enumeration(n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def adjacency():
    """Memoized build_adjacency(n)."""
    from src.graph_oracle import build_adjacency

    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = build_adjacency(n)
        return cache[n]

    return get
