"""Shared fixtures: small canonical graphs used across the unit tests."""

import pytest

from sysrelax.topology import Graph


@pytest.fixture
def path4() -> Graph:
    """0 - 1 - 2 - 3"""
    return Graph(4, ((0, 1), (1, 2), (2, 3)))


@pytest.fixture
def star5() -> Graph:
    """Center 0 with leaves 1..4."""
    return Graph(5, ((0, 1), (0, 2), (0, 3), (0, 4)))


@pytest.fixture
def cycle4() -> Graph:
    """0 - 1 - 2 - 3 - 0: opposite nodes have two tied routes."""
    return Graph(4, ((0, 1), (1, 2), (2, 3), (0, 3)))
