"""
Общие фикстуры: отображения tent и g и их контексты построения.
"""
import os

# Файловые логи в тестах не нужны
os.environ.setdefault("SHARKTOWER_LOG_DIR", "")

from fractions import Fraction

import pytest

from app.construct import base_context
from app.periodic import orbit_from_points, smallest_diameter_orbit
from app.pwl import example_g, tent
from app.towers import assemble_tower


@pytest.fixture(scope="session")
def T():
    return tent()


@pytest.fixture(scope="session")
def g():
    return example_g()


@pytest.fixture(scope="session")
def g_ctx(g):
    return base_context(g, orbit_from_points(g, [0, Fraction(1, 2), 1]))


@pytest.fixture(scope="session")
def tent_ctx(T):
    return base_context(T, smallest_diameter_orbit(T, 3))


@pytest.fixture(scope="session")
def g_tower(g_ctx):
    return assemble_tower(g_ctx, 1, 1)
