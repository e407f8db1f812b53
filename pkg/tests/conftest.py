from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from steklov_trees import BoundaryTree, build_tree, gen_ball, gen_path, gen_random_tree

settings.register_profile(
    "suite",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")

# hand-written edge lists, independent of the generators
BALL32_EDGES = ((0, 1), (0, 2), (0, 3), (1, 4), (1, 5), (2, 6), (2, 7), (3, 8), (3, 9))
K13_EDGES = ((0, 1), (0, 2), (0, 3))
PATH4_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4))
STAR5_EDGES = ((0, 1), (0, 2), (0, 3), (0, 4), (0, 5))
CATERPILLAR_EDGES = ((0, 1), (1, 2), (2, 3), (3, 4), (1, 5), (2, 6), (2, 7), (3, 8))


@pytest.fixture
def ball32() -> BoundaryTree:
    return build_tree(BALL32_EDGES)


@pytest.fixture
def k13() -> BoundaryTree:
    return build_tree(K13_EDGES)


@pytest.fixture
def path4() -> BoundaryTree:
    return build_tree(PATH4_EDGES)


@pytest.fixture
def star5() -> BoundaryTree:
    return build_tree(STAR5_EDGES)


@pytest.fixture
def caterpillar() -> BoundaryTree:
    return build_tree(CATERPILLAR_EDGES)


def zoo() -> list[BoundaryTree]:
    """Small cross-section of shapes for parametrized invariant tests."""
    return [
        build_tree(BALL32_EDGES),
        build_tree(K13_EDGES),
        build_tree(PATH4_EDGES),
        build_tree(STAR5_EDGES),
        build_tree(CATERPILLAR_EDGES),
        gen_ball(4, 2),
        gen_path(11),
        gen_random_tree(24, 4, 12345),
        gen_random_tree(40, 6, 999),
    ]
