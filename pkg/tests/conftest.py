from fractions import Fraction

import pytest
from hypothesis import settings

from moranwalk import ModelParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

SMALL_P = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4)]
# 20 exact points strictly inside (0.05, 0.95)
P_GRID = [Fraction(29 + 18 * k, 400) for k in range(20)]


@pytest.fixture
def half():
    return ModelParams(Fraction(1, 2))


@pytest.fixture
def third():
    return ModelParams(Fraction(1, 3))
