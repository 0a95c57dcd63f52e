import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ultrasim import FiniteMapping

settings.register_profile(
    "suite",
    max_examples=60,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
    deadline=None,
)
settings.load_profile("suite")


@pytest.fixture
def isosceles_two_scale():
    """Four points, every triangle isosceles, two off-diagonal scales.

    d(x1, x2) = d(x2, x3) = h, every other off-diagonal pair = p.  Not
    realizable: the value relation contains both (h, p) and (p, h).
    """
    return FiniteMapping.from_labels(
        ("x1", "x2", "x3", "x4"),
        [
            ["z", "h", "p", "p"],
            ["h", "z", "h", "p"],
            ["p", "h", "z", "p"],
            ["p", "p", "p", "z"],
        ],
    )


def quadrilateral(s: str, t: str, d: str) -> FiniteMapping:
    """Four-point cycle with alternating sides s, t and both diagonals d."""
    return FiniteMapping.from_labels(
        ("x1", "x2", "x3", "x4"),
        [
            ["0", s, d, t],
            [s, "0", t, d],
            [d, t, "0", s],
            [t, d, s, "0"],
        ],
    )


@pytest.fixture
def equilateral_quadruple():
    """Pseudolinear quadruple with equal sides: sides 1, diagonals 2."""
    return quadrilateral("1", "1", "2")


@pytest.fixture
def scalene_quadruple():
    """Pseudolinear quadruple with sides 1 and 2, diagonals 3."""
    return quadrilateral("1", "2", "3")


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
