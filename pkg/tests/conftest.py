import math

import pytest

from leafcycle import (
    BivarPoly,
    LaurentPoly,
    LoopSpec,
    RationalFunc1,
    RationalMapC2,
    VectorFieldC2,
)

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


Z = BivarPoly.z()
W = BivarPoly.w()
CURVE = Z**2 + W**2 + 1


def cycle_field():
    return VectorFieldC2(W + Z * CURVE, -Z + W * CURVE)


def cycle_map():
    z_of_t = RationalFunc1.from_laurent(LaurentPoly({1: 0.5j, -1: 0.5j}))
    w_of_t = RationalFunc1.from_laurent(LaurentPoly({1: 0.5, -1: -0.5}))
    return RationalMapC2(z_of_t, w_of_t)


def axis_map():
    """``t -> (t, 0)``: the leaf ``w = 0`` of diagonal linear fields."""
    return RationalMapC2(RationalFunc1([0, 1]), RationalFunc1([0]))


def linear_field(lam):
    return VectorFieldC2(Z, lam * W)


@pytest.fixture
def V():
    return cycle_field()


@pytest.fixture
def F():
    return CURVE


@pytest.fixture
def phi():
    return cycle_map()


@pytest.fixture
def loop_ccw():
    return LoopSpec(1.0, "ccw", cycle_map())


@pytest.fixture
def loop_cw():
    return LoopSpec(1.0, "cw", cycle_map())


FOUR_PI = 4 * math.pi
