"""Rational parametrizations of leaves, pullbacks of 1-forms and circle
integrals computed by residues and by trapezoidal quadrature."""

import math
from dataclasses import dataclass

import numpy as np

from .algebra import (
    POLE_CONTOUR_TOL,
    RationalFunc1,
    compose,
    rational_residues_in_disk,
)
from .errors import ConvergenceError, InconsistencyError, LeafMismatchError
from .foliation import PolyOneForm, alpha_form, dual_one_form

CROSS_CHECK_TOL = 1e-9
QUAD_START_NODES = 64
QUAD_MAX_NODES = 2**16

ORIENTATIONS = ("ccw", "cw")


def orientation_sign(orientation):
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be 'ccw' or 'cw', got {orientation!r}")
    return 1 if orientation == "ccw" else -1


@dataclass(frozen=True)
class RationalMapC2:
    """``t -> (z(t), w(t))`` with rational components."""

    z_of_t: RationalFunc1
    w_of_t: RationalFunc1

    def __call__(self, t):
        return self.z_of_t(t), self.w_of_t(t)

    def derivative(self):
        return RationalMapC2(self.z_of_t.derivative(), self.w_of_t.derivative())

    def to_json(self):
        return {"z": self.z_of_t.to_json(), "w": self.w_of_t.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(RationalFunc1.from_json(data["z"]), RationalFunc1.from_json(data["w"]))


@dataclass(frozen=True)
class LoopSpec:
    """Image under ``map`` of the circle ``|t| = radius``."""

    radius: float
    orientation: str
    map: RationalMapC2

    def __post_init__(self):
        if not self.radius > 0:
            raise ValueError("loop radius must be positive")
        orientation_sign(self.orientation)

    @property
    def sign(self):
        return orientation_sign(self.orientation)

    def reversed(self):
        return LoopSpec(self.radius, "cw" if self.orientation == "ccw" else "ccw", self.map)

    def with_radius(self, radius):
        return LoopSpec(radius, self.orientation, self.map)

    def to_json(self):
        return {"map": self.map.to_json(), "radius": self.radius,
                "orientation": self.orientation}

    @classmethod
    def from_json(cls, data):
        return cls(float(data["radius"]), data.get("orientation", "ccw"),
                   RationalMapC2.from_json(data["map"]))


def pullback(form, map):
    """dt-coefficient of ``form`` pulled back along ``map``.

    Accepts a ``PolyOneForm`` or a ``RationalOneForm``.
    """
    if isinstance(form, PolyOneForm):
        form = form.as_rational()
    zt, wt = map.z_of_t, map.w_of_t
    a = compose(form.a_num, zt, wt) * _reciprocal(compose(form.a_den, zt, wt))
    b = compose(form.b_num, zt, wt) * _reciprocal(compose(form.b_den, zt, wt))
    return a * zt.derivative() + b * wt.derivative()


def _reciprocal(r):
    return RationalFunc1(r.den, r.num)


def on_curve_check(map, F):
    """True iff ``F(z(t), w(t))`` reduces to the zero rational function."""
    return compose(F, map.z_of_t, map.w_of_t).is_zero()


def integrate_circle_residues(integrand, radius, orientation="ccw",
                              pole_contour_tol=POLE_CONTOUR_TOL):
    sign = orientation_sign(orientation)
    return sign * 2j * math.pi * rational_residues_in_disk(
        integrand, radius, pole_contour_tol=pole_contour_tol
    )


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    nodes: int
    last_delta: float


def integrate_circle_quadrature(integrand, radius, orientation="ccw", tol=1e-10,
                                start_nodes=QUAD_START_NODES, max_nodes=QUAD_MAX_NODES,
                                full_output=False):
    """Trapezoidal rule on ``|t| = radius`` with node doubling.

    ``integrand`` is any callable of ``t`` accepting numpy arrays (a
    ``RationalFunc1`` works directly).
    """
    sign = orientation_sign(orientation)

    def estimate(n):
        theta = 2 * math.pi * np.arange(n) / n
        t = radius * np.exp(1j * theta)
        # dt = i t dtheta
        return complex(np.sum(integrand(t) * 1j * t) * (2 * math.pi / n))

    n = start_nodes
    prev = estimate(n)
    while n < max_nodes:
        n *= 2
        cur = estimate(n)
        delta = abs(cur - prev)
        if delta < tol:
            value = sign * cur
            return QuadratureResult(value, n, delta) if full_output else value
        prev = cur
    raise ConvergenceError(
        f"trapezoidal rule did not converge to {tol:g} with {max_nodes} nodes"
    )


def is_leaf_loop(V, loop, F=None):
    """Leaf-membership test: ``F`` vanishes on the map, or omega pulls back to 0."""
    if F is not None:
        return on_curve_check(loop.map, F)
    return pullback(dual_one_form(V), loop.map).is_zero()


@dataclass(frozen=True)
class AlphaIntegral:
    """Loop integral of alpha with both evaluation routes."""

    orientation: str
    radius: float
    residue_value: complex
    quadrature_value: complex
    quadrature_nodes: int
    integrand: RationalFunc1

    @property
    def value(self):
        return self.residue_value

    @property
    def delta(self):
        return abs(self.residue_value - self.quadrature_value)

    def to_json(self):
        return {
            "orientation": self.orientation,
            "radius": self.radius,
            "value": {"re": self.value.real, "im": self.value.imag},
            "method": "residues",
            "quadrature": {
                "re": self.quadrature_value.real,
                "im": self.quadrature_value.imag,
                "nodes": self.quadrature_nodes,
            },
            "delta": self.delta,
        }


def alpha_integral(V, loop, F=None, cross_check_tol=CROSS_CHECK_TOL, quad_tol=1e-12):
    """Integrate alpha over ``loop`` by residues and, independently, by quadrature.

    The quadrature route evaluates alpha pointwise on the image of the circle
    and does not use the symbolic pullback.
    """
    if not is_leaf_loop(V, loop, F):
        raise LeafMismatchError("loop does not lie on a leaf of the vector field")
    alpha = alpha_form(V)
    integrand = pullback(alpha, loop.map)
    by_residues = integrate_circle_residues(integrand, loop.radius, loop.orientation)

    dmap = loop.map.derivative()

    def pointwise(t):
        z, w = loop.map(t)
        dz, dw = dmap(t)
        return alpha(z, w, dz, dw)

    quad = integrate_circle_quadrature(
        pointwise, loop.radius, loop.orientation, tol=quad_tol, full_output=True
    )
    result = AlphaIntegral(loop.orientation, loop.radius, by_residues, quad.value,
                           quad.nodes, integrand)
    if result.delta > cross_check_tol:
        raise InconsistencyError(
            f"residue value {by_residues:.12g} and quadrature value "
            f"{quad.value:.12g} differ by {result.delta:.3g}"
        )
    return result


def loop_integral_alpha(V, loop, F=None, cross_check_tol=CROSS_CHECK_TOL):
    return alpha_integral(V, loop, F, cross_check_tol).value
