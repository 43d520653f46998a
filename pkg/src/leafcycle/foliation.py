"""Polynomial vector fields on C^2, their dual 1-forms, invariant curves and
the integrability form alpha satisfying d(omega) = alpha ^ omega."""

from dataclasses import dataclass

import numpy as np

from .algebra import BivarPoly, ZERO_TOL, exact_divide, partial_derivative
from .errors import DegenerateFieldError


@dataclass(frozen=True)
class VectorFieldC2:
    """``z' = P(z, w)``, ``w' = Q(z, w)``."""

    P: BivarPoly
    Q: BivarPoly

    def __post_init__(self):
        if self.P.is_zero() and self.Q.is_zero():
            raise ValueError("vector field is identically zero")

    def __call__(self, z, w):
        return self.P(z, w), self.Q(z, w)

    def scaled(self, c):
        return VectorFieldC2(self.P * c, self.Q * c)

    @property
    def divergence(self):
        return partial_derivative(self.P, "z") + partial_derivative(self.Q, "w")

    def to_json(self):
        return {"P": self.P.to_json(), "Q": self.Q.to_json()}

    @classmethod
    def from_json(cls, data):
        return cls(BivarPoly.from_json(data["P"]), BivarPoly.from_json(data["Q"]))


@dataclass(frozen=True)
class PolyOneForm:
    """``A dz + B dw`` with polynomial coefficients."""

    A: BivarPoly
    B: BivarPoly

    def __post_init__(self):
        if self.A.is_zero() and self.B.is_zero():
            raise ValueError("1-form is identically zero")

    def __call__(self, z, w, vz, vw):
        """Evaluate the form at ``(z, w)`` on the tangent vector ``(vz, vw)``."""
        return self.A(z, w) * vz + self.B(z, w) * vw

    def as_rational(self):
        one = BivarPoly.const(1)
        return RationalOneForm(self.A, one, self.B, one)


@dataclass(frozen=True)
class RationalOneForm:
    """``(a_num/a_den) dz + (b_num/b_den) dw``."""

    a_num: BivarPoly
    a_den: BivarPoly
    b_num: BivarPoly
    b_den: BivarPoly

    def __post_init__(self):
        if self.a_den.is_zero() or self.b_den.is_zero():
            raise ValueError("rational 1-form with zero denominator")

    def __call__(self, z, w, vz, vw):
        return (self.a_num(z, w) / self.a_den(z, w) * vz
                + self.b_num(z, w) / self.b_den(z, w) * vw)

    def is_zero(self):
        return self.a_num.is_zero() and self.b_num.is_zero()

    def to_json(self):
        return {
            "dz": {"num": self.a_num.to_json(), "den": self.a_den.to_json()},
            "dw": {"num": self.b_num.to_json(), "den": self.b_den.to_json()},
        }


def dual_one_form(V):
    return PolyOneForm(-V.Q, V.P)


def lie_derivative(V, F):
    """Derivative of ``F`` along ``V``: ``P F_z + Q F_w``."""
    return V.P * partial_derivative(F, "z") + V.Q * partial_derivative(F, "w")


def invariant_cofactor(V, F):
    """Cofactor ``K`` with ``V(F) = K F``, or ``None`` if ``F = 0`` is not invariant."""
    if F.is_zero():
        raise ValueError("candidate curve F is identically zero")
    return exact_divide(lie_derivative(V, F), F)


def alpha_form(V):
    """``alpha = (P_z + Q_w)/(P^2 + Q^2) * (P dz + Q dw)``.

    Both components share the denominator ``P^2 + Q^2``; numerators are
    expanded products.
    """
    den = V.P * V.P + V.Q * V.Q
    if den.is_zero():
        raise DegenerateFieldError("P^2 + Q^2 vanishes identically")
    g = V.divergence
    return RationalOneForm(g * V.P, den, g * V.Q, den)


def wedge_coefficient(alpha, omega):
    """Numerator and denominator of the dz^dw coefficient of ``alpha ^ omega``."""
    # (a dz + b dw) ^ (A dz + B dw) = (a B - b A) dz^dw
    num = (alpha.a_num * omega.B * alpha.b_den
           - alpha.b_num * omega.A * alpha.a_den)
    return num, alpha.a_den * alpha.b_den


def verify_integrability(V, tol=ZERO_TOL):
    """Check ``d(omega) == alpha ^ omega`` as a cross-multiplied polynomial identity."""
    alpha = alpha_form(V)
    omega = dual_one_form(V)
    # d(A dz + B dw) = (B_z - A_w) dz^dw, expanded independently of alpha_form
    d_omega = partial_derivative(omega.B, "z") - partial_derivative(omega.A, "w")
    num, den = wedge_coefficient(alpha, omega)
    residual = d_omega * den - num
    scale = max(1.0, num.max_abs_coeff())
    return residual.max_abs_coeff() <= tol * scale


def rational_forms_equal(f1, f2, tol=1e-10):
    """Equality of rational 1-forms by cross-multiplication."""
    lhs_a = f1.a_num * f2.a_den - f2.a_num * f1.a_den
    lhs_b = f1.b_num * f2.b_den - f2.b_num * f1.b_den
    scale = max(1.0, (f1.a_num * f2.a_den).max_abs_coeff(),
                (f1.b_num * f2.b_den).max_abs_coeff())
    return max(lhs_a.max_abs_coeff(), lhs_b.max_abs_coeff()) <= tol * scale


def field_gradients(V):
    """Cached partial derivatives ``(P_z, P_w, Q_z, Q_w)``."""
    return (partial_derivative(V.P, "z"), partial_derivative(V.P, "w"),
            partial_derivative(V.Q, "z"), partial_derivative(V.Q, "w"))


def restrictions_on_points(V, z, w):
    """Values of ``P_z + Q_w`` and ``P^2 + Q^2`` at the given points."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    p, q = V(z, w)
    return V.divergence(z, w), p * p + q * q
