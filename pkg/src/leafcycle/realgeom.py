"""Real points of real algebraic curves ``F(z, w) = 0`` in R^2.

Conics are decided exactly; higher degrees only get a grid search that
never certifies emptiness.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import minimize

from .algebra import BivarPoly, partial_derivative
from .errors import UnsupportedDegreeError


@dataclass(frozen=True)
class RealCurve:
    F: BivarPoly

    def __post_init__(self):
        if self.F.is_zero():
            raise ValueError("curve polynomial is identically zero")
        if not self.F.is_real():
            raise ValueError("curve polynomial has non-real coefficients")

    def coefficient(self, i, j):
        """Exact rational value of the real part of the ``z^i w^j`` coefficient."""
        return Fraction(self.F.terms.get((i, j), 0j).real)

    def __call__(self, z, w):
        return np.real(self.F(z, w))


@dataclass(frozen=True)
class RealPointsVerdict:
    empty: bool
    witness: tuple = None
    method: str = "conic"
    certified: bool = True

    def to_json(self):
        out = {"empty": self.empty, "method": self.method, "certified": self.certified}
        if self.witness is not None:
            out["witness"] = list(self.witness)
        return out


def _as_curve(F):
    return F if isinstance(F, RealCurve) else RealCurve(F)


def _quadratic_max_nonneg(p2, p1, p0):
    """Exact test: does ``p2 x^2 + p1 x + p0 >= 0`` hold for some real x?

    Returns a float witness ``x`` (preferring a root) or ``None``.
    """
    if p2 == 0:
        if p1 != 0:
            return float(-p0 / p1)
        return 0.0 if p0 >= 0 else None
    disc = p1 * p1 - 4 * p2 * p0
    if disc >= 0:
        root = math.sqrt(float(disc))
        candidates = [(-float(p1) + root) / (2 * float(p2)), (-float(p1) - root) / (2 * float(p2))]
        return max(candidates)
    if p2 > 0:
        # positive everywhere
        return float(-p1 / (2 * p2))
    return None


def _real_root_exists(c2, c1, c0):
    """Exact test for a real root of ``c2 x^2 + c1 x + c0``; returns one or ``None``."""
    if c2 == 0:
        if c1 == 0:
            return 0.0 if c0 == 0 else None
        return float(-c0 / c1)
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        return None
    return (-float(c1) + math.sqrt(float(disc))) / (2 * float(c2))


def conic_real_points(F):
    """Exact decision of whether a real conic has a real point.

    ``F`` is read as ``a w^2 + b(z) w + c(z)`` with constant ``a``, linear
    ``b`` and quadratic ``c``; all sign tests run in exact rational arithmetic
    on the binary values of the coefficients.
    """
    curve = _as_curve(F)
    if curve.F.degree > 2:
        raise UnsupportedDegreeError(f"degree {curve.F.degree} > 2; use sample_real_zeros")
    k = curve.coefficient
    a = k(0, 2)
    b1, b0 = k(1, 1), k(0, 1)
    c2, c1, c0 = k(2, 0), k(1, 0), k(0, 0)

    if a != 0:
        # discriminant in w as a polynomial in z
        d2 = b1 * b1 - 4 * a * c2
        d1 = 2 * b1 * b0 - 4 * a * c1
        d0 = b0 * b0 - 4 * a * c0
        z = _quadratic_max_nonneg(d2, d1, d0)
        if z is None:
            return RealPointsVerdict(True)
        a_f = float(a)
        b_z = float(b1) * z + float(b0)
        disc = max(0.0, float(d2) * z * z + float(d1) * z + float(d0))
        w = (-b_z + math.sqrt(disc)) / (2 * a_f)
        return RealPointsVerdict(False, _polish(curve, z, w))
    if b1 != 0 or b0 != 0:
        # linear in w with a non-vanishing slope somewhere
        z = 0.0 if b0 != 0 else 1.0
        b_z = float(b1) * z + float(b0)
        w = -(float(c2) * z * z + float(c1) * z + float(c0)) / b_z
        return RealPointsVerdict(False, _polish(curve, z, w))
    z = _real_root_exists(c2, c1, c0)
    if z is None:
        return RealPointsVerdict(True)
    return RealPointsVerdict(False, _polish(curve, z, 0.0))


def _polish(curve, z, w, steps=3):
    """A few Newton steps along the gradient to tighten a float witness."""
    Fz = partial_derivative(curve.F, "z")
    Fw = partial_derivative(curve.F, "w")
    for _ in range(steps):
        f = float(curve(z, w))
        if f == 0.0:
            break
        gz, gw = float(np.real(Fz(z, w))), float(np.real(Fw(z, w)))
        g2 = gz * gz + gw * gw
        if g2 == 0.0:
            break
        step_z, step_w = f * gz / g2, f * gw / g2
        nz, nw = z - step_z, w - step_w
        if abs(float(curve(nz, nw))) >= abs(f):
            break
        z, w = nz, nw
    return (float(z), float(w))


@dataclass(frozen=True)
class SampleResult:
    found: bool
    points: list = field(default_factory=list)
    min_abs: float = None
    min_location: tuple = None
    certificate_of_emptiness: bool = False

    def to_json(self):
        out = {
            "found": self.found,
            "points": [list(p) for p in self.points],
            "certificate_of_emptiness": self.certificate_of_emptiness,
        }
        if self.min_abs is not None:
            out["min_abs"] = self.min_abs
            out["min_location"] = list(self.min_location)
        return out


def _bisect(curve, p, q, iters=80, xtol=1e-13):
    fp = float(curve(*p))
    for _ in range(iters):
        if abs(q[0] - p[0]) + abs(q[1] - p[1]) < xtol:
            break
        m = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        fm = float(curve(*m))
        if fm == 0.0:
            return m
        if (fm > 0) == (fp > 0):
            p, fp = m, fm
        else:
            q = m
    return ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)


def sample_real_zeros(F, half_width=10.0, grid=200, max_points=200, zero_tol=1e-8):
    """Grid search for real zeros of ``F`` on ``[-half_width, half_width]^2``.

    Sign changes between horizontal and vertical grid neighbours are refined
    by bisection.  The grid minimum of ``|F|`` is refined by a local
    minimizer and reported either way; a ``none_found`` answer is never a
    certificate of emptiness.
    """
    curve = _as_curve(F)
    xs = np.linspace(-half_width, half_width, int(grid))
    Z, W = np.meshgrid(xs, xs, indexing="ij")
    vals = curve(Z, W)

    points = []
    sign = np.sign(vals)
    for axis in (0, 1):
        a = sign.take(range(0, grid - 1), axis=axis)
        b = sign.take(range(1, grid), axis=axis)
        idx = np.argwhere(a * b < 0)
        for i, j in idx:
            if len(points) >= max_points:
                break
            p = (Z[i, j], W[i, j])
            q = (Z[i + 1, j], W[i + 1, j]) if axis == 0 else (Z[i, j + 1], W[i, j + 1])
            points.append(tuple(float(v) for v in _bisect(curve, p, q)))
    for i, j in np.argwhere(vals == 0)[:max_points]:
        points.append((float(Z[i, j]), float(W[i, j])))

    i, j = np.unravel_index(np.argmin(np.abs(vals)), vals.shape)
    start = np.array([Z[i, j], W[i, j]])
    Fz = partial_derivative(curve.F, "z")
    Fw = partial_derivative(curve.F, "w")

    def objective(x):
        f = float(curve(x[0], x[1]))
        grad = 2 * f * np.array([float(np.real(Fz(x[0], x[1]))), float(np.real(Fw(x[0], x[1])))])
        return f * f, grad

    opt = minimize(objective, start, jac=True, method="BFGS",
                   options={"gtol": 1e-14, "maxiter": 500})
    loc = opt.x if opt.fun <= float(curve(*start)) ** 2 else start
    # touching zeros (e.g. a single real point) make |F|^2 very flat
    loc = _polish(curve, float(loc[0]), float(loc[1]), steps=60)
    min_abs = abs(float(curve(loc[0], loc[1])))
    min_location = (float(loc[0]), float(loc[1]))
    if min_abs < zero_tol and not points:
        points.append(min_location)
    return SampleResult(bool(points), points, min_abs, min_location, False)


def real_points(F, method="conic", half_width=10.0, grid=200):
    """Dispatch used by the CLI: exact for conics, sampling otherwise."""
    curve = _as_curve(F)
    if method == "conic":
        return conic_real_points(curve)
    if method == "sample":
        return sample_real_zeros(curve, half_width, grid)
    raise ValueError(f"unknown real-points method {method!r}")
