"""Numerical holonomy along a loop in a leaf.

Nearby leaves are followed through the moving family of complex lines
``base(s) + c * normal(s)``, ``s`` in [0, 1].  The first variation h'(0) is
obtained from the linearized transport equation and, independently, from
central differences of full nonlinear lifts.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import CubicSpline

from .errors import (
    IllConditionedDerivativeError,
    SingularPointError,
    TransversalityError,
    TubeExitError,
)
from .foliation import field_gradients
from .ode import dopri45

ODE_RTOL = 1e-10
CLOSURE_TOL = 1e-8
TUBE_RADIUS = 1e-2
TRANSVERSALITY_FLOOR = 1e-6
FD_CONSISTENCY_TOL = 1e-3
SINGULAR_TOL = 1e-12
DEFAULT_SAMPLES = 256


class AnalyticBase:
    """Base loop ``s -> map(r exp(2 pi i sigma s))`` from a ``LoopSpec``."""

    def __init__(self, loop):
        self.loop = loop
        self._dmap = loop.map.derivative()
        self._omega = 2 * math.pi * loop.sign

    def __call__(self, s):
        t = self.loop.radius * np.exp(1j * self._omega * np.asarray(s, dtype=float))
        z, w = self.loop.map(t)
        dz, dw = self._dmap(t)
        dt = 1j * self._omega * t
        return np.array([z, w]), np.array([dz * dt, dw * dt])


class SplineBase:
    """Base loop through sampled points, closed by a periodic cubic spline.

    Points are taken at ``s = k/n``; the last point must not repeat the first.
    """

    def __init__(self, points):
        pts = np.asarray(points, dtype=complex)
        if pts.ndim != 2 or pts.shape[1] != 2 or len(pts) < 4:
            raise ValueError("polyline needs at least 4 points of shape (n, 2)")
        n = len(pts)
        s = np.arange(n + 1) / n
        closed = np.vstack([pts, pts[:1]])
        self._spline = CubicSpline(s, closed, bc_type="periodic")
        self._dspline = self._spline.derivative()

    def __call__(self, s):
        s = float(s) % 1.0
        return np.asarray(self._spline(s), dtype=complex), np.asarray(self._dspline(s), dtype=complex)


class FieldJet:
    """Joint scalar evaluation of ``P, Q`` and their first partials."""

    def __init__(self, V):
        polys = (V.P, V.Q) + field_gradients(V)
        self._terms = [tuple(p.terms.items()) for p in polys]
        self._iz = max((i for t in self._terms for (i, _), _ in t), default=0)
        self._jw = max((j for t in self._terms for (_, j), _ in t), default=0)

    def _tables(self, z, w):
        zp = [1.0 + 0j]
        for _ in range(self._iz):
            zp.append(zp[-1] * z)
        wp = [1.0 + 0j]
        for _ in range(self._jw):
            wp.append(wp[-1] * w)
        return zp, wp

    def field(self, z, w):
        zp, wp = self._tables(z, w)
        return tuple(sum(c * zp[i] * wp[j] for (i, j), c in t) + 0j for t in self._terms[:2])

    def jet(self, z, w):
        """``(P, Q, P_z, P_w, Q_z, Q_w)`` at ``(z, w)``."""
        zp, wp = self._tables(z, w)
        return tuple(sum(c * zp[i] * wp[j] for (i, j), c in t) + 0j for t in self._terms)


def _hermitian(u, v):
    return np.sum(u * np.conj(v))


@dataclass
class TransversalFrame:
    """Moving transversal ``normal(s)`` along ``base(s)``.

    The normal is the unit Hermitian complement of the field, phase-continued
    (no rotation within the complex line) and then realigned by a uniform
    winding so that it closes up at ``s = 1``.  An optional extra phase
    ``twist_amplitude * sin(2 pi s) + 2 pi twist_winding s`` yields other
    admissible frames.
    """

    V: object
    base: object
    samples: int
    _jet: FieldJet
    _modes: np.ndarray
    _slope: float
    twist_amplitude: float = 0.0
    twist_winding: int = 0
    diagnostics: dict = field(default_factory=dict)

    def field_at(self, x):
        return np.array(self._jet.field(complex(x[0]), complex(x[1])))

    def _hermitian_normal(self, x, dx):
        P, Q, Pz, Pw, Qz, Qw = self._jet.jet(complex(x[0]), complex(x[1]))
        dP = Pz * dx[0] + Pw * dx[1]
        dQ = Qz * dx[0] + Qw * dx[1]
        norm = math.sqrt(abs(P) ** 2 + abs(Q) ** 2)
        if norm < SINGULAR_TOL:
            raise SingularPointError(f"vector field vanishes on the loop near {x}")
        u = np.array([-np.conj(Q), np.conj(P)])
        du = np.array([-np.conj(dQ), np.conj(dP)])
        dnorm = (np.conj(P) * dP + np.conj(Q) * dQ).real / norm
        return u / norm, du / norm - u * dnorm / norm**2, norm

    def _phase(self, s):
        k = self._k
        e = np.exp(2j * math.pi * k * s)
        osc = -2 * np.sum(self._modes * e / (2j * math.pi * k)).real
        dosc = -2 * np.sum(self._modes * e).real
        tw = 2 * math.pi * s
        phase = self._slope * s + osc + self.twist_amplitude * math.sin(tw) + self.twist_winding * tw
        dphase = (self._slope + dosc + 2 * math.pi * self.twist_amplitude * math.cos(tw)
                  + 2 * math.pi * self.twist_winding)
        return phase, dphase

    def evaluate(self, s):
        """``(base, base_tangent, normal, normal_derivative)`` at ``s``."""
        x, dx = self.base(s)
        nh, dnh, _ = self._hermitian_normal(x, dx)
        phase, dphase = self._phase(s)
        rot = np.exp(1j * phase)
        return x, dx, nh * rot, (dnh + 1j * dphase * nh) * rot

    def normal(self, s):
        return self.evaluate(s)[2]


def omega_at(V, x, v, jet=None):
    """``omega_x(v)`` for ``omega = -Q dz + P dw``."""
    if jet is not None:
        P, Q = jet.field(complex(x[0]), complex(x[1]))
    else:
        P, Q = V.P(x[0], x[1]), V.Q(x[0], x[1])
    return -Q * v[0] + P * v[1]


def build_frame(V, loop=None, samples=DEFAULT_SAMPLES, *, base=None,
                twist_amplitude=0.0, twist_winding=0,
                transversality_floor=TRANSVERSALITY_FLOOR):
    """Transversal frame along ``loop`` (a ``LoopSpec``) or an explicit ``base``."""
    if base is None:
        base = AnalyticBase(loop)
    samples = int(samples)
    if samples < 8:
        raise ValueError("need at least 8 frame samples")
    frame = TransversalFrame(V, base, samples, FieldJet(V), np.zeros(0), 0.0,
                             twist_amplitude, twist_winding)

    # rotation rate of the Hermitian normal inside its own complex line
    s_grid = np.arange(samples) / samples
    rate = np.empty(samples)
    for k, s in enumerate(s_grid):
        x, dx = base(s)
        nh, dnh, _ = frame._hermitian_normal(x, dx)
        rate[k] = _hermitian(dnh, nh).imag
    coeffs = np.fft.rfft(rate) / samples
    mean = coeffs[0].real
    n_modes = (samples - 1) // 2
    modes = coeffs[1:n_modes + 1]
    # trailing modes at rounding level carry no information
    big = np.nonzero(np.abs(modes) > 1e-15 * max(1.0, abs(mean)))[0]
    frame._modes = modes[: big[-1] + 1] if big.size else modes[:0]
    frame._k = np.arange(1, len(frame._modes) + 1)
    # continuous transport accumulates phase -mean; round to a closed frame
    winding = round(-mean / (2 * math.pi))
    frame._slope = 2 * math.pi * winding
    mismatch = -mean - frame._slope

    min_omega = math.inf
    min_field = math.inf
    min_overlap = math.inf
    prev = None
    for s in s_grid:
        x, dx, n, _ = frame.evaluate(s)
        om = abs(omega_at(V, x, n))
        min_omega = min(min_omega, om)
        min_field = min(min_field, float(np.linalg.norm(frame.field_at(x))))
        if prev is not None:
            min_overlap = min(min_overlap, _hermitian(n, prev).real)
        prev = n
    if min_omega < transversality_floor:
        raise TransversalityError(
            f"|omega(normal)| = {min_omega:.3g} below floor {transversality_floor:g}"
        )
    x0, _, n0, _ = frame.evaluate(0.0)
    x1, _, n1, _ = frame.evaluate(1.0)
    frame.diagnostics = {
        "samples": samples,
        "phase_mismatch": float(mismatch),
        "phase_winding": int(winding),
        "min_transversality": float(min_omega),
        "min_field_norm": float(min_field),
        "min_neighbour_overlap": float(min_overlap),
        "base_closure": float(np.linalg.norm(x1 - x0)),
        "normal_closure": float(np.linalg.norm(n1 - n0)),
    }
    return frame


@dataclass
class HolonomyResult:
    derivative: complex
    method: str
    endpoint_offsets: list = field(default_factory=list)
    diagnostics: dict = field(default_factory=dict)

    @property
    def log_modulus(self):
        return math.log(abs(self.derivative))

    def to_json(self):
        return {
            "derivative": {"re": self.derivative.real, "im": self.derivative.imag},
            "abs": abs(self.derivative),
            "log_abs": self.log_modulus,
            "method": self.method,
            "endpoint_offsets": [
                {"c0": {"re": a.real, "im": a.imag}, "c1": {"re": b.real, "im": b.imag}}
                for a, b in self.endpoint_offsets
            ],
            "diagnostics": self.diagnostics,
        }


def lift_loop(V, frame, c0, rtol=ODE_RTOL, tube_radius=TUBE_RADIUS,
              transversality_floor=TRANSVERSALITY_FLOOR, full_output=False):
    """Follow the leaf through ``base(0) + c0 * normal(0)`` once around the loop.

    Returns ``c1`` with ``base(1) + c1 * normal(1)`` on the same leaf; with
    ``full_output`` returns ``(c1, stats)`` where ``stats.trace`` holds the
    accepted ``(s, c)`` samples.
    """
    c0 = complex(c0)

    def rhs(s, c):
        x, dx, n, dn = frame.evaluate(s)
        c = complex(c)
        P, Q = frame._jet.field(complex(x[0] + c * n[0]), complex(x[1] + c * n[1]))
        denom = -Q * n[0] + P * n[1]
        if abs(denom) < transversality_floor:
            raise TransversalityError(f"transversality lost at s={s:.6g}")
        return -(-Q * (dx[0] + c * dn[0]) + P * (dx[1] + c * dn[1])) / denom

    def guard(s, c):
        if abs(c) > tube_radius:
            raise TubeExitError(f"|c| = {abs(c):.3g} left the tube at s={s:.6g}")

    if abs(c0) > tube_radius:
        raise TubeExitError(f"|c0| = {abs(c0):.3g} exceeds tube radius {tube_radius:g}")
    # the trivial lift c0 = 0 only has to resolve the closure tolerance
    atol = rtol * abs(c0) * 1e-3 if c0 else CLOSURE_TOL * 1e-4
    c1, stats = dopri45(rhs, c0, 0.0, 1.0, rtol=rtol, atol=atol, on_step=guard, record=full_output)
    c1 = complex(c1)
    return (c1, stats) if full_output else c1


def transport_rate(V, frame, s):
    """Linearized transport coefficient ``mu(s)`` with ``c' = mu c`` at ``c = 0``."""
    x, dx, n, dn = frame.evaluate(s)
    P, Q, Pz, Pw, Qz, Qw = frame._jet.jet(complex(x[0]), complex(x[1]))
    dP = Pz * n[0] + Pw * n[1]
    dQ = Qz * n[0] + Qw * n[1]
    # directional derivative of omega's coefficients along the normal, applied to dx
    dn_omega = -dQ * dx[0] + dP * dx[1]
    return -(dn_omega + (-Q * dn[0] + P * dn[1])) / (-Q * n[0] + P * n[1])


def holonomy_derivative_variational(V, frame, rtol=ODE_RTOL):
    """h'(0) = exp(integral of mu over [0, 1])."""
    log_h, stats = dopri45(lambda s, _: transport_rate(V, frame, s), 0j, 0.0, 1.0,
                           rtol=rtol, atol=rtol)
    log_h = complex(log_h)
    diag = {
        "steps": stats.steps,
        "rejected_steps": stats.rejected,
        "log_derivative": {"re": log_h.real, "im": log_h.imag},
        "closure_error": frame.diagnostics["base_closure"] + frame.diagnostics["normal_closure"],
        "frame": dict(frame.diagnostics),
    }
    return HolonomyResult(complex(np.exp(log_h)), "variational", [], diag)


def holonomy_derivative_fd(V, frame, eps, rtol=ODE_RTOL, tube_radius=TUBE_RADIUS,
                           consistency_tol=FD_CONSISTENCY_TOL):
    """Richardson-extrapolated central differences of ``lift_loop``."""
    if not eps > 0:
        raise ValueError("eps must be positive")
    offsets = []
    steps = rejected = 0

    def lift(c):
        nonlocal steps, rejected
        c1, st = lift_loop(V, frame, c, rtol=rtol, tube_radius=tube_radius, full_output=True)
        steps += st.steps
        rejected += st.rejected
        offsets.append((complex(c), c1))
        return c1

    d_full = (lift(eps) - lift(-eps)) / (2 * eps)
    d_half = (lift(eps / 2) - lift(-eps / 2)) / eps
    extrapolated = (4 * d_half - d_full) / 3
    spread = abs(d_full - d_half) / max(abs(extrapolated), 1e-300)
    closure = abs(lift_loop(V, frame, 0.0, rtol=rtol, tube_radius=tube_radius))
    if spread > consistency_tol:
        raise IllConditionedDerivativeError(
            f"difference quotients at eps={eps:g} and eps/2 disagree by {spread:.3g} (relative)"
        )
    diag = {
        "steps": steps,
        "rejected_steps": rejected,
        "eps": eps,
        "richardson_spread": spread,
        "closure_error": closure,
        "frame": dict(frame.diagnostics),
    }
    return HolonomyResult(complex(extrapolated), "finite_difference", offsets, diag)
