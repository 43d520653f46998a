"""Adaptive Dormand-Prince 5(4) integrator for complex-valued ODEs in a real
parameter."""

from dataclasses import dataclass, field

import numpy as np

from .errors import StiffnessError

# Butcher tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
_B4 = (5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40)
_E = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


@dataclass
class ODEStats:
    steps: int = 0
    rejected: int = 0
    evaluations: int = 0
    trace: list = field(default_factory=list)


def dopri45(f, y0, s0, s1, rtol=1e-10, atol=1e-12, h0=None, max_steps=200_000,
            on_step=None, record=False):
    """Integrate ``y' = f(s, y)`` from ``s0`` to ``s1``; returns ``(y1, stats)``.

    ``y0`` may be a complex scalar or array.  ``on_step(s, y)`` is called on
    every accepted step and may raise to abort.  With ``record`` the
    accepted ``(s, y)`` pairs are kept in ``stats.trace``.
    """
    y = np.asarray(y0, dtype=complex)
    span = s1 - s0
    direction = 1.0 if span >= 0 else -1.0
    h = abs(span) / 100 if h0 is None else abs(h0)
    h_min = 1e-14 * max(1.0, abs(span))
    s = s0
    stats = ODEStats()
    if record:
        stats.trace.append((s, y.copy()))
    k1 = f(s, y)
    stats.evaluations += 1

    while direction * (s1 - s) > 0:
        if stats.steps + stats.rejected >= max_steps:
            raise StiffnessError(f"exceeded {max_steps} steps at s={s:.6g}")
        h = min(h, abs(s1 - s))
        hs = direction * h
        ks = [k1]
        for i in range(1, 7):
            yi = y + hs * sum(a * k for a, k in zip(_A[i], ks))
            ks.append(f(s + _C[i] * hs, yi))
        stats.evaluations += 6
        y_new = y + hs * sum(b * k for b, k in zip(_B5, ks) if b)
        err_vec = hs * sum(e * k for e, k in zip(_E, ks) if e)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.sqrt(np.mean(np.abs(err_vec / scale) ** 2)))

        if err <= 1.0:
            s = s + hs
            y = y_new
            k1 = ks[6]  # first-same-as-last
            stats.steps += 1
            if record:
                stats.trace.append((s, y.copy()))
            if on_step is not None:
                on_step(s, y)
            factor = _MAX_FACTOR if err == 0 else min(_MAX_FACTOR, _SAFETY * err ** -0.2)
            h *= factor
        else:
            stats.rejected += 1
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            if h < h_min:
                raise StiffnessError(f"step size underflow at s={s:.6g}")
    return (y[()] if y.ndim == 0 else y), stats
