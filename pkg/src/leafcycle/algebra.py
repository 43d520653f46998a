"""Sparse bivariate polynomials, Laurent polynomials and one-variable
rational functions over complex double-precision coefficients.

All values are immutable.  Coefficients whose modulus falls below
``ZERO_TOL`` are dropped on construction, so two polynomials compare equal
exactly when their surviving term maps coincide.
"""

import math
from math import factorial
from types import MappingProxyType

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ContourCollisionError, ZeroDivisorError

ZERO_TOL = 1e-12
POLE_CONTOUR_TOL = 1e-8
POLE_CLUSTER_TOL = 1e-7
# companion eigenvalues of an m-fold root scatter by ~eps**(1/m); roots this
# close (relative) are candidates for merging, confirmed by a multiplicity test
POLE_SPLIT_RTOL = 1e-3
_MULTIPLICITY_RTOL = 1e-8
# relative test used when cancelling a common root of num and den
_COMMON_ROOT_RTOL = 1e-9


def _as_complex(c):
    c = complex(c)
    if not (math.isfinite(c.real) and math.isfinite(c.imag)):
        raise ValueError(f"non-finite coefficient {c!r}")
    return c


def _canonical(items):
    out = {}
    for key, c in items:
        c = _as_complex(c)
        if abs(c) >= ZERO_TOL:
            out[key] = c
    return out


def _fmt_coeff(c):
    if c.imag == 0:
        return f"{c.real:g}"
    if c.real == 0:
        return f"{c.imag:g}j"
    return f"({c.real:g}{c.imag:+g}j)"


class BivarPoly:
    """Polynomial in ``z`` and ``w`` stored as ``{(i, j): coeff}``."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        items = terms.items() if hasattr(terms, "items") else terms
        acc = {}
        for (i, j), c in items:
            i, j = int(i), int(j)
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent ({i}, {j})")
            acc[(i, j)] = acc.get((i, j), 0j) + _as_complex(c)
        self._terms = _canonical(acc.items())

    @classmethod
    def const(cls, c):
        return cls({(0, 0): c})

    @classmethod
    def z(cls):
        return cls({(1, 0): 1})

    @classmethod
    def w(cls):
        return cls({(0, 1): 1})

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def is_zero(self):
        return not self._terms

    @property
    def degree(self):
        """Total degree; ``-1`` for the zero polynomial."""
        return max((i + j for i, j in self._terms), default=-1)

    def degree_in(self, var):
        k = _var_index(var)
        return max((m[k] for m in self._terms), default=-1)

    def is_real(self, tol=ZERO_TOL):
        return all(abs(c.imag) < tol for c in self._terms.values())

    def max_abs_coeff(self):
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def leading_term(self):
        """Leading monomial and coefficient under graded-lex with z > w."""
        if not self._terms:
            return None
        m = max(self._terms, key=_grlex_key)
        return m, self._terms[m]

    # arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, BivarPoly):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return BivarPoly.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for m, c in other._terms.items():
            acc[m] = acc.get(m, 0j) + c
        return BivarPoly(acc)

    __radd__ = __add__

    def __neg__(self):
        return BivarPoly({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                m = (i1 + i2, j1 + j2)
                acc[m] = acc.get(m, 0j) + c1 * c2
        return BivarPoly(acc)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only non-negative integer powers are supported")
        out = BivarPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def allclose(self, other, tol=1e-10):
        diff = self - other
        return diff.max_abs_coeff() <= tol

    def __call__(self, z, w):
        """Evaluate at scalars or broadcastable numpy arrays."""
        if np.isscalar(z) and np.isscalar(w):
            return _eval_scalar(self._terms, complex(z), complex(w))
        z = np.asarray(z, dtype=complex)
        w = np.asarray(w, dtype=complex)
        out = np.zeros(np.broadcast(z, w).shape, dtype=complex)
        for (i, j), c in self._terms.items():
            out = out + c * z**i * w**j
        return out[()] if out.ndim == 0 else out

    def diff(self, var):
        return partial_derivative(self, var)

    def __repr__(self):
        if not self._terms:
            return "BivarPoly(0)"
        parts = []
        for (i, j) in sorted(self._terms, key=_grlex_key, reverse=True):
            mono = "*".join(
                s for s in (_power("z", i), _power("w", j)) if s
            )
            c = _fmt_coeff(self._terms[(i, j)])
            parts.append(f"{c}*{mono}" if mono else c)
        return "BivarPoly(" + " + ".join(parts) + ")"

    # JSON ---------------------------------------------------------------
    def to_json(self):
        return [
            {"i": i, "j": j, "re": c.real, "im": c.imag}
            for (i, j), c in sorted(self._terms.items())
        ]

    @classmethod
    def from_json(cls, data):
        return cls(((t["i"], t["j"]), complex(t["re"], t.get("im", 0.0))) for t in data)


def _power_table(x, n):
    out = [1.0 + 0j]
    for _ in range(n):
        out.append(out[-1] * x)
    return out


def _eval_scalar(terms, z, w):
    if not terms:
        return 0j
    zp = _power_table(z, max(i for i, _ in terms))
    wp = _power_table(w, max(j for _, j in terms))
    return sum(c * zp[i] * wp[j] for (i, j), c in terms.items())


def _power(name, k):
    if k == 0:
        return ""
    return name if k == 1 else f"{name}^{k}"


def _grlex_key(m):
    return (m[0] + m[1], m[0])


def _var_index(var):
    try:
        return {"z": 0, "w": 1}[var]
    except KeyError:
        raise ValueError(f"variable must be 'z' or 'w', got {var!r}") from None


def partial_derivative(p, var):
    k = _var_index(var)
    acc = {}
    for m, c in p.terms.items():
        e = m[k]
        if e == 0:
            continue
        nm = (m[0] - 1, m[1]) if k == 0 else (m[0], m[1] - 1)
        acc[nm] = c * e
    return BivarPoly(acc)


def divide_with_remainder(f, g):
    """Reduce ``f`` by the single divisor ``g`` under graded-lex (z > w).

    Returns ``(quotient, remainder)`` with ``f = quotient*g + remainder`` and
    no monomial of the remainder divisible by the leading monomial of ``g``.
    """
    if g.is_zero():
        raise ZeroDivisorError("division by the zero polynomial")
    (gi, gj), gc = g.leading_term()
    p = dict(f.terms)
    quot = {}
    rem = {}
    while p:
        m = max(p, key=_grlex_key)
        c = p[m]
        if m[0] >= gi and m[1] >= gj:
            qm = (m[0] - gi, m[1] - gj)
            qc = c / gc
            quot[qm] = quot.get(qm, 0j) + qc
            for (i, j), d in g.terms.items():
                key = (i + qm[0], j + qm[1])
                p[key] = p.get(key, 0j) - qc * d
            # the leading monomial cancels by construction
            p.pop(m, None)
        else:
            rem[m] = c
            del p[m]
        for key in [k for k, v in p.items() if abs(v) < ZERO_TOL]:
            del p[key]
    return BivarPoly(quot), BivarPoly(rem)


def exact_divide(f, g):
    """Return ``q`` with ``f == q*g`` or ``None`` if ``g`` does not divide ``f``.

    The remainder is treated as zero when all of its coefficients are below
    ``ZERO_TOL`` scaled by the size of ``f``.
    """
    q, r = divide_with_remainder(f, g)
    scale = max(1.0, f.max_abs_coeff())
    if r.max_abs_coeff() > ZERO_TOL * scale:
        return None
    return q


# ---------------------------------------------------------------------------
# one-variable objects


class LaurentPoly:
    """Finite sum of integer powers of ``t``: ``{k: coeff}``."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        if terms is None:
            terms = {}
        items = terms.items() if hasattr(terms, "items") else terms
        acc = {}
        for k, c in items:
            acc[int(k)] = acc.get(int(k), 0j) + _as_complex(c)
        self._terms = _canonical(acc.items())

    @property
    def terms(self):
        return MappingProxyType(self._terms)

    def is_zero(self):
        return not self._terms

    @property
    def min_power(self):
        return min(self._terms, default=0)

    @property
    def max_power(self):
        return max(self._terms, default=0)

    def _coerce(self, other):
        if isinstance(other, LaurentPoly):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return LaurentPoly({0: other})
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0j) + c
        return LaurentPoly(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                acc[k1 + k2] = acc.get(k1 + k2, 0j) + c1 * c2
        return LaurentPoly(acc)

    __rmul__ = __mul__

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self._terms == other._terms

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def derivative(self):
        return LaurentPoly({k - 1: k * c for k, c in self._terms.items() if k != 0})

    def __call__(self, t):
        t = np.asarray(t, dtype=complex)
        out = np.zeros(t.shape, dtype=complex)
        for k, c in self._terms.items():
            out = out + c * t**k
        return out[()] if out.ndim == 0 else out

    def __repr__(self):
        body = " + ".join(
            f"{_fmt_coeff(c)}*t^{k}" for k, c in sorted(self._terms.items())
        )
        return f"LaurentPoly({body or 0})"

    def to_json(self):
        return [{"k": k, "re": c.real, "im": c.imag} for k, c in sorted(self._terms.items())]

    @classmethod
    def from_json(cls, data):
        return cls((t["k"], complex(t["re"], t.get("im", 0.0))) for t in data)


def laurent_residue(p):
    return p.terms.get(-1, 0j)


def _trim(c, tol=ZERO_TOL):
    """Zero out tiny coefficients and drop trailing (high-order) zeros."""
    c = np.array(c, dtype=complex)
    c[np.abs(c) < tol] = 0
    nz = np.nonzero(c)[0]
    if nz.size == 0:
        return np.zeros(1, dtype=complex)
    return c[: nz[-1] + 1]


def companion_roots(coeffs):
    """Roots of the polynomial with ascending ``coeffs`` via companion eigenvalues."""
    c = _trim(coeffs, tol=0.0)
    n = len(c) - 1
    if n < 1:
        return np.zeros(0, dtype=complex)
    monic = c[:-1] / c[-1]
    comp = np.zeros((n, n), dtype=complex)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -monic
    return np.linalg.eigvals(comp)


def _deflate(c, r):
    """Synthetic division of ascending coefficients by ``(t - r)``; remainder dropped."""
    n = len(c) - 1
    out = np.zeros(n, dtype=complex)
    acc = c[-1]
    for k in range(n - 1, -1, -1):
        out[k] = acc
        acc = c[k] + r * acc
    return out


class RationalFunc1:
    """``num(t)/den(t)`` with ascending numpy coefficient arrays.

    On construction the pair is reduced: common powers of ``t`` are removed,
    common roots are cancelled numerically, and ``den`` is made monic.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=(1.0,), reduce=True):
        num = _trim(num)
        den = _trim(den)
        if not np.any(den):
            raise ZeroDivisorError("denominator is identically zero")
        if not np.any(num):
            num, den = np.zeros(1, dtype=complex), np.ones(1, dtype=complex)
        elif reduce:
            num, den = _reduce(num, den)
        lead = den[-1]
        self.num = _trim(num / lead)
        self.den = den / lead
        self.num.flags.writeable = False
        self.den.flags.writeable = False

    @classmethod
    def from_laurent(cls, num, den=None):
        den = LaurentPoly({0: 1}) if den is None else den
        shift = -min(num.min_power, den.min_power, 0)
        return cls(_laurent_to_array(num, shift), _laurent_to_array(den, shift))

    @classmethod
    def const(cls, c):
        return cls([c])

    def is_zero(self):
        return not np.any(self.num)

    def poles(self):
        return companion_roots(self.den)

    def __call__(self, t):
        if np.isscalar(t):
            t = complex(t)
            return _horner(self.num, t) / _horner(self.den, t)
        t = np.asarray(t, dtype=complex)
        out = npoly.polyval(t, self.num) / npoly.polyval(t, self.den)
        return out[()] if np.ndim(out) == 0 else out

    def derivative(self):
        dn = npoly.polyder(self.num) if len(self.num) > 1 else np.zeros(1)
        dd = npoly.polyder(self.den) if len(self.den) > 1 else np.zeros(1)
        top = npoly.polysub(npoly.polymul(dn, self.den), npoly.polymul(self.num, dd))
        return RationalFunc1(top, npoly.polymul(self.den, self.den))

    def _coerce(self, other):
        if isinstance(other, RationalFunc1):
            return other
        if isinstance(other, (int, float, complex, np.number)):
            return RationalFunc1.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        top = npoly.polyadd(
            npoly.polymul(self.num, other.den), npoly.polymul(other.num, self.den)
        )
        return RationalFunc1(top, npoly.polymul(self.den, other.den))

    __radd__ = __add__

    def __neg__(self):
        return RationalFunc1(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunc1(
            npoly.polymul(self.num, other.num), npoly.polymul(self.den, other.den)
        )

    __rmul__ = __mul__

    def allclose(self, other, tol=1e-10):
        """Cross-multiplied coefficient comparison."""
        lhs = npoly.polymul(self.num, other.den)
        rhs = npoly.polymul(other.num, self.den)
        return np.max(np.abs(_trim(npoly.polysub(lhs, rhs), tol=0.0))) <= tol

    def __repr__(self):
        return f"RationalFunc1(num={self.num.tolist()}, den={self.den.tolist()})"

    def to_json(self):
        return {
            "num": LaurentPoly(enumerate(self.num)).to_json(),
            "den": LaurentPoly(enumerate(self.den)).to_json(),
        }

    @classmethod
    def from_json(cls, data):
        return cls.from_laurent(
            LaurentPoly.from_json(data["num"]), LaurentPoly.from_json(data["den"])
        )


def _horner(coeffs, t):
    acc = 0j
    for c in reversed(coeffs.tolist()):
        acc = acc * t + c
    return acc


def _laurent_to_array(p, shift):
    if p.is_zero():
        return np.zeros(1, dtype=complex)
    out = np.zeros(p.max_power + shift + 1, dtype=complex)
    for k, c in p.terms.items():
        out[k + shift] = c
    return out


def _reduce(num, den):
    # exact removal of common t-powers
    lo = min(np.nonzero(num)[0][0], np.nonzero(den)[0][0])
    num, den = num[lo:], den[lo:]
    changed = True
    while changed and len(den) > 1 and len(num) > 1:
        changed = False
        for r in companion_roots(den):
            if r == 0:
                continue
            scale = np.sum(np.abs(num) * np.abs(r) ** np.arange(len(num)))
            if abs(npoly.polyval(r, num)) <= _COMMON_ROOT_RTOL * scale:
                num = _trim(_deflate(num, r))
                den = _trim(_deflate(den, r))
                changed = True
                break
    return num, den


def _cluster_roots(roots, tol, den=None):
    """Group roots closer than ``tol`` into ``[(center, multiplicity)]``.

    With ``den`` given, roots up to ``POLE_SPLIT_RTOL`` apart are merged too
    when ``den`` and its first m-1 derivatives vanish at the cluster mean;
    otherwise they stay separate simple poles.
    """
    wide = den is not None

    def close(a, b):
        lim = max(tol, POLE_SPLIT_RTOL * max(1.0, abs(a))) if wide else tol
        return abs(a - b) < lim

    remaining = list(roots)
    clusters = []
    while remaining:
        seed = remaining.pop(0)
        group = [seed]
        grew = True
        while grew:
            grew = False
            for r in list(remaining):
                if any(close(r, g) for g in group):
                    group.append(r)
                    remaining.remove(r)
                    grew = True
        center = complex(np.mean(group))
        spread = max(abs(g - center) for g in group)
        if len(group) > 1 and spread >= tol and not _has_multiplicity(den, center, len(group)):
            clusters.extend(_cluster_roots(group, tol))
        else:
            clusters.append((center, len(group)))
    return clusters


def _has_multiplicity(den, c, m):
    d = np.array(den, dtype=complex)
    absd = np.abs(d)
    for _ in range(m):
        scale = npoly.polyval(abs(c), absd)
        if abs(npoly.polyval(c, d)) > _MULTIPLICITY_RTOL * max(scale, 1e-300):
            return False
        d = npoly.polyder(d)
        absd = npoly.polyder(absd)
    return True


def _taylor_at(coeffs, a, order):
    """First ``order`` Taylor coefficients of a polynomial expanded at ``a``."""
    c = np.array(coeffs, dtype=complex)
    out = np.zeros(order, dtype=complex)
    for k in range(order):
        if len(c) == 0:
            break
        out[k] = npoly.polyval(a, c) / factorial(k)
        c = npoly.polyder(c) if len(c) > 1 else np.zeros(0)
    return out


def pole_residue(r, pole, order, other_poles):
    """Residue of ``r`` at ``pole`` of the given order.

    Simple poles use ``num/den'``; higher orders use the order-(m-1)
    derivative of ``(t-pole)^m r(t)`` via Taylor series division.
    """
    if order == 1:
        dden = npoly.polyder(r.den)
        return complex(npoly.polyval(pole, r.num) / npoly.polyval(pole, dden))
    q = np.ones(1, dtype=complex)
    for p in other_poles:
        q = npoly.polymul(q, [-p, 1.0])
    q = q * r.den[-1]
    a = _taylor_at(r.num, pole, order)
    b = _taylor_at(q, pole, order)
    # series quotient a/b up to u^(order-1)
    quot = np.zeros(order, dtype=complex)
    for k in range(order):
        quot[k] = (a[k] - np.dot(quot[:k], b[k:0:-1])) / b[0]
    return complex(quot[order - 1])


def rational_residues_in_disk(r, radius, pole_contour_tol=POLE_CONTOUR_TOL,
                              cluster_tol=POLE_CLUSTER_TOL):
    """Sum of residues of ``r`` at poles strictly inside ``|t| < radius``."""
    if radius <= 0:
        raise ValueError("radius must be positive")
    if not np.any(r.den):
        raise ZeroDivisorError("denominator is identically zero")
    clusters = _cluster_roots(r.poles(), cluster_tol, r.den)
    total = 0j
    for center, mult in clusters:
        if abs(abs(center) - radius) < pole_contour_tol:
            raise ContourCollisionError(
                f"pole at {center:.6g} lies on the contour |t| = {radius:g}"
            )
        if abs(center) < radius:
            others = [c for c, m in clusters if c != center for _ in range(m)]
            total += pole_residue(r, center, mult, others)
    return total


def compose(p, z_of_t, w_of_t):
    """Substitute rational functions of ``t`` into a bivariate polynomial."""
    if p.is_zero():
        return RationalFunc1.const(0)
    imax = max(i for i, _ in p.terms)
    jmax = max(j for _, j in p.terms)

    def powers(c, n):
        out = [np.ones(1, dtype=complex)]
        for _ in range(n):
            out.append(npoly.polymul(out[-1], c))
        return out

    nz, dz = powers(z_of_t.num, imax), powers(z_of_t.den, imax)
    nw, dw = powers(w_of_t.num, jmax), powers(w_of_t.den, jmax)
    top = np.zeros(1, dtype=complex)
    for (i, j), c in p.terms.items():
        term = npoly.polymul(npoly.polymul(nz[i], dz[imax - i]),
                             npoly.polymul(nw[j], dw[jmax - j]))
        top = npoly.polyadd(top, c * term)
    return RationalFunc1(top, npoly.polymul(dz[imax], dw[jmax]))

