import math

import numpy as np
import pytest
import sympy as sp

from leafcycle.algebra import (
    BivarPoly,
    LaurentPoly,
    RationalFunc1,
    ZERO_TOL,
    companion_roots,
    compose,
    divide_with_remainder,
    exact_divide,
    laurent_residue,
    partial_derivative,
    rational_residues_in_disk,
)
from leafcycle.errors import ContourCollisionError, ZeroDivisorError

z, w = BivarPoly.z(), BivarPoly.w()


def test_canonical_form_drops_tiny_coefficients():
    p = BivarPoly({(1, 0): 1.0, (0, 1): 1e-13, (2, 2): 0})
    assert dict(p.terms) == {(1, 0): 1.0}
    assert BivarPoly().is_zero()
    assert BivarPoly().degree == -1
    assert (z**2 * w + w).degree == 3


def test_non_finite_coefficients_rejected():
    with pytest.raises(ValueError):
        BivarPoly({(0, 0): float("nan")})
    with pytest.raises(ValueError):
        LaurentPoly({0: complex(math.inf, 0)})


def test_partial_derivative_examples():
    assert partial_derivative(w + z**3 + z * w**2 + z, "z") == 3 * z**2 + w**2 + 1
    assert partial_derivative(BivarPoly.const(7 - 2j), "w").is_zero()
    assert partial_derivative(z**2 + w**2 + 1, "z") == 2 * z
    with pytest.raises(ValueError):
        partial_derivative(z, "x")


def test_exact_divide_cycle_cofactor():
    F = z**2 + w**2 + 1
    assert exact_divide((2 * z**2 + 2 * w**2) * F, F) == 2 * z**2 + 2 * w**2


def test_exact_divide_reports_failure():
    # z^2 + w^2 + 1 = (z - w)(z + w) + 2w^2 + 1
    q, r = divide_with_remainder(z**2 + w**2 + 1, z + w)
    assert q == z - w
    assert r == 2 * w**2 + 1
    assert exact_divide(z**2 + w**2 + 1, z + w) is None


def test_remainder_matches_sympy_reduction():
    Zs, Ws = sp.symbols("z w")
    f = z**3 * w + 2 * z * w**2 - w + 3
    g = z * w - 1
    q, r = divide_with_remainder(f, g)
    (q_ref,), r_ref = sp.reduced(
        Zs**3 * Ws + 2 * Zs * Ws**2 - Ws + 3, [Zs * Ws - 1], Zs, Ws, order="grlex"
    )
    assert sp.expand(sp.sympify(_to_sympy(q)) - q_ref) == 0
    assert sp.expand(sp.sympify(_to_sympy(r)) - r_ref) == 0


def _to_sympy(p):
    Zs, Ws = sp.symbols("z w")
    return sum(sp.nsimplify(c.real) * Zs**i * Ws**j for (i, j), c in p.terms.items())


def test_exact_divide_self_and_zero_divisor():
    f = 3 * z**2 * w - 1j * w + 2
    assert exact_divide(f, f) == BivarPoly.const(1)
    with pytest.raises(ZeroDivisorError):
        exact_divide(f, BivarPoly())


def test_evaluation_scalar_and_array_agree():
    p = (1 + 2j) * z**3 * w - w**2 + 0.5
    pts = np.array([0.3 + 0.1j, -1.2, 2j])
    arr = p(pts, pts[::-1])
    for k in range(3):
        assert arr[k] == pytest.approx(p(complex(pts[k]), complex(pts[::-1][k])), abs=1e-14)


def test_json_round_trip():
    p = (1 + 2j) * z**3 * w - w**2 + 0.5
    assert BivarPoly.from_json(p.to_json()) == p
    lp = LaurentPoly({-3: 1j, 2: 0.25})
    assert LaurentPoly.from_json(lp.to_json()) == lp
    r = RationalFunc1([1, 2], [0, -2, 1])
    back = RationalFunc1.from_json(r.to_json())
    assert np.allclose(back.num, r.num) and np.allclose(back.den, r.den)


@pytest.mark.parametrize(
    "terms, expected",
    [({-1: -1j}, -1j), ({-1: 4, -3: 2}, 4), ({2: 1}, 0)],
)
def test_laurent_residue(terms, expected):
    assert laurent_residue(LaurentPoly(terms)) == expected


def test_rational_reduction_and_normalization():
    # (t - 1)(t + 2) / ((t - 1) t^2)
    r = RationalFunc1(np.polynomial.polynomial.polyfromroots([1, -2]),
                      2 * np.polynomial.polynomial.polyfromroots([1, 0, 0]))
    assert len(r.den) == 3 and r.den[-1] == 1
    assert np.allclose(r.num, [1, 0.5])
    assert np.allclose(r.den, [0, 0, 1])


def test_companion_roots():
    roots = np.sort_complex(companion_roots([6, -5, 1]))
    assert np.allclose(roots, [2, 3])


def test_residues_in_disk_examples():
    assert rational_residues_in_disk(RationalFunc1([1], [-2, 1]), 1) == 0
    # 1/(t(t-2)) = -1/2 * 1/t + 1/2 * 1/(t-2)
    t = sp.symbols("t")
    ref = complex(sp.residue(1 / (t * (t - 2)), t, 0))
    assert rational_residues_in_disk(RationalFunc1([1], [0, -2, 1]), 1) == pytest.approx(ref)
    assert ref == -0.5


def test_residues_of_higher_order_poles():
    t = sp.symbols("t")
    expr = (t**2 + 3) / ((t - sp.Rational(3, 10)) ** 3 * (t + 2))
    ref = complex(sp.residue(expr, t, sp.Rational(3, 10)))
    num = [3, 0, 1]
    den = np.polynomial.polynomial.polyfromroots([0.3, 0.3, 0.3, -2])
    got = rational_residues_in_disk(RationalFunc1(num, den), 1)
    assert got == pytest.approx(ref, rel=1e-8)


def test_residue_radius_invariance_and_collision():
    r = RationalFunc1([1, 1], np.polynomial.polynomial.polyfromroots([0.5, 2j]))
    a = rational_residues_in_disk(r, 1.0)
    b = rational_residues_in_disk(r, 1.9)
    assert a == pytest.approx(b, abs=1e-14)
    with pytest.raises(ContourCollisionError):
        rational_residues_in_disk(r, 0.5 + 1e-10)


def test_laurent_and_rational_residue_agree():
    lp = LaurentPoly({-3: 2j, -1: 0.25 - 1j, 0: 4, 2: -1})
    r = RationalFunc1.from_laurent(lp)
    assert rational_residues_in_disk(r, 1) == pytest.approx(laurent_residue(lp), abs=1e-13)


def test_compose_onto_quadric():
    zt = RationalFunc1.from_laurent(LaurentPoly({1: 0.5j, -1: 0.5j}))
    wt = RationalFunc1.from_laurent(LaurentPoly({1: 0.5, -1: -0.5}))
    assert compose(z**2 + w**2 + 1, zt, wt).is_zero()
    val = compose(z**2 + w**2, zt, wt)
    assert np.allclose(val.num, [-1]) and np.allclose(val.den, [1])


def test_rational_derivative():
    # d/dt (t + 1/t) = 1 - 1/t^2
    r = RationalFunc1.from_laurent(LaurentPoly({1: 1, -1: 1})).derivative()
    for t in (0.7, 2j, -1.3 + 0.2j):
        assert r(t) == pytest.approx(1 - 1 / t**2)


def test_zero_tol_constant():
    assert ZERO_TOL == 1e-12
