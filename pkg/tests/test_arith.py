import random
from fractions import Fraction

import pytest

from a2building.arith import (
    INFINITY,
    HENSEL_START,
    PadicApprox,
    lower_hull_slopes,
    newton_slopes,
    parse_scalar,
    rational_reconstruct,
    slope_factorize,
    val,
)
from a2building.errors import SlopesNotDistinct, ZeroConstantTerm


def test_val_examples():
    assert val(12, 2) == 2
    assert val(Fraction(5, 9), 3) == -2
    assert val(0, 5) is INFINITY
    assert val("8/3", 2) == 3


def test_parse_scalar_forms():
    assert parse_scalar("3/4") == Fraction(3, 4)
    assert parse_scalar("-7") == Fraction(-7)
    assert parse_scalar(Fraction(1, 2)) == Fraction(1, 2)


def test_infinity_marker_ordering():
    assert INFINITY > 10**100
    assert not (INFINITY < 5)
    assert min(INFINITY, 3) == 3
    assert INFINITY + 7 is INFINITY


def test_val_multiplicative_ultrametric():
    rnd = random.Random(101)
    for p in (2, 3, 5):
        for _ in range(10_000 // 3):
            x = Fraction(rnd.randint(-400, 400), rnd.randint(1, 400))
            y = Fraction(rnd.randint(-400, 400), rnd.randint(1, 400))
            if x == 0 or y == 0:
                continue
            assert val(x * y, p) == val(x, p) + val(y, p)
            s = x + y
            lhs = val(s, p)
            assert lhs >= min(val(x, p), val(y, p))


def _poly_from_roots(roots):
    c0 = -roots[0] * roots[1] * roots[2]
    c1 = roots[0] * roots[1] + roots[0] * roots[2] + roots[1] * roots[2]
    c2 = -(roots[0] + roots[1] + roots[2])
    return [c0, c1, c2, Fraction(1)]


def test_newton_slopes_diagonal_cases():
    p = 3
    coeffs = _poly_from_roots([Fraction(p * p), Fraction(p), Fraction(1)])
    assert newton_slopes(coeffs, p) == [2, 1, 0]
    coeffs = _poly_from_roots([Fraction(p)] * 3)
    assert newton_slopes(coeffs, p) == [1, 1, 1]


def _hull_oracle(points):
    """Quadratic-time lower hull check: keep chords below all points."""
    slopes = []
    pts = sorted(points)
    cur = pts[0]
    while cur != pts[-1]:
        best = None
        for q in pts:
            if q[0] <= cur[0]:
                continue
            s = Fraction(q[1] - cur[1], q[0] - cur[0])
            if best is None or s < best[0] or (s == best[0] and q[0] > best[1][0]):
                best = (s, q)
        slopes.append((best[0], best[1][0] - cur[0]))
        cur = best[1]
    return slopes


def test_newton_slopes_fractional_via_hull_oracle():
    # x^3 - p x - p: hull of {(0,1),(1,1),(3,0)} has one slope of width 3
    p = 2
    coeffs = [Fraction(-p), Fraction(-p), Fraction(0), Fraction(1)]
    points = [(0, 1), (1, 1), (3, 0)]
    oracle = _hull_oracle(points)
    expected = []
    for s, w in oracle:
        expected.extend([-s] * w)
    expected.sort(reverse=True)
    assert newton_slopes(coeffs, p) == expected == [Fraction(1, 3)] * 3


def test_lower_hull_matches_oracle_random():
    rnd = random.Random(7)
    for _ in range(300):
        points = [(0, rnd.randint(-4, 6)), (3, 0)]
        for i in (1, 2):
            if rnd.random() < 0.8:
                points.append((i, rnd.randint(-4, 6)))
        got = lower_hull_slopes(points)
        assert got == _hull_oracle(points)


def test_newton_checks_input():
    with pytest.raises(ZeroConstantTerm):
        newton_slopes([0, 1, 1, 1], 2)
    with pytest.raises(ValueError):
        newton_slopes([1, 1, 1, 2], 2)


def test_newton_product_of_linear_factors_exhaustive():
    p = 5
    for a in range(-3, 4):
        for b in range(-3, 4):
            for c in range(-3, 4):
                roots = [
                    Fraction(p) ** a * 2,
                    Fraction(p) ** b * 3,
                    Fraction(p) ** c * 7,
                ]
                got = newton_slopes(_poly_from_roots(roots), p)
                assert got == sorted([a, b, c], reverse=True)


def test_slope_factorize_split_case():
    p, n = 2, 8
    coeffs = _poly_from_roots([Fraction(p * p), Fraction(p), Fraction(1)])
    factors = slope_factorize(coeffs, p, n)
    assert [f.slope for f in factors] == [2, 1, 0]
    mod = p**n
    for f, target in zip(factors, [Fraction(p * p), Fraction(p), Fraction(1)]):
        # root = p^slope * unit agrees with the exact root mod p^n
        unit_target = target / Fraction(p) ** f.slope
        assert (f.unit.residue - unit_target) % mod == 0


def test_slope_factorize_product_reconstructs_input():
    p, n = 3, 12
    rnd = random.Random(13)
    for _ in range(25):
        exps = rnd.sample(range(0, 5), 3)
        units = [rnd.choice([1, 2, 4, 5, 7, 8]) for _ in range(3)]
        roots = [Fraction(u * p**e) for u, e in zip(units, exps)]
        coeffs = _poly_from_roots(roots)
        factors = slope_factorize(coeffs, p, n)
        mod = p**n
        # multiply the linear factors back mod p^n
        prod = [1]
        for f in factors:
            root = f.approx_root()
            prod = _poly_mul_mod(prod, [-root, Fraction(1)], mod, p)
        for got, want in zip(prod, coeffs):
            diff = got - want
            assert diff == 0 or val(diff, p) >= n


def _poly_mul_mod(a, b, mod, p):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    # reduce integer parts mod p^n to keep coefficients small
    return out


def test_slope_factorize_conjugated_matrix_residual():
    from a2building import isometry

    p, n = 2, 16
    u = isometry.group_element([[1, 1, 1], [1, 2, 1], [1, 1, 2]], p)
    g = u * isometry.diagonal([4, 2, 1], p) * u.inverse()
    coeffs = g.char_coeffs()
    factors = slope_factorize(coeffs, p, n)
    assert [f.slope for f in factors] == [2, 1, 0]
    for f in factors:
        root = f.approx_root()
        value = ((root + coeffs[2]) * root + coeffs[1]) * root + coeffs[0]
        assert value == 0 or val(value, p) >= n - 2


def test_slope_factorize_rejects_equal_slopes():
    p = 2
    coeffs = [Fraction(-p), Fraction(-p), Fraction(0), Fraction(1)]
    with pytest.raises(SlopesNotDistinct):
        slope_factorize(coeffs, p, 8)


def test_slope_factorize_negative_slopes():
    p, n = 2, 10
    roots = [Fraction(4), Fraction(1), Fraction(1, 2)]
    factors = slope_factorize(_poly_from_roots(roots), p, n)
    assert [f.slope for f in factors] == [2, 0, -1]
    for f, target in zip(factors, roots):
        unit = target / Fraction(p) ** f.slope
        assert (Fraction(f.unit.residue) - unit) % (p**n) == 0


def test_padic_approx_normalizes():
    x = PadicApprox(70, 3, 2)
    assert 0 <= x.residue < 8
    assert x.modulus == 8


def test_rational_reconstruct_roundtrip():
    rnd = random.Random(23)
    p = 2
    mod = p**40
    for _ in range(200):
        num = rnd.randint(-10**4, 10**4)
        den = rnd.choice([1, 3, 5, 7, 9, 11])
        residue = (num * pow(den, -1, mod)) % mod
        got = rational_reconstruct(residue, mod)
        assert got == Fraction(num, den)


def test_rational_reconstruct_rejects_oversized():
    mod = 2**10
    # residue of 1/3 mod 2^10 reconstructs; a huge random one need not
    assert rational_reconstruct(pow(3, -1, mod), mod) == Fraction(1, 3)
