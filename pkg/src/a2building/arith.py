"""Exact rational arithmetic with p-adic valuations and slope factorization.

Scalars are `fractions.Fraction`; no floating point enters any algebraic
decision.  Newton slopes of a monic cubic give the valuations of its roots,
and distinct integer slopes can be split off by Hensel lifting at a finite
p-adic precision.
"""

from dataclasses import dataclass
from fractions import Fraction

from .errors import SlopesNotDistinct, ZeroConstantTerm
from .kernels import vp_int

HENSEL_START = 32
HENSEL_MAX = 512


class _PlusInfinity:
    """Order-absorbing marker for the valuation of zero."""

    __slots__ = ()

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is INFINITY

    def __gt__(self, other):
        return other is not INFINITY

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is INFINITY

    def __hash__(self):
        return hash("a2building-plus-infinity")

    def __add__(self, other):
        return INFINITY

    __radd__ = __add__

    def __neg__(self):
        raise ArithmeticError("-infinity does not occur as a valuation")

    def __repr__(self):
        return "+Infinity"


INFINITY = _PlusInfinity()


def parse_scalar(text) -> Fraction:
    """Parse "a/b" or "a" (also accepts ints/Fractions unchanged)."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    return Fraction(str(text).strip())


def val(x, p):
    """Exact p-adic valuation of a rational; val(0) is INFINITY."""
    x = parse_scalar(x)
    if x == 0:
        return INFINITY
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def lower_hull_slopes(points):
    """Slopes of the lower convex hull of (x, y) points with increasing x.

    Returns a list of (slope, width) pairs, left to right.
    """
    hull = []
    for pt in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop hull[-1] if it lies on or above the chord hull[-2] -> pt
            if (y2 - y1) * (pt[0] - x1) >= (pt[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(pt)
    out = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        out.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
    return out


def newton_slopes(coeffs, p):
    """Root valuations (descending, with multiplicity) of a monic cubic.

    `coeffs` lists the coefficients in ascending degree order
    [c0, c1, c2, c3] with c3 = 1.  The nonzero constant term is required;
    the result lists the negated slopes of the lower convex hull of the
    points (i, val(c_i)).
    """
    cs = [parse_scalar(c) for c in coeffs]
    if len(cs) != 4 or cs[3] != 1:
        raise ValueError("expected ascending coefficients of a monic cubic")
    if cs[0] == 0:
        raise ZeroConstantTerm("constant term is zero")
    points = [(i, val(c, p)) for i, c in enumerate(cs) if c != 0]
    slopes = []
    for slope, width in lower_hull_slopes(points):
        slopes.extend([-slope] * width)
    slopes.sort(reverse=True)
    return slopes


@dataclass(frozen=True)
class PadicApprox:
    """Element of Z/p^N viewed as an N-digit p-adic approximation."""

    residue: int
    precision: int
    prime: int

    def __post_init__(self):
        mod = self.prime ** self.precision
        if not 0 <= self.residue < mod:
            object.__setattr__(self, "residue", self.residue % mod)

    @property
    def modulus(self):
        return self.prime ** self.precision


@dataclass(frozen=True)
class LinearFactor:
    """Monic linear factor x - p^slope * unit of a slope factorization."""

    slope: int
    unit: PadicApprox

    def approx_root(self) -> Fraction:
        return Fraction(self.unit.residue) * Fraction(self.unit.prime) ** self.slope


def _unit_root_mod_p(coeffs_mod, p):
    """The unique nonzero simple root mod p of a reduced slope polynomial."""
    roots = []
    for x in range(1, p):
        acc = 0
        for c in reversed(coeffs_mod):
            acc = (acc * x + c) % p
        if acc == 0:
            roots.append(x)
    return roots


def _poly_eval_mod(coeffs, x, mod):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % mod
    return acc


def _hensel_lift(coeffs, p, x0, precision):
    """Newton iteration for a simple unit root, modulus schedule doubling."""
    deriv = [i * c for i, c in enumerate(coeffs)][1:]
    x = x0
    cur = 1
    while cur < precision:
        cur = min(2 * cur, precision)
        mod = p ** cur
        cs = [c % mod for c in coeffs]
        ds = [c % mod for c in deriv]
        fx = _poly_eval_mod(cs, x, mod)
        dfx = _poly_eval_mod(ds, x, mod)
        x = (x - fx * pow(dfx, -1, mod)) % mod
    assert _poly_eval_mod([c % (p ** precision) for c in coeffs], x, p ** precision) == 0
    return x


def slope_factorize(coeffs, p, precision=HENSEL_START):
    """Split a monic cubic with pairwise distinct integer slopes.

    Returns three LinearFactor records sorted by slope descending; the root
    of each factor is p^slope times a unit known modulo p^precision.
    """
    slopes = newton_slopes(coeffs, p)
    if any(s.denominator != 1 for s in slopes) or len(set(slopes)) != 3:
        raise SlopesNotDistinct(f"slopes {slopes} are not pairwise distinct integers")
    cs = [parse_scalar(c) for c in coeffs]
    shift = -min(int(s) for s in slopes)
    if shift < 0:
        shift = 0
    # substitute x -> x / p^shift (clears negative root valuations)
    work = [cs[i] * Fraction(p) ** (shift * (3 - i)) for i in range(4)]
    factors = []
    for s in sorted((int(s) for s in slopes), reverse=True):
        a = s + shift
        scaled = [work[i] * Fraction(p) ** (a * i) for i in range(4)]
        mu = min(val(c, p) for c in scaled if c != 0)
        tilde = [c / Fraction(p) ** mu for c in scaled]
        mod_big = p ** precision
        ints = []
        for c in tilde:
            num = c.numerator % mod_big
            den = c.denominator % mod_big
            ints.append(num if den == 1 else (num * pow(den, -1, mod_big)) % mod_big)
        cands = _unit_root_mod_p([c % p for c in ints], p)
        if len(cands) != 1:
            raise SlopesNotDistinct(
                "slope segment is not simple; cannot isolate a unit root"
            )
        u = _hensel_lift(ints, p, cands[0], precision)
        factors.append(LinearFactor(s, PadicApprox(u, precision, p)))
    return factors


def rational_reconstruct(residue, modulus):
    """Rational a/b with a = r*b mod m and |a|, b <= sqrt(m/2), or None."""
    r0, r1 = modulus, residue % modulus
    t0, t1 = 0, 1
    bound = _isqrt(modulus // 2)
    while r1 > bound:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        t0, t1 = t1, t0 - q * t1
    if t1 == 0 or abs(t1) > bound:
        return None
    num, den = r1, t1
    if den < 0:
        num, den = -num, -den
    from math import gcd

    if gcd(num, den) != 1 or gcd(den, modulus) != 1:
        return None
    return Fraction(num, den)


def _isqrt(n):
    from math import isqrt

    return isqrt(n)
