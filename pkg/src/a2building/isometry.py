"""Exact classification of group elements acting on the building.

Translation vectors come from Newton slopes of the characteristic
polynomial; attracting and repelling flags and axis vertices are produced
by p-adic eigenvalue lifting followed by rational reconstruction, and are
verified exactly before being returned.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

from . import kernels
from .arith import (
    HENSEL_MAX,
    HENSEL_START,
    newton_slopes,
    parse_scalar,
    rational_reconstruct,
    slope_factorize,
)
from .coxeter import A2Vector, is_regular
from .errors import (
    FixedBasepoint,
    NotStronglyRegular,
    NotTypePreserving,
    PrecisionExhausted,
    SingularMatrix,
)
from .infinity import ChamberAtInfinity
from .lattices import Vertex, apply_matrix, vector_distance, vertex_normal_form
from .residues import segments_opposite_at


@dataclass(frozen=True)
class GroupElement:
    """Invertible 3x3 rational matrix: integer rows over a positive denominator."""

    rows: tuple
    den: int
    p: int

    @staticmethod
    def from_matrix(matrix, p) -> "GroupElement":
        rows = [[parse_scalar(e) for e in row] for row in matrix]
        den = 1
        for row in rows:
            for e in row:
                den = den * e.denominator // gcd(den, e.denominator)
        ints = [[int(e * den) for e in row] for row in rows]
        content = 0
        for row in ints:
            for e in row:
                content = gcd(content, abs(e))
        g = gcd(content, den)
        rows_t = tuple(tuple(e // g for e in row) for row in ints)
        elem = GroupElement(rows_t, den // g, p)
        if elem.det_numerator == 0:
            raise SingularMatrix("group element must be invertible")
        return elem

    @staticmethod
    def identity(p) -> "GroupElement":
        return GroupElement(((1, 0, 0), (0, 1, 0), (0, 0, 1)), 1, p)

    @cached_property
    def det_numerator(self):
        _, det = kernels.adj_det_int(self.rows)
        return det

    @cached_property
    def det(self) -> Fraction:
        return Fraction(self.det_numerator, self.den ** 3)

    @cached_property
    def val_det(self) -> int:
        return kernels.vp_int(self.det_numerator, self.p) - 3 * kernels.vp_int(
            self.den, self.p
        )

    @property
    def type_shift(self) -> int:
        return self.val_det % 3

    @property
    def is_type_preserving(self) -> bool:
        return self.type_shift == 0

    def matrix(self):
        return tuple(tuple(Fraction(e, self.den) for e in row) for row in self.rows)

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        if self.p != other.p:
            raise ValueError("prime mismatch in product")
        rows = kernels.mat_mul_int(self.rows, other.rows)
        return _reduced(rows, self.den * other.den, self.p)

    def inverse(self) -> "GroupElement":
        adj, det = kernels.adj_det_int(self.rows)
        if det < 0:
            adj = tuple(tuple(-e for e in row) for row in adj)
            det = -det
        rows = tuple(tuple(e * self.den for e in row) for row in adj)
        return _reduced(rows, det, self.p)

    def __pow__(self, n: int) -> "GroupElement":
        if n < 0:
            return self.inverse() ** (-n)
        acc = GroupElement.identity(self.p)
        base = self
        while n:
            if n & 1:
                acc = acc * base
            base = base * base
            n >>= 1
        return acc

    def apply(self, v: Vertex) -> Vertex:
        """Image vertex; the denominator only shifts the p-power class."""
        return apply_matrix(self.rows, v)

    def is_scalar(self) -> bool:
        r = self.rows
        return (
            r[0][1] == r[0][2] == r[1][0] == r[1][2] == r[2][0] == r[2][1] == 0
            and r[0][0] == r[1][1] == r[2][2]
        )

    def to_json(self):
        return [[str(Fraction(e, self.den)) for e in row] for row in self.rows]

    def char_coeffs(self):
        """Ascending coefficients [c0, c1, c2, 1] of the characteristic cubic."""
        tr, s2, det = kernels.charpoly3_int(self.rows)
        d = self.den
        return [
            Fraction(-det, d ** 3),
            Fraction(s2, d ** 2),
            Fraction(-tr, d),
            Fraction(1),
        ]


def _reduced(rows, den, p) -> GroupElement:
    content = 0
    for row in rows:
        for e in row:
            content = gcd(content, abs(e))
    g = gcd(content, den)
    if g > 1:
        rows = tuple(tuple(e // g for e in row) for row in rows)
        den //= g
    else:
        rows = tuple(tuple(row) for row in rows)
    return GroupElement(rows, den, p)


def group_element(matrix, p) -> GroupElement:
    return GroupElement.from_matrix(matrix, p)


def elementary(i, j, t, p) -> GroupElement:
    """Elementary transvection E_ij(t)."""
    if i == j:
        raise ValueError("elementary matrix needs i != j")
    rows = [[Fraction(1 if r == c else 0) for c in range(3)] for r in range(3)]
    rows[i][j] = parse_scalar(t)
    return GroupElement.from_matrix(rows, p)


def diagonal(entries, p) -> GroupElement:
    rows = [[parse_scalar(entries[r]) if r == c else Fraction(0) for c in range(3)] for r in range(3)]
    return GroupElement.from_matrix(rows, p)


def jordan_projection(g: GroupElement) -> A2Vector:
    """Descending Newton slopes of char(g), PGL-normalized."""
    slopes = newton_slopes(g.char_coeffs(), g.p)
    return A2Vector(*slopes).pgl_normalized()


@dataclass(frozen=True)
class IsometryClass:
    """Exact elliptic/hyperbolic classification with regularity data."""

    kind: str
    translation_vector: A2Vector
    regular: bool
    strongly_regular: bool
    integer_slopes: bool

    def to_json(self, g: GroupElement = None):
        data = {
            "kind": self.kind,
            "lambda": self.translation_vector.to_json(),
            "regular": self.regular,
            "strongly_regular": self.strongly_regular,
            "integer_slopes": self.integer_slopes,
        }
        if g is not None:
            data["type_shift"] = g.type_shift
        return data


def classify(g: GroupElement) -> IsometryClass:
    """Elliptic iff the translation vector vanishes; regular iff its
    slopes are pairwise distinct (then automatically integral)."""
    if not g.is_type_preserving:
        raise NotTypePreserving(f"type shift {g.type_shift} != 0")
    lam = jordan_projection(g)
    integral = lam.is_integral()
    if lam.is_zero():
        return IsometryClass("elliptic", lam, False, False, integral)
    regular = lam.a1 > lam.a2 > lam.a3
    return IsometryClass("hyperbolic", lam, regular, regular, integral)


def cartan_projection(g: GroupElement, o: Vertex) -> A2Vector:
    """PGL-normalized segment type theta(o, g o)."""
    if not g.is_type_preserving:
        raise NotTypePreserving(f"type shift {g.type_shift} != 0")
    return vector_distance(o, g.apply(o))


def geometric_srh_criterion(g: GroupElement, o: Vertex) -> bool:
    """Basepoint test: regular type at o with opposite germs for g and g^-1.

    When true the element is strongly regular hyperbolic; the converse
    holds at a vertex on the translation axis.
    """
    if not g.is_type_preserving:
        raise NotTypePreserving(f"type shift {g.type_shift} != 0")
    go = g.apply(o)
    if go == o:
        raise FixedBasepoint("basepoint is fixed by the element")
    theta = vector_distance(o, go)
    if not is_regular(theta):
        return False
    gio = g.inverse().apply(o)
    if not is_regular(vector_distance(o, gio)):
        return False
    return segments_opposite_at(o, gio, go)


def _integer_rows_of(g: GroupElement):
    """Integer matrix with the same eigenlines (denominator dropped)."""
    return g.rows


def _eigen_line_exact(rows, lam: Fraction):
    """Primitive integer kernel vector of (rows - lam I) over Q, or None."""
    den = lam.denominator
    num = lam.numerator
    m = [[den * rows[i][j] for j in range(3)] for i in range(3)]
    for i in range(3):
        m[i][i] -= num
    crosses = []
    for r1 in range(3):
        for r2 in range(r1 + 1, 3):
            cx = (
                m[r1][1] * m[r2][2] - m[r1][2] * m[r2][1],
                m[r1][2] * m[r2][0] - m[r1][0] * m[r2][2],
                m[r1][0] * m[r2][1] - m[r1][1] * m[r2][0],
            )
            if any(e != 0 for e in cx):
                crosses.append(cx)
    if not crosses:
        return None
    vec = crosses[0]
    g0 = 0
    for e in vec:
        g0 = gcd(g0, abs(e))
    return tuple(e // g0 for e in vec)


def _rational_eigenvalues(g: GroupElement, precision):
    """Exact rational eigenvalues ordered by descending valuation, or None.

    The integer-matrix eigenvalues are split p-adically and rationally
    reconstructed; a reconstruction that fails the exact root test means
    more precision is needed (or the eigenvalue is irrational).
    """
    rows = _integer_rows_of(g)
    tr, s2, det = kernels.charpoly3_int(rows)
    coeffs = [Fraction(-det), Fraction(s2), Fraction(-tr), Fraction(1)]
    factors = slope_factorize(coeffs, g.p, precision)
    eigs = []
    for fac in factors:
        mod = g.p ** fac.unit.precision
        unit = rational_reconstruct(fac.unit.residue, mod)
        if unit is None:
            return None
        lam = unit * Fraction(g.p) ** fac.slope
        value = ((lam + coeffs[2]) * lam + coeffs[1]) * lam + coeffs[0]
        if value != 0:
            return None
        eigs.append((fac.slope, lam))
    eigs.sort(key=lambda t: t[0], reverse=True)
    return [lam for _, lam in eigs]


def _eigen_data(g: GroupElement, precision=None):
    """(eigenvalues desc by valuation, eigenvector columns) with escalation."""
    cls = classify(g)
    if not cls.strongly_regular:
        raise NotStronglyRegular("element is not strongly regular hyperbolic")
    start = precision or HENSEL_START
    n = start
    while n <= HENSEL_MAX:
        eigs = _rational_eigenvalues(g, n)
        if eigs is not None:
            rows = _integer_rows_of(g)
            vecs = []
            for lam in eigs:
                v = _eigen_line_exact(rows, lam)
                if v is None:
                    break
                vecs.append(v)
            else:
                return eigs, vecs
        n *= 2
    raise PrecisionExhausted(
        f"no exact eigenflag at precision {HENSEL_MAX}; eigenvalues are "
        "likely irrational over the rationals"
    )


def attracting_flag(g: GroupElement, precision=None) -> ChamberAtInfinity:
    """Exact invariant flag attracting the boundary dynamics of g.

    Line: eigenline for the smallest-valuation eigenvalue.  Plane: kernel
    of the left eigenvector for the largest valuation (spanned by the two
    smallest-valuation eigenlines).  Invariance is asserted exactly; the
    orientation is the one certified by the sector-cylinder check.
    """
    eigs, vecs = _eigen_data(g, precision)
    line = vecs[2]
    rows_t = tuple(tuple(g.rows[j][i] for j in range(3)) for i in range(3))
    wmax = _eigen_line_exact(rows_t, eigs[0])
    if wmax is None:
        raise PrecisionExhausted("left eigenvector degenerated")
    flag = ChamberAtInfinity(line, wmax)
    _assert_invariant_flag(g, flag)
    return flag


def repelling_flag(g: GroupElement, precision=None) -> ChamberAtInfinity:
    return attracting_flag(g.inverse(), precision)


def _assert_invariant_flag(g: GroupElement, f: ChamberAtInfinity):
    line2 = kernels.mat_vec_int(g.rows, f.line)
    cx = (
        line2[1] * f.line[2] - line2[2] * f.line[1],
        line2[2] * f.line[0] - line2[0] * f.line[2],
        line2[0] * f.line[1] - line2[1] * f.line[0],
    )
    if any(e != 0 for e in cx):
        raise PrecisionExhausted("candidate line is not invariant")
    plane2 = tuple(
        sum(g.rows[r][i] * f.plane[r] for r in range(3)) for i in range(3)
    )
    cx = (
        plane2[1] * f.plane[2] - plane2[2] * f.plane[1],
        plane2[2] * f.plane[0] - plane2[0] * f.plane[2],
        plane2[0] * f.plane[1] - plane2[1] * f.plane[0],
    )
    if any(e != 0 for e in cx):
        raise PrecisionExhausted("candidate plane is not invariant")


def axis_vertex(g: GroupElement, precision=None) -> Vertex:
    """Vertex on the translation axis: the eigenbasis lattice class.

    Verified exactly: the Cartan projection at the result equals the
    Jordan projection.
    """
    eigs, vecs = _eigen_data(g, precision)
    cols = tuple(
        tuple(vecs[j][r] for j in range(3)) for r in range(3)
    )
    vx = vertex_normal_form(cols, g.p)
    if cartan_projection(g, vx) != jordan_projection(g):
        raise PrecisionExhausted("eigenbasis lattice missed the axis")
    return vx
