"""Vertices of the affine building: p-local lattice classes in normal form.

A vertex is the class of a rank-3 lattice over the localization Z_(p),
up to global p-power scaling.  The canonical representative is an upper
triangular integer matrix with p-power diagonal produced by column
reduction; equality of vertices is equality of representatives.
"""

from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from .arith import parse_scalar
from .coxeter import A2Vector, opposition_involution
from .errors import PrimeMismatch, SingularMatrix


def _to_integer_rows(matrix):
    """Clear denominators of a rational matrix; returns integer rows.

    The denominator is dropped: a global rational scalar moves a lattice
    inside its p-power class only by a unit times a p-power, which the
    normal form quotients out.
    """
    rows = [[parse_scalar(e) for e in row] for row in matrix]
    den = 1
    for row in rows:
        for e in row:
            den = den * e.denominator // _gcd(den, e.denominator)
    return tuple(tuple(int(e * den) for e in row) for row in rows)


def _gcd(a, b):
    from math import gcd

    return gcd(a, b)


@dataclass(frozen=True)
class Vertex:
    """Canonical lattice-class representative: rows / den with den a p-power."""

    rows: tuple
    den: int
    p: int

    def matrix(self):
        return tuple(tuple(Fraction(e, self.den) for e in row) for row in self.rows)

    def to_json(self):
        return {
            "p": self.p,
            "matrix": [[str(Fraction(e, self.den)) for e in row] for row in self.rows],
        }

    @staticmethod
    def from_json(data) -> "Vertex":
        return vertex_normal_form(data["matrix"], data["p"])

    def __str__(self):
        body = "; ".join(
            " ".join(str(Fraction(e, self.den)) for e in row) for row in self.rows
        )
        return f"Vertex_p{self.p}[{body}]"


def vertex_normal_form(matrix, p) -> Vertex:
    """Canonical vertex for the lattice spanned by the matrix columns."""
    rows = _to_integer_rows(matrix)
    n = len(rows)
    if any(len(r) < n for r in rows):
        raise SingularMatrix("expected at least as many columns as rows")
    try:
        canon, den = kernels.hnf_int(rows, p)
    except ValueError as exc:
        raise SingularMatrix(str(exc)) from None
    return Vertex(canon, den, p)


def standard_vertex(p, n=3) -> Vertex:
    ident = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return Vertex(ident, 1, p)


def apply_matrix(rows, vertex: Vertex) -> Vertex:
    """Vertex of the image lattice under an integer matrix (left action)."""
    return vertex_normal_form(kernels.mat_mul_int(rows, vertex.rows), vertex.p)


def _check_primes(x: Vertex, y: Vertex):
    if x.p != y.p:
        raise PrimeMismatch(f"vertices over p={x.p} and p={y.p}")


def relative_integer_matrix(x: Vertex, y: Vertex):
    """Integer matrix C with M_x^{-1} M_y = C times a rational scalar.

    Returns (C, shift) where shift is the valuation of the scalar, so the
    divisor valuations of M_x^{-1} M_y are those of C shifted by shift.
    """
    _check_primes(x, y)
    adj, det = kernels.adj_det_int(x.rows)
    c = kernels.mat_mul_int(adj, y.rows)
    p = x.p
    shift = kernels.vp_int(x.den, p) - kernels.vp_int(det, p) - kernels.vp_int(y.den, p)
    return c, shift


def _divisor_exponents(x: Vertex, y: Vertex):
    """Elementary divisor valuations of M_x^{-1} M_y, ascending."""
    c, shift = relative_integer_matrix(x, y)
    m1, m2, m3 = kernels.minor_val_profile(c, x.p)
    return (m1 + shift, (m2 - m1) + shift, (m3 - m2) + shift)


def vector_distance_raw(x: Vertex, y: Vertex) -> A2Vector:
    """Segment type from the canonical representatives, before PGL scaling."""
    e1, e2, e3 = _divisor_exponents(x, y)
    return A2Vector(Fraction(e3), Fraction(e2), Fraction(e1))


def vector_distance(x: Vertex, y: Vertex) -> A2Vector:
    """PGL-normalized segment type theta(x, y) (minimal coordinate 0)."""
    return vector_distance_raw(x, y).pgl_normalized()


def smith_exponents(x: Vertex, y: Vertex):
    """Divisor valuations via the full Smith routine (independent route)."""
    c, shift = relative_integer_matrix(x, y)
    _, _, exps = kernels.smith_transform_int(c, x.p)
    return tuple(e + shift for e in exps)


def smith_adapted_columns(x: Vertex, y: Vertex):
    """Adapted basis data for the pair (L_x, L_y).

    Returns (u_rows, u_den, exps): exps ascend and the columns of
    M_x . U are a basis (f_k) of L_x with (p^exps[k] f_k) a basis of L_y
    up to a global p-power.
    """
    c, shift = relative_integer_matrix(x, y)
    u_rows, u_den, exps = kernels.smith_transform_int(c, x.p)
    return u_rows, u_den, tuple(e + shift for e in exps)


def theta_symmetry_check(x: Vertex, y: Vertex) -> bool:
    """theta(y, x) equals j(theta(x, y)) after PGL normalization."""
    lhs = vector_distance(y, x)
    rhs = opposition_involution(vector_distance_raw(x, y)).pgl_normalized()
    return lhs == rhs


@dataclass(frozen=True)
class TreeVertex:
    """Canonical rank-2 lattice class (a panel-tree vertex)."""

    rows: tuple
    den: int
    p: int

    def matrix(self):
        return tuple(tuple(Fraction(e, self.den) for e in row) for row in self.rows)

    def to_json(self):
        return {
            "p": self.p,
            "matrix": [[str(Fraction(e, self.den)) for e in row] for row in self.rows],
        }


def tree_normal_form(matrix, p) -> TreeVertex:
    rows = _to_integer_rows(matrix)
    try:
        canon, den = kernels.hnf_int(rows, p)
    except ValueError as exc:
        raise SingularMatrix(str(exc)) from None
    return TreeVertex(canon, den, p)


def standard_tree_vertex(p) -> TreeVertex:
    return TreeVertex(((1, 0), (0, 1)), 1, p)


def tree_distance(t1: TreeVertex, t2: TreeVertex) -> int:
    """Difference of the two divisor valuations of the relative position."""
    if t1.p != t2.p:
        raise PrimeMismatch(f"tree vertices over p={t1.p} and p={t2.p}")
    adj, det = kernels.adj_det_int(t1.rows)
    c = kernels.mat_mul_int(adj, t2.rows)
    m1, m2 = kernels.minor_val_profile(c, t1.p)
    return m2 - 2 * m1


def tree_smith_exponents(t1: TreeVertex, t2: TreeVertex):
    """Rank-2 divisor valuations via the Smith route (oracle for distance)."""
    if t1.p != t2.p:
        raise PrimeMismatch("prime mismatch")
    adj, det = kernels.adj_det_int(t1.rows)
    c = kernels.mat_mul_int(adj, t2.rows)
    _, _, exps = kernels.smith_transform_int(c, t1.p)
    shift = (
        kernels.vp_int(t1.den, t1.p)
        - kernels.vp_int(det, t1.p)
        - kernels.vp_int(t2.den, t1.p)
    )
    return tuple(e + shift for e in exps)
