"""Chambers and vertices at infinity, sectors, cylinders and panel trees.

A chamber at infinity is a full rational flag line < plane of K^3 with
primitive integer coordinates; a vertex at infinity is a line or a plane
alone.  Sector membership, germs at a vertex and panel-tree projections
are all decided exactly.
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import kernels
from .arith import parse_scalar
from .errors import PrimeMismatch
from .lattices import (
    TreeVertex,
    Vertex,
    tree_normal_form,
    vector_distance,
    vertex_normal_form,
)
from .residues import ResidueChamber, _cross, pg_normalize


def primitive_vector(vec):
    """Clear denominators, divide out content, make first nonzero positive."""
    vals = [parse_scalar(e) for e in vec]
    if all(v == 0 for v in vals):
        raise ValueError("zero vector is not projective")
    den = 1
    for v in vals:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    g = 0
    for e in ints:
        g = gcd(g, abs(e))
    ints = [e // g for e in ints]
    for e in ints:
        if e != 0:
            if e < 0:
                ints = [-x for x in ints]
            break
    return tuple(ints)


@dataclass(frozen=True)
class ChamberAtInfinity:
    """Full flag: primitive line vector inside the plane with primitive normal."""

    line: tuple
    plane: tuple

    def __post_init__(self):
        object.__setattr__(self, "line", primitive_vector(self.line))
        object.__setattr__(self, "plane", primitive_vector(self.plane))
        if sum(a * b for a, b in zip(self.line, self.plane)) != 0:
            raise ValueError("line is not contained in the plane")

    def to_json(self):
        return {"line": [str(e) for e in self.line], "plane": [str(e) for e in self.plane]}

    @staticmethod
    def from_json(data) -> "ChamberAtInfinity":
        return ChamberAtInfinity(
            tuple(parse_scalar(e) for e in data["line"]),
            tuple(parse_scalar(e) for e in data["plane"]),
        )


STANDARD_FLAG = ChamberAtInfinity((1, 0, 0), (0, 0, 1))
REVERSED_FLAG = ChamberAtInfinity((0, 0, 1), (1, 0, 0))


def flags_opposite(f1: ChamberAtInfinity, f2: ChamberAtInfinity) -> bool:
    """Exact transversality: each line off the other plane."""
    d1 = sum(a * b for a, b in zip(f1.line, f2.plane))
    d2 = sum(a * b for a, b in zip(f2.line, f1.plane))
    return d1 != 0 and d2 != 0


def apply_to_flag(rows, den, f: ChamberAtInfinity) -> ChamberAtInfinity:
    """Image flag under an invertible matrix given as integer rows / den."""
    line = kernels.mat_vec_int(rows, f.line)
    adj, det = kernels.adj_det_int(rows)
    # plane normal transforms by the inverse transpose; adjugate suffices
    plane = tuple(
        sum(adj[r][i] * f.plane[r] for r in range(3)) for i in range(3)
    )
    return ChamberAtInfinity(line, plane)


def _p_primitive(vec, p):
    """Divide an integer vector by the p-power content (keeps other content)."""
    m = None
    for e in vec:
        if e != 0:
            v = kernels.vp_int(e, p)
            if m is None or v < m:
                m = v
    if m is None:
        raise ValueError("zero vector")
    q = p ** m
    return tuple(e // q for e in vec)


def germ_of_chamber(o: Vertex, f: ChamberAtInfinity) -> ResidueChamber:
    """Residue chamber at o of the sector toward f.

    Point: reduction of a generator of line(f) meeting L_o primitively.
    Line: reduction of the rank-2 intersection plane(f) meet L_o.
    """
    adj, _ = kernels.adj_det_int(o.rows)
    coords = _p_primitive(kernels.mat_vec_int(adj, f.line), o.p)
    m = tuple(
        sum(f.plane[r] * o.rows[r][i] for r in range(3)) for i in range(3)
    )
    m = _p_primitive(m, o.p)
    return ResidueChamber(o.p, pg_normalize(coords, o.p), pg_normalize(m, o.p))


def sector_adapted_columns(o: Vertex, f: ChamberAtInfinity):
    """Integer matrix whose columns [w1 w2 w3] adapt L_o to the flag f.

    In ambient coordinates: w1 generates line(f) meet L_o, (w1, w2) span
    plane(f) meet L_o, and (w1, w2, w3) is a basis of L_o up to a global
    scalar.  The sector point of profile (b1 >= b2 >= 0) is spanned by
    (w1, p^b2 w2, p^b1 w3).
    """
    p = o.p
    adj, _ = kernels.adj_det_int(o.rows)
    c = _p_primitive(kernels.mat_vec_int(adj, f.line), p)
    m = tuple(sum(f.plane[r] * o.rows[r][i] for r in range(3)) for i in range(3))
    m = _p_primitive(m, p)
    pivot = next(i for i in range(3) if m[i] % p != 0)
    others = [i for i in range(3) if i != pivot]
    kvecs = {}
    for j in others:
        vec = [0, 0, 0]
        vec[j] = m[pivot]
        vec[pivot] = -m[j]
        kvecs[j] = tuple(vec)
    a, b = others
    # c = (c_a k_a + c_b k_b) / m_pivot; the partner column must keep the
    # determinant a unit, which needs the complementary slot of c to be one
    if c[b] % p != 0:
        w2 = kvecs[a]
    elif c[a] % p != 0:
        w2 = kvecs[b]
    else:
        raise ValueError("flag coordinates not primitive; cannot adapt")
    e_pivot = tuple(1 if i == pivot else 0 for i in range(3))
    cols = (c, w2, e_pivot)
    ambient = tuple(
        tuple(
            sum(o.rows[r][k] * cols[j][k] for k in range(3)) for j in range(3)
        )
        for r in range(3)
    )
    return ambient


def sector_point(o: Vertex, f: ChamberAtInfinity, b1: int, b2: int) -> Vertex:
    """Vertex of the sector from o toward f at dominance profile (b1, b2)."""
    if not b1 >= b2 >= 0:
        raise ValueError("profile must satisfy b1 >= b2 >= 0")
    w = sector_adapted_columns(o, f)
    p = o.p
    scale = (1, p ** b2, p ** b1)
    scaled = tuple(
        tuple(w[r][j] * scale[j] for j in range(3)) for r in range(3)
    )
    return vertex_normal_form(scaled, o.p)


def u_cylinder_contains(o: Vertex, y: Vertex, f: ChamberAtInfinity) -> bool:
    """Whether y lies in the sector from o toward f (bounded enumeration).

    Candidate profiles (b1, b2) are enumerated up to the total valuation
    spread of theta(o, y) and compared by canonical form; the enumeration
    is finite and exact.
    """
    if o.p != y.p:
        raise PrimeMismatch("vertices over different primes")
    theta = vector_distance(o, y)
    bound = int(theta.a1 + theta.a2)
    for b1 in range(bound + 1):
        for b2 in range(min(b1, bound - b1) + 1):
            if sector_point(o, f, b1, b2) == y:
                return True
    return False


@dataclass(frozen=True)
class BoundaryVertex:
    """Vertex at infinity: a point ([line of K^3]) or a line ([plane])."""

    kind: str
    vec: tuple

    def __post_init__(self):
        if self.kind not in ("point", "line"):
            raise ValueError("kind must be 'point' or 'line'")
        object.__setattr__(self, "vec", primitive_vector(self.vec))

    def to_json(self):
        return {"kind": self.kind, "vec": [str(e) for e in self.vec]}


def boundary_vertices_of(f: ChamberAtInfinity):
    """The two vertices at infinity in the closure of a chamber."""
    return BoundaryVertex("point", f.line), BoundaryVertex("line", f.plane)


def panel_tree_project(v: BoundaryVertex, x: Vertex) -> TreeVertex:
    """Projection of a building vertex to the panel tree at v.

    Point type: class of the image of L_x in the quotient by the line.
    Line type: class of L_x meet the plane inside that plane.  The chart
    identifying quotient or plane with K^2 is fixed by v alone, so the
    projection is equivariant under the stabilizer of v.
    """
    p = x.p
    if v.kind == "point":
        d = v.vec
        pivot = next(i for i in range(3) if d[i] != 0)
        others = [i for i in range(3) if i != pivot]
        rows2 = tuple(
            tuple(
                d[pivot] * x.rows[j][c] - d[j] * x.rows[pivot][c]
                for c in range(3)
            )
            for j in others
        )
        return tree_normal_form(rows2, p)
    m = tuple(sum(v.vec[r] * x.rows[r][i] for r in range(3)) for i in range(3))
    m = _p_primitive(m, p)
    pivot = next(i for i in range(3) if m[i] % p != 0)
    others = [i for i in range(3) if i != pivot]
    kvecs = []
    for j in others:
        vec = [0, 0, 0]
        vec[j] = m[pivot]
        vec[pivot] = -m[j]
        kvecs.append(tuple(vec))
    ambient = [
        tuple(sum(x.rows[r][k] * kv[k] for k in range(3)) for kv in kvecs)
        for r in range(3)
    ]
    n_pivot = next(i for i in range(3) if v.vec[i] != 0)
    rows2 = tuple(ambient[r] for r in range(3) if r != n_pivot)
    return tree_normal_form(rows2, p)
