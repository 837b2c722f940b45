"""Residue chambers: point-line flags of the finite projective plane PG(2, p).

These are the local alcoves seen in the spherical residue at a vertex;
germs of regular segments and of chambers at infinity land here.
"""

from dataclasses import dataclass
from itertools import product

from .errors import PrimeMismatch, SingularSegment
from .lattices import Vertex, smith_adapted_columns


def pg_normalize(vec, p):
    """Projective normal form mod p: first nonzero coordinate scaled to 1."""
    reduced = tuple(int(e) % p for e in vec)
    for e in reduced:
        if e != 0:
            inv = pow(e, -1, p)
            return tuple((x * inv) % p for x in reduced)
    raise ValueError("zero vector has no projective class")


@dataclass(frozen=True)
class ResidueChamber:
    """Incident (point, line) pair of PG(2, p); line stored as a covector."""

    p: int
    point: tuple
    line: tuple

    def __post_init__(self):
        object.__setattr__(self, "point", pg_normalize(self.point, self.p))
        object.__setattr__(self, "line", pg_normalize(self.line, self.p))
        if _dot_mod(self.point, self.line, self.p) != 0:
            raise ValueError("point does not lie on line")

    def to_json(self):
        return {"p": self.p, "point": list(self.point), "line": list(self.line)}


def _dot_mod(a, b, p):
    return sum(x * y for x, y in zip(a, b)) % p


def residue_opposite(c1: ResidueChamber, c2: ResidueChamber) -> bool:
    """Both the point of each flag off the line of the other."""
    if c1.p != c2.p:
        raise PrimeMismatch(f"residue chambers over p={c1.p} and p={c2.p}")
    p = c1.p
    return (
        _dot_mod(c1.point, c2.line, p) != 0 and _dot_mod(c2.point, c1.line, p) != 0
    )


def _cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def germ_flag(o: Vertex, x: Vertex) -> ResidueChamber:
    """Local alcove at o of the regular segment [o, x].

    The adapted-basis column with the smallest divisor valuation reduces to
    the point; that column together with the middle one spans the line.
    Raises SingularSegment when the segment type is not regular.
    """
    u_rows, u_den, exps = smith_adapted_columns(o, x)
    if not (exps[0] < exps[1] < exps[2]):
        raise SingularSegment(f"segment type {tuple(exps)} is not regular")
    p = o.p
    inv_den = pow(u_den % p, -1, p)
    col0 = tuple((u_rows[r][0] * inv_den) % p for r in range(3))
    col1 = tuple((u_rows[r][1] * inv_den) % p for r in range(3))
    line = _cross(col0, col1)
    return ResidueChamber(p, col0, line)


def segments_opposite_at(o: Vertex, x: Vertex, y: Vertex) -> bool:
    """Whether the regular segments [o,x] and [o,y] point into opposite alcoves."""
    return residue_opposite(germ_flag(o, x), germ_flag(o, y))


def enumerate_points(p):
    """Normalized point representatives of PG(2, p)."""
    pts = [(1, y, z) for y, z in product(range(p), repeat=2)]
    pts += [(0, 1, z) for z in range(p)]
    pts.append((0, 0, 1))
    return pts


def point_preimage_vertex(v: Vertex, point) -> Vertex:
    """Neighbor vertex: preimage in L_v of the span of a residue point."""
    from .lattices import vertex_normal_form

    p = v.p
    lift = tuple(int(e) % p for e in point)
    pivot = next(i for i in range(3) if lift[i] % p != 0)
    others = [i for i in range(3) if i != pivot]
    cols = [lift]
    for j in others:
        cols.append(tuple(p if i == j else 0 for i in range(3)))
    ambient = tuple(
        tuple(sum(v.rows[r][k] * col[k] for k in range(3)) for col in cols)
        for r in range(3)
    )
    return vertex_normal_form(ambient, p)


def line_preimage_vertex(v: Vertex, line) -> Vertex:
    """Neighbor vertex: preimage in L_v of the kernel of a residue covector."""
    from .lattices import vertex_normal_form

    p = v.p
    cov = tuple(int(e) % p for e in line)
    pivot = next(i for i in range(3) if cov[i] % p != 0)
    others = [i for i in range(3) if i != pivot]
    cols = []
    for j in others:
        vec = [0, 0, 0]
        vec[j] = cov[pivot]
        vec[pivot] = (-cov[j]) % p
        cols.append(tuple(vec))
    cols.append(tuple(p if i == pivot else 0 for i in range(3)))
    ambient = tuple(
        tuple(sum(v.rows[r][k] * col[k] for k in range(3)) for col in cols)
        for r in range(3)
    )
    return vertex_normal_form(ambient, p)


def vertex_neighbors(v: Vertex):
    """All vertices adjacent to v (one per point and per line of PG(2, p))."""
    out = []
    for pt in enumerate_points(v.p):
        out.append(point_preimage_vertex(v, pt))
    for ln in enumerate_points(v.p):
        out.append(line_preimage_vertex(v, ln))
    return out


def enumerate_chambers(p):
    """All incident point-line flags of PG(2, p)."""
    chambers = []
    for point in enumerate_points(p):
        for line in enumerate_points(p):
            if _dot_mod(point, line, p) == 0:
                chambers.append(ResidueChamber(p, point, line))
    return chambers
