"""Model Euclidean Coxeter data of type A2-tilde.

Dominance-ordered valuation triples, the finite Weyl group S3, the
opposition involution and the (display-only) Euclidean norm.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import parse_scalar


@dataclass(frozen=True, order=True)
class A2Vector:
    """Dominance-ordered triple of rational valuations, a1 >= a2 >= a3."""

    a1: Fraction
    a2: Fraction
    a3: Fraction

    def __post_init__(self):
        for name in ("a1", "a2", "a3"):
            v = getattr(self, name)
            if not isinstance(v, Fraction):
                object.__setattr__(self, name, parse_scalar(v))
        if not (self.a1 >= self.a2 >= self.a3):
            raise ValueError(f"triple {self.coords()} is not dominance ordered")

    def coords(self):
        return (self.a1, self.a2, self.a3)

    def total(self) -> Fraction:
        return self.a1 + self.a2 + self.a3

    def is_zero(self) -> bool:
        return self.a1 == self.a2 == self.a3 == 0

    def pgl_normalized(self) -> "A2Vector":
        """Shift so the minimal coordinate is zero."""
        m = self.a3
        return A2Vector(self.a1 - m, self.a2 - m, self.a3 - m)

    def vertex_type(self) -> int:
        """Total valuation mod 3; classifies the vertex type shift."""
        t = self.total()
        if t.denominator != 1:
            raise ValueError("vertex type needs an integer triple")
        return t.numerator % 3

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords())

    def to_json(self):
        return [str(c) for c in self.coords()]

    @staticmethod
    def from_json(data) -> "A2Vector":
        if len(data) != 3:
            raise ValueError("expected three coordinates")
        return A2Vector(*(parse_scalar(c) for c in data))

    def __str__(self):
        return "(" + ", ".join(str(c) for c in self.coords()) + ")"


ZERO_VECTOR = A2Vector(Fraction(0), Fraction(0), Fraction(0))


def dominance_project(triple) -> A2Vector:
    """Sort a raw triple into the dominance chamber."""
    vals = sorted((parse_scalar(c) for c in triple), reverse=True)
    return A2Vector(*vals)


def opposition_involution(v: A2Vector) -> A2Vector:
    """j(v) = w0(-v) = (-a3, -a2, -a1), returned un-normalized."""
    return A2Vector(-v.a3, -v.a2, -v.a1)


def is_regular(v: A2Vector) -> bool:
    """Strict dominance: the triple lies in the open Weyl chamber."""
    return v.a1 > v.a2 > v.a3


def euclidean_norm_squared(v: A2Vector) -> Fraction:
    """Exact squared norm of the mean-centered triple."""
    mean = v.total() / 3
    return sum((c - mean) ** 2 for c in v.coords())


def euclidean_norm(v: A2Vector) -> float:
    """Display-only float norm; never feeds an exact decision."""
    return math.sqrt(euclidean_norm_squared(v))


@dataclass(frozen=True)
class WeylElement:
    """Permutation of (1, 2, 3) under composition."""

    perm: tuple

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(tuple(self.perm[other.perm[i] - 1] for i in range(3)))

    def inverse(self) -> "WeylElement":
        inv = [0, 0, 0]
        for i, x in enumerate(self.perm):
            inv[x - 1] = i + 1
        return WeylElement(tuple(inv))

    def apply(self, triple):
        """Permute raw coordinates; the result need not be dominant."""
        coords = tuple(parse_scalar(c) for c in triple)
        return tuple(coords[self.perm[i] - 1] for i in range(3))

    @property
    def is_identity(self) -> bool:
        return self.perm == (1, 2, 3)


IDENTITY_WEYL = WeylElement((1, 2, 3))
LONG_WEYL = WeylElement((3, 2, 1))


def weyl_group():
    """All six elements of S3."""
    import itertools

    return [WeylElement(p) for p in itertools.permutations((1, 2, 3))]
