"""Local-to-global fixed point search and panel-tree translation lengths."""

import string
from dataclasses import dataclass

from . import kernels
from .errors import NotStabilizing, NotTypePreserving
from .infinity import BoundaryVertex, panel_tree_project
from .isometry import GroupElement, cartan_projection, classify
from .lattices import Vertex, standard_vertex, tree_distance, vector_distance
from .pingpong import iter_reduced_words
from .residues import vertex_neighbors


def tree_translation_length(g: GroupElement, v: BoundaryVertex, x: Vertex) -> int:
    """Translation length of the induced tree isometry at the panel tree of v.

    Uses the two-step displacement formula max(0, d(x, g^2 x) - d(x, g x));
    zero exactly when the induced isometry is elliptic.
    """
    if not _stabilizes(g, v):
        raise NotStabilizing("element does not stabilize the vertex at infinity")
    t0 = panel_tree_project(v, x)
    gx = g.apply(x)
    ggx = g.apply(gx)
    d1 = tree_distance(t0, panel_tree_project(v, gx))
    d2 = tree_distance(t0, panel_tree_project(v, ggx))
    return max(0, d2 - d1)


def _stabilizes(g: GroupElement, v: BoundaryVertex) -> bool:
    if v.kind == "point":
        image = kernels.mat_vec_int(g.rows, v.vec)
    else:
        image = tuple(
            sum(v.vec[r] * g.rows[r][i] for r in range(3)) for i in range(3)
        )
    cx = (
        image[1] * v.vec[2] - image[2] * v.vec[1],
        image[2] * v.vec[0] - image[0] * v.vec[2],
        image[0] * v.vec[1] - image[1] * v.vec[0],
    )
    return all(e == 0 for e in cx)


@dataclass(frozen=True)
class FixedPointReport:
    """Outcome of the bounded local-to-global search.

    Exactly one of: a common fixed vertex, a hyperbolic witness word, or
    an inconclusive radius-exhausted verdict.
    """

    verdict: str
    classifications: tuple
    search_radius: int
    word_depth: int
    fixed_vertex: Vertex = None
    witness_word: str = None
    witness: GroupElement = None
    max_displacement: tuple = None

    def to_json(self):
        data = {
            "verdict": self.verdict,
            "generators": [
                cls.to_json(g) for g, cls in self.classifications
            ],
            "search_radius": self.search_radius,
            "word_depth": self.word_depth,
        }
        if self.fixed_vertex is not None:
            data["fixed_vertex"] = self.fixed_vertex.to_json()
        if self.witness_word is not None:
            data["witness_word"] = self.witness_word
            data["witness"] = self.witness.to_json()
        if self.max_displacement is not None:
            data["max_displacement"] = [str(c) for c in self.max_displacement]
        return data


def local_global_fixed_point(
    generators, radius=None, word_depth=2, basepoint=None
) -> FixedPointReport:
    """Classify generators and words, then search a ball for a fixed vertex.

    A hyperbolic generator or short word is a witness refuting local
    ellipticity.  If every tested word is elliptic, vertices within the
    radius are scanned for one fixed by every generator; inconclusive is a
    search limitation, not a mathematical verdict.
    """
    if not generators:
        raise ValueError("need at least one generator")
    p = generators[0].p
    for g in generators:
        if not g.is_type_preserving:
            raise NotTypePreserving("all generators must be type-preserving")
    classifications = tuple((g, classify(g)) for g in generators)
    o = basepoint or standard_vertex(p)
    if radius is None:
        radius = 0
        for g in generators:
            disp = cartan_projection(g, o)
            radius = max(radius, int(disp.a1))
    if len(generators) > len(string.ascii_lowercase):
        raise ValueError("too many generators for single-letter word labels")
    for idx, (g, cls) in enumerate(classifications):
        if cls.kind == "hyperbolic":
            return FixedPointReport(
                "witness",
                classifications,
                radius,
                word_depth,
                witness_word=string.ascii_lowercase[idx],
                witness=g,
            )
    letters = {}
    for idx, g in enumerate(generators):
        lo = string.ascii_lowercase[idx]
        up = string.ascii_uppercase[idx]
        letters[lo] = (g, up)
        letters[up] = (g.inverse(), lo)
    for word, elem in iter_reduced_words(letters, word_depth):
        if elem.is_scalar():
            continue
        if classify(elem).kind == "hyperbolic":
            return FixedPointReport(
                "witness",
                classifications,
                radius,
                word_depth,
                witness_word=word,
                witness=elem,
            )
    seen = {o}
    frontier = [o]
    ball = [o]
    for _ in range(radius):
        nxt = []
        for v in frontier:
            for w in vertex_neighbors(v):
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    ball.append(w)
        frontier = nxt
    best_profile = None
    for v in ball:
        displacements = [vector_distance(v, g.apply(v)) for g in generators]
        worst = max(displacements, key=lambda t: (t.a1, t.a2))
        if all(d.is_zero() for d in displacements):
            return FixedPointReport(
                "fixed_vertex",
                classifications,
                radius,
                word_depth,
                fixed_vertex=v,
            )
        if best_profile is None or (worst.a1, worst.a2) < best_profile[:2]:
            best_profile = (worst.a1, worst.a2, worst.a3)
    return FixedPointReport(
        "inconclusive",
        classifications,
        radius,
        word_depth,
        max_displacement=best_profile,
    )
