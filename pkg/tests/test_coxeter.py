import random
from fractions import Fraction

import pytest

from a2building.coxeter import (
    A2Vector,
    LONG_WEYL,
    WeylElement,
    dominance_project,
    euclidean_norm,
    euclidean_norm_squared,
    is_regular,
    opposition_involution,
    weyl_group,
)


def test_dominance_project_sorts():
    assert dominance_project((0, 2, 1)).coords() == (2, 1, 0)
    assert dominance_project((1, 1, 1)).coords() == (1, 1, 1)
    rnd = random.Random(3)
    for _ in range(200):
        triple = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 4)) for _ in range(3)]
        v = dominance_project(triple)
        assert v.a1 >= v.a2 >= v.a3
        assert sorted(v.coords()) == sorted(triple)
        assert dominance_project(v.coords()) == v


def test_vector_validates_dominance():
    with pytest.raises(ValueError):
        A2Vector(Fraction(0), Fraction(1), Fraction(0))


def test_opposition_examples():
    v = dominance_project((1, 0, 0))
    assert opposition_involution(v).pgl_normalized().coords() == (1, 1, 0)
    w = dominance_project((2, 1, 0))
    assert opposition_involution(w).pgl_normalized().coords() == (2, 1, 0)


def test_opposition_involution_properties():
    rnd = random.Random(11)
    for _ in range(100):
        v = dominance_project([rnd.randint(-6, 6) for _ in range(3)])
        j = opposition_involution(v)
        assert opposition_involution(j) == v
        assert j.total() == -v.total()
        assert euclidean_norm_squared(j) == euclidean_norm_squared(v)


def test_type_swap_exhaustive():
    # j swaps vertex types 1 and 2 and fixes 0, over all triples in [0,4]^3
    for a in range(5):
        for b in range(5):
            for c in range(5):
                v = dominance_project((a, b, c))
                t = v.vertex_type()
                tj = opposition_involution(v).pgl_normalized().vertex_type()
                assert tj == (-t) % 3


def test_is_regular():
    assert is_regular(dominance_project((2, 1, 0)))
    assert not is_regular(dominance_project((3, 0, 0)))
    assert not is_regular(dominance_project((0, 0, 0)))


def test_norm_values():
    assert euclidean_norm_squared(dominance_project((0, 0, 0))) == 0
    assert euclidean_norm_squared(dominance_project((1, 0, 0))) == Fraction(2, 3)
    assert euclidean_norm_squared(dominance_project((2, 1, 0))) == 2
    assert euclidean_norm(dominance_project((2, 1, 0))) == pytest.approx(2**0.5)


def test_norm_invariant_under_normalization():
    rnd = random.Random(5)
    for _ in range(50):
        v = dominance_project([rnd.randint(-5, 5) for _ in range(3)])
        assert euclidean_norm_squared(v) == euclidean_norm_squared(v.pgl_normalized())


def test_json_roundtrip():
    v = dominance_project(("5/2", "1", "-3"))
    assert A2Vector.from_json(v.to_json()) == v


def test_weyl_group_structure():
    elems = weyl_group()
    assert len(elems) == 6
    assert LONG_WEYL * LONG_WEYL == WeylElement((1, 2, 3))
    # long element reverses sorted triples
    assert LONG_WEYL.apply((3, 2, 1)) == (1, 2, 3)
    for w in elems:
        assert (w * w.inverse()).is_identity
