import random
from fractions import Fraction

import pytest

from a2building.coxeter import dominance_project
from a2building.errors import PrimeMismatch, SingularMatrix
from a2building.lattices import (
    TreeVertex,
    smith_exponents,
    standard_vertex,
    theta_symmetry_check,
    tree_distance,
    tree_normal_form,
    tree_smith_exponents,
    vector_distance,
    vector_distance_raw,
    vertex_normal_form,
)


def random_unimodular_local(rnd, p, size=3):
    """Random element of GL_size(Z_(p)): unit triangular product with swaps."""
    mat = [[Fraction(1 if i == j else 0) for j in range(size)] for i in range(size)]

    def mul(a, b):
        return [
            [sum(a[i][k] * b[k][j] for k in range(size)) for j in range(size)]
            for i in range(size)
        ]

    for _ in range(4):
        tri = [[Fraction(1 if i == j else 0) for j in range(size)] for i in range(size)]
        i, j = rnd.sample(range(size), 2)
        # entries may have any denominator prime to p
        den = rnd.choice([1, 3, 5, 7]) if p == 2 else rnd.choice([1, 2])
        tri[i][j] = Fraction(rnd.randint(-6, 6), den)
        mat = mul(mat, tri)
        perm = list(range(size))
        rnd.shuffle(perm)
        pm = [[Fraction(1 if perm[i] == j else 0) for j in range(size)] for i in range(size)]
        mat = mul(mat, pm)
    # unit diagonal scaling
    for i in range(size):
        u = rnd.choice([1, -1, 3, 5] if p == 2 else [1, -1, 2])
        mat[i] = [e * u for e in mat[i]]
    return mat


def random_matrix(rnd, p, size=3, vrange=(-3, 3)):
    while True:
        mat = [
            [
                Fraction(rnd.randint(1, 9) * rnd.choice([1, -1]))
                * Fraction(p) ** rnd.randint(*vrange)
                if rnd.random() > 0.15
                else Fraction(0)
                for _ in range(size)
            ]
            for _ in range(size)
        ]
        try:
            return vertex_normal_form(mat, p) if size == 3 else tree_normal_form(mat, p)
        except SingularMatrix:
            continue


def _mat_mul(a, b):
    n = len(a)
    return [
        [sum(Fraction(a[i][k]) * Fraction(b[k][j]) for k in range(n)) for j in range(n)]
        for i in range(n)
    ]


def test_identity_is_canonical():
    o = standard_vertex(2)
    assert o.rows == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert o.den == 1
    assert vertex_normal_form([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 2) == o


def test_singular_rejected():
    with pytest.raises(SingularMatrix):
        vertex_normal_form([[1, 0, 0], [0, 1, 0], [1, 1, 0]], 2)


def test_normal_form_scaling_invariance():
    p = 3
    m = [[9, 1, 0], [0, 3, 2], [0, 0, 1]]
    scaled = [[p * e for e in row] for row in m]
    assert vertex_normal_form(m, p) == vertex_normal_form(scaled, p)
    third = [[Fraction(e, p) for e in row] for row in m]
    assert vertex_normal_form(m, p) == vertex_normal_form(third, p)


def test_normal_form_unimodular_invariance_500():
    rnd = random.Random(42)
    p = 2
    for trial in range(500):
        v = random_matrix(rnd, p)
        u = random_unimodular_local(rnd, p)
        image = _mat_mul([[Fraction(e, v.den) for e in row] for row in v.rows], u)
        assert vertex_normal_form(image, p) == v, f"trial {trial}"


def test_normal_form_idempotent():
    rnd = random.Random(9)
    for p in (2, 5):
        for _ in range(100):
            v = random_matrix(rnd, p)
            again = vertex_normal_form(
                [[Fraction(e, v.den) for e in row] for row in v.rows], p
            )
            assert again == v


def test_vector_distance_diagonal():
    p = 2
    o = standard_vertex(p)
    y = vertex_normal_form([[4, 0, 0], [0, 2, 0], [0, 0, 1]], p)
    assert vector_distance(o, y).coords() == (2, 1, 0)
    assert vector_distance(o, o).coords() == (0, 0, 0)


def test_vector_distance_prime_mismatch():
    with pytest.raises(PrimeMismatch):
        vector_distance(standard_vertex(2), standard_vertex(3))


def _smith_exponents_naive(mat, p):
    """Test-local Smith routine: full pivoting, Fraction arithmetic."""
    from a2building.arith import val

    work = [[Fraction(e) for e in row] for row in mat]
    n = len(work)
    exps = []
    for s in range(n):
        piv = None
        for i in range(s, n):
            for j in range(s, n):
                if work[i][j] != 0:
                    v = val(work[i][j], p)
                    if piv is None or v < piv[0]:
                        piv = (v, i, j)
        v, i, j = piv
        work[s], work[i] = work[i], work[s]
        for row in work:
            row[s], row[j] = row[j], row[s]
        pivot = work[s][s]
        for i in range(s + 1, n):
            f = work[i][s] / pivot
            work[i] = [a - f * b for a, b in zip(work[i], work[s])]
        for j in range(s + 1, n):
            f = work[s][j] / pivot
            for i in range(s, n):
                work[i][j] -= f * work[i][s]
        exps.append(v)
    return tuple(sorted(exps))


def test_vector_distance_vs_naive_smith_oracle():
    rnd = random.Random(77)
    p = 2
    o = standard_vertex(p)
    for _ in range(200):
        y = random_matrix(rnd, p)
        rel = _mat_mul(
            [[Fraction(e) for e in row] for row in o.rows],
            [[Fraction(e, y.den) for e in row] for row in y.rows],
        )
        exps = _smith_exponents_naive(rel, p)
        theta = vector_distance_raw(o, y)
        assert tuple(int(c) for c in theta.coords()) == tuple(reversed(exps))
        assert smith_exponents(o, y) == exps


def test_general_pair_distance_with_conjugation():
    rnd = random.Random(5)
    p = 3
    for _ in range(100):
        x = random_matrix(rnd, p)
        y = random_matrix(rnd, p)
        got = vector_distance(x, y)
        want = tuple(reversed(smith_exponents(x, y)))
        shift = min(want)
        assert got.coords() == tuple(Fraction(e - shift) for e in want)


def test_theta_invariance_under_diag_translation():
    # theta([U], [U diag(p^a) V]) = sorted exponents for random local U, V
    rnd = random.Random(123)
    p = 2
    for _ in range(200):
        u = random_unimodular_local(rnd, p)
        v = random_unimodular_local(rnd, p)
        a = sorted([rnd.randint(0, 4) for _ in range(3)], reverse=True)
        d = [[Fraction(p) ** a[i] if i == j else Fraction(0) for j in range(3)] for i in range(3)]
        x = vertex_normal_form(u, p)
        y = vertex_normal_form(_mat_mul(_mat_mul(u, d), v), p)
        assert vector_distance(x, y) == dominance_project(a).pgl_normalized()


def test_theta_symmetry():
    rnd = random.Random(31)
    p = 2
    o = standard_vertex(p)
    y = vertex_normal_form([[4, 0, 0], [0, 2, 0], [0, 0, 1]], p)
    assert theta_symmetry_check(o, y)
    assert theta_symmetry_check(o, o)
    for _ in range(200):
        x = random_matrix(rnd, p)
        z = random_matrix(rnd, p)
        assert theta_symmetry_check(x, z)


def test_tree_vertex_distance():
    p = 2
    t0 = tree_normal_form([[1, 0], [0, 1]], p)
    t1 = tree_normal_form([[2, 0], [0, 1]], p)
    assert tree_distance(t0, t0) == 0
    assert tree_distance(t0, t1) == 1
    with pytest.raises(PrimeMismatch):
        tree_distance(t0, tree_normal_form([[1, 0], [0, 1]], 3))


def test_tree_distance_vs_smith_oracle():
    rnd = random.Random(8)
    p = 2
    for _ in range(200):
        t1 = random_matrix(rnd, p, size=2)
        t2 = random_matrix(rnd, p, size=2)
        e = tree_smith_exponents(t1, t2)
        assert tree_distance(t1, t2) == e[1] - e[0]


def test_tree_normal_form_rectangular_rank_2():
    p = 2
    t = tree_normal_form([[2, 0, 2], [0, 1, 1]], p)
    assert isinstance(t, TreeVertex)
    # the third column is in the span of the first two
    assert t == tree_normal_form([[2, 0], [0, 1]], p)
