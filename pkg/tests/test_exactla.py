import random
from fractions import Fraction

import pytest

from liefilt.exactla import (
    Matrix,
    Subspace,
    complement,
    image_basis,
    intersect,
    invert,
    kernel_basis,
    rank,
    solve_preimage,
    sum_spaces,
    unit_vec,
    vec,
)


def F(x, y=1):
    return Fraction(x, y)


def test_rank_trivial_cases():
    assert rank(Matrix.zero(3, 3)) == 0
    assert rank(Matrix.identity(4)) == 4
    assert rank(Matrix([[1, 2], [2, 4]])) == 1


def test_rank_rectangular_and_fractions():
    assert rank(Matrix([[F(1, 2), F(1, 3), 0], [F(1, 4), F(1, 6), 0]])) == 1
    assert rank(Matrix([[1, 0, 1], [0, 1, 1]])) == 2


def test_kernel_trivial_cases():
    assert kernel_basis(Matrix.identity(3)).dim == 0
    full = kernel_basis(Matrix.zero(4, 4))
    assert full.dim == 4
    k = kernel_basis(Matrix([[1, 1]]))
    assert k.dim == 1
    assert k == Subspace(Matrix([[1], [-1]]))


def test_image_trivial_cases():
    assert image_basis(Matrix.zero(3, 2)).dim == 0
    assert image_basis(Matrix.identity(3)) == Subspace.full(3)
    img = image_basis(Matrix([[1, 2], [2, 4]]))
    assert img.dim == 1
    assert img.contains_vector(vec([1, 2]))


def test_complement_trivial_cases():
    t = Subspace(Matrix([[1, 0], [0, 1], [0, 0]]))
    assert complement(Subspace.zero(3), t) == t
    assert complement(t, t).dim == 0


def test_complement_greedy_choice():
    # Inside the full plane, the complement of span{e1} is span{e2}: the
    # first standard basis vector independent of e1.
    s = Subspace(Matrix([[1], [0]]))
    c = complement(s, Subspace.full(2))
    assert c.dim == 1
    assert c.basis.col(0) == vec([0, 1])


def test_complement_requires_containment():
    s = Subspace(Matrix([[1], [0], [0]]))
    t = Subspace(Matrix([[0], [1], [0]]))
    with pytest.raises(ValueError):
        complement(s, t)


def test_solve_preimage_examples():
    b = vec([3, -1, 2])
    assert solve_preimage(Matrix.identity(3), b) == b
    assert solve_preimage(Matrix.zero(2, 2), vec([1, 0])) is None
    # Pivot-zero convention: the free variable stays at zero.
    assert solve_preimage(Matrix([[1, 1]]), vec([2])) == vec([2, 0])


def test_intersect_examples():
    s = Subspace(Matrix([[1, 0], [0, 1], [0, 0]]))
    assert intersect(s, s) == s
    t = Subspace(Matrix([[0], [0], [1]]))
    assert intersect(s, t).dim == 0
    a = Subspace(Matrix([[1, 0], [0, 1], [0, 0]]))
    b = Subspace(Matrix([[0, 0], [1, 0], [0, 1]]))
    inter = intersect(a, b)
    assert inter.dim == 1
    assert inter.contains_vector(vec([0, 1, 0]))


def test_intersect_dimension_mismatch():
    with pytest.raises(ValueError):
        intersect(Subspace.full(2), Subspace.full(3))


def _random_matrix(rng, rows, cols, span=6):
    return Matrix([[Fraction(rng.randint(-span, span), rng.randint(1, 3)) for _ in range(cols)] for _ in range(rows)])


def test_rank_nullity_on_random_matrices():
    rng = random.Random(7)
    for _ in range(60):
        m = _random_matrix(rng, rng.randint(1, 6), rng.randint(1, 6))
        assert kernel_basis(m).dim + rank(m) == m.cols


def test_kernel_vectors_annihilated():
    rng = random.Random(8)
    for _ in range(40):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6))
        k = kernel_basis(m)
        for j in range(k.dim):
            assert all(x == 0 for x in m.mul_vec(k.basis.col(j)))


def test_image_columns_have_preimages():
    rng = random.Random(9)
    for _ in range(40):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6))
        img = image_basis(m)
        for j in range(img.dim):
            b = img.basis.col(j)
            x = solve_preimage(m, b)
            assert x is not None
            assert m.mul_vec(x) == b


def test_solve_none_iff_rank_jump():
    rng = random.Random(10)
    for _ in range(60):
        m = _random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5))
        b = vec([rng.randint(-4, 4) for _ in range(m.rows)])
        x = solve_preimage(m, b)
        augmented = m.hstack(Matrix.from_cols([b], ambient=m.rows))
        if x is None:
            assert rank(augmented) > rank(m)
        else:
            assert m.mul_vec(x) == b
            assert rank(augmented) == rank(m)


def test_complement_dimension_identity():
    rng = random.Random(11)
    for _ in range(30):
        n = rng.randint(1, 5)
        t_mat = _random_matrix(rng, n, rng.randint(1, n))
        t = image_basis(t_mat)
        if t.dim == 0:
            continue
        keep = rng.randint(0, t.dim)
        s = Subspace(Matrix.from_cols([t.basis.col(j) for j in range(keep)], ambient=n), check=False)
        c = complement(s, t)
        assert s.dim + c.dim == t.dim
        assert intersect(s, c).dim == 0
        assert sum_spaces(s, c) == t


def test_span_equality_not_basis_equality():
    a = Subspace(Matrix([[1, 0], [0, 1]]))
    b = Subspace(Matrix([[1, 1], [1, -1]]))
    assert a == b


def test_invert_round_trip():
    rng = random.Random(12)
    count = 0
    while count < 20:
        n = rng.randint(1, 5)
        m = _random_matrix(rng, n, n)
        if rank(m) < n:
            continue
        count += 1
        assert m * invert(m) == Matrix.identity(n)
    d = Matrix([[2, 0], [0, F(1, 3)]])
    assert invert(d) == Matrix([[F(1, 2), 0], [0, 3]])


def test_zero_dimensional_edge_cases():
    assert rank(Matrix.zero(0, 0)) == 0
    assert kernel_basis(Matrix.zero(0, 3)).dim == 3
    assert image_basis(Matrix.zero(3, 0)).dim == 0
    assert solve_preimage(Matrix.zero(0, 2), vec([])) == vec([0, 0])
    z = Subspace.zero(0)
    assert z.dim == 0 and z.ambient_dim == 0
