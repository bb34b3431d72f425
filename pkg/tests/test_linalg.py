import pytest
from hypothesis import given, settings, strategies as st

from iqhall.errors import AmbientMismatch
from iqhall.linalg import (FpMatrix, Subspace, image_basis, iter_matrices,
                           iter_monic_vectors, iter_subspaces, kernel_basis,
                           rank, rref, solve)


def M(p, rows):
    return FpMatrix.from_rows(p, rows)


def test_rref_proportional_rows():
    _, rk, piv = rref(M(5, [[2, 4], [1, 2]]))
    assert rk == 1 and piv == [0]


def test_rref_identity_and_repeat():
    assert rank(FpMatrix.identity(2, 3)) == 3
    assert rank(M(2, [[1, 1], [1, 1]])) == 1


def test_kernel_of_sum_form():
    ker = kernel_basis(M(2, [[1, 1]]))
    assert ker.dim == 1 and ker.contains_vector((1, 1))


def test_solve_identity():
    assert solve(FpMatrix.identity(3, 2), (1, 0)) == (1, 0)
    assert solve(M(3, [[1, 0], [0, 0]]), (0, 1)) is None


def test_image_of_zero_map():
    assert image_basis(FpMatrix.zeros(3, 2, 2)).dim == 0


def test_subspace_lattice_basics():
    line1 = Subspace.from_vectors(2, 2, [(1, 0)])
    line2 = Subspace.from_vectors(2, 2, [(0, 1)])
    assert line1.sum(line2).dim == 2
    assert line1.intersect(line1) == line1
    full = Subspace.full(3, 2)
    line_mod3 = Subspace.from_vectors(3, 2, [(1, 0)])
    assert full.quotient_dim(line_mod3) == 1


def test_ambient_mismatch():
    with pytest.raises(AmbientMismatch):
        Subspace.full(2, 2).sum(Subspace.full(2, 3))


def test_iter_subspaces_counts():
    # Gaussian binomial [3 choose 1]_2 = 7 lines in F_2^3
    assert sum(1 for _ in iter_subspaces(2, 3, 1)) == 7
    assert sum(1 for _ in iter_subspaces(2, 3, 2)) == 7
    assert sum(1 for _ in iter_subspaces(3, 2, 1)) == 4


def test_iter_monic_vectors():
    lines = list(iter_monic_vectors(3, 2))
    assert len(lines) == 4
    assert all(next(x for x in v if x) == 1 for v in lines)


@st.composite
def small_matrix(draw, p):
    rows = draw(st.integers(0, 4))
    cols = draw(st.integers(0, 4))
    data = [[draw(st.integers(0, p - 1)) for _ in range(cols)] for _ in range(rows)]
    return FpMatrix.from_rows(p, data, cols=cols)


@settings(max_examples=60, deadline=None)
@given(small_matrix(3))
def test_rank_transpose_and_nullity(m):
    assert rank(m) == rank(m.transpose())
    assert kernel_basis(m).dim + rank(m) == m.cols
    R, rk, piv = rref(m)
    R2, rk2, piv2 = rref(R)
    assert (R2, rk2, piv2) == (R, rk, piv)


@st.composite
def subspace_pair(draw, p, n):
    def vecs():
        k = draw(st.integers(0, n))
        return [tuple(draw(st.integers(0, p - 1)) for _ in range(n)) for _ in range(k)]
    return (Subspace.from_vectors(p, n, vecs()), Subspace.from_vectors(p, n, vecs()))


@settings(max_examples=60, deadline=None)
@given(subspace_pair(2, 4))
def test_modular_lattice_dimension_formula(pair):
    a, b = pair
    assert a.dim + b.dim == a.sum(b).dim + a.intersect(b).dim
    assert a.sum(b).contains(a) and a.contains(a.intersect(b))


def test_matrix_iteration_count():
    assert sum(1 for _ in iter_matrices(2, 2, 1)) == 4
    assert sum(1 for _ in iter_matrices(3, 0, 2)) == 1
