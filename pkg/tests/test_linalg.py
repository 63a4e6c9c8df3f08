import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from restrict_lr.field import FpT, GF
from restrict_lr.linalg import InconsistentSystem, Matrix, coordinates, in_span, kernel, rank, solve_linear


@st.composite
def small_matrices(draw, p=None):
    p = p or draw(st.sampled_from([2, 3]))
    r, c = draw(st.integers(1, 4)), draw(st.integers(1, 4))
    entries = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    return Matrix(GF(p), entries, c)


def image_size(M: Matrix) -> int:
    """Count distinct M x over all x (brute force)."""
    F = M.field
    vals = set()
    for x in itertools.product(F.elements(), repeat=M.cols):
        vals.add(M @ x)
    return len(vals)


@given(small_matrices())
def test_rank_against_image_count(M):
    assert image_size(M) == M.field.p ** rank(M)


@given(small_matrices())
def test_kernel_is_exact(M):
    K = kernel(M)
    for v in K:
        assert all(c == M.field.zero for c in M @ v)
    assert len(K) + rank(M) == M.cols


@given(small_matrices(), st.data())
def test_solve_linear(M, data):
    F = M.field
    x0 = tuple(F(data.draw(st.integers(0, F.p - 1))) for _ in range(M.cols))
    b = M @ x0
    x, ker = solve_linear(M, b)
    assert M @ x == b
    assert len(ker) == M.cols - rank(M)


def test_inconsistent_system():
    F = GF(2)
    M = Matrix(F, [[1, 0], [1, 0]], 2)
    with pytest.raises(InconsistentSystem):
        solve_linear(M, (F(1), F(0)))


def test_dimension_mismatch():
    F = GF(2)
    with pytest.raises(ValueError):
        solve_linear(Matrix.identity(F, 2), (F(1),))


def test_over_rational_functions():
    k = FpT(2)
    t = k.t
    M = Matrix(k, [[t, k.one], [k.one, t]], 2)
    # det = t^2 + 1 != 0
    assert rank(M) == 2
    x, ker = solve_linear(M, (k.one, k.zero))
    assert M @ x == (k.one, k.zero) and ker == []
    N = Matrix(k, [[t, k.one], [t * t, t]], 2)
    assert rank(N) == 1
    (v,) = kernel(N)
    assert N @ v == (k.zero, k.zero)


def test_span_and_coordinates():
    F = GF(3)
    basis = [(F(1), F(0), F(1)), (F(0), F(1), F(2))]
    v = (F(2), F(1), F(1))
    assert in_span(F, basis, v)
    assert coordinates(F, basis, v) == (F(2), F(1))
    assert not in_span(F, basis, (F(0), F(0), F(1)))


def test_matrix_power_and_product():
    F = GF(2)
    N = Matrix(F, [[0, 1], [0, 0]], 2)
    assert (N**2).is_zero()
    assert N @ Matrix.identity(F, 2) == N
