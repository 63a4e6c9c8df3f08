import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from restrict_lr.commalg import matrix_algebra
from restrict_lr.field import GF
from restrict_lr.linalg import Matrix
from restrict_lr.rlie import (
    PMapCriterionError,
    RestrictedLie,
    abelian,
    check_restricted,
    extend_p_map_from_basis,
    free_restricted_lie,
    heisenberg,
    linear_lie_algebra,
    lyndon_words,
    restricted_from_associative,
    s_coefficients,
)


def witt(p):
    """Der F_p[x]/(x^p) as matrices x^i d on the monomial basis."""
    F = GF(p)
    mats = []
    for i in range(p):
        cols = []
        for j in range(p):
            v = [F.zero] * p
            if j and i + j - 1 < p:
                v[i + j - 1] = F(j)
            cols.append(v)
        mats.append(Matrix.from_columns(F, cols, p))
    return linear_lie_algebra(F, mats, ["d"] + [f"x{i}d" for i in range(1, p)])


@pytest.mark.parametrize("p", [2, 3, 5])
def test_witt_is_restricted(p):
    assert check_restricted(witt(p), samples=60).passed


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
def test_jacobson_formula_against_matrix_powers(p, n):
    """sum of s_i(x, y) = (x+y)^p - x^p - y^p in gl_n."""
    F = GF(p)
    B = matrix_algebra(F, n)
    L = restricted_from_associative(B)
    rng = random.Random(p * n)
    for _ in range(25):
        x, y = B.random_element(rng), B.random_element(rng)
        s = s_coefficients(L, x, y)
        total = tuple(F.zero for _ in range(B.dim))
        for v in s:
            total = tuple(a + b for a, b in zip(total, v))
        expected = tuple(a - b - c for a, b, c in zip(B.power(B.add(x, y), p), B.power(x, p), B.power(y, p)))
        assert total == expected


def test_s_coefficients_vanish_on_commuting_pair():
    L = heisenberg(GF(3))
    z = L.basis_vector(2)
    x = L.basis_vector(0)
    assert all(all(c == GF(3).zero for c in v) for v in s_coefficients(L, x, z))


def test_s_coefficient_count():
    L = witt(3)
    assert len(s_coefficients(L, L.basis_vector(0), L.basis_vector(2))) == 2


def test_criterion_rejects_bad_images():
    L = witt(2).forget_pmap()
    # ad(d)^2 = 0 but ad(xd) != 0
    with pytest.raises(PMapCriterionError) as exc:
        extend_p_map_from_basis(L, [L.basis_vector(1), L.basis_vector(1)])
    assert exc.value.index == 0


def test_criterion_accepts_good_images():
    L = witt(2).forget_pmap()
    R = extend_p_map_from_basis(L, [L.zero(), L.basis_vector(1)])
    assert check_restricted(R, samples=40).passed


@given(st.sampled_from([2, 3]), st.integers(0, 10**6))
def test_semilinearity_property(p, seed):
    L = witt(p)
    rng = random.Random(seed)
    F = GF(p)
    x = L.random_element(rng)
    a = F(rng.randrange(p))
    assert L.p_map(tuple(a * c for c in x)) == tuple(a**p * c for c in L.p_map(x))


@given(st.integers(0, 10**6))
def test_p_map_order_independence(seed):
    L = witt(3)
    rng = random.Random(seed)
    x = L.random_element(rng)
    order = list(range(L.dim))
    rng.shuffle(order)
    assert L.p_map(x) == L.p_map(x, order=order)


def _mobius(n):
    res, k, m = 1, 2, n
    while k * k <= m:
        if m % k == 0:
            m //= k
            if m % k == 0:
                return 0
            res = -res
        k += 1
    return -res if m > 1 else res


def _necklace(m, n):
    return sum(_mobius(d) * m ** (n // d) for d in range(1, n + 1) if n % d == 0) // n


def _restricted_dim(m, n, p):
    total, q = 0, 1
    while n % q == 0:
        total += _necklace(m, n // q)
        q *= p
    return total


@pytest.mark.parametrize("m,N,p", [(1, 4, 2), (2, 3, 2), (2, 4, 2), (2, 3, 3), (3, 2, 2), (2, 5, 2)])
def test_free_restricted_dimensions(m, N, p):
    L = free_restricted_lie(GF(p), m, N)
    for n in range(1, N + 1):
        assert sum(1 for d in L.degrees if d == n) == _restricted_dim(m, n, p)


@pytest.mark.parametrize("m,N,p", [(2, 4, 2), (2, 3, 3)])
def test_free_restricted_pbw_series(m, N, p):
    """Truncated PBW series of the basis equals that of the free associative algebra."""
    L = free_restricted_lie(GF(p), m, N)
    series = [1] + [0] * N
    for d in L.degrees:
        new = [0] * (N + 1)
        for k, c in enumerate(series):
            for e in range(p):
                if k + e * d <= N:
                    new[k + e * d] += c
        series = new
    assert series == [m**n for n in range(N + 1)]


def test_free_restricted_is_restricted():
    assert check_restricted(free_restricted_lie(GF(2), 2, 4), samples=30).passed


def test_lyndon_words():
    assert lyndon_words(2, 3) == [(0,), (1,), (0, 1), (0, 0, 1), (0, 1, 1)]


def test_abelian_and_heisenberg():
    F = GF(2)
    A = abelian(F, 2, [(F.one, F.zero), (F.zero, F.zero)])
    assert check_restricted(A, samples=20).passed
    H = heisenberg(F)
    assert H.bracket(H.basis_vector(0), H.basis_vector(1)) == H.basis_vector(2)
    assert check_restricted(H, samples=20).passed


def test_failure_report_has_witness():
    F = GF(3)
    # (alpha x)^[p] semilinearity broken by a non-restricted reference
    L = witt(3)
    bad = RestrictedLie(F, L.table, L.pimages, L.names, reference_pmap=lambda v: v)
    rep = check_restricted(bad, samples=20)
    assert not rep.passed
    assert rep.first_failure().witness
