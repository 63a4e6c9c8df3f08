import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from restrict_lr.commalg import (
    AlgebraError,
    CommAlgebra,
    InsepExtension,
    derivation_space,
    hochschild_relation_check,
    hochschild_rhs,
    is_derivation,
    p_power_derivation,
    random_derivation,
    truncated_polynomial,
)
from restrict_lr.field import GF
from restrict_lr.linalg import Matrix


def algebras():
    return {
        "F2[x]/(x^2)": truncated_polynomial(GF(2), 2),
        "F3[x]/(x^3)": truncated_polynomial(GF(3), 3),
        "F2[x]/(x^4)": truncated_polynomial(GF(2), 4),
        "insep p=2": InsepExtension(2).K,
        "insep p=3": InsepExtension(3).K,
    }


def der_dim_formula(p, n):
    # D is fixed by f = D(x) subject to n x^(n-1) f = 0 in k[x]/(x^n)
    return n if n % p == 0 else n - 1


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (3, 4), (5, 5)])
def test_derivation_dimension(p, n):
    A = truncated_polynomial(GF(p), n)
    basis = derivation_space(A)
    assert len(basis) == der_dim_formula(p, n)
    assert all(is_derivation(A, D) for D in basis)


@pytest.mark.parametrize("n", [2, 3])
def test_derivations_match_exhaustive_enumeration(n):
    F = GF(2)
    A = truncated_polynomial(F, n)
    found = 0
    for bits in itertools.product([0, 1], repeat=n * n):
        D = Matrix(F, [bits[r * n : (r + 1) * n] for r in range(n)], n)
        found += is_derivation(A, D)
    assert found == 2 ** len(derivation_space(A))


def test_insep_extension_invariants():
    for p in (2, 3):
        X = InsepExtension(p)
        assert X.invariant_violations() == []
        # Der_k(K) = K d has k-dimension p
        assert len(derivation_space(X.K)) == p


def test_frobenius_is_additive():
    A = truncated_polynomial(GF(3), 3)
    rng = random.Random(1)
    for _ in range(20):
        a, b = A.random_element(rng), A.random_element(rng)
        assert A.frobenius(A.add(a, b)) == A.add(A.frobenius(a), A.frobenius(b))


def test_p_power_of_derivation_is_derivation():
    for name, A in algebras().items():
        for D in derivation_space(A):
            assert is_derivation(A, p_power_derivation(A, D)), name


@pytest.mark.parametrize("name", list(algebras()))
def test_hochschild_relation_random(name):
    A = algebras()[name]
    basis = derivation_space(A)
    rng = random.Random(7)
    for _ in range(50):
        D = random_derivation(A, basis, rng)
        a = A.random_element(rng)
        assert hochschild_relation_check(A, a, D).passed


# corruptions of the right-hand side a^p D^p + (aD)^(p-1)(a) D
def _drop_correction(A, a, D):
    return A.scaled_derivation(A.frobenius(a), D ** A.p)


def _no_frobenius(A, a, D):
    p = A.p
    corr = (A.scaled_derivation(a, D) ** (p - 1)) @ a
    return A.scaled_derivation(a, D**p) + A.scaled_derivation(corr, D)


def _wrong_exponent(A, a, D):
    p = A.p
    corr = (A.scaled_derivation(a, D) ** max(p - 2, 0)) @ a
    return A.scaled_derivation(A.frobenius(a), D**p) + A.scaled_derivation(corr, D)


def _d_instead_of_ad(A, a, D):
    p = A.p
    corr = (D ** (p - 1)) @ a
    return A.scaled_derivation(A.frobenius(a), D**p) + A.scaled_derivation(corr, D)


def _doubled_correction(A, a, D):
    p = A.p
    corr = (A.scaled_derivation(a, D) ** (p - 1)) @ a
    return A.scaled_derivation(A.frobenius(a), D**p) + A.scaled_derivation(corr, D).scale(A.field(2))


def _d_not_dp(A, a, D):
    p = A.p
    corr = (A.scaled_derivation(a, D) ** (p - 1)) @ a
    return A.scaled_derivation(A.frobenius(a), D) + A.scaled_derivation(corr, D)


def _extra_term(A, a, D):
    return hochschild_rhs(A, a, D) + A.scaled_derivation(a, D)


MUTATIONS = [_drop_correction, _no_frobenius, _wrong_exponent, _d_instead_of_ad, _doubled_correction, _d_not_dp, _extra_term]


@pytest.mark.parametrize("mutant", MUTATIONS, ids=lambda f: f.__name__.strip("_"))
def test_hochschild_mutants_detected(mutant):
    rng = random.Random(11)
    caught = False
    for A in algebras().values():
        basis = derivation_space(A)
        for _ in range(50):
            D = random_derivation(A, basis, rng)
            a = A.random_element(rng)
            if not hochschild_relation_check(A, a, D, rhs=mutant).passed:
                caught = True
                break
        if caught:
            break
    assert caught


def test_failed_check_carries_witness():
    A = truncated_polynomial(GF(2), 2)
    bad = None
    for D in derivation_space(A):
        for a in (A.basis_vector(0), A.basis_vector(1), A.add(A.basis_vector(0), A.basis_vector(1))):
            c = hochschild_relation_check(A, a, D, rhs=_drop_correction)
            if not c.passed:
                bad = c
    assert bad is not None and set(bad.witness) == {"a", "D", "lhs", "rhs"}


@st.composite
def truncated_cases(draw):
    p, n = draw(st.sampled_from([(2, 2), (2, 4), (3, 3), (3, 2), (5, 3)]))
    return p, n, draw(st.integers(0, 2**32))


@given(truncated_cases())
def test_hochschild_property(case):
    p, n, seed = case
    A = truncated_polynomial(GF(p), n)
    rng = random.Random(seed)
    D = random_derivation(A, derivation_space(A), rng)
    assert hochschild_relation_check(A, A.random_element(rng), D).passed


def test_non_commutative_table_rejected():
    F = GF(2)

    def e(i):
        return [F.one if j == i else F.zero for j in range(3)]

    z = [F.zero] * 3
    table = [[e(0), e(1), e(2)], [e(1), z, e(1)], [e(2), z, z]]
    with pytest.raises(AlgebraError):
        CommAlgebra(F, ["1", "x", "y"], table)


def test_parse_and_format_roundtrip():
    A = truncated_polynomial(GF(3), 3)
    v = A.parse("1 + 2*x^2")
    assert v == (GF(3)(1), GF(3)(0), GF(3)(2))
    assert A.parse(A.format(v)) == v
