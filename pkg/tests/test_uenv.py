import random
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from restrict_lr.commalg import truncated_polynomial
from restrict_lr.document import load
from restrict_lr.field import GF
from restrict_lr.linalg import Matrix
from restrict_lr.lrin import der_algebra, restricted_over_base_field
from restrict_lr.rlie import heisenberg, linear_lie_algebra
from restrict_lr.uenv import (
    STRATEGIES,
    DegreeBoundExceeded,
    Enveloping,
    RewriteError,
    UniversalPropertyError,
    anchor_representation,
    associativity_check,
    canonical_maps,
    confluence_check,
    ideal_membership_check,
    injectivity_check,
    hochschild_module_check,
    overlap_check,
    pbw_rank_check,
    rinehart_basis_check,
    universal_property_check,
)
from restrict_lr.cli import corpus_dir


def corpus(name):
    return load(corpus_dir() / name).lie_rinehart()


def witt_sub_p3():
    """span{d, xd} inside Der F3[x]/(x^3)."""
    F = GF(3)
    d = Matrix(F, [[0, 1, 0], [0, 0, 2], [0, 0, 0]], 3)
    xd = Matrix(F, [[0, 0, 0], [0, 1, 0], [0, 0, 2]], 3)
    return restricted_over_base_field(truncated_polynomial(F, 1), linear_lie_algebra(F, [d, xd], ["d", "xd"]))


def pbw_cases():
    return {
        (1, 2): der_algebra(truncated_polynomial(GF(2), 2)),
        (2, 2): corpus("witt_p2.json"),
        (3, 2): restricted_over_base_field(truncated_polynomial(GF(2), 1), heisenberg(GF(2))),
        (1, 3): der_algebra(truncated_polynomial(GF(3), 3)),
        (2, 3): witt_sub_p3(),
    }


@pytest.mark.parametrize("n,p", list(pbw_cases()))
def test_pbw_rank(n, p):
    X = pbw_cases()[(n, p)]
    rep = pbw_rank_check(X, samples=20)
    assert rep.passed, rep.summary()
    assert rep.notes["rank"] == p**n


def test_spec_words():
    U = Enveloping(corpus("witt_p2.json"))
    assert U.format(U.normal_form(U.parse_word(["xd", "d"]))) == "d + d*xd"
    V = Enveloping(der_algebra(truncated_polynomial(GF(2), 2)))
    assert V.format(V.normal_form(V.parse_word(["d", "x"]))) == "1 + (x)*d"


@pytest.mark.parametrize("name", ["witt_p2.json", "witt_p3.json"])
def test_rinehart_basis_to_degree_2p(name):
    X = corpus(name)
    rep = rinehart_basis_check(X, degree_bound=2 * X.p)
    assert rep.passed, rep.summary()


def test_degree_bound_enforced():
    U = Enveloping(corpus("witt_p2.json"), restricted=False, degree_bound=3)
    with pytest.raises(DegreeBoundExceeded):
        U.normal_form(U.parse_word(["d", "d", "xd", "d"]))


def test_restricted_needs_pmap():
    doc = load(corpus_dir() / "witt_p2.json")
    doc.lie.pmap = None
    with pytest.raises(RewriteError):
        Enveloping(doc.lie_rinehart(), restricted=True)


@pytest.mark.parametrize("key", list(pbw_cases()))
def test_confluence_all_strategies(key):
    U = Enveloping(pbw_cases()[key])
    assert len(STRATEGIES) == 5
    c = confluence_check(U, words=100, seed=3)
    assert c.passed, c.witness


def test_overlaps_and_associativity():
    for X in pbw_cases().values():
        U = Enveloping(X)
        assert overlap_check(U).passed
        assert associativity_check(U, samples=10).passed


@given(st.integers(0, 10**6))
def test_normal_form_is_a_fixed_point(seed):
    U = Enveloping(corpus("witt_p3.json"))
    rng = random.Random(seed)
    x = U.normal_form(U.random_word(rng, rng.randint(1, 6)))
    assert U.normal_form(U.word(x)) == x
    y = U.random_element(rng)
    assert U.multiply(y, U.one()) == y and U.multiply(U.one(), y) == y


@given(st.integers(0, 10**6))
def test_restricted_relation(seed):
    """u^p equals u^[p] in U_p for every element of L."""
    X = corpus("witt_p3.json")
    U = Enveloping(X)
    rng = random.Random(seed)
    Y = X.random_element(rng)
    assert U.power(U.from_L(Y), X.p) == U.from_L(X.p_map(Y))


@given(st.integers(0, 10**6))
def test_commutator_is_bracket(seed):
    X = der_algebra(truncated_polynomial(GF(3), 3))
    U = Enveloping(X)
    rng = random.Random(seed)
    Y, Z = X.random_element(rng), X.random_element(rng)
    a = X.A.random_element(rng)
    assert U.commutator(U.from_L(Y), U.from_L(Z)) == U.from_L(X.bracket(Y, Z))
    assert U.commutator(U.from_L(Y), U.from_A(a)) == U.from_A(X.anchor_of(Y) @ a)


def test_module_relation_injectivity_and_ideal():
    for X in (der_algebra(truncated_polynomial(GF(2), 2)), der_algebra(truncated_polynomial(GF(3), 3)), corpus("witt_p2.json")):
        assert hochschild_module_check(X, samples=10).passed
        assert injectivity_check(X).passed
        assert ideal_membership_check(X, samples=10).passed


@pytest.mark.parametrize("p", [2, 3])
def test_universal_map_to_endomorphisms(p):
    """For A = F_p[x]/(x^p) the induced map U_p(A, Der A) -> End_k(A) is bijective."""
    X = der_algebra(truncated_polynomial(GF(p), p))
    B, phi_A, phi_L = anchor_representation(X)
    h = universal_property_check(X, B, phi_A, phi_L, samples=20)
    assert h.report.passed
    assert h.rank == B.dim == p * p


def test_universal_identity():
    X = corpus("witt_p2.json")
    S, phi_A, phi_L = canonical_maps(X)
    h = universal_property_check(X, S, phi_A, phi_L, samples=20)
    assert h.matrix == Matrix.identity(X.field, S.dim)


def test_universal_failure_names_hypothesis():
    X = der_algebra(truncated_polynomial(GF(2), 2))
    B, phi_A, phi_L = anchor_representation(X)
    phi_L = [tuple(B.field.zero for _ in v) for v in phi_L]
    phi_L[0] = B.unit
    with pytest.raises(UniversalPropertyError) as exc:
        universal_property_check(X, B, phi_A, phi_L, samples=5)
    assert "hypothesis failed" in str(exc.value)
    assert exc.value.witness


def test_pbw_runtime():
    t0 = time.perf_counter()
    for X in pbw_cases().values():
        pbw_rank_check(X, samples=20)
        confluence_check(Enveloping(X), words=100, seed=0)
    for name in ("witt_p2.json", "witt_p3.json"):
        X = corpus(name)
        rinehart_basis_check(X, degree_bound=2 * X.p)
    assert time.perf_counter() - t0 < 60
