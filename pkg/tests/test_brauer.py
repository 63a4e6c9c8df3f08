import random
import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from restrict_lr.brauer import (
    BrauerError,
    center,
    central_simple_check,
    crossed_product,
    ext_side_shift,
    ext_to_brauer_demo,
    extension_data,
    gamma_matrix,
    maximal_commutative_check,
    regular_extension,
    setup,
    shift_isomorphism,
    shifted_beta,
    verify_split_witness,
    witness_search,
)
from restrict_lr.ext import baer_sum, verify_equivalence
from restrict_lr.linalg import Matrix
from restrict_lr.rlie import check_restricted, restricted_from_associative
from restrict_lr.uenv import Enveloping, universal_property_check


@pytest.fixture(scope="module")
def S2():
    return setup(2)


@pytest.mark.parametrize("beta", ["0", "t"])
def test_central_simple_p2(S2, beta):
    C = crossed_product(regular_extension(S2, beta))
    rep = central_simple_check(C)
    assert rep.passed
    assert rep.notes["center_dim"] == 1 and rep.notes["sandwich_rank"] == 16
    assert C.dim == 4
    assert C.axiom_violation() is None
    assert maximal_commutative_check(C).passed


def test_center_is_k(S2):
    C = crossed_product(regular_extension(S2, "t"))
    (z,) = center(C)
    assert C.to_K(z) is not None


def test_split_witness(S2):
    E = regular_extension(S2, "t")
    good = verify_split_witness(E, "1+s")
    assert good.split and good.iso is not None and good.iso.rank() == 4
    bad = verify_split_witness(E, "s")
    assert not bad.split
    C = crossed_product(E)
    assert C.format(bad.residue) == "1"


def test_baer_sum_of_t_with_itself_splits(S2):
    et = extension_data(S2, "t")
    s = baer_sum(et, et)
    zero = Matrix.zeros(S2.k, S2.K.dim, S2.K.dim)
    assert verify_equivalence(s, extension_data(S2, "0"), zero).passed


def test_shift_map_is_multiplicative(S2):
    # u -> u + 1 + s carries A_t onto A_0
    assert shifted_beta(S2, "0", "1+s") == S2.element("t")
    Phi, rep = shift_isomorphism(S2, "0", "1+s")
    assert rep.passed
    assert ext_side_shift(S2, "0", "1+s").passed


def test_nonconstant_beta_rejected(S2):
    with pytest.raises(BrauerError) as exc:
        regular_extension(S2, "s")
    assert exc.value.witness["d(beta)"] == "1"


@given(st.lists(st.integers(0, 1), min_size=4, max_size=4), st.sampled_from(["0", "t", "t+1", "1/t"]))
@settings(max_examples=15)
def test_split_detection_agrees_with_ext_side(coeffs, beta):
    S = setup(2)
    k = S.k
    gamma = (k.poly(coeffs[:2]), k.poly(coeffs[2:]))
    E = regular_extension(S, beta)
    split = verify_split_witness(E, gamma).split
    neg = tuple(-c for c in gamma)
    ext_side = verify_equivalence(E.data, extension_data(S, "0"), gamma_matrix(S, neg)).passed
    assert split == ext_side


@given(st.integers(0, 10**6))
@settings(max_examples=8)
def test_section_shift_property(seed):
    S = setup(2)
    rng = random.Random(seed)
    gamma = tuple(S.k.random(rng, 1) for _ in range(2))
    beta = S.k.random(rng, 1)
    beta_v = S.K.scalar(beta)
    _, rep = shift_isomorphism(S, beta_v, gamma)
    assert rep.passed
    assert ext_side_shift(S, beta_v, gamma).passed


def test_witness_search_is_evidence_only(S2):
    res = witness_search(S2, "t")
    assert res["found"] and res["evidence_only"]
    assert shifted_beta(S2, "t", res["gamma"]) == S2.K.zero()


def test_split_algebra_is_restricted_enveloping(S2):
    """A_0 is U_p(K, Der K): the universal map is bijective."""
    C = crossed_product(regular_extension(S2, "0"))
    L = S2.L
    phi_A = [C.from_K(S2.K.basis_vector(a)) for a in range(S2.K.dim)]
    phi_L = [C.mul(C.from_K(S2.K.basis_vector(a)), C.u) for a in range(S2.K.dim)]
    h = universal_property_check(L, C, phi_A, phi_L, samples=10)
    assert h.report.passed and h.rank == C.dim
    assert Enveloping(L).as_algebra().dim == C.dim


def test_crossed_product_commutator_lie_is_restricted(S2):
    C = crossed_product(regular_extension(S2, "t"))
    assert check_restricted(restricted_from_associative(C), samples=20).passed


def test_demo_p2_runtime():
    t0 = time.perf_counter()
    rep = ext_to_brauer_demo(2, "t", "1+s")
    assert rep.passed
    assert rep.notes["split_witness"] == "1+s"
    assert time.perf_counter() - t0 < 10


def test_demo_reports_residue():
    rep = ext_to_brauer_demo(2, "t", "s", samples=1)
    assert rep.notes["residue"] == "1" and rep.notes["split"] is False


@pytest.mark.slow
def test_demo_p3():
    rep = ext_to_brauer_demo(3, "t", samples=1)
    assert rep.passed
    assert rep.notes["center_dim"] == 1 and rep.notes["sandwich_rank"] == 81
