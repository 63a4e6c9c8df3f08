"""Regular extensions of Der_k(K) by K and differential crossed products.

Setting: k = F_p(t), K = k[s]/(s^p - t), d = d/ds.  A regular extension is
the abelian extension of L = K d by the module K (L acting through the
anchor, P = the Frobenius c -> c^p) with h = 0 and g(d) = beta.  Its
crossed product A_beta has k-basis s^i u^j (0 <= i, j < p) with
u c = c u + d(c) and u^p = beta.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from math import comb

from .beck import BeckModule, frobenius_matrix, natural_module
from .commalg import AssocAlgebra, CommAlgebra, InsepExtension, matrix_algebra, matrix_to_vector
from .ext import ExtensionData, ExtensionError, baer_sum, build_extension, from_a_basis, verify_equivalence
from .linalg import Matrix, is_zero, kernel, rank_of_vectors, vadd
from .lrin import LieRinehart, der_algebra
from .report import Check, Report


class BrauerError(ValueError):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message if not witness else f"{message}: {witness}")
        self.witness = witness


@dataclass
class BrauerSetup:
    """K/k together with L = Der_k(K) and the module K."""

    p: int
    insep: InsepExtension = field(init=False)
    L: LieRinehart = field(init=False)
    M: BeckModule = field(init=False)

    def __post_init__(self):
        self.insep = InsepExtension(self.p)
        self.L = der_algebra(self.insep)
        self.M = natural_module(self.L, frobenius_matrix(self.insep.K))

    @property
    def K(self) -> CommAlgebra:
        return self.insep.K

    @property
    def k(self):
        return self.insep.k

    @property
    def d(self) -> Matrix:
        return self.insep.d

    def element(self, text) -> tuple:
        if isinstance(text, (tuple, list)):
            return tuple(self.k(c) for c in text)
        return self.K.parse(str(text))


_SETUPS: dict[int, BrauerSetup] = {}


def setup(p: int) -> BrauerSetup:
    if p not in _SETUPS:
        _SETUPS[p] = BrauerSetup(p)
    return _SETUPS[p]


@dataclass
class RegularExtension:
    setup: BrauerSetup
    beta: tuple
    data: ExtensionData
    report: Report

    @property
    def p(self) -> int:
        return self.setup.p

    def beta_str(self) -> str:
        return self.setup.K.format(self.beta)


def extension_data(S: BrauerSetup, beta) -> ExtensionData:
    beta = S.element(beta)
    return from_a_basis(S.L, S.M, {}, [beta], label=f"beta={S.K.format(beta)}")


def regular_extension(S: BrauerSetup, beta, samples: int = 20, seed: int = 0) -> RegularExtension:
    beta = S.element(beta)
    K = S.K
    db = S.d @ beta
    data = extension_data(S, beta)
    try:
        ext = build_extension(data, samples=samples, seed=seed)
    except ExtensionError as exc:
        w = dict(exc.witness or {})
        if not is_zero(db):
            w["d(beta)"] = K.format(db)
        raise BrauerError(f"beta = {K.format(beta)} does not define a regular extension", w) from None
    if not is_zero(db):
        raise BrauerError("axiom checker accepted a non-constant beta", {"d(beta)": K.format(db)})
    ext.report.notes["beta"] = K.format(beta)
    return RegularExtension(S, beta, data, ext.report)


# --- crossed products --------------------------------------------------------------------


class CrossedProduct(AssocAlgebra):
    """A_beta with basis s^i u^j at index j*p + i."""

    def __init__(self, E: RegularExtension):
        S, p = E.setup, E.p
        K, k = S.K, S.k
        beta = E.beta
        if not (is_zero(beta[1:]) and is_zero(S.d @ beta)):
            raise BrauerError("beta must lie in k")
        self.setup = S
        self.beta = beta
        b0 = beta[0]
        # d^r(s^k) as K-vectors
        dpow = [[(S.d ** r) @ K.basis_vector(kk) for kk in range(p)] for r in range(p)]
        dim = p * p
        names = []
        for j in range(p):
            for i in range(p):
                parts = ([] if i == 0 else ["s" if i == 1 else f"s^{i}"]) + ([] if j == 0 else ["u" if j == 1 else f"u^{j}"])
                names.append("*".join(parts) or "1")
        table = []
        for j in range(p):
            for i in range(p):
                row = []
                for l in range(p):
                    for kk in range(p):
                        out = [k.zero] * dim
                        # s^i u^j s^kk u^l = sum_r C(j,r) s^i d^r(s^kk) u^(j-r+l)
                        for r in range(j + 1):
                            c = comb(j, r) % p
                            if not c:
                                continue
                            coef = K.mul(K.basis_vector(i), dpow[r][kk])
                            q = j - r + l
                            scal = k.one
                            if q >= p:
                                q -= p
                                scal = b0
                            for ii, cc in enumerate(coef):
                                if cc:
                                    out[q * p + ii] = out[q * p + ii] + cc * scal * k(c)
                        row.append(out)
                table.append(row)
        unit = [k.zero] * dim
        unit[0] = k.one
        super().__init__(k, names, table, unit, check=False)

    @property
    def s(self) -> tuple:
        return self.basis_vector(1)

    @property
    def u(self) -> tuple:
        return self.basis_vector(self.setup.p)

    def from_K(self, c) -> tuple:
        p = self.setup.p
        return tuple(c) + (self.field.zero,) * (p * p - p)

    def to_K(self, x) -> tuple | None:
        p = self.setup.p
        if not is_zero(x[p:]):
            return None
        return tuple(x[:p])


def crossed_product(E: RegularExtension, verify: bool = True) -> CrossedProduct:
    C = CrossedProduct(E)
    if verify:
        bad = C.axiom_violation()
        if bad is not None:
            raise BrauerError("crossed product is not associative", {"triple": str(bad)})
    return C


def center(C: AssocAlgebra, generators: list[tuple] | None = None) -> list[tuple]:
    """k-basis of the centralizer of ``generators`` (default s and u for crossed products)."""
    if generators is None:
        generators = [C.s, C.u] if isinstance(C, CrossedProduct) else [C.basis_vector(i) for i in range(C.dim)]
    F = C.field
    rows = []
    for g in generators:
        M = Matrix.from_columns(F, [C.commutator(C.basis_vector(j), g) for j in range(C.dim)], C.dim)
        rows.extend(M.entries)
    return kernel(Matrix(F, rows, C.dim))


def sandwich_rank(C: AssocAlgebra) -> int:
    """Rank of A (x) A^op -> End_k(A), (a, b) -> (x -> a x b)."""
    n = C.dim
    vecs = []
    Ls = [C.left_matrix(C.basis_vector(a)) for a in range(n)]
    Rs = [C.right_matrix(C.basis_vector(b)) for b in range(n)]
    for a in range(n):
        for b in range(n):
            vecs.append((Ls[a] @ Rs[b]).flat())
    return rank_of_vectors(C.field, vecs)


def central_simple_check(C: AssocAlgebra) -> Report:
    n = C.dim
    rep = Report("central simplicity", notes={"dim": n})
    z = center(C)
    rep.notes["center_dim"] = len(z)
    rep.add(Check("center is k.1", len(z) == 1, 1, None if len(z) == 1 else {"center_dim": len(z)}))
    r = sandwich_rank(C)
    rep.notes["sandwich_rank"] = r
    rep.add(Check("sandwich map A (x) A^op -> End_k(A) is bijective", r == n * n, 1, None if r == n * n else {"rank": r, "expected": n * n}))
    return rep


def maximal_commutative_check(C: CrossedProduct) -> Check:
    """The centralizer of K in A_beta is K."""
    z = center(C, [C.s])
    p = C.setup.p
    ok = len(z) == p and all(is_zero(v[p:]) for v in z)
    return Check("K is its own centralizer", ok, 1, None if ok else {"centralizer_dim": len(z)})


# --- split witnesses and section shifts -------------------------------------------------------


@dataclass
class SplitResult:
    split: bool
    residue: tuple | None
    iso: Matrix | None
    report: Report

    def to_json(self, C: CrossedProduct) -> dict:
        out = {"split": self.split, "report": self.report.to_json()}
        if self.residue is not None:
            out["residue"] = C.format(self.residue)
        if self.iso is not None:
            out["iso_rank"] = self.iso.rank()
        return out


def u_plus(C: CrossedProduct, gamma: tuple) -> tuple:
    return vadd(C.u, C.from_K(gamma))


def verify_split_witness(E: RegularExtension, gamma, C: CrossedProduct | None = None) -> SplitResult:
    """If (u + gamma)^p = 0 build A_beta -> End_k(K), s^i u^j -> s^i (d - gamma)^j, and verify it."""
    S = E.setup
    gamma = S.element(gamma)
    C = C or crossed_product(E)
    p, K, k = S.p, S.K, S.k
    rep = Report("split witness", notes={"beta": E.beta_str(), "gamma": K.format(gamma)})
    w = C.power(u_plus(C, gamma), p)
    if not is_zero(w):
        rep.add(Check("(u + gamma)^p = 0", False, 1, {"residue": C.format(w)}))
        return SplitResult(False, w, None, rep)
    rep.add(Check("(u + gamma)^p = 0", True))
    B = matrix_algebra(k, p)
    mult_s = K.left_matrix(S.insep.s)
    shifted = S.d - K.left_matrix(gamma)
    cols = []
    for j in range(p):
        for i in range(p):
            cols.append(matrix_to_vector((mult_s**i) @ (shifted**j)))
    Phi = Matrix.from_columns(k, cols, p * p)
    bad = None
    for a in range(C.dim):
        for b in range(C.dim):
            x, y = C.basis_vector(a), C.basis_vector(b)
            if Phi @ C.mul(x, y) != B.mul(Phi @ x, Phi @ y):
                bad = {"x": C.names[a], "y": C.names[b]}
                break
        if bad:
            break
    rep.add(Check("Phi is an algebra map", bad is None, C.dim**2, bad))
    r = Phi.rank()
    rep.notes["rank"] = r
    rep.add(Check("Phi is bijective onto End_k(K)", r == p * p, 1, None if r == p * p else {"rank": r}))
    return SplitResult(rep.passed, None, Phi if rep.passed else None, rep)


def shifted_beta(S: BrauerSetup, beta, gamma) -> tuple:
    """beta + gamma^p + d^(p-1)(gamma): the p-th power of u + gamma."""
    beta, gamma = S.element(beta), S.element(gamma)
    p, K = S.p, S.K
    return vadd(vadd(beta, K.power(gamma, p)), (S.d ** (p - 1)) @ gamma)


def shift_isomorphism(S: BrauerSetup, beta, gamma) -> tuple[Matrix, Report]:
    """A_beta' -> A_beta, u -> u + gamma, with beta' = shifted_beta(beta, gamma); verified."""
    beta, gamma = S.element(beta), S.element(gamma)
    p = S.p
    beta2 = shifted_beta(S, beta, gamma)
    src = crossed_product(regular_extension(S, beta2))
    tgt = crossed_product(regular_extension(S, beta))
    w = u_plus(tgt, gamma)
    cols = []
    for j in range(p):
        wj = tgt.power(w, j)
        for i in range(p):
            cols.append(tgt.mul(tgt.power(tgt.s, i), wj))
    Phi = Matrix.from_columns(S.k, cols, p * p)
    rep = Report("section-shift isomorphism", notes={"source_beta": S.K.format(beta2), "target_beta": S.K.format(beta), "gamma": S.K.format(gamma)})
    bad = None
    for a in range(src.dim):
        for b in range(src.dim):
            x, y = src.basis_vector(a), src.basis_vector(b)
            if Phi @ src.mul(x, y) != tgt.mul(Phi @ x, Phi @ y):
                bad = {"x": src.names[a], "y": src.names[b]}
                break
        if bad:
            break
    rep.add(Check("u -> u + gamma is multiplicative", bad is None, src.dim**2, bad))
    r = Phi.rank()
    rep.add(Check("u -> u + gamma is bijective", r == p * p, 1, None if r == p * p else {"rank": r}))
    return Phi, rep


def gamma_matrix(S: BrauerSetup, gamma) -> Matrix:
    """The A-linear map L -> K with d -> gamma, on the k-basis s^a d."""
    gamma = S.element(gamma)
    K = S.K
    cols = [K.mul(K.basis_vector(a), gamma) for a in range(K.dim)]
    return Matrix.from_columns(S.k, cols, K.dim)


def ext_side_shift(S: BrauerSetup, beta, gamma) -> Report:
    """E_beta' is equivalent to E_beta (beta' = shifted_beta) via the section shift by -gamma."""
    beta, gamma = S.element(beta), S.element(gamma)
    beta2 = shifted_beta(S, beta, gamma)
    neg = tuple(-c for c in gamma)
    return verify_equivalence(extension_data(S, beta), extension_data(S, beta2), gamma_matrix(S, neg))


def witness_search(S: BrauerSetup, beta, target=None, degree: int = 3, max_candidates: int = 5000) -> dict:
    """Bounded search for gamma with shifted_beta(beta, gamma) = target (default 0).

    Coefficients of gamma range over polynomials in t of degree <= ``degree``.
    Evidence only: a miss says nothing about splitness.
    """
    beta = S.element(beta)
    target = S.element(target) if target is not None else S.K.zero()
    p, k = S.p, S.k
    polys = [k.poly(list(c)) for c in itertools.product(range(p), repeat=degree + 1)]
    tried = 0
    for coeffs in itertools.product(polys, repeat=p):
        if tried >= max_candidates:
            break
        tried += 1
        if shifted_beta(S, beta, coeffs) == target:
            return {"found": True, "gamma": S.K.format(coeffs), "tried": tried, "evidence_only": True}
    return {"found": False, "tried": tried, "degree_bound": degree, "evidence_only": True}


def ext_to_brauer_demo(p: int, beta="t", gamma=None, samples: int = 4, seed: int = 0) -> Report:
    """Extension side vs algebra side on one setup."""
    if p not in (2, 3):
        raise BrauerError("the demo supports p in {2, 3}")
    S = setup(p)
    K, k = S.K, S.k
    rep = Report("Ext -> Brauer correspondence", notes={"p": p})
    E = regular_extension(S, beta)
    rep.notes["beta"] = E.beta_str()
    C = crossed_product(E)
    cs = central_simple_check(C)
    rep.notes["center_dim"] = cs.notes["center_dim"]
    rep.notes["sandwich_rank"] = cs.notes["sandwich_rank"]
    rep.extend(cs)
    rep.add(maximal_commutative_check(C))

    # (i) Baer sums add p-curvatures
    rng = random.Random(seed)
    betas = [E.beta, K.zero()] + [K.scalar(k.random(rng, 1)) for _ in range(samples)]
    bad = None
    for b1, b2 in zip(betas, betas[1:] + betas[:1]):
        summed = baer_sum(extension_data(S, b1), extension_data(S, b2))
        target = extension_data(S, vadd(b1, b2))
        vr = verify_equivalence(summed, target, Matrix.zeros(k, K.dim, K.dim))
        if not vr.passed:
            bad = {"beta": K.format(b1), "beta'": K.format(b2)}
            break
    rep.add(Check("E_beta + E_beta' is equivalent to E_(beta+beta')", bad is None, len(betas), bad))

    # (ii) split class maps to End_k(K)
    E0 = regular_extension(S, "0")
    sr = verify_split_witness(E0, "0")
    rep.add(Check("A_0 is isomorphic to End_k(K)", sr.split, 1, None if sr.split else sr.report.to_json()))

    # (iii) section shifts: ext-side equivalence and algebra isomorphism
    gammas = [S.element(gamma)] if gamma is not None else []
    gammas += [tuple(k.random(rng, 1) for _ in range(p)) for _ in range(samples)]
    bad = None
    for g in gammas:
        er = ext_side_shift(S, E.beta, g)
        _, ar = shift_isomorphism(S, E.beta, g)
        if not (er.passed and ar.passed):
            bad = {"gamma": K.format(g), "ext_side": er.passed, "algebra_side": ar.passed}
            break
    rep.add(Check("section shift by gamma gives equivalent extensions and isomorphic algebras", bad is None, len(gammas), bad))

    if gamma is not None:
        sw = verify_split_witness(E, gamma, C)
        rep.notes["gamma"] = K.format(S.element(gamma))
        rep.notes["split"] = sw.split
        if sw.split:
            rep.notes["split_witness"] = K.format(S.element(gamma))
            er = verify_equivalence(E.data, extension_data(S, "0"), gamma_matrix(S, tuple(-c for c in S.element(gamma))))
            rep.add(Check("split witness agrees with the extension side", er.passed, 1, None if er.passed else er.first_failure().witness))
        else:
            rep.notes["residue"] = C.format(sw.residue)
    return rep
