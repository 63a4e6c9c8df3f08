"""Lie-Rinehart and restricted Lie-Rinehart algebras over a finite-dimensional A.

Everything is stored over k: the underlying restricted Lie algebra on a
k-basis of L, the A-action as k-matrices (one per A-basis element), and the
anchor as one derivation matrix of A per k-basis element of L.  When L is
free over A with A-basis u_1..u_n, the k-basis is e_a * u_i at index
``i * dim A + a`` (e_0 = 1), which is what ``rank`` records.
"""

from __future__ import annotations

import random
from typing import Callable, Sequence

from .commalg import CommAlgebra, InsepExtension, derivation_space, is_derivation, leibniz_defect
from .linalg import (
    InconsistentSystem,
    Matrix,
    coordinates,
    is_zero,
    lincomb,
    rank_of_vectors,
    unit_vector,
    vadd,
    vscale,
    vsub,
)
from .report import Check, Report
from .rlie import RestrictedLie, check_restricted, lie_axiom_checks


class LieRinehartError(ValueError):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message if not witness else f"{message}: {witness}")
        self.witness = witness


class LieRinehart:
    def __init__(
        self,
        A: CommAlgebra,
        lie: RestrictedLie,
        a_action: Sequence[Matrix],
        anchor: Sequence[Matrix],
        rank: int | None = None,
    ):
        self.A = A
        self.lie = lie
        self.a_action = tuple(a_action)
        self.anchor = tuple(anchor)
        self.rank = rank
        self.notes: dict = {}
        if len(self.a_action) != A.dim or len(self.anchor) != lie.dim:
            raise LieRinehartError("A-action or anchor data has the wrong number of entries")
        if rank is not None and rank * A.dim != lie.dim:
            raise LieRinehartError("declared A-rank does not match the k-dimension")

    @property
    def field(self):
        return self.A.field

    @property
    def p(self) -> int:
        return self.A.p

    @property
    def dim(self) -> int:
        return self.lie.dim

    @property
    def names(self):
        return self.lie.names

    @property
    def is_restricted(self) -> bool:
        return self.lie.is_restricted

    def zero(self) -> tuple:
        return self.lie.zero()

    def basis_vector(self, j: int) -> tuple:
        return self.lie.basis_vector(j)

    def act(self, a: Sequence, X: Sequence) -> tuple:
        """The A-module action a . X."""
        F = self.field
        return lincomb(F, self.dim, [(c, self.a_action[i] @ X) for i, c in enumerate(a) if c])

    def anchor_of(self, X: Sequence) -> Matrix:
        M = Matrix.zeros(self.field, self.A.dim, self.A.dim)
        for c, D in zip(X, self.anchor):
            if c:
                M = M + D.scale(c)
        return M

    def bracket(self, X, Y) -> tuple:
        return self.lie.bracket(X, Y)

    def p_map(self, X, order=None) -> tuple:
        return self.lie.p_map(X, order)

    def random_element(self, rng: random.Random) -> tuple:
        return self.lie.random_element(rng)

    def format(self, X) -> str:
        return self.lie.format(X)

    # -- free-module view ---------------------------------------------------------

    def u(self, i: int) -> tuple:
        """i-th A-basis vector (requires a free L)."""
        self._require_free()
        return self.basis_vector(i * self.A.dim)

    def a_coords(self, X: Sequence) -> list[tuple]:
        self._require_free()
        d = self.A.dim
        return [tuple(X[i * d : (i + 1) * d]) for i in range(self.rank)]

    def from_a_coords(self, coeffs: Sequence[Sequence]) -> tuple:
        self._require_free()
        return tuple(c for a in coeffs for c in a)

    def a_basis_names(self) -> list[str]:
        self._require_free()
        return [self.names[i * self.A.dim] for i in range(self.rank)]

    def _require_free(self):
        if self.rank is None:
            raise LieRinehartError("L is not presented as a free A-module")

    def __repr__(self):
        return f"LieRinehart(k-dim={self.dim}, A-rank={self.rank}, A={list(self.A.names)})"


# --- construction from A-basis data ---------------------------------------------------


def scaled_pmap_rhs(X: LieRinehart, a: Sequence, Y: Sequence, Yp: Sequence | None = None) -> tuple:
    """a^p Y^[p] + (aY)^(p-1)(a) Y."""
    A, p = X.A, X.p
    if Yp is None:
        Yp = X.p_map(Y)
    aY = X.anchor_of(X.act(a, Y))
    corr = (aY ** (p - 1)) @ a
    return vadd(X.act(A.frobenius(a), Yp), X.act(corr, Y))


def from_free(
    A: CommAlgebra,
    names: Sequence[str],
    brackets: dict,
    anchors: Sequence[Matrix],
    pimages: Sequence[Sequence[Sequence]] | None = None,
    kbasis_pmap: Callable[[int, int], tuple] | None = None,
    reference_pmap: Callable | None = None,
) -> LieRinehart:
    """Lie-Rinehart algebra free over A on ``names``.

    ``brackets[(i, j)]`` (i < j) is [u_i, u_j] as a list of A-coordinates per
    u_m; ``anchors[i]`` is the derivation u_i acts by; ``pimages[i]`` is
    u_i^[p] in A-coordinates.  The p-map on the k-basis e_a u_i is extended by
    (a u)^[p] = a^p u^[p] + (a u)^(p-1)(a) u unless ``kbasis_pmap(i, a)``
    supplies the images directly.
    """
    F, dA, n = A.field, A.dim, len(names)
    N = n * dA
    e = [A.basis_vector(a) for a in range(dA)]

    def flat(coeffs) -> tuple:
        return tuple(F(c) for a in coeffs for c in a)

    def ubr(i, j) -> tuple:
        if i == j:
            return (F.zero,) * N
        if (i, j) in brackets:
            return flat(brackets[(i, j)])
        if (j, i) in brackets:
            return vscale(-F.one, flat(brackets[(j, i)]))
        return (F.zero,) * N

    def act(c, X):
        # multiply every A-coordinate of X by c
        return tuple(x for i in range(n) for x in A.mul(c, X[i * dA : (i + 1) * dA]))

    for D in anchors:
        if leibniz_defect(A, D) is not None:
            raise LieRinehartError("anchor of a basis vector is not a derivation", {"pair": leibniz_defect(A, D)})

    def kvec(i, c):
        out = [F.zero] * N
        out[i * dA : (i + 1) * dA] = c
        return tuple(out)

    table = [[None] * N for _ in range(N)]
    for i in range(n):
        for a in range(dA):
            for j in range(n):
                for b in range(dA):
                    val = act(A.mul(e[a], e[b]), ubr(i, j))
                    val = vadd(val, kvec(j, A.mul(e[a], anchors[i] @ e[b])))
                    val = vsub(val, kvec(i, A.mul(e[b], anchors[j] @ e[a])))
                    table[i * dA + a][j * dA + b] = val
    a_action = []
    for c in range(dA):
        cols = [kvec(i, A.mul(e[c], e[a])) for i in range(n) for a in range(dA)]
        a_action.append(Matrix.from_columns(F, cols, N))
    anchor = [A.left_matrix(e[a]) @ anchors[i] for i in range(n) for a in range(dA)]
    lie = RestrictedLie(F, table, None, _kbasis_names(A, names))
    X = LieRinehart(A, lie, a_action, anchor, rank=n)
    if pimages is None and kbasis_pmap is None:
        return X
    if kbasis_pmap is None:
        up = [flat(v) for v in pimages]
        kimages = []
        for i in range(n):
            for a in range(dA):
                kimages.append(scaled_pmap_rhs(X, e[a], X.basis_vector(i * dA), up[i]))
    else:
        kimages = [tuple(kbasis_pmap(i, a)) for i in range(n) for a in range(dA)]
    X.lie = lie.with_pmap(kimages, reference_pmap)
    return X


def _kbasis_names(A: CommAlgebra, names: Sequence[str]) -> list[str]:
    out = []
    for u in names:
        for a in A.names:
            out.append(u if a == "1" else f"{a}*{u}")
    return out


def restricted_over_base_field(A: CommAlgebra, L: RestrictedLie) -> LieRinehart:
    """A restricted Lie algebra viewed over A = k with zero anchor."""
    if A.dim != 1:
        raise LieRinehartError("A must be the base field")
    F = A.field
    zero_anchor = Matrix.zeros(F, 1, 1)
    return LieRinehart(A, L, [Matrix.identity(F, L.dim)], [zero_anchor] * L.dim, rank=L.dim)


# --- Der_k(A) ---------------------------------------------------------------------


def _a_span(A: CommAlgebra, mats: Sequence[Matrix]) -> list[tuple]:
    return [(A.left_matrix(A.basis_vector(a)) @ D).flat() for D in mats for a in range(A.dim)]


def free_derivation_basis(A: CommAlgebra, kbasis: Sequence[Matrix] | None = None) -> list[Matrix]:
    """Greedy A-basis of Der_k(A) chosen from a k-basis; error if not free."""
    if kbasis is None:
        kbasis = derivation_space(A)
    F = A.field
    chosen: list[Matrix] = []
    for D in kbasis:
        trial = chosen + [D]
        if rank_of_vectors(F, _a_span(A, trial)) == len(trial) * A.dim:
            chosen.append(D)
    if len(chosen) * A.dim != len(kbasis):
        raise LieRinehartError("Der_k(A) is not free over A with a basis among the computed derivations")
    return chosen


def der_algebra(A: CommAlgebra | InsepExtension, basis: Sequence[Matrix] | None = None, names=None) -> LieRinehart:
    """Der_k(A): commutator bracket, identity anchor, p-map D -> D^p."""
    if isinstance(A, InsepExtension):
        if basis is None:
            basis = [A.d]
            names = names or ["d"]
        A = A.K
    F, dA = A.field, A.dim
    if basis is None:
        basis = free_derivation_basis(A)
    basis = list(basis)
    n = len(basis)
    if names is None:
        names = ["d"] if n == 1 else [f"d{i + 1}" for i in range(n)]
    span = _a_span(A, basis)
    if rank_of_vectors(F, span) != n * dA if n else False:
        raise LieRinehartError("given derivations are not A-independent")

    def coords(M: Matrix) -> tuple:
        try:
            return coordinates(F, span, M.flat())
        except InconsistentSystem:
            raise LieRinehartError("derivation outside the A-span of the basis") from None

    def split(v):
        return [v[i * dA : (i + 1) * dA] for i in range(n)]

    brackets = {}
    for i in range(n):
        for j in range(i + 1, n):
            brackets[(i, j)] = split(coords(basis[i] @ basis[j] - basis[j] @ basis[i]))

    def as_matrix(v) -> Matrix:
        M = Matrix.zeros(F, dA, dA)
        for c, flatD in zip(v, span):
            if c:
                M = M + Matrix(F, [flatD[r::dA] for r in range(dA)], dA).scale(c)
        return M

    kmats = [A.left_matrix(A.basis_vector(a)) @ basis[i] for i in range(n) for a in range(dA)]
    p = A.p
    X = from_free(
        A,
        names,
        brackets,
        basis,
        kbasis_pmap=lambda i, a: coords(kmats[i * dA + a] ** p),
        reference_pmap=lambda v: coords(as_matrix(v) ** p),
    )
    X.notes["construction"] = "Der_k(A)"
    return X


# --- semidirect products ------------------------------------------------------------


def semidirect(module, L: LieRinehart, f: Matrix | None = None) -> LieRinehart:
    """M-bar x| L, with p-map (m + X)^[p] = X^(p-1)(m) + X^[p] + f(m).

    ``module`` supplies ``names``, ``a_action`` (per A-basis element),
    ``l_action`` (per k-basis element of L) and optionally ``rank``.
    ``f`` gives the images f(m_j) as columns and is applied p-semilinearly.
    """
    A, F = L.A, L.field
    m, N = len(module.names), L.dim
    if m == 0:
        return L
    p = L.p
    zero_m = (F.zero,) * m

    def f_apply(v):
        if f is None:
            return zero_m
        return lincomb(F, m, [(c.frobenius(), f.column(j)) for j, c in enumerate(v) if c])

    if f is not None:
        for j in range(m):
            img = f.column(j)
            for i in range(N):
                if not is_zero(module.l_action[i] @ img):
                    raise LieRinehartError(
                        "image of f is not L-invariant", {"m": module.names[j], "X": L.names[i]}
                    )
        for a in range(A.dim):
            Ma = module.a_action[a]
            ap = A.frobenius(A.basis_vector(a))
            Map = lincomb_matrix(F, m, [(c, module.a_action[b]) for b, c in enumerate(ap) if c])
            for j in range(m):
                lhs = f_apply(Ma.column(j))
                rhs = Map @ f.column(j)
                if lhs != rhs:
                    raise LieRinehartError("f is not p-semilinear", {"a": A.names[a], "m": module.names[j]})

    D = m + N
    zero = (F.zero,) * D

    def emb_m(v):
        return tuple(v) + (F.zero,) * N

    def emb_l(v):
        return zero_m + tuple(v)

    table = [[zero] * D for _ in range(D)]
    for i in range(N):
        rho = module.l_action[i]
        for j in range(m):
            img = emb_m(rho.column(j))
            table[m + i][j] = img
            table[j][m + i] = vscale(-F.one, img)
        for j in range(N):
            table[m + i][m + j] = emb_l(L.lie.table[i][j])
    pimages = None
    ref = None
    if L.is_restricted:
        pimages = [emb_m(f_apply(unit_vector(F, m, j))) for j in range(m)]
        pimages += [emb_l(L.lie.pimages[i]) for i in range(N)]

        def _ref(v):
            mv, xv = v[:m], v[m:]
            rho = lincomb_matrix(F, m, [(c, module.l_action[i]) for i, c in enumerate(xv) if c])
            return vadd(emb_m(vadd((rho ** (p - 1)) @ mv, f_apply(mv))), emb_l(L.p_map(xv)))

        ref = _ref

    names = list(module.names) + list(L.names)
    lie = RestrictedLie(F, table, pimages, names, reference_pmap=ref)
    a_action = [block_diag(F, module.a_action[a], L.a_action[a]) for a in range(A.dim)]
    zero_anchor = Matrix.zeros(F, A.dim, A.dim)
    anchor = [zero_anchor] * m + list(L.anchor)
    rank = None
    if getattr(module, "rank", None) is not None and L.rank is not None:
        rank = module.rank + L.rank
    E = LieRinehart(A, lie, a_action, anchor, rank=rank)
    E.notes["construction"] = "semidirect product" + (" with p-semilinear twist" if f is not None else "")
    return E


def lincomb_matrix(F, n: int, pairs) -> Matrix:
    M = Matrix.zeros(F, n, n)
    for c, B in pairs:
        if c:
            M = M + B.scale(c)
    return M


def block_diag(F, P: Matrix, Q: Matrix) -> Matrix:
    rows = [list(r) + [F.zero] * Q.cols for r in P.entries]
    rows += [[F.zero] * P.cols + list(r) for r in Q.entries]
    return Matrix(F, rows, P.cols + Q.cols)


# --- transformation algebras ------------------------------------------------------------


def transformation_algebra(A: CommAlgebra, g: RestrictedLie, delta: Sequence[Matrix], samples: int = 50, seed: int = 0) -> LieRinehart:
    """A (x) g with anchor a (x) x -> a delta(x).

    The p-map of a pure tensor is a^p (x) x^[p] +/- (a delta(x))^(p-1)(a) (x) x;
    both signs are tried and the one passing the full axiom check is kept.
    The choice and the evidence are recorded in ``notes``.
    """
    F, n, dA, p = A.field, g.dim, A.dim, A.p
    if len(delta) != n:
        raise LieRinehartError("delta needs one derivation per basis vector of g")
    for i, D in enumerate(delta):
        if not is_derivation(A, D):
            raise LieRinehartError("delta(x) is not a derivation", {"x": g.names[i]})

    def delta_of(v) -> Matrix:
        return lincomb_matrix(F, dA, [(c, delta[i]) for i, c in enumerate(v) if c])

    for i in range(n):
        for j in range(n):
            if delta_of(g.table[i][j]) != delta[i] @ delta[j] - delta[j] @ delta[i]:
                raise LieRinehartError("delta is not a Lie homomorphism", {"x": g.names[i], "y": g.names[j]})
        if g.pimages is None or delta_of(g.pimages[i]) != delta[i] ** p:
            raise LieRinehartError("delta is not restricted", {"x": g.names[i]})

    unit = A.unit
    brackets = {(i, j): [vscale(c, unit) for c in g.table[i][j]] for i in range(n) for j in range(i + 1, n)}
    e = [A.basis_vector(a) for a in range(dA)]

    def tensor(a, x) -> tuple:
        return tuple(c * ai for c in x for ai in a)

    def pure_pmap(a, x, sign) -> tuple:
        corr = ((A.left_matrix(a) @ delta_of(x)) ** (p - 1)) @ a
        base = tensor(A.frobenius(a), g.p_map(x))
        return vadd(base, vscale(F(sign), tensor(corr, x)))

    attempts = {}
    chosen = None
    for sign in (1, -1):
        X = from_free(
            A,
            g.names,
            brackets,
            list(delta),
            kbasis_pmap=lambda i, a, s=sign: pure_pmap(e[a], g.basis_vector(i), s),
        )
        rep = check_lrr_axioms(X, samples=samples, seed=seed)
        rng = random.Random(seed)
        bad = None
        for _ in range(samples):
            a = A.random_element(rng)
            x = g.random_element(rng)
            lhs = X.p_map(tensor(a, x))
            rhs = pure_pmap(a, x, sign)
            if lhs != rhs:
                bad = {"a": A.format(a), "x": g.format(x), "lhs": X.format(lhs), "rhs": X.format(rhs)}
                break
        rep.add(Check("pure-tensor p-map formula with sign %s" % ("-" if sign < 0 else "+"), bad is None, samples, bad))
        attempts["-" if sign < 0 else "+"] = rep
        if rep.passed and chosen is None:
            chosen = ("-" if sign < 0 else "+", X)
    if chosen is None:
        raise LieRinehartError("neither sign of the transformation p-map passes the axioms")
    sign, X = chosen
    X.notes.update(
        construction="transformation algebra",
        pmap_sign=sign,
        sign_results={s: r.passed for s, r in attempts.items()},
        signs_coincide=(p == 2),
    )
    X.sign_reports = attempts
    return X


# --- the axiom checker -------------------------------------------------------------------


def check_lrr_axioms(
    X: LieRinehart,
    samples: int = 100,
    seed: int = 0,
    rhs: Callable = scaled_pmap_rhs,
) -> Report:
    """All Lie-Rinehart and restricted Lie-Rinehart identities, with witnesses."""
    A, F, L = X.A, X.field, X.lie
    rng = random.Random(seed)
    rep = Report("restricted Lie-Rinehart algebra", notes={"k-dim": X.dim, "A-dim": A.dim, "p": X.p})
    e = [A.basis_vector(a) for a in range(A.dim)]
    E = [X.basis_vector(j) for j in range(X.dim)]
    if X.dim == 0:
        rep.add(Check("zero algebra", True, 1))
        return rep

    bad = None
    ident = Matrix.identity(F, X.dim)
    if X.a_action[0] != ident or X.act(A.unit, E[0]) != E[0]:
        bad = {"issue": "unit of A does not act as the identity"}
    for a in range(A.dim):
        for b in range(A.dim):
            if bad:
                break
            lhs = X.a_action[a] @ X.a_action[b]
            prod = A.mul(e[a], e[b])
            rhs_m = lincomb_matrix(F, X.dim, [(c, X.a_action[i]) for i, c in enumerate(prod) if c])
            if lhs != rhs_m:
                bad = {"a": A.names[a], "b": A.names[b]}
    rep.add(Check("L is an A-module", bad is None, A.dim * A.dim, bad))

    bad = None
    for j, D in enumerate(X.anchor):
        d = leibniz_defect(A, D)
        if d is not None:
            bad = {"X": X.names[j], "pair": [A.names[d[0]], A.names[d[1]]]}
            break
    rep.add(Check("anchor takes values in Der_k(A)", bad is None, X.dim, bad))

    bad = None
    for a in range(A.dim):
        for j in range(X.dim):
            lhs = X.anchor_of(X.a_action[a] @ E[j])
            r = A.left_matrix(e[a]) @ X.anchor[j]
            if lhs != r:
                bad = {"a": A.names[a], "X": X.names[j]}
                break
        if bad:
            break
    rep.add(Check("anchor is A-linear", bad is None, A.dim * X.dim, bad))

    bad = None
    for i in range(X.dim):
        for j in range(X.dim):
            lhs = X.anchor_of(L.table[i][j])
            r = X.anchor[i] @ X.anchor[j] - X.anchor[j] @ X.anchor[i]
            if lhs != r:
                bad = {"X": X.names[i], "Y": X.names[j]}
                break
        if bad:
            break
    rep.add(Check("anchor is a Lie homomorphism", bad is None, X.dim * X.dim, bad))

    bad = None
    for i in range(X.dim):
        for a in range(A.dim):
            for j in range(X.dim):
                lhs = X.bracket(E[i], X.a_action[a] @ E[j])
                r = vadd(X.a_action[a] @ L.table[i][j], X.act(X.anchor[i] @ e[a], E[j]))
                if lhs != r:
                    bad = {"X": X.names[i], "a": A.names[a], "Y": X.names[j], "lhs": X.format(lhs), "rhs": X.format(r)}
                    break
            if bad:
                break
        if bad:
            break
    rep.add(Check("Leibniz [X, aY] = a[X,Y] + X(a)Y", bad is None, X.dim * A.dim * X.dim, bad))

    if not X.is_restricted:
        for c in lie_axiom_checks(L):
            rep.add(c)
        rep.notes["p-map"] = "absent"
        return rep

    sub = check_restricted(L, samples=samples, seed=seed)
    rep.extend(sub)

    p = X.p
    bad = None
    for j in range(X.dim):
        lhs = X.anchor_of(L.pimages[j])
        r = X.anchor[j] ** p
        if lhs != r:
            bad = {"X": X.names[j]}
            break
    if bad is None:
        for _ in range(samples):
            Y = X.random_element(rng)
            if X.anchor_of(X.p_map(Y)) != X.anchor_of(Y) ** p:
                bad = {"X": X.format(Y)}
                break
    rep.add(Check("anchor is restricted: alpha(X^[p]) = alpha(X)^p", bad is None, X.dim + samples, bad))

    bad = None
    count = 0
    cases = [(e[a], E[j]) for a in range(A.dim) for j in range(X.dim)]
    cases += [(A.random_element(rng), X.random_element(rng)) for _ in range(samples)]
    for a, Y in cases:
        count += 1
        lhs = X.p_map(X.act(a, Y))
        r = rhs(X, a, Y)
        if lhs != r:
            bad = {"a": A.format(a), "X": X.format(Y), "lhs": X.format(lhs), "rhs": X.format(r)}
            break
    rep.add(Check("(aX)^[p] = a^p X^[p] + (aX)^(p-1)(a) X", bad is None, count, bad))
    return rep
