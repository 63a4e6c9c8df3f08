"""Beck modules (restricted Lie-Rinehart modules with a p-semilinear P) and Beck derivations.

W(A,L) is never built as an algebra; a module stores its action data:
A-action matrices, one L-action matrix per k-basis element of L, and the
images P(m_j) as columns, extended p-semilinearly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

from .linalg import Matrix, is_zero, kernel, lincomb, unit_vector, vadd, vsub
from .lrin import LieRinehart, LieRinehartError, check_lrr_axioms, lincomb_matrix, semidirect
from .report import Check, Report


class BeckError(ValueError):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message if not witness else f"{message}: {witness}")
        self.witness = witness


@dataclass
class BeckModule:
    names: list[str]
    a_action: list[Matrix]
    l_action: list[Matrix]
    P: Matrix | None = None
    rank: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return len(self.names)

    def P_apply(self, v: Sequence) -> tuple:
        """P on a k-vector, p-semilinear in the k-coordinates."""
        F = self.a_action[0].field
        if self.P is None:
            return (F.zero,) * self.dim
        return lincomb(F, self.dim, [(c.frobenius(), self.P.column(j)) for j, c in enumerate(v) if c])

    def act_L(self, L: LieRinehart, X: Sequence) -> Matrix:
        return lincomb_matrix(L.field, self.dim, [(c, self.l_action[j]) for j, c in enumerate(X) if c])

    def act_A(self, L: LieRinehart, a: Sequence) -> Matrix:
        return lincomb_matrix(L.field, self.dim, [(c, self.a_action[i]) for i, c in enumerate(a) if c])

    def with_P(self, P: Matrix | None) -> "BeckModule":
        return BeckModule(list(self.names), list(self.a_action), list(self.l_action), P, self.rank, dict(self.meta))


def zero_module(L: LieRinehart) -> BeckModule:
    F = L.field
    z = Matrix.zeros(F, 0, 0)
    return BeckModule([], [z] * L.A.dim, [z] * L.dim, None, 0)


def trivial_module(L: LieRinehart, names: Sequence[str] = ("m",), P: Matrix | None = None) -> BeckModule:
    """k^r with A = k acting by scalars and L acting by zero."""
    if L.A.dim != 1:
        raise BeckError("trivial modules are only defined here for A = k")
    F, r = L.field, len(names)
    return BeckModule(list(names), [Matrix.identity(F, r)], [Matrix.zeros(F, r, r)] * L.dim, P, r)


def natural_module(L: LieRinehart, P: Matrix | None = None) -> BeckModule:
    """A itself, with L acting through the anchor."""
    A = L.A
    return BeckModule(
        list(A.names),
        [A.left_matrix(A.basis_vector(a)) for a in range(A.dim)],
        list(L.anchor),
        P,
        1,
    )


def frobenius_matrix(A) -> Matrix:
    """Columns e_j^p: the ring Frobenius of A as a p-semilinear map."""
    return Matrix.from_columns(A.field, [A.frobenius(A.basis_vector(j)) for j in range(A.dim)], A.dim)


def beck_module_check(M: BeckModule, L: LieRinehart, samples: int = 50, seed: int = 0) -> Report:
    A, F, m = L.A, L.field, M.dim
    rep = Report("Beck module", notes={"dim": m})
    if len(M.a_action) != A.dim or len(M.l_action) != L.dim:
        rep.add(Check("action data has the right shape", False, 1, {"a_action": len(M.a_action), "l_action": len(M.l_action)}))
        return rep
    if m == 0:
        rep.add(Check("zero module", True))
        return rep
    e = [A.basis_vector(a) for a in range(A.dim)]
    E = [L.basis_vector(j) for j in range(L.dim)]
    rng = random.Random(seed)

    bad = None if M.a_action[0] == Matrix.identity(F, m) else {"issue": "1 does not act as identity"}
    for a in range(A.dim):
        for b in range(A.dim):
            if bad is None and M.a_action[a] @ M.a_action[b] != M.act_A(L, A.mul(e[a], e[b])):
                bad = {"a": A.names[a], "b": A.names[b]}
    rep.add(Check("A-module", bad is None, A.dim**2, bad))

    bad = None
    for a in range(A.dim):
        for j in range(L.dim):
            if M.act_L(L, L.act(e[a], E[j])) != M.a_action[a] @ M.l_action[j]:
                bad = {"a": A.names[a], "X": L.names[j]}
                break
        if bad:
            break
    rep.add(Check("(aX)m = a(Xm)", bad is None, A.dim * L.dim, bad))

    bad = None
    for a in range(A.dim):
        for j in range(L.dim):
            lhs = M.l_action[j] @ M.a_action[a]
            rhs = M.a_action[a] @ M.l_action[j] + M.act_A(L, L.anchor[j] @ e[a])
            if lhs != rhs:
                bad = {"a": A.names[a], "X": L.names[j]}
                break
        if bad:
            break
    rep.add(Check("X(am) = aX(m) + X(a)m", bad is None, A.dim * L.dim, bad))

    bad = None
    for i in range(L.dim):
        for j in range(L.dim):
            r = M.l_action[i] @ M.l_action[j] - M.l_action[j] @ M.l_action[i]
            if M.act_L(L, L.lie.table[i][j]) != r:
                bad = {"X": L.names[i], "Y": L.names[j]}
                break
        if bad:
            break
    rep.add(Check("Lie module [X,Y]m = X(Ym) - Y(Xm)", bad is None, L.dim**2, bad))

    if L.is_restricted:
        p = L.p
        bad = None
        for j in range(L.dim):
            if M.act_L(L, L.lie.pimages[j]) != M.l_action[j] ** p:
                bad = {"X": L.names[j]}
                break
        if bad is None:
            for _ in range(samples):
                X = L.random_element(rng)
                if M.act_L(L, L.p_map(X)) != M.act_L(L, X) ** p:
                    bad = {"X": L.format(X)}
                    break
        rep.add(Check("restricted: X^[p] m = X(...(X m)) p times", bad is None, L.dim + samples, bad))

    if M.P is not None:
        bad = None
        for a in range(A.dim):
            ap = M.act_A(L, A.frobenius(e[a]))
            for j in range(m):
                ej = unit_vector(F, m, j)
                if M.P_apply(M.a_action[a] @ ej) != ap @ M.P_apply(ej):
                    bad = {"a": A.names[a], "m": M.names[j]}
                    break
            if bad:
                break
        rep.add(Check("P is p-semilinear: P(am) = a^p P(m)", bad is None, A.dim * m, bad))
        bad = None
        for j in range(L.dim):
            for i in range(m):
                if not is_zero(M.l_action[j] @ M.P.column(i)):
                    bad = {"X": L.names[j], "m": M.names[i]}
                    break
            if bad:
                break
        rep.add(Check("image of P is L-invariant: X P(m) = 0", bad is None, L.dim * m, bad))
    return rep


def beck_module_assemble(M: BeckModule, L: LieRinehart, samples: int = 50, seed: int = 0) -> LieRinehart:
    """The split object M-bar x|_P L, checked against all axioms."""
    rep = beck_module_check(M, L, samples, seed)
    if not rep.passed:
        f = rep.first_failure()
        raise BeckError(f"not a Beck module ({f.identity})", f.witness)
    if M.dim == 0:
        return L
    try:
        E = semidirect(M, L, M.P)
    except LieRinehartError as exc:
        raise BeckError(str(exc), exc.witness) from None
    full = check_lrr_axioms(E, samples=samples, seed=seed)
    if not full.passed:
        f = full.first_failure()
        raise BeckError(f"assembled algebra fails {f.identity}", f.witness)
    E.notes["module_report"] = rep
    E.notes["axiom_report"] = full
    return E


# --- Beck derivations ----------------------------------------------------------------------


def _require_prime_field(F):
    if not getattr(F, "is_prime_field", False):
        raise BeckError("the decision procedure needs k = F_p (Frobenius must be linear on scalars)")


def beck_derivation_system(L: LieRinehart, M: BeckModule) -> Matrix:
    """Linear conditions on d, with d(X_j) stored at indices j*m .. j*m + m - 1."""
    F = L.field
    _require_prime_field(F)
    A, N, m, p = L.A, L.dim, M.dim, L.p
    nvar = N * m
    rows: list[list] = []

    def d_of(v):
        """rows expressing d(v) as linear forms: list of m rows"""
        out = [[F.zero] * nvar for _ in range(m)]
        for j, c in enumerate(v):
            if c:
                for r in range(m):
                    out[r][j * m + r] = out[r][j * m + r] + c
        return out

    def apply_to_d(Mat: Matrix, j):
        """rows expressing Mat @ d(X_j)"""
        out = [[F.zero] * nvar for _ in range(m)]
        for r in range(m):
            for c in range(m):
                if Mat.entries[r][c]:
                    out[r][j * m + c] = Mat.entries[r][c]
        return out

    def sub_rows(X, Y):
        return [[a - b for a, b in zip(x, y)] for x, y in zip(X, Y)]

    def add_rows(X, Y):
        return [[a + b for a, b in zip(x, y)] for x, y in zip(X, Y)]

    E = [L.basis_vector(j) for j in range(N)]
    for a in range(A.dim):
        for j in range(N):
            rows += sub_rows(d_of(L.a_action[a] @ E[j]), apply_to_d(M.a_action[a], j))
    for i in range(N):
        for j in range(i + 1, N):
            rhs = sub_rows(apply_to_d(M.l_action[i], j), apply_to_d(M.l_action[j], i))
            rows += sub_rows(d_of(L.lie.table[i][j]), rhs)
    if L.is_restricted:
        Pm = M.P if M.P is not None else Matrix.zeros(F, m, m)
        for j in range(N):
            rhs = add_rows(apply_to_d(M.l_action[j] ** (p - 1), j), apply_to_d(Pm, j))
            rows += sub_rows(d_of(L.lie.pimages[j]), rhs)
    return Matrix(F, rows, nvar) if rows else Matrix.zeros(F, 0, nvar)


def beck_derivations(L: LieRinehart, M: BeckModule) -> list[Matrix]:
    """Basis of Der_p(L, M); each derivation is an m x N matrix with columns d(X_j)."""
    _require_prime_field(L.field)
    N, m = L.dim, M.dim
    if m == 0 or N == 0:
        return []
    sys = beck_derivation_system(L, M)
    sols = kernel(sys) if sys.rows else [unit_vector(L.field, N * m, i) for i in range(N * m)]
    return [Matrix.from_columns(L.field, [v[j * m : (j + 1) * m] for j in range(N)], m) for v in sols]


def is_beck_derivation(L: LieRinehart, M: BeckModule, d: Matrix, samples: int = 50, seed: int = 0) -> Report:
    """Check a proposed derivation over any base field."""
    A = L.A
    rep = Report("Beck derivation")
    E = [L.basis_vector(j) for j in range(L.dim)]
    bad = None
    for a in range(A.dim):
        for j in range(L.dim):
            if d @ (L.a_action[a] @ E[j]) != M.a_action[a] @ d.column(j):
                bad = {"a": A.names[a], "X": L.names[j]}
    rep.add(Check("A-linear", bad is None, A.dim * L.dim, bad))
    bad = None
    for i in range(L.dim):
        for j in range(L.dim):
            lhs = d @ L.lie.table[i][j]
            rhs = vsub(M.l_action[i] @ d.column(j), M.l_action[j] @ d.column(i))
            if lhs != rhs:
                bad = {"X": L.names[i], "Y": L.names[j]}
    rep.add(Check("d([X,Y]) = X d(Y) - Y d(X)", bad is None, L.dim**2, bad))
    if L.is_restricted:
        rng = random.Random(seed)
        cases = E + [L.random_element(rng) for _ in range(samples)]
        bad = None
        for X in cases:
            dx = d @ X
            rhs = vadd((M.act_L(L, X) ** (L.p - 1)) @ dx, M.P_apply(dx))
            if d @ L.p_map(X) != rhs:
                bad = {"X": L.format(X)}
                break
        rep.add(Check("d(X^[p]) = X^(p-1) d(X) + P(d(X))", bad is None, len(cases), bad))
    return rep


def section_from_derivation(M: BeckModule, L: LieRinehart, d: Matrix) -> Matrix:
    """f_d = d + gamma as a map L -> M-bar x| L (gamma the canonical section)."""
    F, m, N = L.field, M.dim, L.dim
    cols = []
    for j in range(N):
        cols.append(tuple(d.column(j)) + unit_vector(F, N, j))
    return Matrix.from_columns(F, cols, m + N)


def check_section_hom(E: LieRinehart, L: LieRinehart, f: Matrix, samples: int = 30, seed: int = 0) -> Report:
    """f : L -> E is a restricted Lie-Rinehart map splitting the projection."""
    A = L.A
    m = E.dim - L.dim
    rep = Report("section homomorphism")
    Ebas = [L.basis_vector(j) for j in range(L.dim)]
    bad = None
    for j in range(L.dim):
        if tuple(f.column(j)[m:]) != Ebas[j]:
            bad = {"X": L.names[j]}
    rep.add(Check("splits the projection", bad is None, L.dim, bad))
    bad = None
    for i in range(L.dim):
        for j in range(L.dim):
            if f @ L.bracket(Ebas[i], Ebas[j]) != E.bracket(f.column(i), f.column(j)):
                bad = {"X": L.names[i], "Y": L.names[j]}
    rep.add(Check("bracket preserved", bad is None, L.dim**2, bad))
    bad = None
    for a in range(A.dim):
        for j in range(L.dim):
            ea = A.basis_vector(a)
            if f @ L.act(ea, Ebas[j]) != E.act(ea, f.column(j)):
                bad = {"a": A.names[a], "X": L.names[j]}
    rep.add(Check("A-linear", bad is None, A.dim * L.dim, bad))
    if L.is_restricted:
        rng = random.Random(seed)
        cases = Ebas + [L.random_element(rng) for _ in range(samples)]
        bad = None
        for X in cases:
            if f @ L.p_map(X) != E.p_map(f @ X):
                bad = {"X": L.format(X)}
                break
        rep.add(Check("p-map preserved", bad is None, len(cases), bad))
    return rep


def derivation_from_section(M: BeckModule, f: Matrix) -> Matrix:
    """Inverse of ``section_from_derivation``: keep the M-bar rows."""
    m = M.dim
    return Matrix(f.field, [f.entries[r] for r in range(m)], f.cols)
