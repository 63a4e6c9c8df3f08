"""Abelian extensions 0 -> M-bar -> E -> L -> 0 of restricted Lie-Rinehart algebras.

An extension is recorded relative to the A-linear splitting E = M-bar + L:
    [m + X, m' + Y] = (X m' - Y m + h(X,Y)) + [X,Y]
    (m + X)^[p]     = X^(p-1) m + P(m) + g(X) + X^[p]
with h and g given on the k-basis of L (``from_a_basis`` extends A-basis data).
Validity is operational: the assembled E must pass ``check_lrr_axioms``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

from .beck import BeckModule, _require_prime_field, beck_module_check
from .linalg import (
    InconsistentSystem,
    Matrix,
    coordinates,
    is_zero,
    lincomb,
    solve_linear,
    unit_vector,
    vadd,
    vscale,
    vsub,
)
from .lrin import LieRinehart, block_diag, check_lrr_axioms
from .report import Check, Report
from .rlie import RestrictedLie


class ExtensionError(ValueError):
    def __init__(self, message: str, witness: dict | None = None):
        super().__init__(message if not witness else f"{message}: {witness}")
        self.witness = witness


@dataclass
class ExtensionData:
    L: LieRinehart
    M: BeckModule
    h: dict  # (i, j) -> M-vector on k-basis pairs, i < j
    g: list  # g[j] -> M-vector for the j-th k-basis element of L
    label: str = ""
    report: Report | None = None

    def h_of(self, i: int, j: int) -> tuple:
        F = self.L.field
        if i == j:
            return (F.zero,) * self.M.dim
        if (i, j) in self.h:
            return tuple(self.h[(i, j)])
        if (j, i) in self.h:
            return tuple(-c for c in self.h[(j, i)])
        return (F.zero,) * self.M.dim

    def key(self) -> tuple:
        N = self.L.dim
        hs = tuple(self.h_of(i, j) for i in range(N) for j in range(i + 1, N))
        return hs, tuple(tuple(v) for v in self.g)


def from_a_basis(L: LieRinehart, M: BeckModule, h: dict, g: Sequence[Sequence], label: str = "") -> ExtensionData:
    """Extend h A-bilinearly and g by g(e_a u_i) = e_a^p g(u_i)."""
    if L.rank is None:
        raise ExtensionError("A-basis data needs L free over A")
    A, F, dA, n, m = L.A, L.field, L.A.dim, L.rank, M.dim
    if len(g) != n:
        raise ExtensionError(f"g needs {n} values, got {len(g)}", {"key": "g"})
    for v in g:
        if len(v) != m:
            raise ExtensionError(f"dimension mismatch in g: expected {m} coordinates, got {len(v)}", {"key": "g"})
    e = [A.basis_vector(a) for a in range(dA)]

    def hu(i, j):
        if i == j:
            return (F.zero,) * m
        if (i, j) in h:
            return tuple(h[(i, j)])
        if (j, i) in h:
            return tuple(-c for c in h[(j, i)])
        return (F.zero,) * m

    hk = {}
    for i, a in itertools.product(range(n), range(dA)):
        for j, b in itertools.product(range(n), range(dA)):
            I, J = i * dA + a, j * dA + b
            if I < J:
                hk[(I, J)] = M.act_A(L, A.mul(e[a], e[b])) @ hu(i, j)
    gk = []
    for i in range(n):
        for a in range(dA):
            gk.append(M.act_A(L, A.frobenius(e[a])) @ tuple(F(c) for c in g[i]))
    return ExtensionData(L, M, hk, gk, label)


def split_extension(L: LieRinehart, M: BeckModule) -> ExtensionData:
    F = L.field
    return ExtensionData(L, M, {}, [(F.zero,) * M.dim for _ in range(L.dim)], "split")


@dataclass
class Extension:
    data: ExtensionData
    E: LieRinehart
    inclusion: Matrix
    projection: Matrix
    report: Report = field(default_factory=lambda: Report("extension"))


def assemble(data: ExtensionData) -> LieRinehart:
    """E as a k-level Lie-Rinehart algebra (no validation)."""
    L, M = data.L, data.M
    F, A = L.field, L.A
    m, N = M.dim, L.dim
    D = m + N
    zero = (F.zero,) * D

    def emb(mv, xv):
        return tuple(mv) + tuple(xv)

    table = [[zero] * D for _ in range(D)]
    for i in range(N):
        rho = M.l_action[i]
        for j in range(m):
            img = emb(rho.column(j), (F.zero,) * N)
            table[m + i][j] = img
            table[j][m + i] = vscale(-F.one, img)
        for j in range(N):
            table[m + i][m + j] = emb(data.h_of(i, j), L.lie.table[i][j])
    pimages = None
    if L.is_restricted:
        pimages = [emb(M.P_apply(unit_vector(F, m, j)), (F.zero,) * N) for j in range(m)]
        pimages += [emb(data.g[i], L.lie.pimages[i]) for i in range(N)]
    lie = RestrictedLie(F, table, pimages, list(M.names) + list(L.names))
    a_action = [block_diag(F, M.a_action[a], L.a_action[a]) for a in range(A.dim)]
    anchor = [Matrix.zeros(F, A.dim, A.dim)] * m + list(L.anchor)
    rank = M.rank + L.rank if M.rank is not None and L.rank is not None else None
    E = LieRinehart(A, lie, a_action, anchor, rank=rank)
    E.notes["construction"] = "abelian extension"
    return E


def build_extension(data: ExtensionData, samples: int = 30, seed: int = 0) -> Extension:
    L, M = data.L, data.M
    F, m, N = L.field, M.dim, L.dim
    for key, v in list(data.h.items()) + [((j,), v) for j, v in enumerate(data.g)]:
        if len(v) != m:
            raise ExtensionError(f"dimension mismatch: expected {m} coordinates", {"key": "h" if len(key) == 2 else "g", "entry": list(key)})
    if len(data.g) != N:
        raise ExtensionError(f"g needs {N} values", {"key": "g"})
    mod = beck_module_check(M, L, samples=samples, seed=seed)
    if not mod.passed:
        f = mod.first_failure()
        raise ExtensionError(f"module data fails {f.identity}", f.witness)
    # A-bilinearity of h relative to the A-linear section
    A = L.A
    for a in range(A.dim):
        ea = A.basis_vector(a)
        for i in range(N):
            for j in range(N):
                Xi = L.act(ea, L.basis_vector(i))
                lhs = lincomb(F, m, [(c, data.h_of(k, j)) for k, c in enumerate(Xi) if c])
                rhs = M.a_action[a] @ data.h_of(i, j)
                if lhs != rhs:
                    raise ExtensionError("h is not A-bilinear", {"a": A.names[a], "X": L.names[i], "Y": L.names[j]})
    E = assemble(data)
    rep = check_lrr_axioms(E, samples=samples, seed=seed)
    bad = None
    for i in range(m):
        for j in range(m):
            if not is_zero(E.lie.table[i][j]):
                bad = {"m": M.names[i], "m'": M.names[j]}
    rep.add(Check("[M, M] = 0", bad is None, m * m, bad))
    if not rep.passed:
        f = rep.first_failure()
        raise ExtensionError(f"extension fails {f.identity}", f.witness)
    inc = Matrix.from_columns(F, [unit_vector(F, m + N, j) for j in range(m)], m + N) if m else Matrix.zeros(F, m + N, 0)
    proj = Matrix(F, [[F.one if c == m + r else F.zero for c in range(m + N)] for r in range(N)], m + N)
    return Extension(data, E, inc, proj, rep)


def is_valid(data: ExtensionData, samples: int = 10, seed: int = 0) -> bool:
    try:
        build_extension(data, samples, seed)
        return True
    except ExtensionError:
        return False


# --- equivalence ------------------------------------------------------------------------


def _same_base(e1: ExtensionData, e2: ExtensionData):
    if e1.L is not e2.L or e1.M.dim != e2.M.dim or e1.M.names != e2.M.names:
        raise ExtensionError("extensions of different (L, M)")


def equivalence_map(e: ExtensionData, gamma: Matrix) -> Matrix:
    """f(m + X) = m + gamma(X) + X on E."""
    F, m, N = e.L.field, e.M.dim, e.L.dim
    cols = [unit_vector(F, m + N, j) for j in range(m)]
    for j in range(N):
        cols.append(tuple(gamma.column(j)) + unit_vector(F, N, j))
    return Matrix.from_columns(F, cols, m + N)


def verify_equivalence(e1: ExtensionData, e2: ExtensionData, gamma: Matrix, samples: int = 30, seed: int = 0) -> Report:
    """Rebuild f from gamma and check it is an isomorphism of extensions (any base field)."""
    _same_base(e1, e2)
    E1, E2 = assemble(e1), assemble(e2)
    L, A = e1.L, e1.L.A
    f = equivalence_map(e1, gamma)
    D = E1.dim
    m = e1.M.dim
    rep = Report("equivalence of extensions")
    basis = [E1.basis_vector(j) for j in range(D)]
    bad = None
    for i in range(D):
        for j in range(D):
            if f @ E1.bracket(basis[i], basis[j]) != E2.bracket(f @ basis[i], f @ basis[j]):
                bad = {"x": E1.names[i], "y": E1.names[j]}
                break
        if bad:
            break
    rep.add(Check("f preserves brackets", bad is None, D * D, bad))
    bad = None
    for a in range(A.dim):
        ea = A.basis_vector(a)
        for j in range(D):
            if f @ E1.act(ea, basis[j]) != E2.act(ea, f @ basis[j]):
                bad = {"a": A.names[a], "x": E1.names[j]}
    rep.add(Check("f is A-linear", bad is None, A.dim * D, bad))
    bad = None
    for j in range(D):
        if E1.anchor_of(basis[j]) != E2.anchor_of(f @ basis[j]):
            bad = {"x": E1.names[j]}
    rep.add(Check("f commutes with anchors", bad is None, D, bad))
    rng = random.Random(seed)
    cases = basis + [E1.random_element(rng) for _ in range(samples)]
    bad = None
    for x in cases:
        if f @ E1.p_map(x) != E2.p_map(f @ x):
            bad = {"x": E1.format(x)}
            break
    rep.add(Check("f preserves p-maps", bad is None, len(cases), bad))
    ok = all(tuple(f.column(j)) == unit_vector(L.field, D, j) for j in range(m))
    ok = ok and all(tuple(f.column(m + j))[m:] == unit_vector(L.field, L.dim, j) for j in range(L.dim))
    rep.add(Check("f restricts to the identity on M and induces the identity on L", ok, D))
    return rep


def equivalence_system(e1: ExtensionData, e2: ExtensionData) -> tuple[Matrix, tuple]:
    """Linear system in gamma (index j*m + r = coefficient of m_r in gamma(X_j))."""
    _same_base(e1, e2)
    L, M = e1.L, e1.M
    F = L.field
    _require_prime_field(F)
    A, N, m, p = L.A, L.dim, M.dim, L.p
    nvar = N * m
    rows, rhs = [], []

    def gamma_of(v):
        out = [[F.zero] * nvar for _ in range(m)]
        for j, c in enumerate(v):
            if c:
                for r in range(m):
                    out[r][j * m + r] += c
        return out

    def mat_gamma(Mat: Matrix, j):
        out = [[F.zero] * nvar for _ in range(m)]
        for r in range(m):
            for c in range(m):
                if Mat.entries[r][c]:
                    out[r][j * m + c] = Mat.entries[r][c]
        return out

    def push(lhs_rows, rhs_vec):
        rows.extend(lhs_rows)
        rhs.extend(rhs_vec)

    def comb(*parts):
        out = [[F.zero] * nvar for _ in range(m)]
        for sign, R in parts:
            for r in range(m):
                out[r] = [a + sign * b for a, b in zip(out[r], R[r])]
        return out

    E = [L.basis_vector(j) for j in range(N)]
    for a in range(A.dim):
        for j in range(N):
            push(comb((1, gamma_of(L.a_action[a] @ E[j])), (-1, mat_gamma(M.a_action[a], j))), (F.zero,) * m)
    # h(X,Y) + gamma([X,Y]) = X gamma(Y) - Y gamma(X) + h'(X,Y)
    for i in range(N):
        for j in range(i + 1, N):
            lhs = comb((1, gamma_of(L.lie.table[i][j])), (-1, mat_gamma(M.l_action[i], j)), (1, mat_gamma(M.l_action[j], i)))
            push(lhs, vsub(e2.h_of(i, j), e1.h_of(i, j)))
    # g(X) + gamma(X^[p]) = X^(p-1) gamma(X) + P(gamma X) + g'(X)
    if L.is_restricted:
        Pm = M.P if M.P is not None else Matrix.zeros(F, m, m)
        for j in range(N):
            lhs = comb((1, gamma_of(L.lie.pimages[j])), (-1, mat_gamma(M.l_action[j] ** (p - 1), j)), (-1, mat_gamma(Pm, j)))
            push(lhs, vsub(e2.g[j], e1.g[j]))
    return Matrix(F, rows, nvar), tuple(rhs)


def equivalent(e1: ExtensionData, e2: ExtensionData, verify: bool = True) -> Matrix | None:
    """A witness gamma : L -> M-bar (as m x N matrix) or None (k = F_p only)."""
    _same_base(e1, e2)
    F, m, N = e1.L.field, e1.M.dim, e1.L.dim
    if m == 0:
        return Matrix.zeros(F, 0, N)
    S, b = equivalence_system(e1, e2)
    try:
        x, _ = solve_linear(S, b)
    except InconsistentSystem:
        return None
    gamma = Matrix.from_columns(F, [x[j * m : (j + 1) * m] for j in range(N)], m)
    if verify:
        rep = verify_equivalence(e1, e2, gamma)
        if not rep.passed:
            raise ExtensionError("internal error: solved gamma fails verification", rep.first_failure().witness)
    return gamma


# --- Baer sum ---------------------------------------------------------------------------------


def baer_sum(e1: ExtensionData, e2: ExtensionData, samples: int = 20, seed: int = 0) -> ExtensionData:
    """Pullback over L, then quotient by the diagonal copy {(m, -m)} of M-bar."""
    _same_base(e1, e2)
    L, M = e1.L, e1.M
    F = L.field
    m, N = M.dim, L.dim
    E1, E2 = assemble(e1), assemble(e2)
    D1 = m + N
    # pullback basis inside E1 + E2: (m_i, 0), (0, m_i), (X_j, X_j)
    pb = []
    for i in range(m):
        pb.append(unit_vector(F, D1, i) + (F.zero,) * D1)
    for i in range(m):
        pb.append((F.zero,) * D1 + unit_vector(F, D1, i))
    for j in range(N):
        pb.append(unit_vector(F, D1, m + j) + unit_vector(F, D1, m + j))
    P_dim = len(pb)

    def br(x, y):
        return E1.bracket(x[:D1], y[:D1]) + E2.bracket(x[D1:], y[D1:])

    def pm(x):
        return E1.p_map(x[:D1]) + E2.p_map(x[D1:])

    def coords(v):
        try:
            return coordinates(F, pb, v)
        except InconsistentSystem:
            raise ExtensionError("pullback is not closed") from None

    # quotient q: (m,0) -> m, (0,m) -> m, (X,X) -> X  (kills (m,0) - (0,m))
    def q(pc):
        mv = vadd(pc[:m], pc[m : 2 * m])
        return tuple(mv) + tuple(pc[2 * m :])

    rep = Report("Baer sum")
    ideal = [vsub(pb[i], pb[m + i]) for i in range(m)]
    bad = None
    for v in ideal:
        for j in range(P_dim):
            if not is_zero(q(coords(br(pb[j], v)))):
                bad = {"issue": "I is not an ideal"}
        if not is_zero(q(coords(pm(v)))):
            bad = {"issue": "I is not closed under the p-map"}
    rng = random.Random(seed)
    for _ in range(samples):
        x = lincomb(F, 2 * D1, [(F.random(rng) if F.is_prime_field else F.random(rng, 0), b) for b in pb])
        i_el = lincomb(F, 2 * D1, [(F.random(rng) if F.is_prime_field else F.random(rng, 0), v) for v in ideal])
        if q(coords(pm(vadd(x, i_el)))) != q(coords(pm(x))):
            bad = {"issue": "p-map does not descend to the quotient"}
            break
    rep.add(Check("diagonal ideal is a restricted ideal", bad is None, samples, bad))
    if bad:
        raise ExtensionError("Baer sum quotient is ill-defined", bad)

    h = {}
    for i in range(N):
        for j in range(i + 1, N):
            val = q(coords(br(pb[2 * m + i], pb[2 * m + j])))
            h[(i, j)] = tuple(val[:m])
            if tuple(val[m:]) != tuple(L.lie.table[i][j]):
                raise ExtensionError("quotient bracket does not lie over L")
    g = []
    for j in range(N):
        val = q(coords(pm(pb[2 * m + j])))
        g.append(tuple(val[:m]))
    out = ExtensionData(L, M, h, g, f"({e1.label or '?'})+({e2.label or '?'})")
    # cochain law
    ok = all(out.h_of(i, j) == vadd(e1.h_of(i, j), e2.h_of(i, j)) for i in range(N) for j in range(N))
    ok = ok and all(out.g[j] == vadd(e1.g[j], e2.g[j]) for j in range(N))
    rep.add(Check("cochains add: (h + h', g + g')", ok, N))
    out.report = rep
    return out


def negate(e: ExtensionData) -> ExtensionData:
    return ExtensionData(e.L, e.M, {k: tuple(-c for c in v) for k, v in e.h.items()}, [tuple(-c for c in v) for v in e.g], f"-({e.label})")


# --- classification over F_p ---------------------------------------------------------------------


@dataclass
class Classification:
    representatives: list[ExtensionData]
    table: list[list[int]]
    candidates: int
    valid: int
    class_sizes: list[int]
    report: Report

    @property
    def order(self) -> int:
        return len(self.representatives)

    def group_name(self) -> str:
        return abelian_group_name(self.table)


def abelian_group_name(table: list[list[int]], identity: int = 0) -> str:
    """Invariant factors from element-order counts (finite abelian group)."""
    n = len(table)
    if n == 1:
        return "0"

    def mult(x, k):
        r = identity
        for _ in range(k):
            r = table[r][x]
        return r

    rem = n
    q = 2
    primes = []
    while rem > 1:
        if rem % q == 0:
            primes.append(q)
            while rem % q == 0:
                rem //= q
        q += 1
    parts = []
    for q in primes:
        e = 0
        while n % q ** (e + 1) == 0:
            e += 1
        # |{x : q^k x = 0}| = q^(sum_i min(k, a_i))
        counts = []
        for k in range(e + 1):
            counts.append(sum(1 for x in range(n) if mult(x, q**k) == identity))
        logs = [round(math.log(c, q)) for c in counts]
        # number of cyclic factors of order >= q^k is logs[k] - logs[k-1]
        ge = [logs[k] - logs[k - 1] for k in range(1, e + 1)] + [0]
        for k in range(1, e + 1):
            cnt = ge[k - 1] - ge[k]
            parts += [q**k] * cnt
    parts.sort()
    names = {}
    for c in parts:
        names[c] = names.get(c, 0) + 1
    out = []
    for c in sorted(names):
        out.append(f"Z/{c}" if names[c] == 1 else f"(Z/{c})^{names[c]}")
    return " x ".join(out)


def enumerate_candidates(L: LieRinehart, M: BeckModule, max_candidates: int = 4096):
    """All (h, g) with values in M-bar on the A-basis of L (k = F_p)."""
    F = L.field
    _require_prime_field(F)
    n = L.rank if L.rank is not None else L.dim
    use_a = L.rank is not None
    m = M.dim
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    slots = (len(pairs) + n) * m
    total = F.p**slots
    if total > max_candidates:
        raise ExtensionError(f"enumeration bound exceeded: {total} candidates > {max_candidates}")
    vecs = list(itertools.product(range(F.p), repeat=m))
    for h_vals in itertools.product(vecs, repeat=len(pairs)):
        for g_vals in itertools.product(vecs, repeat=n):
            h = {pr: tuple(F(c) for c in v) for pr, v in zip(pairs, h_vals)}
            g = [tuple(F(c) for c in v) for v in g_vals]
            label = "h=" + ",".join("".join(map(str, v)) for v in h_vals) + ";g=" + ",".join("".join(map(str, v)) for v in g_vals)
            if use_a:
                yield from_a_basis(L, M, h, g, label)
            else:
                yield ExtensionData(L, M, h, g, label)


def classify_ext(
    L: LieRinehart,
    M: BeckModule,
    max_dim: int = 6,
    max_candidates: int = 4096,
    samples: int = 10,
    seed: int = 0,
) -> Classification:
    F = L.field
    _require_prime_field(F)
    if L.dim + M.dim > max_dim:
        raise ExtensionError(f"size bound exceeded: dim(M) + dim(L) = {L.dim + M.dim} > {max_dim}")
    rep = Report("Ext_p classification", notes={"dim_L": L.dim, "dim_M": M.dim, "p": F.p})
    if M.dim == 0:
        split = split_extension(L, M)
        rep.add(Check("abelian group laws", True))
        return Classification([split], [[0]], 1, 1, [1], rep)
    reps: list[ExtensionData] = []
    sizes: list[int] = []
    candidates = valid = 0
    split = split_extension(L, M)
    if not is_valid(split, samples, seed):
        raise ExtensionError("the split extension is invalid: module data is inconsistent")
    reps.append(split)
    sizes.append(0)
    for cand in enumerate_candidates(L, M, max_candidates):
        candidates += 1
        if not is_valid(cand, samples, seed):
            continue
        valid += 1
        for idx, r in enumerate(reps):
            if equivalent(cand, r, verify=False) is not None:
                sizes[idx] += 1
                break
        else:
            reps.append(cand)
            sizes.append(1)

    def find(e):
        for idx, r in enumerate(reps):
            if equivalent(e, r, verify=False) is not None:
                return idx
        raise ExtensionError("Baer sum landed outside the enumerated classes", {"sum": e.label})

    n = len(reps)
    table = [[find(baer_sum(reps[i], reps[j])) for j in range(n)] for i in range(n)]
    for c in group_law_checks(table):
        rep.add(c)
    for r in reps:
        ext = build_extension(r, samples, seed)
        rep.add(Check(f"representative {r.label} passes the axioms", ext.report.passed, 1))
    rep.notes.update(candidates=candidates, valid=valid, classes=n)
    return Classification(reps, table, candidates, valid, sizes, rep)


def group_law_checks(table: list[list[int]], identity: int = 0) -> list[Check]:
    n = len(table)
    out = []
    ok = all(table[identity][x] == x and table[x][identity] == x for x in range(n))
    out.append(Check("split class is neutral", ok, n))
    bad = next(({"x": x, "y": y} for x in range(n) for y in range(n) if table[x][y] != table[y][x]), None)
    out.append(Check("Baer sum is commutative", bad is None, n * n, bad))
    bad = next(
        ({"x": x, "y": y, "z": z} for x in range(n) for y in range(n) for z in range(n) if table[table[x][y]][z] != table[x][table[y][z]]),
        None,
    )
    out.append(Check("Baer sum is associative", bad is None, n**3, bad))
    bad = next(({"x": x} for x in range(n) if identity not in table[x]), None)
    out.append(Check("every class has an inverse", bad is None, n, bad))
    return out
