"""Restricted Lie algebras over k given by structure constants.

Conventions: ``ad(y)`` is the map x -> [x, y], and the p-map of a general
element is obtained from the images of the basis vectors by peeling off one
term at a time with Jacobson's formula

    (x + y)^[p] = x^[p] + y^[p] + sum_i s_i(x, y),

where i * s_i(x, y) is the coefficient of lambda^(i-1) in ad(lambda x + y)^(p-1)(x),
together with (c x)^[p] = c^p x^[p].
"""

from __future__ import annotations

import itertools
import random
from typing import Callable, Sequence

from .commalg import AssocAlgebra, _random_scalar
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
)
from .report import Check, Report


class PMapCriterionError(ValueError):
    """ad(u_i)^p != ad(u_i^[p]) for some basis vector."""

    def __init__(self, index: int, difference: Matrix, name: str | None = None):
        label = name if name is not None else str(index)
        super().__init__(f"p-map criterion ad(u)^p = ad(u^[p]) fails at basis vector {label}")
        self.index = index
        self.difference = difference
        self.name = label


class RestrictedLie:
    """Lie algebra with basis ``names``; ``table[i][j]`` is [e_i, e_j].

    ``pimages[i]`` is e_i^[p] (or None for a plain Lie algebra).
    ``reference_pmap``, when given, is an independent way of computing the
    p-map (e.g. the p-th power in an associative algebra) used by the checker.
    """

    def __init__(
        self,
        field,
        table,
        pimages: Sequence[Sequence] | None = None,
        names: Sequence[str] | None = None,
        reference_pmap: Callable | None = None,
    ):
        self.field = field
        self.dim = len(table)
        self.table = tuple(tuple(tuple(field(c) for c in v) for v in row) for row in table)
        self.pimages = None if pimages is None else tuple(tuple(field(c) for c in v) for v in pimages)
        self.names = tuple(names) if names is not None else tuple(f"e{i}" for i in range(self.dim))
        self.reference_pmap = reference_pmap
        if any(len(r) != self.dim for r in self.table) or any(len(v) != self.dim for r in self.table for v in r):
            raise ValueError("structure constants do not match the dimension")
        if self.pimages is not None and (len(self.pimages) != self.dim or any(len(v) != self.dim for v in self.pimages)):
            raise ValueError("p-map images do not match the dimension")

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def is_restricted(self) -> bool:
        return self.pimages is not None

    def zero(self) -> tuple:
        return (self.field.zero,) * self.dim

    def basis_vector(self, i: int) -> tuple:
        return unit_vector(self.field, self.dim, i)

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        pairs = []
        ys = [(j, b) for j, b in enumerate(y) if b]
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.table[i]
            for j, b in ys:
                pairs.append((a * b, row[j]))
        return lincomb(self.field, self.dim, pairs)

    def ad(self, y: Sequence) -> Matrix:
        """Matrix of x -> [x, y]."""
        return Matrix.from_columns(self.field, [self.bracket(self.basis_vector(j), y) for j in range(self.dim)], self.dim)

    def random_element(self, rng: random.Random, density: float = 1.0) -> tuple:
        return tuple(
            _random_scalar(self.field, rng) if rng.random() < density else self.field.zero for _ in range(self.dim)
        )

    def format(self, v: Sequence) -> str:
        terms = []
        for name, c in zip(self.names, v):
            if not c:
                continue
            cs = str(c)
            if cs == "1":
                terms.append(name)
            else:
                terms.append(f"({cs})*{name}" if any(ch in cs for ch in "+-/") else f"{cs}*{name}")
        return "+".join(terms) or "0"

    def with_pmap(self, pimages, reference_pmap=None) -> "RestrictedLie":
        return RestrictedLie(self.field, self.table, pimages, self.names, reference_pmap)

    def forget_pmap(self) -> "RestrictedLie":
        return RestrictedLie(self.field, self.table, None, self.names)

    # -- p-map ----------------------------------------------------------------

    def p_map(self, v: Sequence, order: Sequence[int] | None = None) -> tuple:
        return p_map_eval(self, v, order)

    def __repr__(self):
        return f"RestrictedLie(dim={self.dim}, {self.field!r}, restricted={self.is_restricted})"


class LambdaPoly:
    """Polynomial in a formal parameter lambda with coefficients in L."""

    __slots__ = ("L", "coeffs")

    def __init__(self, L: RestrictedLie, coeffs: Sequence[Sequence]):
        self.L = L
        self.coeffs = list(coeffs)

    def __add__(self, other: "LambdaPoly") -> "LambdaPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        z = self.L.zero()
        return LambdaPoly(
            self.L,
            [vadd(self.coeffs[i] if i < len(self.coeffs) else z, other.coeffs[i] if i < len(other.coeffs) else z) for i in range(n)],
        )

    def bracket(self, other: "LambdaPoly") -> "LambdaPoly":
        L = self.L
        out = [L.zero() for _ in range(len(self.coeffs) + len(other.coeffs) - 1)]
        for i, a in enumerate(self.coeffs):
            if is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                if not is_zero(b):
                    out[i + j] = vadd(out[i + j], L.bracket(a, b))
        return LambdaPoly(L, out)

    def coefficient(self, k: int) -> tuple:
        return self.coeffs[k] if k < len(self.coeffs) else self.L.zero()


def s_coefficients(L: RestrictedLie, x: Sequence, y: Sequence) -> list[tuple]:
    """[s_1(x, y), ..., s_{p-1}(x, y)]."""
    p = L.p
    x, y = tuple(x), tuple(y)
    P = LambdaPoly(L, [x])
    line = LambdaPoly(L, [y, x])  # lambda * x + y
    for _ in range(p - 1):
        P = P.bracket(line)
    return [vscale(L.field.one / L.field(i), P.coefficient(i - 1)) for i in range(1, p)]


def p_map_eval(L: RestrictedLie, v: Sequence, order: Sequence[int] | None = None) -> tuple:
    """The p-map on an arbitrary element, peeling terms in ``order``."""
    if L.pimages is None:
        raise ValueError("Lie algebra carries no p-map")
    terms = [i for i, c in enumerate(v) if c]
    if order is not None:
        rank = {i: r for r, i in enumerate(order)}
        terms.sort(key=lambda i: rank.get(i, len(rank) + i))
    F, n = L.field, L.dim
    acc_vec = L.zero()
    acc_p = L.zero()
    for i in reversed(terms):
        c = v[i]
        x = vscale(c, L.basis_vector(i))
        xp = vscale(c.frobenius(), L.pimages[i])
        if is_zero(acc_vec):
            new_p = xp
        else:
            corr = s_coefficients(L, x, acc_vec)
            new_p = lincomb(F, n, [(F.one, xp), (F.one, acc_p)] + [(F.one, s) for s in corr])
        acc_p = new_p
        acc_vec = vadd(acc_vec, x)
    return acc_p


# --- checking ---------------------------------------------------------------------


def _fmt(L, v):
    return L.format(v)


def lie_axiom_checks(L: RestrictedLie) -> list[Check]:
    e = [L.basis_vector(i) for i in range(L.dim)]
    checks = []
    bad = None
    for i in range(L.dim):
        if not is_zero(L.table[i][i]):
            bad = {"x": L.names[i], "[x,x]": _fmt(L, L.table[i][i])}
            break
        for j in range(i):
            if vadd(L.table[i][j], L.table[j][i]) != L.zero():
                bad = {"x": L.names[i], "y": L.names[j], "[x,y]+[y,x]": _fmt(L, vadd(L.table[i][j], L.table[j][i]))}
                break
        if bad:
            break
    checks.append(Check("antisymmetry [x,x] = 0", bad is None, L.dim * L.dim, bad))
    bad = None
    for i, j, k in itertools.combinations(range(L.dim), 3):
        jac = vadd(
            vadd(L.bracket(L.table[i][j], e[k]), L.bracket(L.table[j][k], e[i])),
            L.bracket(L.table[k][i], e[j]),
        )
        if not is_zero(jac):
            bad = {"x": L.names[i], "y": L.names[j], "z": L.names[k], "jacobiator": _fmt(L, jac)}
            break
    n3 = L.dim * (L.dim - 1) * (L.dim - 2) // 6
    checks.append(Check("Jacobi identity", bad is None, n3, bad))
    return checks


def check_restricted(L: RestrictedLie, samples: int = 100, seed: int = 0, orders: int = 5) -> Report:
    """Verify antisymmetry, Jacobi, and (if a p-map is present) the restricted identities."""
    rng = random.Random(seed)
    rep = Report("restricted Lie algebra", notes={"dim": L.dim, "p": L.p})
    for c in lie_axiom_checks(L):
        rep.add(c)
    if L.pimages is None:
        rep.notes["p-map"] = "absent"
        return rep
    p = L.p
    # ad(y^[p]) = ad(y)^p on the basis
    bad = None
    for i in range(L.dim):
        lhs = L.ad(L.pimages[i])
        rhs = L.ad(L.basis_vector(i)) ** p
        if lhs != rhs:
            bad = {"y": L.names[i], "y^[p]": _fmt(L, L.pimages[i]), "ad(y^[p]) - ad(y)^p": (lhs - rhs).tolist()}
            break
    rep.add(Check("ad(y^[p]) = ad(y)^p", bad is None, L.dim, bad))

    bad = None
    for _ in range(samples):
        a = _random_scalar(L.field, rng)
        v = L.random_element(rng)
        lhs = L.p_map(vscale(a, v))
        rhs = vscale(a.frobenius(), L.p_map(v))
        if lhs != rhs:
            bad = {"alpha": str(a), "x": _fmt(L, v), "lhs": _fmt(L, lhs), "rhs": _fmt(L, rhs)}
            break
    rep.add(Check("(alpha x)^[p] = alpha^p x^[p]", bad is None, samples, bad))

    bad = None
    for _ in range(samples):
        x, y = L.random_element(rng), L.random_element(rng)
        lhs = L.p_map(vadd(x, y))
        rhs = vadd(vadd(L.p_map(x), L.p_map(y)), lincomb(L.field, L.dim, [(L.field.one, s) for s in s_coefficients(L, x, y)]))
        if lhs != rhs:
            bad = {"x": _fmt(L, x), "y": _fmt(L, y), "lhs": _fmt(L, lhs), "rhs": _fmt(L, rhs)}
            break
    rep.add(Check("(x+y)^[p] = x^[p] + y^[p] + sum s_i(x,y)", bad is None, samples, bad))

    bad = None
    for _ in range(samples):
        v = L.random_element(rng)
        base = L.p_map(v)
        for _ in range(orders):
            order = list(range(L.dim))
            rng.shuffle(order)
            other = L.p_map(v, order)
            if other != base:
                bad = {"x": _fmt(L, v), "order": order, "value": _fmt(L, other), "expected": _fmt(L, base)}
                break
        if bad:
            break
    rep.add(Check("p-map independent of peeling order", bad is None, samples * orders, bad))

    if L.reference_pmap is not None:
        bad = None
        for _ in range(samples):
            v = L.random_element(rng)
            got, ref = L.p_map(v), tuple(L.reference_pmap(v))
            if got != ref:
                bad = {"x": _fmt(L, v), "p_map": _fmt(L, got), "reference": _fmt(L, ref)}
                break
        rep.add(Check("p-map agrees with reference p-th power", bad is None, samples, bad))
    return rep


# --- constructions --------------------------------------------------------------


def restricted_from_associative(B: AssocAlgebra) -> RestrictedLie:
    """B with [x,y] = xy - yx and x^[p] = x^p."""
    bad = B.axiom_violation()
    if bad:
        raise ValueError(f"algebra is not associative: {bad}")
    e = [B.basis_vector(i) for i in range(B.dim)]
    table = [[B.commutator(e[i], e[j]) for j in range(B.dim)] for i in range(B.dim)]
    pimages = [B.power(e[i], B.p) for i in range(B.dim)]
    return RestrictedLie(B.field, table, pimages, B.names, reference_pmap=lambda v: B.power(v, B.p))


def linear_lie_algebra(field, mats: Sequence[Matrix], names: Sequence[str] | None = None, restricted: bool = True) -> RestrictedLie:
    """Lie algebra spanned by independent matrices closed under commutators
    (and p-th powers when ``restricted``)."""
    flats = [m.flat() for m in mats]
    if rank_of_vectors(field, flats) != len(mats) if mats else False:
        raise ValueError("matrices are linearly dependent")

    def coords(M: Matrix) -> tuple:
        try:
            return coordinates(field, flats, M.flat())
        except InconsistentSystem:
            raise ValueError("span is not closed under the operation") from None

    table = [[coords(a @ b - b @ a) for b in mats] for a in mats]
    pimages = None
    ref = None
    if restricted:
        p = field.p
        pimages = [coords(m**p) for m in mats]

        def _ref(v):
            M = Matrix.zeros(field, mats[0].rows, mats[0].cols)
            for c, m in zip(v, mats):
                if c:
                    M = M + m.scale(c)
            return coords(M**p)

        ref = _ref

    return RestrictedLie(field, table, pimages, names, reference_pmap=ref)


def extend_p_map_from_basis(L: RestrictedLie, images: Sequence[Sequence]) -> RestrictedLie:
    """Restricted structure with u_i^[p] = images[i], if ad(u_i)^p = ad(images[i]) for all i."""
    bad = [c for c in lie_axiom_checks(L) if not c.passed]
    if bad:
        raise ValueError(f"not a Lie algebra: {bad[0].identity} fails ({bad[0].witness})")
    images = [tuple(L.field(c) for c in v) for v in images]
    if len(images) != L.dim:
        raise ValueError("one image per basis vector is required")
    for i, img in enumerate(images):
        diff = L.ad(L.basis_vector(i)) ** L.p - L.ad(img)
        if not diff.is_zero():
            raise PMapCriterionError(i, diff, L.names[i])
    return L.with_pmap(images)


def abelian(field, n: int, pimages=None, names=None) -> RestrictedLie:
    z = (field.zero,) * n
    table = [[z] * n for _ in range(n)]
    if pimages is None:
        pimages = [z] * n
    return RestrictedLie(field, table, pimages, names)


def heisenberg(field, pimages=None) -> RestrictedLie:
    """Basis x, y, z with [x, y] = z central; zero p-map by default."""
    z0 = (field.zero,) * 3
    zv = unit_vector(field, 3, 2)
    table = [[z0] * 3 for _ in range(3)]
    table[0][1] = zv
    table[1][0] = vscale(-field.one, zv)
    return RestrictedLie(field, table, pimages if pimages is not None else [z0] * 3, ["x", "y", "z"])


# --- free restricted Lie algebras --------------------------------------------------


def lyndon_words(m: int, n: int) -> list[tuple]:
    """Lyndon words over range(m) of length 1..n (Duval's algorithm)."""
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        k = len(w)
        while len(w) < n:
            w.append(w[len(w) - k])
        while w and w[-1] == m - 1:
            w.pop()
    return sorted(out, key=lambda u: (len(u), u))


def _standard_split(w: tuple, lyndon: set) -> tuple[tuple, tuple]:
    for i in range(1, len(w)):
        if w[i:] in lyndon:
            return w[:i], w[i:]
    raise AssertionError("not a Lyndon word")


def _nc_mul(a: dict, b: dict, p: int, N: int) -> dict:
    out: dict = {}
    for u, x in a.items():
        for v, y in b.items():
            if len(u) + len(v) > N:
                continue
            w = u + v
            c = (out.get(w, 0) + x * y) % p
            if c:
                out[w] = c
            else:
                out.pop(w, None)
    return out


def _nc_sub(a: dict, b: dict, p: int) -> dict:
    out = dict(a)
    for w, y in b.items():
        c = (out.get(w, 0) - y) % p
        if c:
            out[w] = c
        else:
            out.pop(w, None)
    return out


def free_restricted_lie(field, generators: int, degree_bound: int, letters: str = "xyzuvw") -> RestrictedLie:
    """Free restricted Lie algebra on ``generators`` letters modulo degree > ``degree_bound``.

    Basis: Lyndon bracketings w and their p-power towers w^[p^e] with
    p^e * len(w) <= degree_bound.  Elements are realised inside the truncated
    tensor algebra, where the p-map is the p-th power; products are rewritten
    into the basis degree by degree.
    """
    p, N, m = field.p, degree_bound, generators
    if m < 1 or N < 1:
        raise ValueError("need at least one generator and degree bound >= 1")
    alphabet = letters if m <= len(letters) else None
    letter = (lambda i: alphabet[i]) if alphabet else (lambda i: f"x{i + 1}")
    words = lyndon_words(m, N)
    lyn = set(words)
    poly: dict[tuple, dict] = {}
    label: dict[tuple, str] = {}
    for w in words:
        if len(w) == 1:
            poly[w] = {w: 1}
            label[w] = letter(w[0])
        else:
            u, v = _standard_split(w, lyn)
            poly[w] = _nc_sub(_nc_mul(poly[u], poly[v], p, N), _nc_mul(poly[v], poly[u], p, N), p)
            label[w] = f"[{label[u]},{label[v]}]"
    basis = []  # (degree, name, polynomial)
    for w in words:
        e, P = 0, poly[w]
        while len(w) * p**e <= N:
            name = label[w] if e == 0 else f"{label[w]}^[{p ** e}]"
            basis.append((len(w) * p**e, name, P))
            Q = {(): 1}
            for _ in range(p):
                Q = _nc_mul(Q, P, p, N)
            P, e = Q, e + 1
    basis.sort(key=lambda b: b[0])
    dim = len(basis)
    by_degree: dict[int, list[int]] = {}
    for idx, (d, _, _) in enumerate(basis):
        by_degree.setdefault(d, []).append(idx)
    word_index = {d: sorted({w for i in idxs for w in basis[i][2]}) for d, idxs in by_degree.items()}

    def to_vec(d, P):
        ws = word_index[d]
        return tuple(field(P.get(w, 0)) for w in ws)

    deg_vecs = {d: [to_vec(d, basis[i][2]) for i in idxs] for d, idxs in by_degree.items()}
    for d, vecs in deg_vecs.items():
        if rank_of_vectors(field, vecs) != len(vecs):
            raise AssertionError(f"basis polynomials of degree {d} are dependent")

    def express(P: dict) -> tuple:
        out = [field.zero] * dim
        parts: dict[int, dict] = {}
        for w, c in P.items():
            parts.setdefault(len(w), {})[w] = c
        for d, Pd in parts.items():
            if d > N:
                continue
            if d not in by_degree or any(w not in set(word_index[d]) for w in Pd):
                raise AssertionError(f"element of degree {d} outside the restricted Lie span")
            x = coordinates(field, deg_vecs[d], to_vec(d, Pd))
            for c, i in zip(x, by_degree[d]):
                out[i] = c
        return tuple(out)

    table = [[field.zero] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            Pi, Pj = basis[i][2], basis[j][2]
            table[i][j] = express(_nc_sub(_nc_mul(Pi, Pj, p, N), _nc_mul(Pj, Pi, p, N), p))
    pimages = []
    for i in range(dim):
        Q = {(): 1}
        for _ in range(p):
            Q = _nc_mul(Q, basis[i][2], p, N)
        pimages.append(express(Q))
    L = RestrictedLie(field, table, pimages, [b[1] for b in basis])
    L.degrees = tuple(b[0] for b in basis)
    return L
