"""Enveloping algebras U(A,L) and U_p(A,L) through a normal-form rewriter.

L must be free over A with A-basis u_1 < ... < u_n.  A normal monomial is
a * u_1^k_1 ... u_n^k_n with a in A; in restricted mode every k_i < p, in
unrestricted mode the total degree is capped by ``degree_bound``.

Words are tuples of tokens:
    ("a", vec)  an element of A (coordinate tuple)
    ("u", i)    the generator u_i
    ("z", i)    u_i^p - u_i^[p]

Rewrite rules (each strictly lowers total degree, inversions, or the
position of the leftmost A-token that is not in front):
    merge   a . b        -> ab
    move    u_i . a      -> a . u_i + u_i(a)
    order   u_j . u_i    -> u_i . u_j + [u_j, u_i]        (j > i)
    power   u_i^p        -> u_i^[p]                        (restricted only)
    expand  z_i          -> u_i^p - u_i^[p]
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .commalg import AssocAlgebra
from .linalg import Matrix, is_zero, lincomb, rank_of_vectors, vadd, vscale
from .lrin import LieRinehart
from .report import Check, Report

STRATEGIES = ("leftmost", "rightmost", "random", "order-first", "power-first")


class RewriteError(ValueError):
    pass


class DegreeBoundExceeded(RewriteError):
    pass


class UniversalPropertyError(ValueError):
    def __init__(self, hypothesis: str, witness: dict | None = None):
        super().__init__(f"{hypothesis} hypothesis failed" + (f": {witness}" if witness else ""))
        self.hypothesis = hypothesis
        self.witness = witness


@dataclass(frozen=True)
class Redex:
    pos: int
    rule: str
    length: int


class PBWElement:
    """Finite sum of a_K u^K with nonzero A-coefficients."""

    __slots__ = ("U", "terms")

    def __init__(self, U: "Enveloping", terms: dict):
        self.U = U
        self.terms = {k: v for k, v in terms.items() if not is_zero(v)}

    def __add__(self, other: "PBWElement") -> "PBWElement":
        self.U._same(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = vadd(out[k], v) if k in out else v
        return PBWElement(self.U, out)

    def __neg__(self):
        return PBWElement(self.U, {k: vscale(-self.U.field.one, v) for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other: "PBWElement") -> "PBWElement":
        return self.U.multiply(self, other)

    def scale(self, c) -> "PBWElement":
        return PBWElement(self.U, {k: vscale(c, v) for k, v in self.terms.items()})

    def __eq__(self, other):
        if not isinstance(other, PBWElement):
            return NotImplemented
        return self.U is other.U and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(k) for k in self.terms), default=-1)

    def leading(self) -> "PBWElement":
        d = self.degree()
        return PBWElement(self.U, {k: v for k, v in self.terms.items() if sum(k) == d})

    def __str__(self):
        return self.U.format(self)

    __repr__ = __str__


class Enveloping:
    """U(A,L) (``restricted=False``, degree-capped) or U_p(A,L)."""

    def __init__(self, X: LieRinehart, restricted: bool = True, degree_bound: int | None = None):
        if X.rank is None:
            raise RewriteError("enveloping algebras need L free over A")
        if restricted and not X.is_restricted:
            raise RewriteError("U_p needs a p-map on L")
        self.X = X
        self.A = X.A
        self.field = X.field
        self.p = X.p
        self.n = X.rank
        self.restricted = restricted
        self.degree_bound = None if restricted else (degree_bound if degree_bound is not None else 2 * self.p)
        dA = self.A.dim
        self._dA = dA
        self._zeroA = (self.field.zero,) * dA
        self._bracket = {}
        for i in range(self.n):
            for j in range(self.n):
                self._bracket[(j, i)] = X.a_coords(X.lie.table[j * dA][i * dA])
        self._anchor = [X.anchor[i * dA] for i in range(self.n)]
        self._pimage = [X.a_coords(X.lie.pimages[i * dA]) for i in range(self.n)] if X.is_restricted else None
        self.names = X.a_basis_names()
        self._memo: dict = {}

    # -- bookkeeping --------------------------------------------------------------

    def _same(self, other):
        if not isinstance(other, PBWElement) or other.U is not self:
            raise RewriteError("mode or algebra mismatch")

    def monomials(self, max_degree: int | None = None) -> list[tuple]:
        """Normal monomials, ordered by degree then lexicographically."""
        if self.restricted:
            mons = list(itertools.product(range(self.p), repeat=self.n))
        else:
            D = self.degree_bound if max_degree is None else max_degree
            mons = [k for k in itertools.product(range(D + 1), repeat=self.n) if sum(k) <= D]
        return sorted(mons, key=lambda k: (sum(k), tuple(-x for x in k)))

    def one(self) -> PBWElement:
        return PBWElement(self, {(0,) * self.n: self.A.unit})

    def zero(self) -> PBWElement:
        return PBWElement(self, {})

    def from_A(self, a: Sequence) -> PBWElement:
        return PBWElement(self, {(0,) * self.n: tuple(a)})

    def from_L(self, Xv: Sequence) -> PBWElement:
        """iota_L on a k-vector of L."""
        terms = {}
        for i, a in enumerate(self.X.a_coords(Xv)):
            if not is_zero(a):
                terms[self._unit_exp(i)] = tuple(a)
        return PBWElement(self, terms)

    def generator(self, i: int) -> PBWElement:
        return PBWElement(self, {self._unit_exp(i): self.A.unit})

    def monomial(self, exps: Sequence[int], a: Sequence | None = None) -> PBWElement:
        return PBWElement(self, {tuple(exps): tuple(a) if a is not None else self.A.unit})

    def _unit_exp(self, i):
        e = [0] * self.n
        e[i] = 1
        return tuple(e)

    def format(self, x: PBWElement) -> str:
        parts = []
        for k in sorted(x.terms, key=lambda k: (sum(k), tuple(-e for e in k))):
            coef = self.A.format(x.terms[k])
            mono = "*".join(self.names[i] if e == 1 else f"{self.names[i]}^{e}" for i, e in enumerate(k) if e)
            if not mono:
                parts.append(coef)
            elif coef == "1":
                parts.append(mono)
            else:
                parts.append(f"({coef})*{mono}")
        return " + ".join(parts) or "0"

    def to_json(self, x: PBWElement) -> dict:
        out = {}
        for k in sorted(x.terms):
            mono = "*".join(self.names[i] if e == 1 else f"{self.names[i]}^{e}" for i, e in enumerate(k) if e) or "1"
            out[mono] = self.A.format(x.terms[k])
        return out

    # -- words ------------------------------------------------------------------------

    def word(self, element: PBWElement) -> list[tuple]:
        """Words whose sum is ``element``."""
        out = []
        for k, a in element.terms.items():
            out.append((("a", a),) + tuple(("u", i) for i, e in enumerate(k) for _ in range(e)))
        return out

    def parse_word(self, names: Sequence[str]) -> tuple:
        """Generator names: A-basis names, u-names, or z_<u-name>."""
        toks = []
        for nm in names:
            if nm in self.names:
                toks.append(("u", self.names.index(nm)))
            elif nm.startswith("z_") and nm[2:] in self.names:
                toks.append(("z", self.names.index(nm[2:])))
            elif nm in self.A.names:
                toks.append(("a", self.A.basis_vector(self.A.names.index(nm))))
            else:
                raise RewriteError(f"unknown generator {nm!r}")
        return tuple(toks)

    def _check_degree(self, word: tuple):
        if self.degree_bound is None:
            return
        deg = sum(1 if t[0] == "u" else self.p if t[0] == "z" else 0 for t in word)
        if deg > self.degree_bound:
            raise DegreeBoundExceeded(f"word of degree {deg} exceeds bound {self.degree_bound}")

    def redexes(self, word: tuple) -> list[Redex]:
        out = []
        p = self.p
        for j, t in enumerate(word):
            if t[0] == "z":
                out.append(Redex(j, "expand", 1))
            if j + 1 < len(word):
                s = word[j + 1]
                if t[0] == "a" and s[0] == "a":
                    out.append(Redex(j, "merge", 2))
                elif t[0] == "u" and s[0] == "a":
                    out.append(Redex(j, "move", 2))
                elif t[0] == "u" and s[0] == "u" and t[1] > s[1]:
                    out.append(Redex(j, "order", 2))
            if self.restricted and t[0] == "u" and j + p <= len(word):
                if all(word[j + r] == t for r in range(p)):
                    out.append(Redex(j, "power", p))
        return out

    def apply(self, word: tuple, r: Redex) -> list[tuple]:
        """One rewrite step; returns the resulting words (zero words dropped)."""
        A = self.A
        pre, post = word[: r.pos], word[r.pos + r.length :]
        t = word[r.pos]
        if r.rule == "merge":
            new = [pre + (("a", A.mul(t[1], word[r.pos + 1][1])),) + post]
        elif r.rule == "move":
            a = word[r.pos + 1][1]
            new = [pre + (("a", a), t) + post, pre + (("a", self._anchor[t[1]] @ a),) + post]
        elif r.rule == "order":
            j, i = t[1], word[r.pos + 1][1]
            new = [pre + (("u", i), ("u", j)) + post]
            new += [pre + (("a", c), ("u", m)) + post for m, c in enumerate(self._bracket[(j, i)])]
        elif r.rule == "power":
            new = [pre + (("a", c), ("u", m)) + post for m, c in enumerate(self._pimage[t[1]])]
        elif r.rule == "expand":
            i = t[1]
            if self._pimage is None:
                raise RewriteError("z-generators need a p-map on L")
            new = [pre + (("u", i),) * self.p + post]
            neg = -self.field.one
            new += [pre + (("a", vscale(neg, c)), ("u", m)) + post for m, c in enumerate(self._pimage[i])]
        else:
            raise RewriteError(r.rule)
        return [w for w in new if not any(tok[0] == "a" and is_zero(tok[1]) for tok in w)]

    def _normal_term(self, word: tuple):
        coef = self.A.unit
        exps = [0] * self.n
        for t in word:
            if t[0] == "a":
                coef = self.A.mul(coef, t[1])
            else:
                exps[t[1]] += 1
        return tuple(exps), coef

    def _choose(self, reds: list[Redex], strategy: str, rng: random.Random | None) -> Redex:
        if strategy == "leftmost":
            return reds[0]
        if strategy == "rightmost":
            return reds[-1]
        if strategy == "random":
            return (rng or random.Random(0)).choice(reds)
        if strategy == "order-first":
            pref = [r for r in reds if r.rule == "order"]
            return pref[0] if pref else reds[0]
        if strategy == "power-first":
            pref = [r for r in reds if r.rule in ("power", "expand")]
            return pref[-1] if pref else reds[-1]
        raise RewriteError(f"unknown strategy {strategy!r}")

    def normal_form(self, words: tuple | list[tuple], strategy: str = "leftmost", rng: random.Random | None = None) -> PBWElement:
        """Normal form of a word (tuple) or a sum of words (list) under a strategy."""
        if isinstance(words, tuple):
            words = [words]
        words = list(words)
        for w in words:
            self._check_degree(w)
        if strategy == "leftmost":
            out = self.zero()
            for w in words:
                out = out + self._nf_memo(w)
            return out
        acc: dict = {}
        stack = list(words)
        while stack:
            w = stack.pop()
            reds = self.redexes(w)
            if not reds:
                k, c = self._normal_term(w)
                acc[k] = vadd(acc[k], c) if k in acc else c
                continue
            stack.extend(self.apply(w, self._choose(reds, strategy, rng)))
        return PBWElement(self, acc)

    def _nf_memo(self, w: tuple) -> PBWElement:
        hit = self._memo.get(w)
        if hit is not None:
            return hit
        reds = self.redexes(w)
        if not reds:
            k, c = self._normal_term(w)
            res = PBWElement(self, {k: c})
        else:
            res = self.zero()
            for w2 in self.apply(w, reds[0]):
                res = res + self._nf_memo(w2)
        self._memo[w] = res
        return res

    def multiply(self, x: PBWElement, y: PBWElement) -> PBWElement:
        self._same(x)
        self._same(y)
        out = self.zero()
        for wx in self.word(x):
            for wy in self.word(y):
                out = out + self.normal_form(wx + wy)
        return out

    def power(self, x: PBWElement, n: int) -> PBWElement:
        out = self.one()
        for _ in range(n):
            out = self.multiply(out, x)
        return out

    def commutator(self, x: PBWElement, y: PBWElement) -> PBWElement:
        return self.multiply(x, y) - self.multiply(y, x)

    def random_element(self, rng: random.Random, terms: int = 3, max_degree: int | None = None) -> PBWElement:
        mons = self.monomials(max_degree)
        out = self.zero()
        for _ in range(terms):
            out = out + self.monomial(rng.choice(mons), self.A.random_element(rng))
        return out

    def random_word(self, rng: random.Random, length: int) -> tuple:
        toks = []
        budget = self.degree_bound
        for _ in range(length):
            kind = rng.choice(("a", "u", "u", "z") if self.X.is_restricted else ("a", "u", "u"))
            if kind == "z" and budget is not None and budget < self.p:
                kind = "u"
            if kind in ("u", "z") and budget is not None:
                cost = 1 if kind == "u" else self.p
                if budget < cost:
                    kind = "a"
                else:
                    budget -= cost
            if kind == "a":
                toks.append(("a", self.A.random_element(rng)))
            else:
                toks.append((kind, rng.randrange(self.n)))
        return tuple(toks)

    # -- coordinates -------------------------------------------------------------------

    def vector(self, x: PBWElement, mons: Sequence[tuple] | None = None) -> tuple:
        """k-coordinates on the basis e_a u^K (monomial-major)."""
        mons = self.monomials() if mons is None else mons
        index = {k: i for i, k in enumerate(mons)}
        out = [self.field.zero] * (len(mons) * self._dA)
        for k, a in x.terms.items():
            if k not in index:
                raise RewriteError(f"monomial {k} outside the coordinate range")
            base = index[k] * self._dA
            out[base : base + self._dA] = a
        return tuple(out)

    def as_algebra(self) -> AssocAlgebra:
        """U_p(A,L) as a finite-dimensional associative k-algebra."""
        if not self.restricted:
            raise RewriteError("only U_p is finite-dimensional")
        mons = self.monomials()
        basis = [self.monomial(k, self.A.basis_vector(a)) for k in mons for a in range(self._dA)]
        names = []
        for k in mons:
            mono = "*".join(self.names[i] if e == 1 else f"{self.names[i]}^{e}" for i, e in enumerate(k) if e)
            for an in self.A.names:
                names.append(an if not mono else mono if an == "1" else f"{an}*{mono}")
        table = [[self.vector(self.multiply(b1, b2), mons) for b2 in basis] for b1 in basis]
        unit = self.vector(self.one(), mons)
        B = AssocAlgebra(self.field, names, table, unit, check=False)
        B.pbw = self
        return B


def _rand_strategy_rng(seed: int, k: int) -> random.Random:
    return random.Random(seed * 1000003 + k)


# --- checks ---------------------------------------------------------------------------


def confluence_check(U: Enveloping, words: int = 100, seed: int = 0, length: int | None = None) -> Check:
    """Every strategy gives the same normal form on random words."""
    rng = random.Random(seed)
    length = length or (U.p + 2)
    for w_i in range(words):
        w = U.random_word(rng, rng.randint(1, length))
        ref = None
        for s_i, strat in enumerate(STRATEGIES):
            nf = U.normal_form(w, strategy=strat, rng=_rand_strategy_rng(seed, w_i * 7 + s_i))
            if ref is None:
                ref = nf
            elif nf != ref:
                return Check(
                    "confluence across rewrite strategies",
                    False,
                    w_i + 1,
                    {"word": _word_str(U, w), "strategy": strat, "got": str(nf), "expected": str(ref)},
                )
    return Check("confluence across rewrite strategies", True, words * len(STRATEGIES))


def _word_str(U: Enveloping, w: tuple) -> str:
    out = []
    for t in w:
        if t[0] == "a":
            out.append(f"({U.A.format(t[1])})")
        elif t[0] == "u":
            out.append(U.names[t[1]])
        else:
            out.append(f"z_{U.names[t[1]]}")
    return " ".join(out)


def ambiguities(U: Enveloping) -> list[tuple]:
    """Overlap words of the rewrite system (all critical pairs)."""
    A, n, p = U.A, U.n, U.p
    es = [("a", A.basis_vector(a)) for a in range(A.dim)]
    u = [("u", i) for i in range(n)]
    out = []
    for k in range(n):
        for j in range(k):
            for i in range(j):
                out.append((u[k], u[j], u[i]))
    for j in range(n):
        for i in range(j):
            for a in es:
                out.append((u[j], u[i], a))
    for i in range(n):
        for a in es:
            for b in es:
                out.append((u[i], a, b))
    if U.restricted:
        for i in range(n):
            out.append((u[i],) * (p + 1))
            for a in es:
                out.append((u[i],) * p + (a,))
            for j in range(n):
                if j > i:
                    out.append((u[j],) + (u[i],) * p)
                    out.append((u[j],) * p + (u[i],))
    return out


def overlap_check(U: Enveloping) -> Check:
    """Diamond-lemma ambiguities resolve: every first step leads to one normal form."""
    amb = ambiguities(U)
    for w in amb:
        results = []
        for r in U.redexes(w):
            nf = U.zero()
            for w2 in U.apply(w, r):
                nf = nf + U.normal_form(w2)
            results.append((r, nf))
        if any(nf != results[0][1] for _, nf in results):
            bad = {"word": _word_str(U, w), "results": {f"{r.rule}@{r.pos}": str(nf) for r, nf in results}}
            return Check("overlap ambiguities resolve", False, len(amb), bad)
    return Check("overlap ambiguities resolve", True, len(amb))


def associativity_check(U: Enveloping, samples: int = 20, seed: int = 0) -> Check:
    rng = random.Random(seed)
    maxd = None if U.restricted else max(U.degree_bound // 3, 1)
    for s in range(samples):
        x, y, z = (U.random_element(rng, 2, maxd) for _ in range(3))
        l = U.multiply(U.multiply(x, y), z)
        r = U.multiply(x, U.multiply(y, z))
        if l != r:
            return Check("associativity of multiply", False, s + 1, {"x": str(x), "y": str(y), "z": str(z)})
    return Check("associativity of multiply", True, samples)


def pbw_rank_check(X: LieRinehart, samples: int = 20, seed: int = 0) -> Report:
    """Restricted PBW: p^n standard monomials form an A-basis of U_p(A,L)."""
    U = Enveloping(X, restricted=True)
    rep = Report("restricted PBW basis", notes={"n": U.n, "p": U.p})
    mons = U.monomials()
    rep.notes["rank"] = len(mons)
    rep.notes["k_dimension"] = len(mons) * X.A.dim
    rep.add(Check("number of restricted monomials is p^n", len(mons) == U.p**U.n, 1, None if len(mons) == U.p**U.n else {"count": len(mons)}))
    rep.add(overlap_check(U))
    rep.add(associativity_check(U, samples, seed))
    rep.add(confluence_check(U, words=samples, seed=seed))
    return rep


def rinehart_basis_check(X: LieRinehart, degree_bound: int | None = None) -> Report:
    """Unrestricted PBW up to degree D, through the z-adic basis e_a z^h u^k (k_i < p)."""
    U = Enveloping(X, restricted=False, degree_bound=degree_bound)
    D, p, n, dA = U.degree_bound, U.p, U.n, X.A.dim
    rep = Report("Rinehart basis of U(A,L)", notes={"degree_bound": D, "n": n, "p": p})
    std = U.monomials()
    gens = []
    for h in itertools.product(range(D // p + 1), repeat=n):
        for k in itertools.product(range(p), repeat=n):
            if p * sum(h) + sum(k) <= D:
                gens.append((h, k))
    gens.sort(key=lambda hk: (p * sum(hk[0]) + sum(hk[1]), hk))
    vectors, bad = [], None
    for h, k in gens:
        word = tuple(("z", i) for i in range(n) for _ in range(h[i])) + tuple(("u", i) for i in range(n) for _ in range(k[i]))
        for a in range(dA):
            ea = X.A.basis_vector(a)
            nf = U.normal_form((("a", ea),) + word)
            vectors.append(U.vector(nf, std))
            top = tuple(p * hi + ki for hi, ki in zip(h, k))
            expected = {top: ea}
            lead = nf.leading()
            if bad is None and (lead.terms != expected or nf.degree() != sum(top)):
                bad = {"h": list(h), "k": list(k), "a": X.A.names[a], "normal_form": str(nf)}
    rk = rank_of_vectors(X.field, vectors)
    rep.notes["standard_monomials"] = len(std)
    rep.notes["z_basis_size"] = len(vectors)
    rep.add(Check("z-monomials times restricted monomials are k-independent", rk == len(vectors), len(vectors), None if rk == len(vectors) else {"rank": rk}))
    rep.add(Check("they span all standard monomials (rank = dim A x count)", rk == dA * len(std), 1, None if rk == dA * len(std) else {"rank": rk, "expected": dA * len(std)}))
    rep.add(Check("leading term of a z^h u^k is a u^(ph+k)", bad is None, len(vectors), bad))
    bad = None
    count = 0
    for K in std:
        for L_ in std:
            if sum(K) + sum(L_) > D:
                continue
            count += 1
            prod = U.multiply(U.monomial(K), U.monomial(L_))
            top = tuple(a + b for a, b in zip(K, L_))
            if prod.leading().terms != {top: X.A.unit} or prod.degree() != sum(top):
                bad = {"left": list(K), "right": list(L_), "product": str(prod)}
                break
        if bad:
            break
    rep.add(Check("u^K u^L = u^(K+L) modulo lower filtration degree", bad is None, count, bad))
    return rep


def hochschild_module_check(X: LieRinehart, samples: int = 20, seed: int = 0) -> Check:
    """(aX)^(p-1)(ab) = a^p X^(p-1)(b) + (aX)^(p-1)(a) b, evaluated through commutators in U_p."""
    U = Enveloping(X, restricted=True)
    A, p = X.A, X.p
    rng = random.Random(seed)
    for s in range(samples):
        a, b = A.random_element(rng), A.random_element(rng)
        Y = X.random_element(rng)
        aY = U.from_L(X.act(a, Y))
        Yu = U.from_L(Y)

        def ad_pow(z, target, k):
            for _ in range(k):
                target = U.commutator(z, target)
            return target

        lhs = ad_pow(aY, U.from_A(A.mul(a, b)), p - 1)
        rhs = U.from_A(A.frobenius(a)) * ad_pow(Yu, U.from_A(b), p - 1)
        rhs = rhs + ad_pow(aY, U.from_A(a), p - 1) * U.from_A(b)
        direct = (X.anchor_of(X.act(a, Y)) ** (p - 1)) @ A.mul(a, b)
        if lhs != rhs or lhs != U.from_A(direct):
            return Check("module form of Hochschild's relation inside U_p", False, s + 1, {"a": A.format(a), "b": A.format(b), "X": X.format(Y)})
    return Check("module form of Hochschild's relation inside U_p", True, samples)


def injectivity_check(X: LieRinehart) -> Check:
    """iota_A and iota_L have independent images."""
    U = Enveloping(X, restricted=True)
    mons = U.monomials()
    vecs = [U.vector(U.normal_form((("a", X.A.basis_vector(a)),)), mons) for a in range(X.A.dim)]
    for j in range(X.dim):
        vecs.append(U.vector(U.from_L(X.basis_vector(j)), mons))
    rk = rank_of_vectors(X.field, vecs)
    ok = rk == X.A.dim + X.dim
    return Check("iota_A and iota_L are injective with independent images", ok, len(vecs), None if ok else {"rank": rk, "expected": X.A.dim + X.dim})


def ideal_membership_check(X: LieRinehart, samples: int = 20, seed: int = 0) -> Check:
    """X^p - X^[p] lies in the ideal generated by the z_i (degree-capped U(A,L))."""
    U = Enveloping(X, restricted=False, degree_bound=X.p)
    p, n, dA = U.p, U.n, X.A.dim
    std = U.monomials()
    basis, labels = [], []
    for h in itertools.product(range(2), repeat=n):
        for k in itertools.product(range(p), repeat=n):
            if p * sum(h) + sum(k) <= p:
                word = tuple(("z", i) for i in range(n) if h[i]) + tuple(("u", i) for i in range(n) for _ in range(k[i]))
                for a in range(dA):
                    basis.append(U.vector(U.normal_form((("a", X.A.basis_vector(a)),) + word), std))
                    labels.append(any(h))
    M = Matrix.from_columns(X.field, basis, len(basis[0]))
    from .linalg import solve_linear

    rng = random.Random(seed)
    for s in range(samples):
        Y = X.random_element(rng)
        Yu = U.from_L(Y)
        diff = U.power(Yu, p) - U.from_L(X.p_map(Y))
        coords, _ = solve_linear(M, U.vector(diff, std))
        if any(c for c, in_ideal in zip(coords, labels) if not in_ideal):
            return Check("X^p - X^[p] lies in the ideal generated by u_i^p - u_i^[p]", False, s + 1, {"X": X.format(Y), "element": str(diff)})
    return Check("X^p - X^[p] lies in the ideal generated by u_i^p - u_i^[p]", True, samples)


# --- universal property --------------------------------------------------------------------


@dataclass
class UHom:
    """Phi_p : U_p(A,L) -> B as a k-matrix on the PBW basis."""

    source: AssocAlgebra
    target: AssocAlgebra
    matrix: Matrix
    report: Report

    @property
    def rank(self) -> int:
        return self.matrix.rank()

    def __call__(self, v):
        return self.matrix @ v


def universal_property_check(
    X: LieRinehart,
    B: AssocAlgebra,
    phi_A: Sequence[Sequence],
    phi_L: Sequence[Sequence],
    samples: int = 50,
    seed: int = 0,
) -> UHom:
    """Verify the hypotheses of the universal property and build Phi_p.

    ``phi_A[a]`` is the image of the a-th A-basis element, ``phi_L[j]`` the
    image of the j-th k-basis element of L, both as coordinate vectors of B.
    """
    A, F = X.A, X.field
    rep = Report("universal property of U_p(A,L)")

    def fA(a):
        return lincomb(F, B.dim, [(c, phi_A[i]) for i, c in enumerate(a) if c])

    def fL(v):
        return lincomb(F, B.dim, [(c, phi_L[j]) for j, c in enumerate(v) if c])

    e = [A.basis_vector(a) for a in range(A.dim)]
    E = [X.basis_vector(j) for j in range(X.dim)]

    def need(name, bad):
        rep.add(Check(name, bad is None, 1, bad))
        if bad is not None:
            raise UniversalPropertyError(name, bad)

    need("algebra map", None if fA(A.unit) == B.unit else {"issue": "unit"})
    for a in range(A.dim):
        for b in range(A.dim):
            if fA(A.mul(e[a], e[b])) != B.mul(fA(e[a]), fA(e[b])):
                need("algebra map", {"a": A.names[a], "b": A.names[b]})
    for i in range(X.dim):
        for j in range(X.dim):
            if fL(X.bracket(E[i], E[j])) != B.commutator(fL(E[i]), fL(E[j])):
                need("Lie map", {"X": X.names[i], "Y": X.names[j]})
    for a in range(A.dim):
        for j in range(X.dim):
            if B.mul(fA(e[a]), fL(E[j])) != fL(X.act(e[a], E[j])):
                need("A-linear", {"a": A.names[a], "X": X.names[j]})
            if B.commutator(fL(E[j]), fA(e[a])) != fA(X.anchor[j] @ e[a]):
                need("anchor", {"a": A.names[a], "X": X.names[j]})
    for j in range(X.dim):
        if fL(X.p_map(E[j])) != B.power(fL(E[j]), X.p):
            need("restricted", {"X": X.names[j]})
    rng = random.Random(seed)
    for _ in range(samples):
        Y = X.random_element(rng)
        if fL(X.p_map(Y)) != B.power(fL(Y), X.p):
            need("restricted", {"X": X.format(Y)})

    U = Enveloping(X, restricted=True)
    S = U.as_algebra()
    mons = U.monomials()
    u_img = [fL(E[i * A.dim]) for i in range(U.n)]
    cols = []
    for k in mons:
        mono = B.unit
        for i, ex in enumerate(k):
            for _ in range(ex):
                mono = B.mul(mono, u_img[i])
        for a in range(A.dim):
            cols.append(B.mul(fA(e[a]), mono))
    Phi = Matrix.from_columns(F, cols, B.dim)
    bad = None
    pairs = [(i, j) for i in range(S.dim) for j in range(S.dim)]
    if len(pairs) > samples:
        pairs = rng.sample(pairs, samples)
    for i, j in pairs:
        x, y = S.basis_vector(i), S.basis_vector(j)
        if Phi @ S.mul(x, y) != B.mul(Phi @ x, Phi @ y):
            bad = {"x": S.names[i], "y": S.names[j]}
            break
    rep.add(Check("Phi_p is multiplicative", bad is None, len(pairs), bad))
    if bad:
        raise UniversalPropertyError("multiplicativity", bad)
    rep.notes["image_rank"] = Phi.rank()
    return UHom(S, B, Phi, rep)


def canonical_maps(X: LieRinehart) -> tuple[AssocAlgebra, list, list]:
    """U_p(A,L) together with iota_A and iota_L as coordinate vectors."""
    U = Enveloping(X, restricted=True)
    S = U.as_algebra()
    mons = U.monomials()
    phi_A = [U.vector(U.from_A(X.A.basis_vector(a)), mons) for a in range(X.A.dim)]
    phi_L = [U.vector(U.from_L(X.basis_vector(j)), mons) for j in range(X.dim)]
    return S, phi_A, phi_L


def anchor_representation(X: LieRinehart) -> tuple[AssocAlgebra, list, list]:
    """End_k(A) with A acting by multiplication and L through the anchor."""
    from .commalg import matrix_algebra, matrix_to_vector

    B = matrix_algebra(X.field, X.A.dim)
    phi_A = [matrix_to_vector(X.A.left_matrix(X.A.basis_vector(a))) for a in range(X.A.dim)]
    phi_L = [matrix_to_vector(D) for D in X.anchor]
    return B, phi_A, phi_L
