"""Finite-dimensional algebras over k given by structure constants.

``AssocAlgebra`` covers everything multiplicative in the package (matrix
algebras, crossed products, restricted enveloping algebras); ``CommAlgebra``
adds the conventions needed for a Lie-Rinehart base ring, and the derivation
machinery lives here too.  Elements are coordinate tuples over the basis.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Callable, Sequence

from .expr import evaluate
from .field import FpT, GF
from .linalg import Matrix, is_zero, kernel, lincomb, rank_of_vectors, row_reduce, unit_vector, vadd, vscale, vsub
from .report import Check


class AlgebraError(ValueError):
    pass


class AssocAlgebra:
    """Basis ``names``; ``table[i][j]`` is the coordinate vector of e_i * e_j."""

    def __init__(self, field, names: Sequence[str], table, unit: Sequence, *, check: bool = True):
        self.field = field
        self.names = tuple(names)
        self.dim = len(self.names)
        self.table = tuple(tuple(tuple(field(c) for c in v) for v in row) for row in table)
        self.unit = tuple(field(c) for c in unit)
        if len(self.table) != self.dim or any(len(r) != self.dim for r in self.table):
            raise AlgebraError("multiplication table does not match the basis")
        if any(len(v) != self.dim for r in self.table for v in r) or len(self.unit) != self.dim:
            raise AlgebraError("coefficient vector of the wrong length")
        if check:
            bad = self.axiom_violation()
            if bad:
                raise AlgebraError(bad)

    # -- arithmetic ----------------------------------------------------------

    @property
    def p(self) -> int:
        return self.field.p

    def zero(self) -> tuple:
        return (self.field.zero,) * self.dim

    def basis_vector(self, i: int) -> tuple:
        return unit_vector(self.field, self.dim, i)

    def scalar(self, c) -> tuple:
        return vscale(self.field(c), self.unit)

    def mul(self, a: Sequence, b: Sequence) -> tuple:
        pairs = []
        for i, x in enumerate(a):
            if not x:
                continue
            row = self.table[i]
            for j, y in enumerate(b):
                if y:
                    pairs.append((x * y, row[j]))
        return lincomb(self.field, self.dim, pairs)

    def add(self, a, b) -> tuple:
        return vadd(a, b)

    def power(self, a: Sequence, n: int) -> tuple:
        result = self.unit
        for _ in range(n):
            result = self.mul(result, a)
        return result

    def commutator(self, a, b) -> tuple:
        return vsub(self.mul(a, b), self.mul(b, a))

    def left_matrix(self, a) -> Matrix:
        return Matrix.from_columns(self.field, [self.mul(a, self.basis_vector(j)) for j in range(self.dim)], self.dim)

    def right_matrix(self, a) -> Matrix:
        return Matrix.from_columns(self.field, [self.mul(self.basis_vector(j), a) for j in range(self.dim)], self.dim)

    def random_element(self, rng: random.Random) -> tuple:
        return tuple(_random_scalar(self.field, rng) for _ in range(self.dim))

    def format(self, a: Sequence) -> str:
        terms = []
        for name, c in zip(self.names, a):
            if not c:
                continue
            cs = str(c)
            if name == "1":
                terms.append(cs)
            elif cs == "1":
                terms.append(name)
            else:
                terms.append(f"({cs})*{name}" if any(ch in cs for ch in "+-/") else f"{cs}*{name}")
        return "+".join(terms) or "0"

    def parse(self, text: str) -> tuple:
        env = {n: _Elem(self, self.basis_vector(i)) for i, n in enumerate(self.names) if n != "1"}
        if hasattr(self.field, "t"):
            env.setdefault("t", _Elem(self, self.scalar(self.field.t)))
        value = evaluate(text, env, lambda n: _Elem(self, self.scalar(n)))
        return value.vec

    # -- checks --------------------------------------------------------------

    def axiom_violation(self) -> str | None:
        e = [self.basis_vector(i) for i in range(self.dim)]
        for i in range(self.dim):
            if self.mul(self.unit, e[i]) != e[i] or self.mul(e[i], self.unit) != e[i]:
                return f"unit axiom fails on {self.names[i]}"
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    if self.mul(self.mul(e[i], e[j]), e[k]) != self.mul(e[i], self.mul(e[j], e[k])):
                        names = self.names
                        return f"associativity fails on ({names[i]}, {names[j]}, {names[k]})"
        return None

    def center(self) -> list[tuple]:
        """k-basis of the centre: kernel of the stacked maps x -> [x, e_i]."""
        rows = []
        for i in range(self.dim):
            ei = self.basis_vector(i)
            M = Matrix.from_columns(
                self.field, [self.commutator(self.basis_vector(j), ei) for j in range(self.dim)], self.dim
            )
            rows.extend(M.entries)
        return kernel(Matrix(self.field, rows, self.dim))

    def __repr__(self):
        return f"{type(self).__name__}({self.field!r}, {list(self.names)})"


class _Elem:
    """Operator wrapper so algebra elements can be parsed from strings."""

    __slots__ = ("alg", "vec")

    def __init__(self, alg, vec):
        self.alg, self.vec = alg, vec

    def _lift(self, other):
        if isinstance(other, _Elem):
            return other.vec
        return self.alg.scalar(other)

    def __add__(self, other):
        if getattr(other, "is_module_element", False):
            return NotImplemented
        return _Elem(self.alg, vadd(self.vec, self._lift(other)))

    __radd__ = __add__

    def __sub__(self, other):
        if getattr(other, "is_module_element", False):
            return NotImplemented
        return _Elem(self.alg, vsub(self.vec, self._lift(other)))

    def __rsub__(self, other):
        return _Elem(self.alg, vsub(self._lift(other), self.vec))

    def __neg__(self):
        return _Elem(self.alg, vscale(-self.alg.field.one, self.vec))

    def __mul__(self, other):
        if getattr(other, "is_module_element", False):
            return NotImplemented
        return _Elem(self.alg, self.alg.mul(self.vec, self._lift(other)))

    def __rmul__(self, other):
        return _Elem(self.alg, self.alg.mul(self._lift(other), self.vec))

    def __truediv__(self, other):
        if isinstance(other, _Elem):
            c = _scalar_value(other)
            if c is None:
                raise ValueError("division by a non-scalar algebra element")
            other = c
        return _Elem(self.alg, vscale(self.alg.field.one / other, self.vec))

    def __rtruediv__(self, other):
        c = _scalar_value(self)
        if c is None:
            raise ValueError("division by a non-scalar algebra element")
        return _Elem(self.alg, self.alg.scalar(self.alg.field(other) / c))

    def __pow__(self, n):
        return _Elem(self.alg, self.alg.power(self.vec, n))


def _scalar_value(e: _Elem):
    unit = e.alg.unit
    i = next(i for i, c in enumerate(unit) if c)
    c = e.vec[i] / unit[i]
    return c if vscale(c, unit) == e.vec else None


def _random_scalar(field, rng):
    if field.is_prime_field:
        return field.random(rng)
    # keep rational-function samples small: exact arithmetic is still exact
    return field.random(rng, degree=rng.choice((0, 1)))


def matrix_algebra(field, n: int) -> AssocAlgebra:
    """End_k(k^n) with basis E_ij (row i, column j), index i*n + j."""
    names = [f"E{i}{j}" for i in range(n) for j in range(n)]
    dim = n * n
    table = []
    for i in range(n):
        for j in range(n):
            row = []
            for k in range(n):
                for l in range(n):
                    v = [field.zero] * dim
                    if j == k:
                        v[i * n + l] = field.one
                    row.append(v)
            table.append(row)
    unit = [field.one if i == j else field.zero for i in range(n) for j in range(n)]
    return AssocAlgebra(field, names, table, unit, check=False)


def matrix_to_vector(M: Matrix) -> tuple:
    """Coordinates of a square matrix in the E_ij basis of ``matrix_algebra``."""
    return tuple(x for row in M.entries for x in row)


def vector_to_matrix(field, v: Sequence, n: int) -> Matrix:
    return Matrix(field, [v[i * n : (i + 1) * n] for i in range(n)], n)


def direct_sum(A: AssocAlgebra, B: AssocAlgebra) -> AssocAlgebra:
    field = A.field
    names = [f"{n}_1" for n in A.names] + [f"{n}_2" for n in B.names]
    dim = A.dim + B.dim
    z = field.zero
    table = []
    for i in range(dim):
        row = []
        for j in range(dim):
            if i < A.dim and j < A.dim:
                row.append(tuple(A.table[i][j]) + (z,) * B.dim)
            elif i >= A.dim and j >= A.dim:
                row.append((z,) * A.dim + tuple(B.table[i - A.dim][j - A.dim]))
            else:
                row.append((z,) * dim)
        table.append(row)
    return AssocAlgebra(field, names, table, tuple(A.unit) + tuple(B.unit))


class CommAlgebra(AssocAlgebra):
    """Commutative unital k-algebra whose first basis vector is the unit."""

    def __init__(self, field, names, table, *, check: bool = True):
        unit = unit_vector(field, len(names), 0)
        super().__init__(field, names, table, unit, check=check)
        if check:
            for i in range(self.dim):
                for j in range(i):
                    if self.table[i][j] != self.table[j][i]:
                        raise AlgebraError(f"multiplication not commutative on ({self.names[j]}, {self.names[i]})")

    def frobenius(self, a) -> tuple:
        return self.power(a, self.p)

    @cached_property
    def _left_matrices(self) -> tuple:
        return tuple(self.left_matrix(self.basis_vector(i)) for i in range(self.dim))

    def mult_matrix(self, a) -> Matrix:
        """Matrix of multiplication by a."""
        return self.left_matrix(a)

    def scaled_derivation(self, a, D: Matrix) -> Matrix:
        """The derivation aD : b -> a D(b)."""
        return self.left_matrix(a) @ D


def base_field_algebra(field) -> CommAlgebra:
    """A = k."""
    return CommAlgebra(field, ["1"], [[(field.one,)]])


def truncated_polynomial(field, n: int, var: str = "x") -> CommAlgebra:
    """k[x]/(x^n) with basis 1, x, ..., x^(n-1)."""
    names = ["1"] + [var if i == 1 else f"{var}^{i}" for i in range(1, n)]
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            v = [field.zero] * n
            if i + j < n:
                v[i + j] = field.one
            row.append(v)
        table.append(row)
    return CommAlgebra(field, names, table)


# --- derivations -------------------------------------------------------------


def leibniz_defect(A: AssocAlgebra, D: Matrix):
    """First basis pair (i, j) with D(e_i e_j) != e_i D(e_j) + D(e_i) e_j, else None."""
    e = [A.basis_vector(i) for i in range(A.dim)]
    De = D.columns()
    for i in range(A.dim):
        for j in range(A.dim):
            lhs = D @ A.mul(e[i], e[j])
            rhs = vadd(A.mul(e[i], De[j]), A.mul(De[i], e[j]))
            if lhs != rhs:
                return i, j
    return None


def is_derivation(A: AssocAlgebra, D: Matrix) -> bool:
    return leibniz_defect(A, D) is None


def derivation_space(A: AssocAlgebra) -> list[Matrix]:
    """k-basis of Der_k(A), solving the Leibniz rule as a linear system.

    Unknown D[r][c] (coefficient of e_r in D(e_c)) sits at index r*n + c.
    """
    n, F = A.dim, A.field
    e = [A.basis_vector(i) for i in range(n)]
    rows = []
    for i in range(n):
        for j in range(n):
            prod = A.mul(e[i], e[j])
            Li = A.left_matrix(e[i])
            Rj = A.right_matrix(e[j])
            for r in range(n):
                row = [F.zero] * (n * n)
                for k in range(n):
                    if prod[k]:
                        row[r * n + k] = row[r * n + k] + prod[k]
                for c in range(n):
                    if Li.entries[r][c]:
                        row[c * n + j] = row[c * n + j] - Li.entries[r][c]
                    if Rj.entries[r][c]:
                        row[c * n + i] = row[c * n + i] - Rj.entries[r][c]
                rows.append(row)
    sols = kernel(Matrix(F, rows, n * n))
    if sols:
        # reduced echelon form gives a canonical basis (d/dx before x d/dx, ...)
        sols = row_reduce(F, sols, n * n)[0]
    return [Matrix(F, [v[r * n : (r + 1) * n] for r in range(n)], n) for v in sols]


def p_power_derivation(A: AssocAlgebra, D: Matrix) -> Matrix:
    """D^p, again a derivation in characteristic p."""
    Dp = D ** A.p
    defect = leibniz_defect(A, Dp)
    if defect is not None:
        raise AlgebraError(f"D^p fails the Leibniz rule on basis pair {defect}")
    return Dp


def hochschild_rhs(A: CommAlgebra, a, D: Matrix) -> Matrix:
    """a^p D^p + (aD)^(p-1)(a) D."""
    p = A.p
    aD = A.scaled_derivation(a, D)
    corr = (aD ** (p - 1)) @ a
    return A.scaled_derivation(A.frobenius(a), D**p) + A.scaled_derivation(corr, D)


def hochschild_relation_check(
    A: CommAlgebra, a, D: Matrix, rhs: Callable[[CommAlgebra, tuple, Matrix], Matrix] = hochschild_rhs
) -> Check:
    """Compare (aD)^p with the right-hand side of Hochschild's relation as matrices."""
    lhs = A.scaled_derivation(a, D) ** A.p
    r = rhs(A, a, D)
    ok = lhs == r
    witness = None if ok else {"a": A.format(a), "D": D.tolist(), "lhs": lhs.tolist(), "rhs": r.tolist()}
    return Check("hochschild relation (aD)^p = a^p D^p + (aD)^(p-1)(a) D", ok, 1, witness)


def span_contains(A: AssocAlgebra, mats: Sequence[Matrix], M: Matrix) -> bool:
    vecs = [m.flat() for m in mats]
    if not vecs:
        return M.is_zero()
    return rank_of_vectors(A.field, vecs + [M.flat()]) == rank_of_vectors(A.field, vecs)


def random_derivation(A: AssocAlgebra, basis: Sequence[Matrix], rng: random.Random) -> Matrix:
    D = Matrix.zeros(A.field, A.dim, A.dim)
    for B in basis:
        D = D + B.scale(_random_scalar(A.field, rng))
    return D


# --- purely inseparable extensions ---------------------------------------------


@dataclass(frozen=True)
class InsepExtension:
    """K = k[s]/(s^p - t) over k = F_p(t), with the derivation d/ds."""

    p: int
    K: CommAlgebra = dc_field(init=False, repr=False, compare=False)
    d: Matrix = dc_field(init=False, repr=False, compare=False)

    def __post_init__(self):
        p = self.p
        k = FpT(p)
        names = ["1", "s"] + [f"s^{i}" for i in range(2, p)]
        table = []
        for i in range(p):
            row = []
            for j in range(p):
                v = [k.zero] * p
                if i + j < p:
                    v[i + j] = k.one
                else:
                    v[i + j - p] = k.t
                row.append(v)
            table.append(row)
        K = CommAlgebra(k, names, table)
        cols = []
        for i in range(p):
            v = [k.zero] * p
            if i:
                v[i - 1] = k(i)
            cols.append(v)
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "d", Matrix.from_columns(k, cols, p))

    @property
    def k(self):
        return self.K.field

    @property
    def s(self) -> tuple:
        return self.K.basis_vector(1)

    def element(self, text: str) -> tuple:
        return self.K.parse(text)

    def invariant_violations(self) -> list[str]:
        K, p, d = self.K, self.p, self.d
        out = []
        if K.power(self.s, p) != K.scalar(self.k.t):
            out.append("s^p != t")
        if d @ self.s != K.unit:
            out.append("d(s) != 1")
        if not is_zero(d @ K.scalar(self.k.t)):
            out.append("d does not vanish on k")
        if not (d**p).is_zero():
            out.append("d^p != 0")
        if not is_derivation(K, d):
            out.append("d is not a derivation")
        return out


def truncated_polynomial_fp(p: int, n: int | None = None) -> CommAlgebra:
    """F_p[x]/(x^n), default n = p."""
    return truncated_polynomial(GF(p), n or p)
