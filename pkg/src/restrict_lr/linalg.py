"""Dense exact linear algebra over F_p and F_p(t).

Vectors are tuples of field elements.  A ``Matrix`` acts on column vectors;
column j holds the image of the j-th basis vector.
"""

from __future__ import annotations

from typing import Iterable, Sequence


class InconsistentSystem(ValueError):
    """M x = b has no solution."""


def zero_vector(field, n: int) -> tuple:
    return (field.zero,) * n


def unit_vector(field, n: int, i: int) -> tuple:
    v = [field.zero] * n
    v[i] = field.one
    return tuple(v)


def vadd(u: Sequence, v: Sequence) -> tuple:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Sequence, v: Sequence) -> tuple:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vscale(c, v: Sequence) -> tuple:
    return tuple(c * a for a in v)


def vneg(v: Sequence) -> tuple:
    return tuple(-a for a in v)


def is_zero(v: Iterable) -> bool:
    return not any(v)


def lincomb(field, n: int, pairs) -> tuple:
    """sum of c * v over (c, v) pairs, for vectors of length n"""
    out = [field.zero] * n
    for c, v in pairs:
        if not c:
            continue
        for i, a in enumerate(v):
            if a:
                out[i] = out[i] + c * a
    return tuple(out)


class Matrix:
    __slots__ = ("field", "rows", "cols", "entries")

    def __init__(self, field, entries: Sequence[Sequence], cols: int | None = None):
        self.field = field
        self.entries = tuple(tuple(field(x) for x in row) for row in entries)
        self.rows = len(self.entries)
        self.cols = len(self.entries[0]) if self.entries else (cols or 0)
        if any(len(r) != self.cols for r in self.entries):
            raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, field, rows: int, cols: int) -> "Matrix":
        return cls(field, [[field.zero] * cols for _ in range(rows)], cols)

    @classmethod
    def identity(cls, field, n: int) -> "Matrix":
        return cls(field, [[field.one if i == j else field.zero for j in range(n)] for i in range(n)], n)

    @classmethod
    def from_columns(cls, field, columns: Sequence[Sequence], rows: int) -> "Matrix":
        if not columns:
            return cls.zeros(field, rows, 0)
        return cls(field, [[col[i] for col in columns] for i in range(rows)], len(columns))

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def columns(self) -> list[tuple]:
        return [self.column(j) for j in range(self.cols)]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, [self.column(j) for j in range(self.cols)], self.rows)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError(f"dimension mismatch: {self.rows}x{self.cols} matrix applied to length {len(v)}")
        zero = self.field.zero
        out = []
        for row in self.entries:
            acc = zero
            for a, b in zip(row, v):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise ValueError(f"dimension mismatch: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
            cols = [self.apply(c) for c in other.columns()]
            return Matrix.from_columns(self.field, cols, self.rows) if cols else Matrix.zeros(self.field, self.rows, 0)
        return self.apply(other)

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.field, [vadd(a, b) for a, b in zip(self.entries, other.entries)], self.cols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix(self.field, [vsub(a, b) for a, b in zip(self.entries, other.entries)], self.cols)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, [vneg(r) for r in self.entries], self.cols)

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, [vscale(c, r) for r in self.entries], self.cols)

    def __pow__(self, n: int) -> "Matrix":
        if self.rows != self.cols:
            raise ValueError("power of a non-square matrix")
        result = Matrix.identity(self.field, self.rows)
        for _ in range(n):
            result = result @ self
        return result

    def _same_shape(self, other):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ValueError("dimension mismatch")

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.entries)

    def rank(self) -> int:
        return rank(self)

    def flat(self) -> tuple:
        """column-major flattening, used to compare spans of matrices"""
        return tuple(x for j in range(self.cols) for x in self.column(j))

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix[{self.rows}x{self.cols}]({body})"

    def tolist(self) -> list[list[str]]:
        return [[str(x) for x in r] for r in self.entries]


def row_reduce(field, rows: Sequence[Sequence], ncols: int) -> tuple[list[list], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    work = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = field.one / work[r][c]
        work[r] = [x * inv for x in work[r]]
        prow = work[r]
        for i in range(len(work)):
            if i != r and work[i][c]:
                f = work[i][c]
                work[i] = [a - f * b if b else a for a, b in zip(work[i], prow)]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return work[:r], pivots


def rank(M: Matrix) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(row_reduce(M.field, M.entries, M.cols)[1])


def rank_of_vectors(field, vectors: Sequence[Sequence]) -> int:
    vectors = [v for v in vectors]
    if not vectors or not len(vectors[0]):
        return 0
    return len(row_reduce(field, vectors, len(vectors[0]))[1])


def kernel(M: Matrix) -> list[tuple]:
    """Basis of {x : M x = 0}."""
    field = M.field
    red, pivots = row_reduce(field, M.entries, M.cols) if M.rows else ([], [])
    free = [c for c in range(M.cols) if c not in pivots]
    basis = []
    for f in free:
        x = [field.zero] * M.cols
        x[f] = field.one
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def solve_linear(M: Matrix, b: Sequence) -> tuple[tuple, list[tuple]]:
    """Return (x, kernel basis) with M x = b, or raise InconsistentSystem."""
    if len(b) != M.rows:
        raise ValueError(f"dimension mismatch: {M.rows} rows but right-hand side of length {len(b)}")
    field = M.field
    aug = [list(r) + [field(bi)] for r, bi in zip(M.entries, b)]
    red, pivots = row_reduce(field, aug, M.cols + 1) if aug else ([], [])
    if M.cols in pivots:
        raise InconsistentSystem("linear system is inconsistent")
    x = [field.zero] * M.cols
    for row, pc in zip(red, pivots):
        x[pc] = row[M.cols]
    return tuple(x), kernel(M)


def in_span(field, vectors: Sequence[Sequence], v: Sequence) -> bool:
    if not vectors:
        return is_zero(v)
    return rank_of_vectors(field, list(vectors) + [v]) == rank_of_vectors(field, vectors)


def coordinates(field, basis: Sequence[Sequence], v: Sequence) -> tuple:
    """Coordinates of v in the (independent) list of vectors ``basis``."""
    if not basis:
        if not is_zero(v):
            raise InconsistentSystem("vector outside the zero span")
        return ()
    M = Matrix.from_columns(field, basis, len(v))
    x, _ = solve_linear(M, v)
    return x
