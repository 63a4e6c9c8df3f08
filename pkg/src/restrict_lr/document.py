"""JSON documents describing algebras, Lie-Rinehart algebras, modules and extensions.

Schema (all coefficients are strings in the coefficient grammar)::

    {
      "p": 2, "field": "Fp" | "Fp_t",
      "algebra":   {"basis": ["1", "x"], "products": {"x*x": ["0", "0"]}},
      "lie":       {"basis": ["d"], "brackets": {"u,v": VEC_L},
                    "anchor": {"d": MATRIX_A}, "pmap": {"d": VEC_L}},
      "module":    {"basis": ["m"], "a_action": {"x": MATRIX_M},
                    "l_action": {"d": MATRIX_M}, "P": MATRIX_M},
      "extension": {"h": {"u,v": VEC_M}, "g": {"d": VEC_M}},
      "extensions": [EXTENSION, ...],
      "params": {...}
    }

VEC_L lists one A-vector per L-basis element (a flat list when A = k).
Any vector may instead be an expression string over the basis names, e.g.
"x*d + 1".  Without an algebra block A = k.  Products with the unit and
missing entries are zero/implicit.  ``serialize`` emits the canonical form
and ``parse(serialize(d)) == d``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dfield
from typing import Any

from .commalg import AlgebraError, CommAlgebra, _Elem, base_field_algebra
from .expr import ExprError, evaluate
from .field import SUPPORTED_PRIMES, field_from_tag
from .linalg import Matrix, is_zero


@dataclass
class DocError:
    message: str
    key: str = ""
    line: int | None = None
    column: int | None = None

    def __str__(self):
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.column is not None:
            where.append(f"column {self.column}")
        if self.key:
            where.append(f"at {self.key}")
        return f"{self.message}" + (f" ({', '.join(where)})" if where else "")


class DocumentError(ValueError):
    def __init__(self, errors: list[DocError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


@dataclass
class AlgebraBlock:
    basis: list[str]
    products: dict[str, list[str]] = dfield(default_factory=dict)


@dataclass
class LieBlock:
    basis: list[str]
    brackets: dict[str, Any] = dfield(default_factory=dict)
    anchor: dict[str, list[list[str]]] = dfield(default_factory=dict)
    pmap: dict[str, Any] | None = None


@dataclass
class ModuleBlock:
    basis: list[str]
    a_action: dict[str, list[list[str]]] = dfield(default_factory=dict)
    l_action: dict[str, list[list[str]]] = dfield(default_factory=dict)
    P: list[list[str]] | None = None


@dataclass
class ExtensionBlock:
    h: dict[str, list[str]] = dfield(default_factory=dict)
    g: dict[str, list[str]] = dfield(default_factory=dict)


@dataclass
class AlgebraDocument:
    p: int
    field: str = "Fp"
    algebra: AlgebraBlock | None = None
    lie: LieBlock | None = None
    module: ModuleBlock | None = None
    extension: ExtensionBlock | None = None
    extensions: list[ExtensionBlock] = dfield(default_factory=list)
    params: dict = dfield(default_factory=dict)

    # -- math objects -----------------------------------------------------------------

    @property
    def scalars(self):
        return field_from_tag(self.field, self.p)

    def commalg(self) -> CommAlgebra:
        F = self.scalars
        if self.algebra is None:
            return base_field_algebra(F)
        names = self.algebra.basis
        n = len(names)
        table = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == 0:
                    table[i][j] = [F.one if r == j else F.zero for r in range(n)]
                elif j == 0:
                    table[i][j] = [F.one if r == i else F.zero for r in range(n)]
                else:
                    key = f"{names[min(i, j)]}*{names[max(i, j)]}"
                    vec = self.algebra.products.get(key)
                    table[i][j] = [F(c) for c in vec] if vec else [F.zero] * n
        return CommAlgebra(F, names, table)

    def lie_rinehart(self):
        from .lrin import from_free
        from .rlie import RestrictedLie

        if self.lie is None:
            raise DocumentError([DocError("document has no lie block", "lie")])
        A = self.commalg()
        F, dA = A.field, A.dim
        names = self.lie.basis
        n = len(names)
        if n == 0:
            from .lrin import LieRinehart

            return LieRinehart(A, RestrictedLie(F, [], [] if self.lie.pmap is not None else None, []), [Matrix.zeros(F, 0, 0)] * dA, [], rank=0)
        brackets = {}
        for key, val in self.lie.brackets.items():
            u, v = key.split(",")
            brackets[(names.index(u), names.index(v))] = self._a_vectors(val, dA)
        anchors = []
        for u in names:
            rows = self.lie.anchor.get(u)
            anchors.append(Matrix(F, rows, dA) if rows else Matrix.zeros(F, dA, dA))
        pimages = None
        if self.lie.pmap is not None:
            pimages = [self._a_vectors(self.lie.pmap[u], dA) for u in names]
        return from_free(A, names, brackets, anchors, pimages)

    def _a_vectors(self, val, dA):
        F = self.scalars
        return [[F(c) for c in a] for a in val]

    def beck_module(self, L):
        from .beck import BeckModule

        if self.module is None:
            raise DocumentError([DocError("document has no module block", "module")])
        F = self.scalars
        A = L.A
        m = len(self.module.basis)
        a_action = []
        for a, an in enumerate(A.names):
            if a == 0:
                a_action.append(Matrix.identity(F, m))
            else:
                rows = self.module.a_action.get(an)
                a_action.append(Matrix(F, rows, m) if rows else Matrix.zeros(F, m, m))
        rho_u = []
        for u in self.lie.basis:
            rows = self.module.l_action.get(u)
            rho_u.append(Matrix(F, rows, m) if rows else Matrix.zeros(F, m, m))
        l_action = [a_action[a] @ rho_u[i] for i in range(len(rho_u)) for a in range(A.dim)]
        P = Matrix(F, self.module.P, m) if self.module.P is not None else None
        if m == 0:
            zero = Matrix.zeros(F, 0, 0)
            return BeckModule([], [zero] * A.dim, [zero] * L.dim, None, 0)
        return BeckModule(list(self.module.basis), a_action, l_action, P, None)

    def extension_data(self, L, M, block: ExtensionBlock | None = None, label: str = ""):
        from .ext import from_a_basis

        block = block or self.extension
        if block is None:
            raise DocumentError([DocError("document has no extension block", "extension")])
        F = self.scalars
        names = self.lie.basis
        h = {}
        for key, v in block.h.items():
            a, b = key.split(",")
            h[(names.index(a), names.index(b))] = tuple(F(c) for c in v)
        zero = tuple(F.zero for _ in range(M.dim))
        g = [tuple(F(c) for c in block.g[u]) if u in block.g else zero for u in names]
        return from_a_basis(L, M, h, g, label)


# --- parsing ---------------------------------------------------------------------------


class _VecElem:
    """Linear combination over named basis vectors with coefficients in a ring."""

    is_module_element = True
    __slots__ = ("coeffs", "ring")

    def __init__(self, coeffs, ring):
        self.coeffs = list(coeffs)
        self.ring = ring

    def _other(self, o):
        if isinstance(o, _VecElem):
            return o.coeffs
        if _is_zero_scalar(o):
            return [self.ring.zero] * len(self.coeffs)
        raise ValueError("cannot add a scalar to a vector")

    def __add__(self, o):
        return _VecElem([a + b for a, b in zip(self.coeffs, self._other(o))], self.ring)

    __radd__ = __add__

    def __sub__(self, o):
        return _VecElem([a - b for a, b in zip(self.coeffs, self._other(o))], self.ring)

    def __rsub__(self, o):
        return _VecElem([b - a for a, b in zip(self.coeffs, self._other(o))], self.ring)

    def __neg__(self):
        return _VecElem([-a for a in self.coeffs], self.ring)

    def __mul__(self, c):
        if isinstance(c, _VecElem):
            raise ValueError("product of two vectors")
        c = self.ring.lift(c)
        return _VecElem([c * a for a in self.coeffs], self.ring)

    __rmul__ = __mul__

    def __truediv__(self, c):
        if isinstance(c, _VecElem):
            raise ValueError("division by a vector")
        return _VecElem([a / c for a in self.coeffs], self.ring)

    def __pow__(self, n):
        raise ValueError("power of a vector")


def _is_zero_scalar(o) -> bool:
    if isinstance(o, int):
        return o == 0
    if isinstance(o, _Elem):
        return is_zero(o.vec)
    return not o


class _FieldRing:
    def __init__(self, F):
        self.F = F
        self.zero = F.zero

    def lift(self, c):
        if isinstance(c, _Elem):
            raise ValueError("algebra coefficient in a k-vector")
        return self.F(c)

    def out(self, c) -> str:
        return str(c)


class _AlgRing:
    def __init__(self, A):
        self.A = A
        self.zero = _Elem(A, A.zero())

    def lift(self, c):
        if isinstance(c, _Elem):
            return c
        return _Elem(self.A, self.A.scalar(self.A.field(c)))


class _Parse:
    def __init__(self, text: str):
        self.text = text
        self.errors: list[DocError] = []

    def err(self, message, key="", column=None):
        line = self._line_of(key)
        self.errors.append(DocError(message, key, line, column))

    def _line_of(self, key: str) -> int | None:
        if not key:
            return None
        last = key.replace("]", "").split(".")[-1].split("[")[0]
        needle = json.dumps(last)
        for no, ln in enumerate(self.text.splitlines(), 1):
            if needle in ln:
                return no
        return None

    def scalar(self, F, value, key) -> str | None:
        if isinstance(value, bool) or not isinstance(value, (int, str)):
            self.err("coefficient must be a string or integer", key)
            return None
        try:
            return str(F(value if isinstance(value, int) else str(value)))
        except ExprError as exc:
            self.err(f"bad coefficient: {exc.message}", key, exc.column)
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            self.err(f"bad coefficient: {exc}", key)
        return None

    def vector(self, F, value, n: int, key: str, names=None, ring=None, A=None) -> list | None:
        """k-vector of length n from a list or an expression over ``names``."""
        if isinstance(value, str) and names is not None:
            env = {nm: _VecElem([F.one if i == j else F.zero for j in range(n)], _FieldRing(F)) for i, nm in enumerate(names)}
            if hasattr(F, "t"):
                env.setdefault("t", F.t)
            try:
                res = evaluate(value, env, F)
            except ExprError as exc:
                self.err(f"bad expression: {exc.message}", key, exc.column)
                return None
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                self.err(f"bad expression: {exc}", key)
                return None
            if not isinstance(res, _VecElem):
                if _is_zero_scalar(res):
                    return [str(F.zero)] * n
                self.err("expression is a scalar, expected a vector", key)
                return None
            return [str(c) for c in res.coeffs]
        if not isinstance(value, list):
            self.err("expected a list of coefficients", key)
            return None
        if len(value) != n:
            self.err(f"dimension mismatch: expected {n} coordinates, got {len(value)}", key)
            return None
        out = [self.scalar(F, c, f"{key}[{i}]") for i, c in enumerate(value)]
        return None if any(c is None for c in out) else out

    def a_vector(self, A, value, key):
        if isinstance(value, str):
            try:
                return [str(c) for c in A.parse(value)]
            except ExprError as exc:
                self.err(f"bad expression: {exc.message}", key, exc.column)
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                self.err(f"bad expression: {exc}", key)
            return None
        return self.vector(A.field, value, A.dim, key)

    def l_vector(self, A, value, lnames, key):
        """Vector over the A-basis of L with A-coefficients: list of A-vectors."""
        F, n, dA = A.field, len(lnames), A.dim
        if isinstance(value, str):
            ring = _AlgRing(A)
            env = {nm: _VecElem([ring.lift(1) if i == j else ring.zero for j in range(n)], ring) for i, nm in enumerate(lnames)}
            for a, an in enumerate(A.names):
                if an != "1":
                    env[an] = _Elem(A, A.basis_vector(a))
            if hasattr(F, "t"):
                env.setdefault("t", _Elem(A, A.scalar(F.t)))
            try:
                res = evaluate(value, env, lambda c: _Elem(A, A.scalar(F(c))))
            except ExprError as exc:
                self.err(f"bad expression: {exc.message}", key, exc.column)
                return None
            except (ValueError, TypeError, ZeroDivisionError) as exc:
                self.err(f"bad expression: {exc}", key)
                return None
            if not isinstance(res, _VecElem):
                if _is_zero_scalar(res):
                    return [[str(F.zero)] * dA for _ in range(n)]
                self.err("expression is not an element of L", key)
                return None
            return [[str(c) for c in e.vec] for e in res.coeffs]
        if not isinstance(value, list):
            self.err("expected a list", key)
            return None
        if len(value) != n:
            self.err(f"dimension mismatch: expected {n} entries, got {len(value)}", key)
            return None
        if dA == 1 and all(not isinstance(v, list) for v in value):
            out = [self.scalar(F, c, f"{key}[{i}]") for i, c in enumerate(value)]
            return None if any(c is None for c in out) else [[c] for c in out]
        out = [self.a_vector(A, v, f"{key}[{i}]") for i, v in enumerate(value)]
        return None if any(c is None for c in out) else out

    def matrix(self, F, rows, n: int, key: str) -> list | None:
        if not isinstance(rows, list) or len(rows) != n:
            self.err(f"dimension mismatch: expected a {n}x{n} matrix", key)
            return None
        out = []
        for r, row in enumerate(rows):
            v = self.vector(F, row, n, f"{key}[{r}]")
            if v is None:
                return None
            out.append(v)
        return out


def _json_position(text: str, exc: json.JSONDecodeError) -> DocError:
    return DocError(f"syntax error: {exc.msg}", "", exc.lineno, exc.colno)


_TOP_KEYS = {"p", "field", "algebra", "lie", "module", "extension", "extensions", "params"}


def parse(text: str) -> AlgebraDocument:
    """Parse and canonicalize; raises DocumentError with all positioned errors."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError([_json_position(text, exc)]) from None
    ps = _Parse(text)
    if not isinstance(raw, dict):
        raise DocumentError([DocError("top level must be an object")])
    for k in raw:
        if k not in _TOP_KEYS:
            ps.err(f"unknown key {k!r}", k)
    p = raw.get("p")
    if not isinstance(p, int) or isinstance(p, bool) or p not in SUPPORTED_PRIMES:
        ps.err(f"p must be one of {list(SUPPORTED_PRIMES)}", "p")
        raise DocumentError(ps.errors)
    tag = raw.get("field", "Fp")
    if tag not in ("Fp", "Fp_t"):
        ps.err("field must be 'Fp' or 'Fp_t'", "field")
        raise DocumentError(ps.errors)
    F = field_from_tag(tag, p)
    doc = AlgebraDocument(p=p, field=tag)

    # algebra
    A = base_field_algebra(F)
    if "algebra" in raw:
        blk = raw["algebra"]
        basis = blk.get("basis") if isinstance(blk, dict) else None
        if not isinstance(basis, list) or not basis or basis[0] != "1" or not all(isinstance(b, str) for b in basis):
            ps.err("algebra.basis must be a list of names starting with '1'", "algebra.basis")
            raise DocumentError(ps.errors)
        if len(set(basis)) != len(basis):
            ps.err("duplicate basis name", "algebra.basis")
        n = len(basis)
        prods: dict[str, list[str]] = {}
        for key, val in (blk.get("products") or {}).items():
            parts = key.split("*")
            if len(parts) != 2 or any(x not in basis for x in parts):
                ps.err(f"undeclared name in product key {key!r}", f"algebra.products.{key}")
                continue
            i, j = sorted(basis.index(x) for x in parts)
            if i == 0:
                continue
            # expressions need the algebra itself; only lists are allowed here
            vec = ps.vector(F, val, n, f"algebra.products.{key}")
            if vec is not None and any(c != "0" for c in vec):
                prods[f"{basis[i]}*{basis[j]}"] = vec
        order = {f"{basis[i]}*{basis[j]}": (i, j) for i in range(n) for j in range(i, n)}
        doc.algebra = AlgebraBlock(list(basis), dict(sorted(prods.items(), key=lambda kv: order[kv[0]])))
        if ps.errors:
            raise DocumentError(ps.errors)
        try:
            A = doc.commalg()
        except (AlgebraError, ValueError) as exc:
            raise DocumentError([DocError(f"invalid algebra: {exc}", "algebra")]) from None

    # lie
    if "lie" in raw:
        blk = raw["lie"]
        if not isinstance(blk, dict):
            raise DocumentError([DocError("lie must be an object", "lie")])
        lnames = blk.get("basis", [])
        if not isinstance(lnames, list) or not all(isinstance(b, str) for b in lnames):
            ps.err("lie.basis must be a list of names", "lie.basis")
            raise DocumentError(ps.errors)
        clash = set(lnames) & set(A.names)
        if clash:
            ps.err(f"names used in both algebra and lie: {sorted(clash)}", "lie.basis")
        n = len(lnames)
        brackets = {}
        for key, val in (blk.get("brackets") or {}).items():
            parts = key.split(",")
            if len(parts) != 2 or any(x.strip() not in lnames for x in parts):
                ps.err(f"undeclared name in bracket key {key!r}", f"lie.brackets.{key}")
                continue
            i, j = (lnames.index(x.strip()) for x in parts)
            vec = ps.l_vector(A, val, lnames, f"lie.brackets.{key}")
            if vec is None or i == j:
                continue
            if i > j:
                i, j = j, i
                vec = [[str(-F(c)) for c in a] for a in vec]
            if any(c != "0" for a in vec for c in a):
                brackets[f"{lnames[i]},{lnames[j]}"] = vec
        anchor = {}
        for key, rows in (blk.get("anchor") or {}).items():
            if key not in lnames:
                ps.err(f"undeclared name {key!r}", f"lie.anchor.{key}")
                continue
            mat = ps.matrix(F, rows, A.dim, f"lie.anchor.{key}")
            if mat is not None and any(c != "0" for r in mat for c in r):
                anchor[key] = mat
        pmap = None
        if "pmap" in blk and blk["pmap"] is not None:
            pmap = {}
            for key, val in blk["pmap"].items():
                if key not in lnames:
                    ps.err(f"undeclared name {key!r}", f"lie.pmap.{key}")
                    continue
                vec = ps.l_vector(A, val, lnames, f"lie.pmap.{key}")
                if vec is not None:
                    pmap[key] = vec
            for u in lnames:
                if u not in pmap:
                    pmap[u] = [[str(F.zero)] * A.dim for _ in range(n)]
            pmap = {u: pmap[u] for u in lnames}
        order = {f"{lnames[i]},{lnames[j]}": (i, j) for i in range(n) for j in range(i + 1, n)}
        doc.lie = LieBlock(
            list(lnames),
            dict(sorted(brackets.items(), key=lambda kv: order[kv[0]])),
            {u: anchor[u] for u in lnames if u in anchor},
            pmap,
        )

    # module
    if "module" in raw:
        blk = raw["module"]
        if doc.lie is None:
            ps.err("a module block needs a lie block", "module")
            raise DocumentError(ps.errors)
        mnames = blk.get("basis", []) if isinstance(blk, dict) else None
        if not isinstance(mnames, list) or not all(isinstance(b, str) for b in mnames):
            ps.err("module.basis must be a list of names", "module.basis")
            raise DocumentError(ps.errors)
        m = len(mnames)
        a_act = {}
        for key, rows in (blk.get("a_action") or {}).items():
            if key not in A.names or key == "1":
                ps.err(f"undeclared algebra name {key!r}", f"module.a_action.{key}")
                continue
            mat = ps.matrix(F, rows, m, f"module.a_action.{key}")
            if mat is not None:
                a_act[key] = mat
        l_act = {}
        for key, rows in (blk.get("l_action") or {}).items():
            if key not in doc.lie.basis:
                ps.err(f"undeclared lie name {key!r}", f"module.l_action.{key}")
                continue
            mat = ps.matrix(F, rows, m, f"module.l_action.{key}")
            if mat is not None and any(c != "0" for r in mat for c in r):
                l_act[key] = mat
        P = None
        if blk.get("P") is not None:
            P = ps.matrix(F, blk["P"], m, "module.P")
        doc.module = ModuleBlock(
            list(mnames),
            {a: a_act[a] for a in A.names if a in a_act},
            {u: l_act[u] for u in doc.lie.basis if u in l_act},
            P,
        )

    def ext_block(blk, where):
        if not isinstance(blk, dict):
            ps.err("extension must be an object", where)
            return None
        if doc.module is None or doc.lie is None:
            ps.err("an extension needs lie and module blocks", where)
            return None
        m, lnames = len(doc.module.basis), doc.lie.basis
        h = {}
        for key, val in (blk.get("h") or {}).items():
            parts = key.split(",")
            if len(parts) != 2 or any(x.strip() not in lnames for x in parts):
                ps.err(f"undeclared name in key {key!r}", f"{where}.h.{key}")
                continue
            i, j = (lnames.index(x.strip()) for x in parts)
            vec = ps.vector(F, val, m, f"{where}.h.{key}", names=doc.module.basis)
            if vec is None or i == j:
                continue
            if i > j:
                i, j = j, i
                vec = [str(-F(c)) for c in vec]
            if any(c != "0" for c in vec):
                h[f"{lnames[i]},{lnames[j]}"] = vec
        g = {}
        for key, val in (blk.get("g") or {}).items():
            if key not in lnames:
                ps.err(f"undeclared name {key!r}", f"{where}.g.{key}")
                continue
            vec = ps.vector(F, val, m, f"{where}.g.{key}", names=doc.module.basis)
            if vec is not None and any(c != "0" for c in vec):
                g[key] = vec
        n = len(lnames)
        order = {f"{lnames[i]},{lnames[j]}": (i, j) for i in range(n) for j in range(i + 1, n)}
        return ExtensionBlock(dict(sorted(h.items(), key=lambda kv: order[kv[0]])), {u: g[u] for u in lnames if u in g})

    if "extension" in raw:
        doc.extension = ext_block(raw["extension"], "extension")
    if "extensions" in raw:
        if not isinstance(raw["extensions"], list):
            ps.err("extensions must be a list", "extensions")
        else:
            doc.extensions = [ext_block(b, f"extensions[{i}]") for i, b in enumerate(raw["extensions"])]
    if "params" in raw:
        if not isinstance(raw["params"], dict):
            ps.err("params must be an object", "params")
        else:
            doc.params = json.loads(json.dumps(raw["params"], sort_keys=True))
    if ps.errors:
        raise DocumentError(ps.errors)
    return doc


def to_dict(doc: AlgebraDocument) -> dict:
    out: dict[str, Any] = {"p": doc.p, "field": doc.field}
    flat = doc.algebra is None
    if doc.algebra is not None:
        out["algebra"] = {"basis": doc.algebra.basis, "products": doc.algebra.products}
    if doc.lie is not None:
        def lv(vec):
            return [a[0] for a in vec] if flat else vec

        lie: dict[str, Any] = {
            "basis": doc.lie.basis,
            "brackets": {k: lv(v) for k, v in doc.lie.brackets.items()},
            "anchor": doc.lie.anchor,
        }
        if doc.lie.pmap is not None:
            lie["pmap"] = {k: lv(v) for k, v in doc.lie.pmap.items()}
        out["lie"] = lie
    if doc.module is not None:
        mod: dict[str, Any] = {"basis": doc.module.basis, "a_action": doc.module.a_action, "l_action": doc.module.l_action}
        if doc.module.P is not None:
            mod["P"] = doc.module.P
        out["module"] = mod
    if doc.extension is not None:
        out["extension"] = {"h": doc.extension.h, "g": doc.extension.g}
    if doc.extensions:
        out["extensions"] = [{"h": e.h, "g": e.g} for e in doc.extensions]
    if doc.params:
        out["params"] = doc.params
    return out


def serialize(doc: AlgebraDocument) -> str:
    return json.dumps(to_dict(doc), indent=2) + "\n"


def load(path) -> AlgebraDocument:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
