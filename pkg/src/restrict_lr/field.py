"""Exact scalars: the prime fields F_p and the rational function fields F_p(t).

Elements are immutable and always stored in canonical form, so equality is
structural and elements can be hashed.  Plain ``int`` operands are accepted
wherever an element is expected and are reduced mod p.
"""

from __future__ import annotations

from functools import lru_cache
from random import Random

SUPPORTED_PRIMES = (2, 3, 5, 7)

Poly = tuple  # coefficients mod p, lowest degree first, no trailing zeros


def _check_prime(p: int) -> int:
    if p not in SUPPORTED_PRIMES:
        raise ValueError(f"unsupported characteristic {p!r}; expected one of {SUPPORTED_PRIMES}")
    return p


# --- polynomials over F_p ---------------------------------------------------


def _trim(c: list, p: int) -> Poly:
    c = [x % p for x in c]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_add(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)], p)


def poly_sub(a: Poly, b: Poly, p: int) -> Poly:
    n = max(len(a), len(b))
    return _trim([(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)], p)


def poly_mul(a: Poly, b: Poly, p: int) -> Poly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(out, p)


def poly_scale(a: Poly, c: int, p: int) -> Poly:
    return _trim([x * c for x in a], p)


def poly_divmod(a: Poly, b: Poly, p: int) -> tuple[Poly, Poly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    inv = pow(b[-1], p - 2, p)
    q = [0] * max(len(a) - len(b) + 1, 0)
    db = len(b) - 1
    for k in range(len(r) - 1, db - 1, -1):
        c = r[k] * inv % p
        if c:
            q[k - db] = c
            for j, y in enumerate(b):
                r[k - db + j] -= c * y
    return _trim(q, p), _trim(r, p)


def poly_monic(a: Poly, p: int) -> Poly:
    if not a:
        return a
    return poly_scale(a, pow(a[-1], p - 2, p), p)


def poly_gcd(a: Poly, b: Poly, p: int) -> Poly:
    """Monic gcd by Euclid, normalising at every step."""
    a, b = poly_monic(a, p), poly_monic(b, p)
    while b:
        a, b = b, poly_monic(poly_divmod(a, b, p)[1], p)
    return a


def poly_str(a: Poly, var: str = "t") -> str:
    if not a:
        return "0"
    terms = []
    for k in range(len(a) - 1, -1, -1):
        c = a[k]
        if not c:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            mono = var if k == 1 else f"{var}^{k}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return "+".join(terms)


# --- F_p --------------------------------------------------------------------


class Fp:
    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.p = p
        self.v = v % p

    @property
    def field(self) -> "PrimeField":
        return GF(self.p)

    def _coerce(self, other) -> int | None:
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing elements of different characteristic")
            return other.v
        if isinstance(other, int):
            return other
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(self.v * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.v, self.p)

    def inverse(self) -> "Fp":
        if not self.v:
            raise ZeroDivisionError("inverse of zero in F_%d" % self.p)
        return Fp(pow(self.v, self.p - 2, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * Fp(o, self.p).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Fp(o, self.p) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return Fp(pow(self.v, n, self.p), self.p)

    def __bool__(self):
        return self.v != 0

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.p == other.p and self.v == other.v
        if isinstance(other, int):
            return self.v == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash(self.v)

    def __repr__(self):
        return f"Fp({self.v}, {self.p})"

    def __str__(self):
        return str(self.v)

    def frobenius(self) -> "Fp":
        return self

    def is_constant(self) -> bool:
        return True


# --- F_p(t) -----------------------------------------------------------------


class RatFunc:
    """numerator/denominator over F_p with monic denominator and trivial gcd."""

    __slots__ = ("num", "den", "p")

    def __init__(self, num: Poly, den: Poly, p: int, *, canonical: bool = False):
        self.p = p
        if canonical:
            self.num, self.den = num, den
            return
        num, den = _trim(list(num), p), _trim(list(den), p)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if not num:
            self.num, self.den = (), (1,)
            return
        g = poly_gcd(num, den, p)
        if g != (1,):
            num = poly_divmod(num, g, p)[0]
            den = poly_divmod(den, g, p)[0]
        lead = den[-1]
        if lead != 1:
            inv = pow(lead, p - 2, p)
            num, den = poly_scale(num, inv, p), poly_scale(den, inv, p)
        self.num, self.den = num, den

    @property
    def field(self) -> "RationalFunctionField":
        return FpT(self.p)

    def _coerce(self, other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            if other.p != self.p:
                raise ValueError("mixing elements of different characteristic")
            return other
        if isinstance(other, Fp):
            if other.p != self.p:
                raise ValueError("mixing elements of different characteristic")
            return RatFunc(_trim([other.v], self.p), (1,), self.p, canonical=True)
        if isinstance(other, int):
            return RatFunc(_trim([other], self.p), (1,), self.p, canonical=True)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        p = self.p
        if self.den == o.den:
            return RatFunc(poly_add(self.num, o.num, p), self.den, p)
        return RatFunc(
            poly_add(poly_mul(self.num, o.den, p), poly_mul(o.num, self.den, p), p),
            poly_mul(self.den, o.den, p),
            p,
        )

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(poly_scale(self.num, -1, self.p), self.den, self.p, canonical=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not self.num or not o.num:
            return RatFunc((), (1,), self.p, canonical=True)
        return RatFunc(poly_mul(self.num, o.num, self.p), poly_mul(self.den, o.den, self.p), self.p)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if not self.num:
            raise ZeroDivisionError("inverse of zero in F_%d(t)" % self.p)
        return RatFunc(self.den, self.num, self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = RatFunc((1,), (1,), self.p, canonical=True)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __bool__(self):
        return bool(self.num)

    def is_constant(self) -> bool:
        return len(self.num) <= 1 and self.den == (1,)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.p == other.p and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fp)):
            o = self._coerce(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        if self.is_constant():
            return hash(self.num[0] if self.num else 0)
        return hash((self.num, self.den))

    def frobenius(self) -> "RatFunc":
        # (f/g)^p = f(t^p)/g(t^p) in characteristic p
        p = self.p

        def spread(a):
            out = [0] * ((len(a) - 1) * p + 1) if a else []
            for i, c in enumerate(a):
                out[i * p] = c
            return tuple(out)

        return RatFunc(spread(self.num), spread(self.den), p, canonical=True)

    def __repr__(self):
        return f"RatFunc({self!s}, p={self.p})"

    def __str__(self):
        n = poly_str(self.num)
        if self.den == (1,):
            return n
        d = poly_str(self.den)
        if sum(1 for c in self.num if c) > 1:
            n = f"({n})"
        if sum(1 for c in self.den if c) > 1 or len(self.den) > 1 and self.den[-1] != 1:
            d = f"({d})"
        return f"{n}/{d}"


# --- field objects -----------------------------------------------------------


class PrimeField:
    """The prime field F_p."""

    is_prime_field = True

    def __init__(self, p: int):
        self.p = _check_prime(p)
        self.zero = Fp(0, p)
        self.one = Fp(1, p)

    def __call__(self, x) -> Fp:
        if isinstance(x, Fp):
            if x.p != self.p:
                raise ValueError("element of another field")
            return x
        if isinstance(x, int):
            return Fp(x, self.p)
        if isinstance(x, RatFunc):
            if not x.is_constant():
                raise ValueError(f"{x} is not in F_{self.p}")
            return Fp(x.num[0] if x.num else 0, self.p)
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot convert {x!r} to F_{self.p}")

    def parse(self, text: str) -> Fp:
        from .expr import evaluate_scalar

        return self(evaluate_scalar(text, self))

    def elements(self) -> list[Fp]:
        return [Fp(i, self.p) for i in range(self.p)]

    def random(self, rng: Random) -> Fp:
        return Fp(rng.randrange(self.p), self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp", self.p))

    def __repr__(self):
        return f"GF({self.p})"

    @property
    def tag(self) -> str:
        return "Fp"


class RationalFunctionField:
    """The rational function field F_p(t)."""

    is_prime_field = False

    def __init__(self, p: int):
        self.p = _check_prime(p)
        self.zero = RatFunc((), (1,), p, canonical=True)
        self.one = RatFunc((1,), (1,), p, canonical=True)
        self.t = RatFunc((0, 1), (1,), p, canonical=True)

    def __call__(self, x) -> RatFunc:
        if isinstance(x, RatFunc):
            if x.p != self.p:
                raise ValueError("element of another field")
            return x
        if isinstance(x, (int, Fp)):
            return self.one * x
        if isinstance(x, str):
            return self.parse(x)
        raise TypeError(f"cannot convert {x!r} to F_{self.p}(t)")

    def parse(self, text: str) -> RatFunc:
        from .expr import evaluate_scalar

        return self(evaluate_scalar(text, self))

    def poly(self, coeffs) -> RatFunc:
        return RatFunc(tuple(coeffs), (1,), self.p)

    def random(self, rng: Random, degree: int = 1) -> RatFunc:
        num = [rng.randrange(self.p) for _ in range(degree + 1)]
        den = [rng.randrange(self.p) for _ in range(degree)] + [1]
        return RatFunc(tuple(num), tuple(den), self.p)

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.p == self.p

    def __hash__(self):
        return hash(("Fp_t", self.p))

    def __repr__(self):
        return f"FpT({self.p})"

    @property
    def tag(self) -> str:
        return "Fp_t"


@lru_cache(maxsize=None)
def GF(p: int) -> PrimeField:
    return PrimeField(p)


@lru_cache(maxsize=None)
def FpT(p: int) -> RationalFunctionField:
    return RationalFunctionField(p)


def field_from_tag(tag: str, p: int):
    if tag == "Fp":
        return GF(p)
    if tag == "Fp_t":
        return FpT(p)
    raise ValueError(f"unknown base field tag {tag!r}")


def frobenius(a):
    """a -> a^p, a ring endomorphism of the field."""
    return a.frobenius()
