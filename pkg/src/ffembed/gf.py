"""Exact arithmetic in F_q for odd prime powers q.

Elements are stored as integer *codes* in ``[0, q)``.  For a prime field the
code is the residue itself.  For ``q = p**n`` with ``n > 1`` the element
``c_0 + c_1 x + ... + c_{n-1} x^{n-1}`` (reduced modulo a fixed irreducible
polynomial) has code ``c_0 + c_1 p + ... + c_{n-1} p^{n-1}``, so ordering by
code is lexicographic on ``(c_{n-1}, ..., c_0)``.
"""

from __future__ import annotations

import functools
from typing import Iterator, Sequence

import numpy as np

from .errors import DivisionByZero, FieldMismatch, FieldTooLarge, NotOddPrimePower

MAX_PRIME_Q = 2**20
MAX_EXTENSION_Q = 3**10


def _factor_prime_power(q: int) -> tuple[int, int] | None:
    if q < 2:
        return None
    p = None
    r = 2
    while r * r <= q:
        if q % r == 0:
            p = r
            break
        r += 1
    if p is None:
        return q, 1
    n = 0
    while q % p == 0:
        q //= p
        n += 1
    return (p, n) if q == 1 else None


def _prime_factors(n: int) -> list[int]:
    out = []
    r = 2
    while r * r <= n:
        if n % r == 0:
            out.append(r)
            while n % r == 0:
                n //= r
        r += 1
    if n > 1:
        out.append(n)
    return out


# --- polynomials over F_p, coefficient lists low -> high ---------------------

def _poly_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo a monic f."""
    a = list(a)
    df = len(f) - 1
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - c * f[j]) % p
    return _poly_trim([c % p for c in a[:df]])


def _poly_mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    return _poly_mod(prod, f, p)


def _monic_polys(deg: int, p: int) -> Iterator[list[int]]:
    # lower coefficients enumerated so that the numeral c_{deg-1}..c_0 increases
    for code in range(p**deg):
        coeffs = []
        for _ in range(deg):
            coeffs.append(code % p)
            code //= p
        yield coeffs + [1]


def _is_irreducible(f: Sequence[int], p: int) -> bool:
    n = len(f) - 1
    for deg in range(1, n // 2 + 1):
        for g in _monic_polys(deg, p):
            if not _poly_mod(f, g, p):
                return False
    return True


def _least_irreducible(p: int, n: int) -> tuple[int, ...]:
    for f in _monic_polys(n, p):
        if _is_irreducible(f, p):
            return tuple(f)
    raise AssertionError("an irreducible polynomial exists for every degree")


class FieldParams:
    """The field F_q together with its arithmetic tables.

    Instances are interned per ``q`` by :func:`field_new`; construct them
    through that function only.
    """

    def __init__(self, q: int, p: int, n: int):
        self.q = q
        self.p = p
        self.n = n
        self.modulus: tuple[int, ...] | None = None
        self._pw = np.array([p**i for i in range(n)], dtype=np.int64)
        if n > 1:
            self.modulus = _least_irreducible(p, n)
            self._build_extension_tables()
        codes = np.arange(q, dtype=np.int64)
        if n == 1:
            self.sq_table = codes * codes % q
        else:
            self.sq_table = np.array([self._mul_code(c, c) for c in range(q)], dtype=np.int64)
        self._roots: np.ndarray | None = None

    # -- construction helpers -------------------------------------------------

    def _digits(self, code: int) -> list[int]:
        out = []
        for _ in range(self.n):
            out.append(code % self.p)
            code //= self.p
        return out

    def _from_digits(self, digits: Sequence[int]) -> int:
        code = 0
        for c in reversed(digits):
            code = code * self.p + c % self.p
        return code

    def _build_extension_tables(self) -> None:
        p, q, f = self.p, self.q, self.modulus
        self.digit_table = np.array([self._digits(c) for c in range(q)], dtype=np.int64)
        order = q - 1
        cofactors = [order // r for r in _prime_factors(order)]

        def powmod(g, e):
            acc, base = [1], g
            while e:
                if e & 1:
                    acc = _poly_mulmod(acc, base, f, p)
                base = _poly_mulmod(base, base, f, p)
                e >>= 1
            return acc

        for cand in range(2, q):
            g = _poly_trim(self._digits(cand))
            if all(powmod(g, c) != [1] for c in cofactors):
                break
        else:  # pragma: no cover
            raise AssertionError("F_q^* is cyclic")
        self.generator = cand
        exp = [0] * order
        log = [0] * q
        cur = [1]
        for i in range(order):
            code = self._from_digits(cur)
            exp[i] = code
            log[code] = i
            cur = _poly_mulmod(cur, g, f, p)
        self._exp = exp
        self._log = log

    # -- code-level arithmetic -----------------------------------------------

    def _add_code(self, a: int, b: int) -> int:
        if self.n == 1:
            return (a + b) % self.q
        p, out, mul = self.p, 0, 1
        for _ in range(self.n):
            out += ((a % p + b % p) % p) * mul
            a //= p
            b //= p
            mul *= p
        return out

    def _neg_code(self, a: int) -> int:
        if self.n == 1:
            return -a % self.q
        p, out, mul = self.p, 0, 1
        for _ in range(self.n):
            out += (-(a % p) % p) * mul
            a //= p
            mul *= p
        return out

    def _mul_code(self, a: int, b: int) -> int:
        if self.n == 1:
            return a * b % self.q
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def _inv_code(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("0 has no inverse")
        if self.n == 1:
            return pow(a, -1, self.q)
        return self._exp[-self._log[a] % (self.q - 1)]

    def _is_square_code(self, a: int) -> bool:
        if a == 0:
            return True
        if self.n == 1:
            return pow(a, (self.q - 1) // 2, self.q) == 1
        return self._log[a] % 2 == 0

    def _sqrt_code(self, a: int) -> int | None:
        if self._roots is None:
            # first occurrence of each square over ascending b is its smaller root
            roots = np.full(self.q, -1, dtype=np.int64)
            values, first = np.unique(self.sq_table, return_index=True)
            roots[values] = first
            self._roots = roots
        r = int(self._roots[a])
        return None if r < 0 else r

    # -- vectorised helpers used by the geometry layer -------------------------

    def vadd(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.n == 1:
            return (a + b) % self.q
        return ((self.digit_table[a] + self.digit_table[b]) % self.p) @ self._pw

    def vsub(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.n == 1:
            return (a - b) % self.q
        return ((self.digit_table[a] - self.digit_table[b]) % self.p) @ self._pw

    def vneg(self, a: np.ndarray) -> np.ndarray:
        if self.n == 1:
            return -a % self.q
        return (-self.digit_table[a] % self.p) @ self._pw

    def vsum_rows(self, a: np.ndarray) -> np.ndarray:
        """Field sum along the last axis of an integer code array."""
        if self.n == 1:
            return a.sum(axis=-1) % self.q
        return (self.digit_table[a].sum(axis=-2) % self.p) @ self._pw

    # -- user-facing ----------------------------------------------------------

    def __call__(self, value) -> "Scalar":
        return self.element(value)

    def element(self, value) -> "Scalar":
        """Scalar from a code, a coefficient tuple (low -> high), or a Scalar."""
        if isinstance(value, Scalar):
            if value.params != self:
                raise FieldMismatch(f"element of F_{value.params.q} used in F_{self.q}")
            return value
        if isinstance(value, (tuple, list)):
            if len(value) != self.n:
                raise ValueError(f"expected {self.n} coefficients")
            return Scalar(self, self._from_digits(value))
        value = int(value)
        if self.n == 1:
            return Scalar(self, value % self.q)
        if not 0 <= value < self.q:
            raise ValueError(f"code {value} outside [0, {self.q})")
        return Scalar(self, value)

    def from_int(self, k: int) -> "Scalar":
        """Image of the integer k under Z -> F_q."""
        return Scalar(self, k % self.p)

    @property
    def zero(self) -> "Scalar":
        return Scalar(self, 0)

    @property
    def one(self) -> "Scalar":
        return Scalar(self, 1)

    def elements(self) -> list["Scalar"]:
        return [Scalar(self, c) for c in range(self.q)]

    def format_code(self, code: int) -> str:
        """Text form: decimal residue, or the p-ary numeral of length n."""
        if self.n == 1:
            return str(code)
        return "".join(str(c) for c in reversed(self._digits(code)))

    def parse_code(self, text: str) -> int:
        if self.n == 1:
            v = int(text)
            if not 0 <= v < self.q:
                raise ValueError(f"{text!r} is not a canonical residue mod {self.q}")
            return v
        if len(text) != self.n or any(not ch.isdigit() or int(ch) >= self.p for ch in text):
            raise ValueError(f"{text!r} is not a {self.n}-digit base-{self.p} string")
        return int(text, self.p)

    def __eq__(self, other):
        return isinstance(other, FieldParams) and other.q == self.q

    def __hash__(self):
        return hash(("F", self.q))

    def __reduce__(self):
        return field_new, (self.q,)

    def __repr__(self):
        return f"FieldParams(q={self.q}, p={self.p}, n={self.n})"


@functools.lru_cache(maxsize=None)
def field_new(q: int) -> FieldParams:
    """Return the (interned) field with q elements."""
    q = int(q)
    fact = _factor_prime_power(q)
    if fact is None or fact[0] == 2:
        raise NotOddPrimePower(f"{q} is not an odd prime power")
    p, n = fact
    if n == 1 and q > MAX_PRIME_Q:
        raise FieldTooLarge(f"prime fields are supported up to 2^20, got {q}")
    if n > 1 and q > MAX_EXTENSION_Q:
        raise FieldTooLarge(f"extension fields are supported up to 3^10, got {q}")
    return FieldParams(q, p, n)


class Scalar:
    """An element of F_q.  Value semantics; totally ordered by code."""

    __slots__ = ("code", "params")

    def __init__(self, params: FieldParams, code: int):
        self.params = params
        self.code = code

    @property
    def value(self):
        if self.params.n == 1:
            return self.code
        return tuple(self.params._digits(self.code))

    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.params != self.params:
                raise FieldMismatch(f"F_{self.params.q} vs F_{other.params.q}")
            return other
        if isinstance(other, int):
            return self.params.from_int(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Scalar(self.params, self.params._add_code(self.code, other.code))

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.params, self.params._neg_code(self.code))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Scalar(self.params, self.params._mul_code(self.code, other.code))

    __rmul__ = __mul__

    def inv(self) -> "Scalar":
        return Scalar(self.params, self.params._inv_code(self.code))

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        acc, base = self.params.one, self
        while e:
            if e & 1:
                acc = acc * base
            base = base * base
            e >>= 1
        return acc

    def is_square(self) -> bool:
        return self.params._is_square_code(self.code)

    def sqrt(self) -> "Scalar | None":
        r = self.params._sqrt_code(self.code)
        return None if r is None else Scalar(self.params, r)

    def __bool__(self):
        return self.code != 0

    def __int__(self):
        return self.code

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.params == other.params and self.code == other.code
        if isinstance(other, int):
            return self == self.params.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.code)

    def __lt__(self, other):
        other = self._coerce(other)
        return self.code < other.code

    def __le__(self, other):
        other = self._coerce(other)
        return self.code <= other.code

    def __gt__(self, other):
        other = self._coerce(other)
        return self.code > other.code

    def __ge__(self, other):
        other = self._coerce(other)
        return self.code >= other.code

    def __str__(self):
        return self.params.format_code(self.code)

    def __repr__(self):
        return f"Scalar({self}, q={self.params.q})"


def _same(a: Scalar, b: Scalar) -> None:
    if a.params != b.params:
        raise FieldMismatch(f"F_{a.params.q} vs F_{b.params.q}")


def add(a: Scalar, b: Scalar) -> Scalar:
    _same(a, b)
    return a + b


def sub(a: Scalar, b: Scalar) -> Scalar:
    _same(a, b)
    return a - b


def mul(a: Scalar, b: Scalar) -> Scalar:
    _same(a, b)
    return a * b


def neg(a: Scalar) -> Scalar:
    return -a


def inv(a: Scalar) -> Scalar:
    return a.inv()


def is_square(a: Scalar) -> bool:
    return a.is_square()


def sqrt(a: Scalar) -> Scalar | None:
    return a.sqrt()


def has_sqrt_minus_one(params: FieldParams) -> bool:
    return params._is_square_code(params._neg_code(1))


def as_scalar(params: FieldParams, value) -> Scalar:
    """Coerce a code/Scalar into ``params``; shared by the layers above."""
    return params.element(value)
