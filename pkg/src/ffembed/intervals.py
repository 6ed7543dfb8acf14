"""Closed intervals with rational endpoints and outward rounding.

Only roots and logarithms round; everything else is exact ``Fraction``
arithmetic.  Rounded endpoints live on the grid ``2**-bits``.
"""

from __future__ import annotations

import functools
from fractions import Fraction
from numbers import Rational

DEFAULT_BITS = 64


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"exact rational expected, got {type(x).__name__}")


def iroot(x: int, b: int) -> int:
    """floor(x ** (1/b)) for integers x >= 0, b >= 1."""
    if x < 0:
        raise ValueError("negative radicand")
    if x < 2 or b == 1:
        return x
    r = 1 << ((x.bit_length() + b - 1) // b)
    while True:
        s = ((b - 1) * r + x // r ** (b - 1)) // b
        if s >= r:
            break
        r = s
    while r**b > x:
        r -= 1
    while (r + 1) ** b <= x:
        r += 1
    return r


def _floor_grid(x: Fraction, bits: int) -> Fraction:
    return Fraction((x.numerator << bits) // x.denominator, 1 << bits)


def _ceil_grid(x: Fraction, bits: int) -> Fraction:
    return Fraction(-((-x.numerator << bits) // x.denominator), 1 << bits)


def _root_bounds(x: Fraction, b: int, bits: int) -> tuple[Fraction, Fraction]:
    if x < 0:
        raise ValueError("root of a negative number")
    rn, rd = iroot(x.numerator, b), iroot(x.denominator, b)
    if rn**b == x.numerator and rd**b == x.denominator:
        r = Fraction(rn, rd)
        return r, r
    scale = 1 << (bits * b)
    lo_int = iroot(x.numerator * scale // x.denominator, b)
    hi_int = iroot(-(-x.numerator * scale // x.denominator), b) + 1
    return Fraction(lo_int, 1 << bits), Fraction(hi_int, 1 << bits)


def _atanh_bounds(z: Fraction, bits: int) -> tuple[Fraction, Fraction]:
    """Bounds on atanh(z) for 0 <= z <= 1/3 from the odd power series."""
    if z == 0:
        return Fraction(0), Fraction(0)
    target = Fraction(1, 1 << (bits + 4))
    total = Fraction(0)
    z2 = z * z
    term = z
    j = 0
    while True:
        total += term / (2 * j + 1)
        term *= z2
        j += 1
        tail = term / ((2 * j + 1) * (1 - z2))
        if tail < target:
            break
    return _floor_grid(total, bits), _ceil_grid(total + tail, bits)


@functools.lru_cache(maxsize=None)
def _ln2_bounds(bits: int) -> tuple[Fraction, Fraction]:
    lo, hi = _atanh_bounds(Fraction(1, 3), bits + 2)
    return _floor_grid(2 * lo, bits), _ceil_grid(2 * hi, bits)


class Interval:
    """A closed interval [lo, hi] of reals with exact rational endpoints."""

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi=None):
        lo = _frac(lo)
        hi = lo if hi is None else _frac(hi)
        if lo > hi:
            raise ValueError(f"empty interval [{lo}, {hi}]")
        self.lo = lo
        self.hi = hi

    # -- constructors ---------------------------------------------------------

    @classmethod
    def coerce(cls, x) -> "Interval":
        return x if isinstance(x, Interval) else cls(x)

    @classmethod
    def root(cls, x, b: int, bits: int = DEFAULT_BITS) -> "Interval":
        return cls(*_root_bounds(_frac(x), b, bits))

    @classmethod
    def sqrt(cls, x, bits: int = DEFAULT_BITS) -> "Interval":
        return cls.root(x, 2, bits)

    @classmethod
    def ln2(cls, bits: int = DEFAULT_BITS) -> "Interval":
        return cls(*_ln2_bounds(bits))

    @classmethod
    def ln(cls, x, bits: int = DEFAULT_BITS) -> "Interval":
        """Natural log of a positive rational, via ln x = k ln 2 + 2 atanh(z)."""
        x = _frac(x)
        if x <= 0:
            raise ValueError("log of a non-positive number")
        if x == 1:
            return cls(0)
        k = x.numerator.bit_length() - x.denominator.bit_length()
        y = x / Fraction(2) ** k
        while y >= 2:
            y /= 2
            k += 1
        while y < 1:
            y *= 2
            k -= 1
        z = (y - 1) / (y + 1)
        zlo, zhi = _atanh_bounds(z, bits + 4)
        ln_y = cls(2 * zlo, 2 * zhi)
        out = ln_y + cls.ln2(bits + 4) * k
        return cls(_floor_grid(out.lo, bits), _ceil_grid(out.hi, bits))

    @classmethod
    def power(cls, base, exponent, bits: int = DEFAULT_BITS) -> "Interval":
        """base ** exponent for base >= 0 and a rational exponent."""
        return cls.coerce(base).pow(exponent, bits)

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        other = Interval.coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi)

    __radd__ = __add__

    def __neg__(self):
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other):
        return self + (-Interval.coerce(other))

    def __rsub__(self, other):
        return Interval.coerce(other) - self

    def __mul__(self, other):
        other = Interval.coerce(other)
        products = (self.lo * other.lo, self.lo * other.hi, self.hi * other.lo, self.hi * other.hi)
        return Interval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "Interval":
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other):
        return self * Interval.coerce(other).reciprocal()

    def __rtruediv__(self, other):
        return Interval.coerce(other) * self.reciprocal()

    def pow(self, exponent, bits: int = DEFAULT_BITS) -> "Interval":
        e = _frac(exponent)
        if e.denominator == 1:
            return self._ipow(e.numerator)
        if self.lo < 0:
            raise ValueError("fractional power of a possibly negative interval")
        a, b = e.numerator, e.denominator
        if a < 0 and self.lo == 0:
            raise ZeroDivisionError("negative power of an interval touching zero")
        if a >= 0:
            lo_src, hi_src = self.lo**a, self.hi**a
        else:
            lo_src, hi_src = self.hi**a, self.lo**a
        return Interval(_root_bounds(lo_src, b, bits)[0], _root_bounds(hi_src, b, bits)[1])

    def _ipow(self, k: int) -> "Interval":
        if k < 0:
            return self._ipow(-k).reciprocal()
        if k == 0:
            return Interval(1)
        a, b = self.lo**k, self.hi**k
        if k % 2 == 1 or self.lo >= 0:
            return Interval(min(a, b), max(a, b))
        if self.hi <= 0:
            return Interval(b, a)
        return Interval(0, max(a, b))

    def __pow__(self, k):
        return self.pow(k)

    # -- comparison (three-valued) --------------------------------------------

    def certainly_ge(self, other) -> bool:
        return self.lo >= Interval.coerce(other).hi

    def certainly_gt(self, other) -> bool:
        return self.lo > Interval.coerce(other).hi

    def certainly_le(self, other) -> bool:
        return self.hi <= Interval.coerce(other).lo

    def certainly_lt(self, other) -> bool:
        return self.hi < Interval.coerce(other).lo

    @property
    def exact(self) -> bool:
        return self.lo == self.hi

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= _frac(x) <= self.hi

    def __eq__(self, other):
        return isinstance(other, Interval) and self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __float__(self):
        return float(self.mid)

    def __repr__(self):
        return f"Interval({self.lo}, {self.hi})"

    def __str__(self):
        if self.exact:
            return f"[{self.lo}]"
        return f"[{self.lo}, {self.hi}]"

    def as_strings(self) -> list[str]:
        return [str(self.lo), str(self.hi)]


# --- lazily evaluated reals --------------------------------------------------------

BITS_SCHEDULE = (64, 192, 640)


class Undecided(ArithmeticError):
    """A comparison could not be settled at the finest precision tried."""


class Real:
    """A real number given by a rule ``bits -> Interval``.

    Expressions are built with the usual operators and only evaluated when a
    decision is needed; comparisons retry at increasing precision.  Values of
    the form c * r^(1/n) (c, r rational, r > 0) also carry that exact form,
    so that equalities such as q^(1/2) * q^(3/2) = q^2 are decided exactly.
    """

    __slots__ = ("_rule", "_memo", "form")

    def __init__(self, rule, form: tuple[Fraction, Fraction, int] | None = None):
        self._rule = rule
        self._memo: dict[int, Interval] = {}
        self.form = form

    @classmethod
    def of(cls, x) -> "Real":
        if isinstance(x, Real):
            return x
        if isinstance(x, Interval):
            if x.exact:
                return cls.of(x.lo)
            return cls(lambda bits: x)
        v = _frac(x)
        iv = Interval(v)
        return cls(lambda bits: iv, (v, Fraction(1), 1))

    @classmethod
    def ln(cls, x) -> "Real":
        x = cls.of(x)
        return cls(lambda bits: _ln_interval(x.at(bits), bits))

    @classmethod
    def ln2(cls) -> "Real":
        return cls(Interval.ln2)

    def at(self, bits: int = DEFAULT_BITS) -> Interval:
        if bits not in self._memo:
            self._memo[bits] = self._rule(bits)
        return self._memo[bits]

    def _lift(self, other, op, form_op) -> "Real":
        other = Real.of(other)
        form = None
        if self.form is not None and other.form is not None:
            form = form_op(self.form, other.form)
        return Real(lambda bits: op(self.at(bits), other.at(bits)), form)

    def __add__(self, other):
        return self._lift(other, lambda a, b: a + b, _form_add)

    def __radd__(self, other):
        return Real.of(other) + self

    def __sub__(self, other):
        return self + (-Real.of(other))

    def __rsub__(self, other):
        return Real.of(other) - self

    def __mul__(self, other):
        return self._lift(other, lambda a, b: a * b, _form_mul)

    def __rmul__(self, other):
        return Real.of(other) * self

    def __truediv__(self, other):
        other = Real.of(other)
        return self._lift(other, lambda a, b: a / b, lambda f, g: _form_mul(f, _form_inv(g)))

    def __rtruediv__(self, other):
        return Real.of(other) / self

    def __neg__(self):
        form = None if self.form is None else (-self.form[0], self.form[1], self.form[2])
        return Real(lambda bits: -self.at(bits), form)

    def __pow__(self, exponent):
        e = _frac(exponent)
        return Real(lambda bits: self.at(bits).pow(e, bits), _form_pow(self.form, e))

    def compare(self, other) -> int:
        """-1, 0 or 1 as self <, =, > other."""
        other = Real.of(other)
        if self.form is not None and other.form is not None:
            return _form_compare(self.form, other.form)
        for bits in BITS_SCHEDULE:
            a, b = self.at(bits), other.at(bits)
            if a.hi < b.lo:
                return -1
            if a.lo > b.hi:
                return 1
            if a.exact and b.exact:
                return 0
        raise Undecided("comparison unresolved at the finest precision")

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def __eq__(self, other):
        return self.compare(other) == 0

    __hash__ = None

    @property
    def rational(self) -> Fraction | None:
        """The exact value when it is rational, else None."""
        if self.form is not None and (self.form[2] == 1 or self.form[1] == 1 or self.form[0] == 0):
            c, r, n = self.form
            return c * r if n == 1 else c
        iv = self.at(DEFAULT_BITS)
        return iv.lo if iv.exact else None

    def floor(self) -> int:
        exact = self.rational
        if exact is not None:
            return _floor(exact)
        for bits in BITS_SCHEDULE:
            iv = self.at(bits)
            lo, hi = _floor(iv.lo), _floor(iv.hi)
            if lo == hi:
                return lo
        raise Undecided("floor unresolved at the finest precision")

    def ceil(self) -> int:
        return -(-self).floor()

    def interval(self, bits: int = DEFAULT_BITS) -> Interval:
        return self.at(bits)

    def __float__(self):
        return float(self.at(DEFAULT_BITS))

    def __repr__(self):
        return f"Real({self.at(DEFAULT_BITS)})"

    def __str__(self):
        """Exact text when known (``3/2``, ``2*13^(1/2)``), else the enclosure."""
        exact = self.rational
        if exact is not None:
            return str(exact)
        if self.form is not None:
            c, r, n = _form_normal(*self.form)
            if r == 1:
                return str(c)
            root = f"{r}^(1/{n})"
            return root if c == 1 else f"{c}*{root}"
        return str(self.at(DEFAULT_BITS))


# exact forms (c, r, n) meaning c * r^(1/n) with r > 0


def _form_normal(c: Fraction, r: Fraction, n: int) -> tuple[Fraction, int, int]:
    """Rewrite c * r^(1/n) with an integer radicand free of n-th powers (small radicands only)."""
    c, r = Fraction(c), Fraction(r)
    c /= r.denominator
    N = r.numerator * r.denominator ** (n - 1)
    if N > 10**12:
        return c, N, n
    p, rest = 2, N
    while p * p <= rest:
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e >= n:
            c *= p ** (e // n)
            N //= p ** (n * (e // n))
        p += 1
    return c, N, n


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _form_mul(f, g):
    (c1, r1, n1), (c2, r2, n2) = f, g
    L = _lcm(n1, n2)
    return (c1 * c2, r1 ** (L // n1) * r2 ** (L // n2), L)


def _form_inv(f):
    c, r, n = f
    if c == 0:
        return None
    return (1 / c, 1 / r, n)


def _form_add(f, g):
    if f is None or g is None:
        return None
    (c1, r1, n1), (c2, r2, n2) = f, g
    if c1 == 0:
        return g
    if c2 == 0:
        return f
    if n1 == 1 and n2 == 1:
        return (c1 * r1 + c2 * r2, Fraction(1), 1)
    if (r1, n1) == (r2, n2):
        return (c1 + c2, r1, n1)
    return None


def _form_pow(f, e: Fraction):
    if f is None:
        return None
    c, r, n = f
    a, b = e.numerator, e.denominator
    if b == 1:
        if c == 0 and a < 0:
            return None
        return (c**a, r**a, n)
    if c <= 0:
        return None if c < 0 else (Fraction(0), Fraction(1), 1)
    base = c**n * r
    return (Fraction(1), base**a, n * b)


def _form_sign(f) -> int:
    return (f[0] > 0) - (f[0] < 0)


def _form_compare(f, g) -> int:
    sf, sg = _form_sign(f), _form_sign(g)
    if sf != sg or sf == 0:
        return (sf > sg) - (sf < sg)
    (c1, r1, n1), (c2, r2, n2) = f, g
    L = _lcm(n1, n2)
    a = abs(c1) ** L * r1 ** (L // n1)
    b = abs(c2) ** L * r2 ** (L // n2)
    mag = (a > b) - (a < b)
    return mag if sf > 0 else -mag


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def _ln_interval(x: Interval, bits: int) -> Interval:
    if x.lo <= 0:
        raise ValueError("log of a possibly non-positive number")
    return Interval(Interval.ln(x.lo, bits).lo, Interval.ln(x.hi, bits).hi)
