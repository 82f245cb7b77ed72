"""Exact arithmetic in cyclotomic fields Q(zeta_n) and quantum integers.

Elements are stored as integer numerators over a common positive
denominator, reduced modulo the n-th cyclotomic polynomial, so two
elements are equal exactly when their stored data agree.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import mpmath

DEFAULT_PRECISION = 100


class CyclotomicError(ValueError):
    pass


# --- integer polynomial helpers (lowest degree first) ---

def _poly_divmod_int(num: Sequence[int], den: Sequence[int]) -> tuple[list[int], list[int]]:
    """Exact division by a monic integer polynomial."""
    if den[-1] != 1:
        raise ValueError("divisor must be monic")
    rem = list(num)
    dq = len(rem) - len(den) + 1
    if dq <= 0:
        return [0], rem
    quot = [0] * dq
    for k in range(dq - 1, -1, -1):
        c = rem[k + len(den) - 1]
        quot[k] = c
        if c:
            for j, d in enumerate(den):
                rem[k + j] -= c * d
    rem = rem[: len(den) - 1] or [0]
    return quot, rem


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, obtained by dividing x^n - 1 by Phi_d for d | n, d < n."""
    if n < 1:
        raise ValueError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, cyclotomic_polynomial(d))
            if any(rem):
                raise ArithmeticError(f"Phi_{d} does not divide x^{n} - 1")
    return tuple(poly)


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)


class CyclotomicField:
    """The field Q(zeta_n), zeta_n = exp(2 pi i / n) under the canonical embedding."""

    _cache: dict[int, "CyclotomicField"] = {}

    def __new__(cls, n: int):
        if n in cls._cache:
            return cls._cache[n]
        self = super().__new__(cls)
        self.n = n
        self.phi = cyclotomic_polynomial(n)
        self.degree = len(self.phi) - 1
        d = self.degree
        # x^k mod Phi_n for 0 <= k < 2d - 1, as integer vectors
        table = []
        cur = [0] * d
        cur[0] = 1
        for _ in range(max(2 * d - 1, n)):
            table.append(tuple(cur))
            top = cur[-1]
            cur = [0] + cur[:-1]
            if top:
                for j in range(d):
                    cur[j] -= top * self.phi[j]
        self._powers = table
        cls._cache[n] = self
        return self

    def __repr__(self):
        return f"CyclotomicField({self.n})"

    def __reduce__(self):
        return (CyclotomicField, (self.n,))

    def zero(self) -> "CycNum":
        return CycNum(self, (0,) * self.degree, 1)

    def one(self) -> "CycNum":
        return self.integer(1)

    def integer(self, k) -> "CycNum":
        return self.rational(k)

    def rational(self, x) -> "CycNum":
        x = Fraction(x)
        return CycNum(self, (x.numerator,) + (0,) * (self.degree - 1), x.denominator)

    def zeta(self, k: int = 1) -> "CycNum":
        """zeta_n ** k for any integer k."""
        return CycNum(self, self._powers[k % self.n], 1)

    def from_coeffs(self, coeffs: Sequence) -> "CycNum":
        """Element sum coeffs[k] * zeta^k; coeffs may be longer than the degree."""
        fr = [Fraction(c) for c in coeffs]
        den = 1
        for c in fr:
            den = den * c.denominator // math.gcd(den, c.denominator)
        return CycNum(self, self._reduce([int(c * den) for c in fr]), den)

    def _reduce(self, vec: Sequence[int]) -> tuple[int, ...]:
        d = self.degree
        out = list(vec[:d]) + [0] * max(0, d - len(vec))
        for k in range(d, len(vec)):
            c = vec[k]
            if c:
                row = self._powers[k] if k < len(self._powers) else self._power_row(k)
                for j in range(d):
                    out[j] += c * row[j]
        return tuple(out)

    def _power_row(self, k: int) -> tuple[int, ...]:
        return self._powers[k % self.n]

    @lru_cache(maxsize=None)
    def _zeta_powers(self, dps: int):
        with mpmath.workdps(dps + 10):
            z = mpmath.expjpi(mpmath.mpf(2) / self.n)
            out = [mpmath.mpc(1)]
            for _ in range(1, self.degree):
                out.append(out[-1] * z)
        return tuple(out)


class CycNum:
    """Exact element of Q(zeta_n): (num[0] + num[1] zeta + ...) / den."""

    __slots__ = ("field", "_num", "_den", "_hash")

    def __init__(self, field: CyclotomicField, num: Sequence[int], den: int = 1):
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        if den < 0:
            num, den = [-c for c in num], -den
        g = den
        for c in num:
            if g == 1:
                break
            g = math.gcd(g, c)
        if g > 1:
            num = [c // g for c in num]
            den //= g
        self.field = field
        self._num = tuple(num)
        self._den = den
        self._hash = None

    # --- accessors ---

    @property
    def order(self) -> int:
        return self.field.n

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self._den) for c in self._num)

    def is_zero(self) -> bool:
        return not any(self._num)

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other) -> "CycNum":
        if isinstance(other, CycNum):
            if other.field is not self.field:
                raise CyclotomicError(
                    f"order mismatch: Q(zeta_{self.field.n}) vs Q(zeta_{other.field.n})")
            return other
        if isinstance(other, (int, Fraction)):
            return self.field.rational(other)
        return NotImplemented

    # --- field operations ---

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        a, b = self._den, other._den
        return CycNum(self.field, [x * b + y * a for x, y in zip(self._num, other._num)], a * b)

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.field, [-x for x in self._num], self._den)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycNum(self.field, [x * other.numerator for x in self._num],
                          self._den * other.denominator)
        other = self._check(other)
        if other is NotImplemented:
            return other
        d = self.field.degree
        a, b = self._num, other._num
        prod = [0] * (2 * d - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return CycNum(self.field, self.field._reduce(prod), self._den * other._den)

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Inverse via the extended Euclidean algorithm against Phi_n."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in cyclotomic field")
        # invariant: s * self == r  (mod Phi)
        r0 = [Fraction(c) for c in self.field.phi]
        r1 = [Fraction(c, self._den) for c in self._num]
        s0: list[Fraction] = [Fraction(0)]
        s1: list[Fraction] = [Fraction(1)]
        r1 = _trim(r1)
        while len(r1) > 1:
            q, rem = _fdivmod(r0, r1)
            r0, r1 = r1, _trim(rem)
            s0, s1 = s1, _trim(_fsub(s0, _fmul(q, s1)))
        c = r1[0]
        return self.field.from_coeffs([x / c for x in s1])

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        other = self._check(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # --- comparison ---

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.field.rational(other)
        if not isinstance(other, CycNum):
            return NotImplemented
        return self.field is other.field and self._num == other._num and self._den == other._den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field.n, self._num, self._den))
        return self._hash

    def __repr__(self):
        return f"CycNum({self.field.n}, {format_cyc(self)})"

    def __str__(self):
        return format_cyc(self)

    # --- conversions ---

    def conjugate_power(self, k: int) -> "CycNum":
        """Image under zeta -> zeta^k (a Galois automorphism when gcd(k, n) = 1)."""
        out = self.field.zero()
        terms = [self.field.zeta(j * k) * c for j, c in enumerate(self.coeffs) if c]
        for t in terms:
            out = out + t
        return out

    def embed(self, precision: int = DEFAULT_PRECISION):
        """Complex value under zeta_n -> exp(2 pi i / n), to `precision` digits."""
        zs = self.field._zeta_powers(precision)
        with mpmath.workdps(precision + 10):
            acc = mpmath.mpc(0)
            for c, z in zip(self._num, zs):
                if c:
                    acc += c * z
            return acc / self._den

    def real_sign(self, precision: int = DEFAULT_PRECISION) -> int:
        """Sign of the real part of the embedding; 0 only for the exact zero."""
        if self.is_zero():
            return 0
        v = self.embed(precision).real
        if abs(v) < mpmath.mpf(10) ** (-(precision // 2)):
            raise CyclotomicError("cannot determine sign: embedding too close to zero")
        return 1 if v > 0 else -1


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _fmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _fsub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _fdivmod(a, b):
    a = list(a)
    db = len(b) - 1
    if len(a) - 1 < db:
        return [Fraction(0)], a
    q = [Fraction(0)] * (len(a) - db)
    lead = b[-1]
    for k in range(len(a) - 1 - db, -1, -1):
        c = a[k + db] / lead
        q[k] = c
        if c:
            for j, y in enumerate(b):
                a[k + j] -= c * y
    return q, a[:db] or [Fraction(0)]


def format_cyc(a: CycNum, var: str = "z") -> str:
    terms = []
    for k, c in enumerate(a.coeffs):
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if k == 0:
            s = str(c)
        elif c == 1:
            s = mono
        elif c == -1:
            s = "-" + mono
        else:
            s = f"{c}*{mono}" if c.denominator == 1 else f"({c})*{mono}"
        terms.append(s)
    if not terms:
        return "0"
    return " + ".join(terms).replace("+ -", "- ")


def is_rational_integer(a: CycNum) -> Optional[int]:
    if a._den != 1 or any(a._num[1:]):
        return None
    return a._num[0]


def is_rational(a: CycNum) -> Optional[Fraction]:
    if any(a._num[1:]):
        return None
    return Fraction(a._num[0], a._den)


# --- quantum integers ---



class QContext:
    """Choice of q = zeta_{2r}^m for the order-r quantities.

    q must not be +-1 and q^2 must be a primitive r-th root of unity.
    """

    def __init__(self, r: int, m: int = 1, precision: int = DEFAULT_PRECISION):
        if r < 2:
            raise CyclotomicError(f"r must be >= 2, got {r}")
        if not 1 <= m <= 2 * r - 1:
            raise CyclotomicError(f"m must lie in 1..{2 * r - 1}, got {m}")
        if m == r:
            raise CyclotomicError(f"q = -1 (m = r = {r})")
        # zeta_{2r}^{2m} = zeta_r^m has order r / gcd(m, r)
        if r // math.gcd(m, r) != r:
            raise CyclotomicError(
                f"q^2 is not a primitive root of unity of degree {r} "
                f"(m = {m} shares the factor {math.gcd(m, r)} with r)")
        if precision < 50:
            raise CyclotomicError(f"precision must be >= 50 digits, got {precision}")
        self.r = r
        self.m = m
        self.precision = precision
        self.field = CyclotomicField(2 * r)
        self._qint_cache: dict[int, CycNum] = {}
        self._qfact_cache: dict[int, CycNum] = {0: self.field.one()}

    def __repr__(self):
        return f"QContext(r={self.r}, m={self.m}, precision={self.precision})"

    def __eq__(self, other):
        return isinstance(other, QContext) and (self.r, self.m, self.precision) == (
            other.r, other.m, other.precision)

    def __hash__(self):
        return hash((self.r, self.m, self.precision))

    def __getstate__(self):
        return (self.r, self.m, self.precision)

    def __setstate__(self, state):
        self.__init__(*state)

    @property
    def slots(self) -> int:
        return self.field.degree

    @property
    def q(self) -> CycNum:
        return self.field.zeta(self.m)

    @property
    def tolerance(self):
        return mpmath.mpf(10) ** (-(self.precision // 2))

    def qint(self, n: int) -> CycNum:
        if n < 0:
            raise CyclotomicError("quantum integer index must be >= 0")
        v = self._qint_cache.get(n)
        if v is None:
            v = qint_at(self.field, self.m, n)
            self._qint_cache[n] = v
        return v

    def qfact(self, n: int) -> CycNum:
        if n < 0:
            raise CyclotomicError("quantum factorial index must be >= 0")
        top = max(self._qfact_cache)
        while top < n:
            self._qfact_cache[top + 1] = self._qfact_cache[top] * self.qint(top + 1)
            top += 1
        return self._qfact_cache[n]

    def embed(self, a: CycNum):
        return a.embed(self.precision)


def qint_at(field: CyclotomicField, m: int, n: int) -> CycNum:
    """[n] = q^(n-1) + q^(n-3) + ... + q^-(n-1) with q = zeta^m (no validity check)."""
    if n <= 0:
        return field.zero()
    vec = [0] * field.n
    for j in range(n):
        vec[(m * (n - 1 - 2 * j)) % field.n] += 1
    return CycNum(field, field._reduce(vec), 1)


def cyc_context(r: int, m: int = 1, precision: int = DEFAULT_PRECISION) -> QContext:
    return QContext(r, m, precision)


def valid_selectors(r: int) -> list[int]:
    """All m in 1..2r-1 accepted by QContext for this r."""
    return [m for m in range(1, 2 * r) if m != r and math.gcd(m, r) == 1]


def qint(ctx: QContext, n: int) -> CycNum:
    return ctx.qint(n)


def qfact(ctx: QContext, n: int) -> CycNum:
    return ctx.qfact(n)


def embed(ctx: QContext, a: CycNum):
    return ctx.embed(a)


def cyc_add(a: CycNum, b: CycNum) -> CycNum:
    return a + b


def cyc_mul(a: CycNum, b: CycNum) -> CycNum:
    return a * b


def cyc_neg(a: CycNum) -> CycNum:
    return -a


def cyc_inv(a: CycNum) -> CycNum:
    return a.inverse()
