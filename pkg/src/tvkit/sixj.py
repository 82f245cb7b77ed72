"""Admissibility and exact evaluation of quantum 6j-symbols.

A 6j value is kept as ``i**phase * sqrt(radicand) * factor`` with the
radicand a positive real element of the cyclotomic field and the factor
an exact element. Square roots are taken per Delta-coefficient: when a
Delta radicand embeds to a negative number, its root is ``i * sqrt(-R)``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from typing import Iterable

import mpmath

from .cyclotomic import CycNum, QContext


class SixJError(ValueError):
    pass


@dataclass(frozen=True)
class RadicalValue:
    phase: int  # exponent of i, taken mod 4
    radicand: CycNum
    factor: CycNum

    def __post_init__(self):
        if self.factor.is_zero():
            object.__setattr__(self, "phase", 0)
            object.__setattr__(self, "radicand", self.factor.field.one())
        else:
            object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def zero(cls, field) -> "RadicalValue":
        return cls(0, field.one(), field.zero())

    @classmethod
    def one(cls, field) -> "RadicalValue":
        return cls(0, field.one(), field.one())

    def is_zero(self) -> bool:
        return self.factor.is_zero()

    def __mul__(self, other: "RadicalValue") -> "RadicalValue":
        return radical_mul(self, other)

    def squared(self) -> CycNum:
        sign = -1 if self.phase % 2 else 1
        return self.radicand * (self.factor * self.factor) * sign

    def embed(self, precision: int):
        return _embed(self, precision)

    def __str__(self):
        if self.is_zero():
            return "0"
        ph = ["", "i*", "-", "-i*"][self.phase]
        return f"{ph}sqrt({self.radicand}) * ({self.factor})"


def radical_mul(a: RadicalValue, b: RadicalValue) -> RadicalValue:
    if a.is_zero() or b.is_zero():
        return RadicalValue.zero(a.factor.field)
    return RadicalValue(a.phase + b.phase, a.radicand * b.radicand, a.factor * b.factor)


def _embed(a: RadicalValue, precision: int):
    if a.is_zero():
        return mpmath.mpc(0)
    with mpmath.workdps(precision + 10):
        rad = a.radicand.embed(precision)
        tol = mpmath.mpf(10) ** (-(precision // 2))
        if rad.real < -tol or abs(rad.imag) > tol:
            raise SixJError(f"radicand {mpmath.nstr(rad, 15)} is not a nonnegative real")
        root = mpmath.sqrt(max(rad.real, mpmath.mpf(0)))
        return (1j) ** a.phase * root * a.factor.embed(precision)


def radical_embed(ctx: QContext, a: RadicalValue):
    return _embed(a, ctx.precision)


# --- colours and admissibility ---

def _check_colours(r: int, colours: Iterable[int]) -> None:
    for c in colours:
        if not 0 <= c <= r - 2:
            raise SixJError(f"colour {c} outside C_{r} = {{0..{r - 2}}}")


def is_admissible(r: int, x: int, y: int, z: int) -> bool:
    return (x + y >= z and y + z >= x and z + x >= y
            and (x + y + z) % 2 == 0 and x + y + z <= 2 * r - 4)


def admissible(ctx: QContext | int, triple) -> bool:
    r = ctx if isinstance(ctx, int) else ctx.r
    _check_colours(r, triple)
    return is_admissible(r, *triple)


def face_triples(i, j, k, l, m, n):
    """The four colour triples of a 6j symbol, one per face of the tetrahedron."""
    return ((i, j, k), (k, l, m), (m, n, i), (j, l, n))


# columns (i,l), (j,m), (k,n) are opposite edge pairs; permuting columns and
# swapping top/bottom in an even number of columns gives the 24 symmetries
_SWAPS = ((0, 0, 0), (1, 1, 0), (1, 0, 1), (0, 1, 1))


def tetrahedral_orbit(key) -> set[tuple[int, ...]]:
    i, j, k, l, m, n = key
    cols = ((i, l), (j, m), (k, n))
    out = set()
    for perm in itertools.permutations(cols):
        for sw in _SWAPS:
            c = [(b, a) if s else (a, b) for (a, b), s in zip(perm, sw)]
            out.add((c[0][0], c[1][0], c[2][0], c[0][1], c[1][1], c[2][1]))
    return out


_canon_cache: dict[tuple, tuple] = {}


def canonical_key(key) -> tuple[int, ...]:
    key = tuple(key)
    c = _canon_cache.get(key)
    if c is None:
        c = min(tetrahedral_orbit(key))
        _canon_cache[key] = c
    return c


# --- Delta and the 6j sum ---

def _delta_exponents(a: int, b: int, c: int) -> Counter:
    """Exponents e_n with Delta(a,b,c)^2 = prod [n]^e_n."""
    e = Counter()
    for x in ((a + b - c) // 2, (b + c - a) // 2, (c + a - b) // 2):
        for n in range(2, x + 1):
            e[n] += 1
    for n in range(2, (a + b + c) // 2 + 2):
        e[n] -= 1
    return e


def _qint_sign(ctx: QContext, n: int) -> int:
    cache = ctx.__dict__.setdefault("_sign_cache", {})
    s = cache.get(n)
    if s is None:
        s = ctx.qint(n).real_sign(ctx.precision)
        cache[n] = s
    return s


def _abs_qint(ctx: QContext, n: int) -> CycNum:
    q = ctx.qint(n)
    return q if _qint_sign(ctx, n) > 0 else -q


def _inv_qfact(ctx: QContext, n: int) -> CycNum:
    cache = ctx.__dict__.setdefault("_inv_fact_cache", {})
    v = cache.get(n)
    if v is None:
        f = ctx.qfact(n)
        if f.is_zero():
            raise SixJError(f"internal error: [{n}]! vanishes in a denominator")
        v = f.inverse()
        cache[n] = v
    return v


def delta(ctx: QContext, i: int, j: int, k: int, flip: bool = False) -> RadicalValue:
    """Delta(i,j,k) as a radical with positive radicand.

    With ``flip`` the root of every triple other than (0,0,0) changes sign.
    """
    _check_colours(ctx.r, (i, j, k))
    if not is_admissible(ctx.r, i, j, k):
        raise SixJError(f"inadmissible triple {(i, j, k)}")
    rad = (ctx.qfact((i + j - k) // 2) * ctx.qfact((j + k - i) // 2)
           * ctx.qfact((k + i - j) // 2) * _inv_qfact(ctx, (i + j + k) // 2 + 1))
    phase = 0
    if rad.real_sign(ctx.precision) < 0:
        rad = -rad
        phase = 1
    if flip and (i, j, k) != (0, 0, 0):
        phase += 2
    return RadicalValue(phase, rad, ctx.field.one())


def _factor_sum(ctx: QContext, i, j, k, l, m, n) -> CycNum:
    tri = ((i + j + k) // 2, (i + m + n) // 2, (j + l + n) // 2, (k + l + m) // 2)
    quad = ((i + j + l + m) // 2, (i + k + l + n) // 2, (j + k + m + n) // 2)
    lo, hi = max(tri), min(quad)
    total = ctx.field.zero()
    for z in range(lo, hi + 1):
        num = ctx.qfact(z + 1)
        if num.is_zero():
            continue
        term = num
        for t in tri:
            term = term * _inv_qfact(ctx, z - t)
        for u in quad:
            term = term * _inv_qfact(ctx, u - z)
        total = total - term if z % 2 else total + term
    return total


def _sixj_raw(ctx: QContext, key, flip: bool) -> RadicalValue:
    i, j, k, l, m, n = key
    field = ctx.field
    triples = face_triples(*key)
    if not all(is_admissible(ctx.r, *t) for t in triples):
        return RadicalValue.zero(field)
    factor = _factor_sum(ctx, *key)
    if factor.is_zero():
        return RadicalValue.zero(field)
    # product of the four Delta roots, squares pulled out of the radical
    phase = sum(key)
    exps = Counter()
    for t in triples:
        e = _delta_exponents(*t)
        sign = 1
        for q, x in e.items():
            if x % 2 and _qint_sign(ctx, q) < 0:
                sign = -sign
        if sign < 0:
            phase += 1
        if flip and t != (0, 0, 0):
            phase += 2
        exps.update(e)
    radicand = field.one()
    for q, x in sorted(exps.items()):
        if not x:
            continue
        a = _abs_qint(ctx, q)
        half, odd = divmod(x, 2)
        if half:
            factor = factor * a ** half
        if odd:
            radicand = radicand * a
    return RadicalValue(phase, radicand, factor)


def sixj(ctx: QContext, i, j, k, l, m, n, flip: bool = False, memo: bool = True) -> RadicalValue:
    """The 6j symbol <i j k | l m n> at the context's q.

    Zero when one of the triples (i,j,k), (k,l,m), (m,n,i), (j,l,n) is
    inadmissible.
    """
    key = (i, j, k, l, m, n)
    _check_colours(ctx.r, key)
    if not memo:
        return _sixj_raw(ctx, key, flip)
    cache = ctx.__dict__.setdefault("_sixj_cache", {})
    ck = (canonical_key(key), flip)
    v = cache.get(ck)
    if v is None:
        v = _sixj_raw(ctx, ck[0], flip)
        cache[ck] = v
    return v


def sixj_squared_exact(ctx: QContext, i, j, k, l, m, n) -> CycNum:
    return sixj(ctx, i, j, k, l, m, n).squared()


def inadmissible_triples(r: int, key) -> list[tuple[int, int, int]]:
    return [t for t in face_triples(*key) if not is_admissible(r, *t)]
