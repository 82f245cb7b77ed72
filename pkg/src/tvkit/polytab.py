"""Integer polynomials whose roots are the distinct values of [3]_r."""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .cyclotomic import DEFAULT_PRECISION, CyclotomicField, QContext, is_rational_integer, qint_at, valid_selectors


class PolyError(ValueError):
    pass


@dataclass(frozen=True)
class IntPoly:
    coeffs: tuple  # lowest degree first

    def __post_init__(self):
        c = list(self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c) or (0,))

    @property
    def degree(self) -> int:
        return -1 if self.coeffs == (0,) else len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __neg__(self):
        return IntPoly(tuple(-c for c in self.coeffs))

    def __str__(self):
        return format_poly(self.coeffs)

    def derivative(self) -> "IntPoly":
        return IntPoly(tuple(k * c for k, c in enumerate(self.coeffs))[1:] or (0,))

    def roots(self, precision: int = DEFAULT_PRECISION):
        with mpmath.workdps(precision + 20):
            return mpmath.polyroots(list(reversed(self.coeffs)), maxsteps=400,
                                    extraprec=2 * precision)


def format_poly(coeffs, var: str = "x") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        body = str(mag) if k == 0 else (mono if mag == 1 else f"{mag}{mono}")
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


T_POLY = IntPoly((1, -1, -2, 1))

# published rows, transcribed as printed: invariant order -> coefficients, lowest degree first
REFERENCE_ROWS = {
    3: (-1, -1, 1),
    4: (1, -1, -2, 1),
    5: (0, 3, 0, -3, 1),
    6: (-1, -2, 5, 2, -4, 1),
    7: (1, -2, -7, 6, 5, -5, 1),
    8: (0, 5, 0, -15, 5, 9, -6, 1),
    9: (-1, -3, 12, 9, -25, 1, 14, -7, 1),
    10: (1, -3, -15, 18, 29, -35, -7, 20, -8, 1),
    11: (0, 7, 0, -42, 14, 63, -42, -20, 27, -9, 1),
}


@dataclass
class THPolynomial:
    r: int
    poly: IntPoly
    values: list  # distinct [3]_r as CycNum
    multiplicity: dict  # value index -> number of selectors m giving it
    squarefree: bool

    @property
    def order(self) -> int:
        return (self.r + 1) // 2


def _poly_mul_linear(coeffs, root):
    """(sum c_k x^k) * (x - root) with coefficients in the cyclotomic field."""
    zero = root.field.zero()
    padded = [zero] + list(coeffs)
    return [padded[k] - (coeffs[k] * root if k < len(coeffs) else zero)
            for k in range(len(padded))]


def th_polynomial_report(r: int) -> THPolynomial:
    if r % 2 == 0 or r < 5:
        raise PolyError(f"r must be odd and >= 5, got {r}")
    field = CyclotomicField(2 * r)
    values, mult = [], {}
    # every q != +-1 among the 2r-th roots of unity
    for m in range(1, 2 * r):
        if m == r:
            continue
        v = qint_at(field, m, 3)
        for idx, w in enumerate(values):
            if w == v:
                mult[idx] += 1
                break
        else:
            mult[len(values)] = 1
            values.append(v)
    coeffs = [field.one()]
    for v in values:
        coeffs = _poly_mul_linear(coeffs, v)
    ints = []
    for c in coeffs:
        n = is_rational_integer(c)
        if n is None:
            raise PolyError(f"internal error: coefficient {c} is not a rational integer (r={r})")
        ints.append(n)
    poly = IntPoly(tuple(ints))
    if poly.degree != (r - 1) // 2:
        raise PolyError(f"internal error: degree {poly.degree} != {(r - 1) // 2}")
    return THPolynomial(r, poly, values, mult, _squarefree(poly))


def th_polynomial(r: int) -> IntPoly:
    return th_polynomial_report(r).poly


def _squarefree(p: IntPoly) -> bool:
    from fractions import Fraction
    a = [Fraction(c) for c in p.coeffs]
    b = [Fraction(c) for c in p.derivative().coeffs]
    while any(b):
        while b and b[-1] == 0:
            b.pop()
        r = list(a)
        while len(r) >= len(b) and any(r):
            f = r[-1] / b[-1]
            shift = len(r) - len(b)
            for i, c in enumerate(b):
                r[i + shift] -= f * c
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        a, b = b, r or [Fraction(0)]
    return len(a) == 1


def verify_t_root(m: int) -> bool:
    """T([3]_7) at q = zeta_14^m, checked as an exact zero."""
    ctx = QContext(7, m)
    v = T_POLY(ctx.qint(3))
    if not v.is_zero():
        raise PolyError(f"T([3]) = {v} != 0 at m = {m}")
    return True


def _int_poly_mul(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def tau_transform(p: IntPoly) -> IntPoly:
    """x^d * p(1 - 1/x) = sum_k c_k (x - 1)^k x^(d - k)."""
    d = p.degree
    total = [0] * (d + 1)
    for k, c in enumerate(p.coeffs):
        term = [1]
        for _ in range(k):
            term = _int_poly_mul(term, [-1, 1])
        term = [0] * (d - k) + term
        for i, t in enumerate(term):
            total[i] += c * t
    return IntPoly(tuple(total))


def verify_tau_identity(p: IntPoly):
    """Return +1 or -1 when x^d p(1 - 1/x) = +-p(x); False otherwise."""
    if p.coeffs[0] == 0:
        raise PolyError("p(0) must be nonzero")
    t = tau_transform(p)
    if t == p:
        return 1
    if t == -p:
        return -1
    return False


def root_assignment(r: int = 7, precision: int = DEFAULT_PRECISION) -> list[tuple[int, int]]:
    """(m, k) pairs: [3]_r at q = zeta_2r^m equals the k-th largest root of the polynomial."""
    poly = th_polynomial(r)
    tol = mpmath.mpf(10) ** (-(precision // 2))
    with mpmath.workdps(precision + 10):
        roots = poly.roots(precision)
        for x in roots:
            if abs(mpmath.im(x)) > tol:
                raise PolyError(f"non-real root {x}")
        roots = sorted((mpmath.re(x) for x in roots), reverse=True)
        table = []
        for m in valid_selectors(r):
            v = QContext(r, m, precision).qint(3).embed(precision)
            if abs(v.imag) > tol:
                raise PolyError(f"[3] at m={m} is not real")
            dist = [abs(v.real - x) for x in roots]
            k = min(range(len(roots)), key=dist.__getitem__)
            if dist[k] > tol:
                raise PolyError(f"[3] at m={m} matches no root within tolerance")
            table.append((m, k + 1))
    return table


def closed_form_roots(r: int, precision: int = DEFAULT_PRECISION):
    """1 + 2cos(2 pi k / r) for k = 1..(r-1)/2."""
    with mpmath.workdps(precision + 10):
        return [1 + 2 * mpmath.cospi(mpmath.mpf(2 * k) / r) for k in range(1, (r - 1) // 2 + 1)]


# relations among quantum integers at r = 7, as (lhs factors, rhs terms):
# prod [a] for a in lhs == sum over rhs terms of prod [b]
QINT_IDENTITIES = (
    ("[5][3] = [3] + [5]", ((5, 3),), ((3,), (5,))),
    ("[2][4] = [3][5]", ((2, 4),), ((3, 5),)),
    ("[2][3] = [4][5]", ((2, 3),), ((4, 5),)),
    ("[2][6] = [5]", ((2, 6),), ((5,),)),
    ("[4][6] = [3]", ((4, 6),), ((3,),)),
    ("[3]^2 = [4]^2", ((3, 3),), ((4, 4),)),
)


def check_qint_identities(ctx: QContext) -> list[tuple[str, bool]]:
    """Evaluate each identity exactly; True means lhs - rhs is the zero element."""
    def side(terms):
        total = ctx.field.zero()
        for term in terms:
            prod = ctx.field.one()
            for n in term:
                prod = prod * ctx.qint(n)
            total = total + prod
        return total

    return [(name, (side(lhs) - side(rhs)).is_zero()) for name, lhs, rhs in QINT_IDENTITIES]
