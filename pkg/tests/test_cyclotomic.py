import pickle
from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings, strategies as st

from oracles import qint_num
from tvkit.cyclotomic import (CyclotomicError, CyclotomicField, QContext, cyc_add, cyc_context, cyc_inv,
                              cyc_mul, cyc_neg, cyclotomic_polynomial, embed, euler_phi, format_cyc,
                              is_rational, is_rational_integer, qfact, qint, valid_selectors)

X = sympy.Symbol("x")


@pytest.mark.parametrize("n", range(1, 61))
def test_cyclotomic_polynomial_matches_sympy(n):
    expected = sympy.Poly(sympy.cyclotomic_poly(n, X), X).all_coeffs()[::-1]
    assert list(cyclotomic_polynomial(n)) == [int(c) for c in expected]
    assert euler_phi(n) == int(sympy.totient(n))


def test_context_examples():
    ctx = cyc_context(7, 1, 100)
    assert ctx.slots == 6
    assert cyc_context(7, 2, 100).slots == 6
    with pytest.raises(CyclotomicError, match="q = -1"):
        cyc_context(7, 7, 100)
    with pytest.raises(CyclotomicError, match="primitive"):
        cyc_context(9, 3, 100)
    with pytest.raises(CyclotomicError):
        cyc_context(7, 0, 100)
    with pytest.raises(CyclotomicError):
        cyc_context(7, 1, 40)


@pytest.mark.parametrize("r", range(2, 16))
def test_valid_selectors_by_brute_force_order(r):
    # q^2 = zeta^(2m) must have multiplicative order exactly r in the group of 2r-th roots
    def order(k):
        e = 1
        while (k * e) % (2 * r):
            e += 1
        return e
    expected = [m for m in range(1, 2 * r) if m != r and order(2 * m) == r]
    assert valid_selectors(r) == expected


def test_valid_selector_count_r7():
    assert valid_selectors(7) == [1, 2, 3, 4, 5, 6, 8, 9, 10, 11, 12, 13]


def test_zeta_inverse():
    f = CyclotomicField(14)
    assert cyc_mul(f.zeta(1), f.zeta(13)) == f.one()
    assert f.zeta(7) == -f.one()
    assert f.zeta(14) == f.one()


def test_order_mismatch_and_zero_inverse():
    a, b = CyclotomicField(14).zeta(), CyclotomicField(10).zeta()
    with pytest.raises(CyclotomicError):
        cyc_add(a, b)
    with pytest.raises(ZeroDivisionError):
        cyc_inv(CyclotomicField(14).zero())


def _elements(n):
    f = CyclotomicField(n)
    coeff = st.fractions(min_value=-20, max_value=20, max_denominator=7)
    return st.lists(coeff, min_size=f.degree, max_size=f.degree).map(f.from_coeffs)


@pytest.mark.parametrize("n", [10, 14, 18, 24])
def test_field_laws(n):
    @settings(max_examples=40, deadline=None)
    @given(_elements(n), _elements(n), _elements(n))
    def check(a, b, c):
        assert (a * b) * c == a * (b * c)
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
        assert a * b == b * a
        assert cyc_add(a, cyc_neg(a)).is_zero()
        if not a.is_zero():
            assert cyc_mul(cyc_inv(a), a) == a.field.one()
            assert (b / a) * a == b
    check()


@settings(max_examples=40, deadline=None)
@given(_elements(14), _elements(14))
def test_embedding_is_multiplicative(a, b):
    with mpmath.workdps(110):
        err = abs((a * b).embed(100) - a.embed(100) * b.embed(100))
        assert err < mpmath.mpf(10) ** -90


def test_qint_examples():
    ctx = QContext(7, 1)
    assert qint(ctx, 1) == ctx.field.one()
    assert qint(ctx, 7).is_zero()
    assert qint(ctx, 0).is_zero()
    q = ctx.q
    assert qint(ctx, 3) == q ** 2 + 1 + q ** -2
    assert abs(embed(ctx, qint(ctx, 3)) - mpmath.mpf("2.2469796037174670611")) < 1e-18
    assert abs(embed(ctx, qint(ctx, 2)) - 2 * mpmath.cospi(mpmath.mpf(1) / 7)) < mpmath.mpf(10) ** -90


def test_qfact_examples():
    ctx = QContext(7, 1)
    assert qfact(ctx, 0) == ctx.field.one()
    assert qfact(ctx, 1) == ctx.field.one()
    assert qfact(ctx, 7).is_zero()
    assert qfact(ctx, 4) == qint(ctx, 4) * qint(ctx, 3) * qint(ctx, 2)


@pytest.mark.parametrize("r", [3, 4, 5, 6, 7, 9, 10])
def test_qint_defining_identity_and_reflection(r):
    assert QContext(r, 1).qint(r - 1) == QContext(r, 1).qint(1)
    for m in valid_selectors(r):
        ctx = QContext(r, m)
        q = ctx.q
        for n in range(0, 2 * r + 1):
            assert ctx.qint(n) * (q - q ** -1) == q ** n - q ** -n
        assert ctx.qint(r).is_zero()
        # q^r = (-1)^m, so the reflection carries the sign (-1)^(m+1)
        sign = 1 if m % 2 else -1
        for n in range(1, r):
            assert ctx.qint(r - n) == ctx.qint(n) * sign


@pytest.mark.parametrize("r", [5, 7, 9])
def test_embedding_matches_sine_oracle(r):
    for m in valid_selectors(r):
        ctx = QContext(r, m)
        for n in range(1, r):
            assert abs(ctx.qint(n).embed(100) - qint_num(r, m, n)) < mpmath.mpf(10) ** -90


def test_is_rational_integer():
    f = CyclotomicField(14)
    assert is_rational_integer(f.one()) == 1
    assert is_rational_integer(f.zeta()) is None
    assert is_rational_integer(f.rational(Fraction(1, 2))) is None
    assert is_rational(f.rational(Fraction(1, 2))) == Fraction(1, 2)
    trace = QContext(7, 1).qint(3) + QContext(7, 2).qint(3) + QContext(7, 3).qint(3)
    assert is_rational_integer(trace) == 2


def test_context_pickles_and_formats():
    ctx = QContext(7, 3)
    back = pickle.loads(pickle.dumps(ctx))
    assert back == ctx and back.qint(3) == ctx.qint(3)
    assert format_cyc(CyclotomicField(14).zeta(2) - 1) == "-1 + z^2"
