from fractions import Fraction

import mpmath
import pytest
from flint import arb
from hypothesis import given, strategies as st

from d4tuples.arith import (
    CertifiedReal,
    Sign,
    certified_log,
    certified_max,
    certified_sign,
    continued_fraction_of,
    distance_to_nearest_integer,
    escalate,
    isqrt,
    iter_partial_quotients,
    perfect_square_root,
    real,
    working_precision,
)
from d4tuples.errors import DomainError, PrecisionError


@given(st.integers(min_value=0, max_value=10**60))
def test_isqrt_brackets(n):
    r = isqrt(n)
    assert r * r <= n < (r + 1) ** 2


@given(st.integers(min_value=0, max_value=10**40))
def test_perfect_square_root_roundtrip(r):
    assert perfect_square_root(r * r) == r
    if r > 0:
        assert perfect_square_root(r * r + 1) is None


def test_isqrt_negative():
    with pytest.raises(DomainError):
        isqrt(-1)
    assert perfect_square_root(-4) is None


def test_decimal_string_is_enclosed():
    x = CertifiedReal.of("2.96e28")
    assert x.contains(Fraction(296) * 10**26)
    y = real("0.4672")
    assert y.contains(Fraction(4672, 10000))
    assert y.radius > 0  # not exactly representable in binary


def test_log_matches_mpmath():
    mpmath.mp.dps = 130
    for v in (2, 3, 10**20 + 7, Fraction(22, 7)):
        x = certified_log(v, 256)
        ref = mpmath.log(mpmath.mpf(v.numerator) / v.denominator if isinstance(v, Fraction) else v)
        # 120 digits are far finer than the 256-bit ball
        assert x.contains(Fraction(mpmath.nstr(ref, 120)))
        assert x.radius < Fraction(1, 2**200)


def test_log_of_nonpositive():
    with pytest.raises(DomainError):
        certified_log(0)
    with pytest.raises(DomainError):
        real(-2).sqrt()


def test_sign_and_indeterminate():
    assert real(Fraction(1, 3)).sign() is Sign.POSITIVE
    assert (real(2).sqrt() * real(2).sqrt() - 2).sign() is Sign.INDETERMINATE
    assert (-real(1)).sign() is Sign.NEGATIVE


def test_certified_sign_escalates():
    # e^(pi sqrt 163) is within 1e-12 of an integer; 64 bits cannot split it
    def gap(p):
        x = (real(163, p).sqrt() * _pi(p)).exp()
        return x - 262537412640768744

    assert gap(64).sign() is Sign.INDETERMINATE
    assert certified_sign(gap, escalate_to=1024, precision_bits=64) is Sign.NEGATIVE


def _pi(p):
    with working_precision(p):
        return CertifiedReal(arb.pi(), p)


def test_escalate_retries_until_cap():
    seen = []

    def fn(p):
        seen.append(p)
        if p < 1024:
            raise PrecisionError("not yet")
        return p

    assert escalate(fn, 256, 4096) == 1024
    assert seen == [256, 512, 1024]
    with pytest.raises(PrecisionError):
        escalate(lambda p: (_ for _ in ()).throw(PrecisionError("never")), 256, 512)


def test_certified_max():
    m = certified_max(real(1), real(3), real(2))
    assert m.contains(3) and m.unique_integer() == 3


def test_floor_and_unique_integer():
    x = real(7).sqrt()
    assert x.floor() == 2
    assert x.unique_integer() is None
    assert real(9).sqrt().unique_integer() == 3
    assert real(Fraction(5, 2)).unique_integer() is None


def test_distance_to_nearest_integer():
    d = distance_to_nearest_integer(real(Fraction(27, 10)))
    assert d.contains(Fraction(3, 10))
    with pytest.raises(PrecisionError):
        distance_to_nearest_integer(CertifiedReal(arb("0.5") + arb(0, 0.3)))


def test_continued_fraction_of_sqrt2():
    cf = continued_fraction_of(real(2).sqrt(), 12)
    assert cf.partial_quotients == (1,) + (2,) * 11
    assert cf.convergents[:4] == ((1, 1), (3, 2), (7, 5), (17, 12))


def test_continued_fraction_of_golden_ratio_convergents_are_fibonacci():
    phi = (1 + real(5).sqrt()) / 2
    cf = continued_fraction_of(phi, 30)
    fib = [1, 1]
    while len(fib) < 32:
        fib.append(fib[-1] + fib[-2])
    assert all(q == fib[i] and p == fib[i + 1] for i, (p, q) in enumerate(cf.convergents))


def test_partial_quotients_stop_when_uncertified():
    x = real(2, 64).sqrt()
    with pytest.raises(PrecisionError) as exc:
        list(iter_partial_quotients(x))
    assert exc.value.index > 10


def test_rational_expansion_stops_at_integer_boundary():
    # 22/7 = [3; 7]: 1/(22/7 - 3) is 7 up to rounding, so its floor is 6 or 7
    it = iter_partial_quotients(real(Fraction(22, 7)))
    assert next(it) == 3
    with pytest.raises(PrecisionError) as exc:
        next(it)
    assert exc.value.index == 1


def test_decimal_bounds_round_outward():
    x = real(2).sqrt()
    lo, hi = x.decimal_bounds(20)
    assert Fraction(lo) <= x.lower and x.upper <= Fraction(hi)
