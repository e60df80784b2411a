from fractions import Fraction

import mpmath
import pytest

from d4tuples.arith import Sign, real
from d4tuples.bounds import (
    B1_PRINTED_CONST,
    b1_a_bound,
    b1_case_m_upper,
    bound_record,
    derive_b1_m_constant,
    hypergeometric_eliminates,
    hypergeometric_gap,
    index_gap_negative,
    large_a_contradiction,
    large_a_contradiction_all,
    linear_form,
    linear_form_is_small,
    linear_form_params,
    lm_lower_bound,
    lm_params,
    m_lower_bound,
    rickert_lambda,
    sextuple_m_bound,
    theta_approximation_quality,
    theta_bound,
    v_exceeds_alpha_power,
    z_log_upper_bound,
)
from d4tuples.errors import DomainError
from d4tuples.pell import b1, b2, b3, pair_context, sequence_pair


def test_linear_form_params_against_mpmath():
    mpmath.mp.dps = 60
    ctx = pair_context(3, 15, -1)
    lf = linear_form_params(ctx, 256)
    alpha = (7 + mpmath.sqrt(45)) / 2
    beta = (8 + mpmath.sqrt(60)) / 2
    assert abs(lf.alpha.midpoint - Fraction(mpmath.nstr(alpha, 58))) < Fraction(1, 10**50)
    assert abs(lf.log_beta.midpoint - Fraction(mpmath.nstr(mpmath.log(beta), 58))) < Fraction(1, 10**50)


def test_linear_form_at_zero_is_log_gamma():
    ctx = pair_context(1, 96, 1)
    lam = linear_form(ctx, 0, 0)
    assert (lam - linear_form_params(ctx).log_gamma).contains(0)


def test_known_intersection_linear_form():
    ctx = pair_context(3, 15, -1)
    assert linear_form_is_small(ctx, 2, 2)
    lam = linear_form(ctx, 2, 2)
    assert abs(float(lam) - 0.00037047) < 1e-8
    assert index_gap_negative(ctx, 2, 2)
    assert v_exceeds_alpha_power(ctx, 2, 58)


def test_linear_form_rejects_non_solution():
    ctx = pair_context(3, 15, -1)
    assert not linear_form_is_small(ctx, 4, 2)


def test_m_lower_bound():
    lo = m_lower_bound(1, 3360)
    assert abs(float(lo) - 0.4672 * (3360 / 2) ** 0.5) < 1e-12
    with pytest.raises(DomainError):
        m_lower_bound(3, 15)
    assert m_lower_bound(3, 15, strict=False).sign() is Sign.POSITIVE


def test_rickert_lambda():
    p = rickert_lambda(1, 6720)
    assert (p.lam - 1).sign() is Sign.POSITIVE and (2 - p.lam).sign() is Sign.POSITIVE
    with pytest.raises(DomainError):
        rickert_lambda(1, 1000)
    with pytest.raises(DomainError):
        rickert_lambda(2, 6721)


def test_rickert_lambda_below_2_on_grid():
    for a in range(1, 25):
        base = a * (a + 1)
        k0 = -(-270 * a * (a + 1) ** 2 // base)
        for k in (k0, k0 + 1, 2 * k0, 10 * k0, 1000 * k0):
            lam = rickert_lambda(a, k * base).lam
            assert (2 - lam).sign() is Sign.POSITIVE


def test_theta_quality_known_data():
    for b, c in ((15, 224), (224, 3135)):
        x, y = int((3 * c + 4) ** 0.5), int((4 * c + 4) ** 0.5)
        z = int((b * c + 4) ** 0.5)
        dev = theta_approximation_quality(3, b, x, y, z)
        assert (theta_bound(3, b, z) - dev).sign() is Sign.POSITIVE
    with pytest.raises(DomainError):
        theta_approximation_quality(3, 15, 26, 30, 57)


def test_z_log_upper_bound():
    assert z_log_upper_bound(1, 96) is None
    v = z_log_upper_bound(1, 3360)
    assert v is not None and v.sign() is Sign.POSITIVE


def test_hypergeometric_verdicts():
    verdicts = {a: hypergeometric_eliminates(a, b2(a)) for a in range(1, 7)}
    assert verdicts == {1: False, 2: False, 3: False, 4: False, 5: True, 6: True}
    assert all(hypergeometric_eliminates(a, b3(a)) for a in range(1, 6))
    assert abs(float(hypergeometric_gap(5, b2(5))) - 1.60) < 0.01
    with pytest.raises(DomainError):
        hypergeometric_eliminates(1, b1(1))


def test_large_a():
    assert large_a_contradiction(6)
    assert not large_a_contradiction(5)
    assert large_a_contradiction_all()
    with pytest.raises(DomainError):
        large_a_contradiction(5, relaxed=True)


def test_sextuple_bound():
    M = sextuple_m_bound(170016)
    assert M == 42902633923826276050
    lb = real(170016).log()
    # M is the least integer with M/log(M+1) above the bound
    assert (M / real(M + 1).log() - Fraction("6.543e15") * lb * lb).sign() is Sign.POSITIVE
    assert ((M - 1) / real(M).log() - Fraction("6.543e15") * lb * lb).sign() is Sign.NEGATIVE
    with pytest.raises(DomainError):
        sextuple_m_bound(95)


def test_lm_lower_bound():
    ctx = pair_context(1, 96, 1)
    p = lm_params(ctx, 2)
    v = lm_lower_bound(p, 10)
    assert v.sign() is Sign.NEGATIVE
    # b' is tiny here so the max picks 21/D = 5.25
    bp = p.b_prime(10)
    assert float(bp.log()) + 0.14 < 5.25
    expected = -24.34 * 4**4 * 5.25**2 * float(p.log_A1) * float(p.log_A2)
    assert abs(float(v) / expected - 1) < 1e-12


def test_b1_a_bound():
    assert abs(float(b1_a_bound(2)) - 18072.118) < 1e-3
    assert abs(float(b1_a_bound(4)) - 13552.39) < 1e-2
    assert b1_case_m_upper(1, 2).sign() is Sign.POSITIVE
    with pytest.raises(DomainError):
        b1_case_m_upper(1, 3)


def test_b1_constant_rederivation():
    squared = derive_b1_m_constant(squared=True)
    plain = derive_b1_m_constant(squared=False)
    assert abs(float(plain.constant) - 18067.45) < 0.1
    assert plain.agrees
    assert abs(float(squared.constant) - 281135.7) < 0.1
    assert not squared.agrees
    assert squared.safe_constant == squared.constant
    assert B1_PRINTED_CONST == Fraction("18067.6")


def test_bound_record():
    rec = bound_record("m_lower", {"a": 1, "b": 3360}, m_lower_bound(1, 3360), True)
    assert rec["name"] == "m_lower" and Fraction(rec["enclosure_lo"]) < Fraction(rec["enclosure_hi"])


def test_verdicts_stable_under_precision_doubling():
    ctx = pair_context(3, 15, -1)
    for p in (128, 256, 512, 1024, 2048):
        assert hypergeometric_eliminates(2, b2(2), p) is False
        assert hypergeometric_eliminates(5, b2(5), p) is True
        assert large_a_contradiction(6, precision_bits=p)
        assert linear_form_is_small(ctx, 2, 2, p)
        assert index_gap_negative(ctx, 2, 2, p)
    assert sequence_pair(3, 15, -1).v_term(2) == 58
