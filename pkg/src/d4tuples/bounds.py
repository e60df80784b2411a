"""Analytic bounds on the indices of a putative intersection v_m = w_n.

All printed constants are kept as exact rationals and lifted to enclosures
at the requested precision.  Boolean verdicts are only returned when the
underlying strict inequality is certified; otherwise PrecisionError.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional

from .arith import (
    DEFAULT_PRECISION,
    DEFAULT_PRECISION_CAP,
    CertifiedReal,
    Sign,
    certified_max,
    certified_sign,
    real,
)
from .errors import DomainError, PrecisionError
from .pell import GAP_CONSTANT, PairContext, b1, b2, pair_context

log = logging.getLogger(__name__)

Q = Fraction

RICKERT_N_FACTOR = 270
RICKERT_LOG_NUM = Q(11)
RICKERT_LOG_DEN = Q("0.041")
RICKERT_APPROX = Q("2.96e28")

Z_BOUND_C1 = Q("5.92e28")
Z_BOUND_C2 = Q("0.041")
Z_BOUND_C3 = Q("0.0037")

LARGE_A_SLOPE = Q("14.95")
LARGE_A_C1 = Q("6.21e34")
LARGE_A_C2 = Q(42992)
LARGE_A_C3 = Q(32)
LARGE_A_C4 = Q("3.78")

SEXTUPLE_C = Q("6.543e15")

LM_CONST = Q("24.34")
LM_SHIFT = Q("0.14")
LM_DEGREE = 4
LM_HEIGHT_FACTOR = Q("1.16")

LM_STEP_CONST = Q(1132)
LM_STEP_LOG_FLOOR = Q("5.25")
B1_PRINTED_CONST = Q("18067.6")
INDEX_GAP_SHIFT = Q("0.0005")


def _decide(expr: Callable[[int], CertifiedReal], prec: int, cap: int, what: str) -> bool:
    """True iff expr > 0, False iff expr < 0, certified; else PrecisionError."""
    s = certified_sign(expr, escalate_to=cap, precision_bits=prec)
    if s is Sign.INDETERMINATE:
        raise PrecisionError(f"sign of {what} not certified up to {cap} bits")
    return s is Sign.POSITIVE


# ---------------------------------------------------------------------------
# alpha, beta, gamma


@dataclass(frozen=True)
class LinearFormParams:
    context: PairContext
    alpha: CertifiedReal
    beta: CertifiedReal
    gamma: CertifiedReal

    @property
    def log_alpha(self) -> CertifiedReal:
        return self.alpha.log()

    @property
    def log_beta(self) -> CertifiedReal:
        return self.beta.log()

    @property
    def log_gamma(self) -> CertifiedReal:
        return self.gamma.log()


def linear_form_params(context: PairContext, precision_bits: int = DEFAULT_PRECISION) -> LinearFormParams:
    a, b, s, t, e = context.a, context.b, context.s, context.t, context.epsilon
    p = precision_bits
    ra, ra1, rb = real(a, p).sqrt(), real(a + 1, p).sqrt(), real(b, p).sqrt()
    alpha = (s + real(a * b, p).sqrt()) / 2
    beta = (t + real((a + 1) * b, p).sqrt()) / 2
    gamma = ra1 * (rb + e * ra) / (ra * (rb + e * ra1))
    return LinearFormParams(context, alpha, beta, gamma)


def log_alpha(a: int, b: int, precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    return linear_form_params(pair_context(a, b), precision_bits).log_alpha


# ---------------------------------------------------------------------------
# gap lower bound


def m_lower_bound(a: int, b: int, *, strict: bool = True,
                  precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    """0.4672 (a+1)^(-1/2) b^(1/2); every admissible index m exceeds it.

    The bound needs b >= 64a + 32; pass strict=False to evaluate the
    expression outside that range.
    """
    if a < 1:
        raise DomainError("a must be positive")
    if strict and b < b1(a):
        raise DomainError(f"b={b} below b_1({a})={b1(a)}")
    p = precision_bits
    return real(GAP_CONSTANT, p) * (real(Fraction(b, a + 1), p)).sqrt()


# ---------------------------------------------------------------------------
# hypergeometric method


@dataclass(frozen=True)
class RickertParams:
    a: int
    N: int
    lam: CertifiedReal

    def approximation_constant(self, precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
        """(2.96e28 N (a+1))^-1."""
        return 1 / (real(RICKERT_APPROX, precision_bits) * self.N * (self.a + 1))


def rickert_lambda(a: int, N: int, precision_bits: int = DEFAULT_PRECISION,
                   cap: int = DEFAULT_PRECISION_CAP) -> RickertParams:
    if a < 1:
        raise DomainError("a must be positive")
    if N % (a * (a + 1)):
        raise DomainError(f"N={N} is not a multiple of a(a+1)={a * (a + 1)}")
    if N < RICKERT_N_FACTOR * a * (a + 1) ** 2:
        raise DomainError(f"N={N} below 270 a (a+1)^2 = {RICKERT_N_FACTOR * a * (a + 1) ** 2}")

    def lam(p: int) -> CertifiedReal:
        num = real(RICKERT_LOG_NUM * (a + 1) * N, p).log()
        den = real(RICKERT_LOG_DEN * N * N / (a * (a + 1)), p).log()
        return 1 + num / den

    if not _decide(lambda p: 2 - lam(p), precision_bits, cap, "2 - lambda"):
        raise DomainError(f"lambda >= 2 for a={a}, N={N}")
    return RickertParams(a, N, lam(precision_bits))


def theta_bound(a: int, b: int, z: int, precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    """(2b/a) z^-2."""
    return real(Fraction(2 * b, a * z * z), precision_bits)


def theta_approximation_quality(a: int, b: int, x: int, y: int, z: int,
                                precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    """max of the two deviations of the rational approximations from theta_1, theta_2.

    With N = a(a+1)b, q = a(a+1)z:  (a+1)sx/q tends to sqrt(1 + 4(a+1)/N) and
    aty/q tends to sqrt(1 + 4a/N); each rational is compared with the root
    it approximates.
    """
    if min(x, y, z) <= 0:
        raise DomainError("x, y, z must be positive")
    if a * z * z - b * x * x != 4 * (a - b) or (a + 1) * z * z - b * y * y != 4 * (a + 1 - b):
        raise DomainError(f"({x}, {y}, {z}) does not solve the Pellian system for ({a}, {b})")
    ctx = pair_context(a, b)
    p = precision_bits
    N = a * (a + 1) * b
    q = a * (a + 1) * z
    theta1 = real(1 + Fraction(4 * a, N), p).sqrt()
    theta2 = real(1 + Fraction(4 * (a + 1), N), p).sqrt()
    dev_sx = abs(theta2 - Fraction((a + 1) * ctx.s * x, q))
    dev_ty = abs(theta1 - Fraction(a * ctx.t * y, q))
    return certified_max(dev_sx, dev_ty)


def z_log_upper_bound(a: int, b: int, precision_bits: int = DEFAULT_PRECISION) -> Optional[CertifiedReal]:
    """Upper bound for log z from the hypergeometric method; None if vacuous."""
    p = precision_bits
    den = real(Z_BOUND_C3 * Fraction(b, a + 1), p).log()
    if den.sign() is not Sign.POSITIVE:
        return None
    num1 = real(Z_BOUND_C1 * a**2 * (a + 1) ** 4 * b**2, p).log()
    num2 = real(Z_BOUND_C2 * a * (a + 1) * b**2, p).log()
    return num1 * num2 / den


def hypergeometric_gap(a: int, b: int, precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    """LHS - RHS of the combined inequality; positive means no solution."""
    bound = z_log_upper_bound(a, b, precision_bits)
    if bound is None:
        raise DomainError(f"z bound vacuous for ({a}, {b})")
    lhs = m_lower_bound(a, b, precision_bits=precision_bits)
    return lhs - bound / log_alpha(a, b, precision_bits)


def hypergeometric_eliminates(a: int, b: int, precision_bits: int = DEFAULT_PRECISION,
                              cap: int = DEFAULT_PRECISION_CAP) -> bool:
    if b < b2(a):
        raise DomainError(f"b={b} below b_2({a})={b2(a)}")
    return _decide(lambda p: hypergeometric_gap(a, b, p), precision_bits, cap,
                   f"hypergeometric gap at ({a}, {b})")


def _large_a_rhs(a: int, a_plus_1: Fraction, p: int) -> CertifiedReal:
    num1 = real(LARGE_A_C1 * a**6 * a_plus_1**6, p).log()
    num2 = real(LARGE_A_C2 * a**5 * a_plus_1**3, p).log()
    den = real(LARGE_A_C3 * a * a, p).log() * real(LARGE_A_C4 * a * a, p).log()
    return num1 * num2 / den


def large_a_contradiction(a: int, *, relaxed: bool = False,
                          precision_bits: int = DEFAULT_PRECISION,
                          cap: int = DEFAULT_PRECISION_CAP) -> bool:
    """True iff 14.95a < RHS(a) fails, i.e. b >= b_2 is impossible for this a.

    relaxed=True replaces a+1 by 1.2a (an upper bound for a >= 6).
    """
    if relaxed and a < 6:
        raise DomainError("the relaxation a+1 < 1.2a needs a >= 6")
    a1 = Q("1.2") * a if relaxed else Q(a + 1)
    return _decide(lambda p: LARGE_A_SLOPE * a - _large_a_rhs(a, a1, p),
                   precision_bits, cap, f"large-a inequality at a={a}")


def large_a_contradiction_all(a_from: int = 6, precision_bits: int = DEFAULT_PRECISION) -> bool:
    """Certify the relaxed inequality fails for every a >= a_from.

    With u = log a the relaxed right side is
    (c1 + 12u)(c2 + 8u) / ((c3 + 2u)(c4 + 2u)); each factor is decreasing in u
    when c1/6 > c3 and c2/4 > c4, while 14.95a increases, so checking
    a = a_from suffices.
    """
    p = precision_bits
    c1 = real(LARGE_A_C1 * Q("1.2") ** 6, p).log()
    c2 = real(LARGE_A_C2 * Q("1.2") ** 3, p).log()
    c3 = real(LARGE_A_C3, p).log()
    c4 = real(LARGE_A_C4, p).log()
    decreasing = (c1 / 6 - c3).sign() is Sign.POSITIVE and (c2 / 4 - c4).sign() is Sign.POSITIVE
    return decreasing and large_a_contradiction(a_from, relaxed=True, precision_bits=p)


# ---------------------------------------------------------------------------
# general bound on m


def sextuple_m_bound(b: int, precision_bits: int = DEFAULT_PRECISION,
                     cap: int = DEFAULT_PRECISION_CAP) -> int:
    """Smallest M with M/log(M+1) > 6.543e15 log^2 b, certified.

    m/log(m+1) is increasing for m >= 1, so m/log(m+1) < 6.543e15 log^2 b
    forces m < M.
    """
    if b < 96:
        raise DomainError("b must be at least 96")

    def exceeds(m: int) -> bool:
        def gap(p: int) -> CertifiedReal:
            lb = real(b, p).log()
            return m / real(m + 1, p).log() - SEXTUPLE_C * lb * lb
        return certified_sign(gap, escalate_to=cap, precision_bits=precision_bits) is Sign.POSITIVE

    hi = 2
    while not exceeds(hi):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if exceeds(mid):
            hi = mid
        else:
            lo = mid
    return hi


# ---------------------------------------------------------------------------
# the linear form


def linear_form(context: PairContext, m: int, n: int,
                precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    """m log(alpha) - n log(beta) + log(gamma)."""
    if m < 0 or n < 0:
        raise DomainError("indices must be non-negative")
    lf = linear_form_params(context, precision_bits)
    return m * lf.log_alpha - n * lf.log_beta + lf.log_gamma


def _form_precision(context: PairContext, m: int, precision_bits: int) -> int:
    # the form is about alpha^(-2m); keep that many bits plus guard
    return max(precision_bits, 2 * m * (context.s.bit_length() + 1) + 64)


def linear_form_is_small(context: PairContext, m: int, n: int,
                         precision_bits: int = DEFAULT_PRECISION, cap: int = DEFAULT_PRECISION_CAP) -> bool:
    """Certify 0 < Lambda < alpha^(1-2m)."""
    if m < 1:
        raise DomainError("m must be at least 1")
    start = _form_precision(context, m, precision_bits)
    cap = max(cap, start)
    if not _decide(lambda p: linear_form(context, m, n, p), start, cap, "Lambda"):
        return False

    def upper_gap(p: int) -> CertifiedReal:
        alpha = linear_form_params(context, p).alpha
        return (1 / alpha) ** (2 * m - 1) - linear_form(context, m, n, p)

    return _decide(upper_gap, start, cap, "alpha^(1-2m) - Lambda")


def index_gap_negative(context: PairContext, m: int, n: int,
                       precision_bits: int = DEFAULT_PRECISION, cap: int = DEFAULT_PRECISION_CAP) -> bool:
    """Certify (m - 0.0005) log(alpha) - n log(beta) < 0."""

    def gap(p: int) -> CertifiedReal:
        lf = linear_form_params(context, p)
        return n * lf.log_beta - (m - INDEX_GAP_SHIFT) * lf.log_alpha

    return _decide(gap, precision_bits, cap, "index gap")


def v_exceeds_alpha_power(context: PairContext, m: int, v_m: int,
                          precision_bits: int = DEFAULT_PRECISION) -> bool:
    """Certify v_m > alpha^m."""
    p = max(precision_bits, m * (context.s.bit_length() + 1) + 64)
    alpha = linear_form_params(context, p).alpha
    return (v_m - alpha**m).sign() is Sign.POSITIVE


# ---------------------------------------------------------------------------
# Laurent-Mignotte, two logarithms


@dataclass(frozen=True)
class LMParams:
    D: int
    log_A1: CertifiedReal
    log_A2: CertifiedReal
    nu: int
    log_alpha1: CertifiedReal
    log_alpha2: CertifiedReal

    def b_prime(self, n_coeff: int) -> CertifiedReal:
        # b_1 = n, b_2 = 1
        return n_coeff / (self.D * self.log_A2) + 1 / (self.D * self.log_A1)


def gamma_height_estimate(context: PairContext, precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    """(1/4) log[a^(1/2) (a+1)^(3/2) (b-a) (sqrt b + sqrt a)(sqrt b + sqrt(a+1))]."""
    a, b, p = context.a, context.b, precision_bits
    ra, ra1, rb = real(a, p).sqrt(), real(a + 1, p).sqrt(), real(b, p).sqrt()
    inside = ra * ra1 * (a + 1) * (b - a) * (rb + ra) * (rb + ra1)
    return inside.log() / 4


def lm_params(context: PairContext, nu: int, precision_bits: int = DEFAULT_PRECISION) -> LMParams:
    """Instantiate the two-logarithm bound with alpha_1 = beta/alpha, alpha_2 = alpha^nu gamma.

    log A_1 = (log alpha + log beta)/2 and log A_2 = 1.16 (nu/2 + 1) log alpha.
    Raises DomainError if a hypothesis on log A_i is not certified.
    """
    if nu < 1:
        raise DomainError("nu must be positive")
    D = LM_DEGREE
    lf = linear_form_params(context, precision_bits)
    la, lb, lg = lf.log_alpha, lf.log_beta, lf.log_gamma
    log_A1 = (la + lb) / 2
    log_A2 = LM_HEIGHT_FACTOR * (Q(nu, 2) + 1) * la
    log_alpha1 = lb - la
    log_alpha2 = nu * la + lg
    # h(gamma) < log(2 alpha) gives h(alpha_2) <= (nu/2 + 1) log alpha + log 2
    h_gamma_ok = (2 * lf.alpha).log() - gamma_height_estimate(context, precision_bits)
    h_alpha2 = (Q(nu, 2) + 1) * la + real(2, precision_bits).log()
    checks = {
        "h(gamma) < log(2 alpha)": h_gamma_ok,
        "log A1 >= |log alpha1|/D": log_A1 - abs(log_alpha1) / D,
        "log A1 >= 1/D": log_A1 - Q(1, D),
        "log A2 >= h(alpha2)": log_A2 - h_alpha2,
        "log A2 >= |log alpha2|/D": log_A2 - abs(log_alpha2) / D,
        "log A2 >= 1/D": log_A2 - Q(1, D),
    }
    failed = [name for name, gap in checks.items() if gap.sign() is not Sign.POSITIVE]
    if failed:
        raise DomainError(f"hypotheses not certified for ({context.a}, {context.b}, nu={nu}): {failed}")
    return LMParams(D, log_A1, log_A2, nu, log_alpha1, log_alpha2)


def lm_lower_bound(p: LMParams, n_coeff: int) -> CertifiedReal:
    """-24.34 D^4 (max{log b' + 0.14, 21/D, 1/2})^2 log A_1 log A_2, a lower bound for log Lambda."""
    if n_coeff < 1:
        raise DomainError("n must be positive")
    prec = p.log_A1.precision_bits
    bp = p.b_prime(n_coeff)
    branch = certified_max(bp.log() + LM_SHIFT, real(Q(21, p.D), prec), real(Q(1, 2), prec))
    return -LM_CONST * p.D**4 * branch * branch * p.log_A1 * p.log_A2


# ---------------------------------------------------------------------------
# the case b = b_1


def b1_case_m_upper(a: int, nu: int, constant: Fraction = B1_PRINTED_CONST,
                    precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    """constant * (nu + 2) * log(alpha) for b = 64a + 32."""
    if nu < 2 or nu % 2:
        raise DomainError("nu must be even and at least 2")
    return constant * (nu + 2) * log_alpha(a, b1(a), precision_bits)


def b1_a_bound(nu: int, constant: Fraction = B1_PRINTED_CONST) -> Fraction:
    """(constant/2)(nu + 2)/(nu - 0.0005): a must lie below this."""
    if nu < 2:
        raise DomainError("nu must be at least 2")
    return constant / 2 * (nu + 2) / (nu - INDEX_GAP_SHIFT)


@dataclass(frozen=True)
class B1ConstantDerivation:
    x_bound: Fraction
    constant: Fraction
    printed_constant: Fraction
    squared: bool

    @property
    def agrees(self) -> bool:
        return self.constant <= self.printed_constant

    @property
    def safe_constant(self) -> Fraction:
        return max(self.constant, self.printed_constant)


@lru_cache(maxsize=None)
def derive_b1_m_constant(squared: bool = True, precision_bits: int = DEFAULT_PRECISION) -> B1ConstantDerivation:
    """Re-derive the constant C in m < C (nu + 2) log alpha.

    With x = 1.16 m / (2 (nu + 2) log alpha) the Laurent-Mignotte step gives
    x - delta < 1132 (max{log x, 5.25})^k, where k = 2 as displayed
    (squared=True) and delta = 0.58/(2(nu+2) log alpha) <= 0.58/16 because
    nu >= 2 and log alpha > 2.  The bound X on x is found by bisection on
    rationals with 1/1000 resolution; C = 2X/1.16.
    """
    delta = Q("0.58") / 16
    power = 2 if squared else 1

    def g(x: Fraction) -> Sign:
        def expr(p: int) -> CertifiedReal:
            lx = real(x, p).log()
            branch = certified_max(lx, real(LM_STEP_LOG_FLOOR, p))
            return x - delta - LM_STEP_CONST * branch**power
        return certified_sign(expr, precision_bits=precision_bits)

    # g is increasing once x > 2 * 1132 * log x (resp. x > 1132), which holds from lo on
    lo, hi = Q(30000) if squared else Q(1200), Q(10**7)
    if g(lo) is not Sign.NEGATIVE or g(hi) is not Sign.POSITIVE:
        raise AssertionError("bisection bracket does not straddle the root")
    while hi - lo > Q(1, 1000):
        mid = (lo + hi) / 2
        if g(mid) is Sign.POSITIVE:
            hi = mid
        else:
            lo = mid
    constant = 2 * hi / Q("1.16")
    result = B1ConstantDerivation(hi, constant, B1_PRINTED_CONST, squared)
    if squared and not result.agrees:
        log.warning("re-derived constant %.1f exceeds printed %.1f; using the larger one",
                    float(constant), float(B1_PRINTED_CONST))
    return result


# ---------------------------------------------------------------------------
# serialization


def bound_record(name: str, inputs: dict, value: Optional[CertifiedReal], verdict) -> dict:
    lo = hi = None
    if value is not None:
        lo, hi = value.decimal_bounds()
    return {"name": name, "inputs": inputs, "enclosure_lo": lo, "enclosure_hi": hi, "verdict": verdict}
