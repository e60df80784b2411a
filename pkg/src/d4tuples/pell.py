"""Pellian equations attached to the pairs {a, b} and {a+1, b}.

With ab + 4 = s^2 and (a+1)b + 4 = t^2, an element c extending both
{a, b} and {a+1, b} gives z = sqrt(bc + 4) appearing in both recurrences

    v_0 = 2e, v_1 = e*s + b, v_{m+2} = s*v_{m+1} - v_m
    w_0 = 2e, w_1 = e*t + b, w_{n+2} = t*w_{n+1} - w_n

for a sign e in {+1, -1}.  Intersections v_m = w_n are found by an exact
two-pointer merge over both increasing sequences.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Literal

from .arith import (
    DEFAULT_PRECISION,
    DEFAULT_PRECISION_CAP,
    CertifiedReal,
    escalate,
    perfect_square_root,
    real,
)
from .errors import DomainError, PrecisionError

# constant of the gap lower bound m > 0.4672 * sqrt(b / (a+1))
GAP_CONSTANT = Fraction("0.4672")


@dataclass(frozen=True)
class PairContext:
    a: int
    b: int
    s: int
    t: int
    epsilon: int

    def __post_init__(self):
        if self.epsilon not in (1, -1):
            raise DomainError(f"epsilon must be +1 or -1, got {self.epsilon}")
        if self.s * self.s != self.a * self.b + 4 or self.t * self.t != (self.a + 1) * self.b + 4:
            raise DomainError(f"bad witnesses for ({self.a}, {self.b})")


def pair_context(a: int, b: int, epsilon: int = 1) -> PairContext:
    if a < 1 or b < 1:
        raise DomainError(f"a and b must be positive: ({a}, {b})")
    s = perfect_square_root(a * b + 4)
    t = perfect_square_root((a + 1) * b + 4)
    if s is None or t is None:
        missing = [f"{x}*{b}+4" for x, r in ((a, s), (a + 1, t)) if r is None]
        raise DomainError(f"no witness root for {', '.join(missing)}")
    return PairContext(a, b, s, t, epsilon)


# ---------------------------------------------------------------------------
# the family b_nu


def s_sequence(a: int, count: int) -> list[int]:
    """s_0 = 2, s_1 = 8a + 2, s_{k+2} = 2(2a+1) s_{k+1} - s_k."""
    if a < 1:
        raise DomainError("a must be positive")
    out = [2, 8 * a + 2]
    while len(out) < count:
        out.append(2 * (2 * a + 1) * out[-1] - out[-2])
    return out[:count]


def t_sequence(a: int, count: int) -> list[int]:
    """Companion values with a*t^2 - (a+1)*s^2 = -4."""
    out = [2, 8 * a + 6]
    while len(out) < count:
        out.append(2 * (2 * a + 1) * out[-1] - out[-2])
    return out[:count]


def b_nu(a: int, nu: int) -> int:
    if nu < 1:
        raise DomainError("nu must be at least 1")
    s = s_sequence(a, nu + 1)[nu]
    q, r = divmod(s * s - 4, a)
    assert r == 0
    return q


def second_class_b_values(count: int) -> list[int]:
    """For a = 3 only: b from the extra class s = 1, 7, 97, ... of 3t^2 - 4s^2 = -4.

    This class yields the pairs (3, 15), (3, 3135), ... that carry the known
    intersections; s = 1 itself gives no positive b.
    """
    s_vals = [1, 7]
    while len(s_vals) < count + 1:
        s_vals.append(14 * s_vals[-1] - s_vals[-2])
    return [(s * s - 4) // 3 for s in s_vals[1:count + 1]]


def b1(a: int) -> int:
    return 64 * a + 32


def b2(a: int) -> int:
    return 1024 * a**3 + 1536 * a**2 + 704 * a + 96


def b3(a: int) -> int:
    return 16384 * a**5 + 40960 * a**4 + 37888 * a**3 + 15872 * a**2 + 2944 * a + 192


# ---------------------------------------------------------------------------
# fundamental solutions


@dataclass(frozen=True)
class FundamentalSolution:
    z0: int
    x0_or_y1: int
    equation_tag: Literal["first", "second"]


def fundamental_solutions(a: int, b: int, which: Literal["first", "second"] = "first") -> list[FundamentalSolution]:
    """Exhaustive scan of the fundamental-solution box.

    first:  a z^2 - b x^2 = 4(a - b),  1 <= x0 < sqrt(a(b-a)/(s-2)),  1 <= |z0| < sqrt((s-2)(b-a)/a)
    second: the same with a+1 in place of a and t in place of s.
    """
    if which == "first":
        k = a
    elif which == "second":
        k = a + 1
    else:
        raise DomainError(f"unknown equation {which!r}")
    if b <= k:
        raise DomainError(f"box is empty or non-real: b={b} must exceed {k}")
    root = perfect_square_root(k * b + 4)
    if root is None:
        raise DomainError(f"{{{k}, {b}}} is not a D(4)-pair")
    out = []
    x = 1
    # x^2 < k(b-k)/(root-2), compared exactly
    while x * x * (root - 2) < k * (b - k):
        num = b * x * x + 4 * (k - b)
        if num > 0 and num % k == 0:
            z = perfect_square_root(num // k)
            if z is not None and z >= 1 and z * z * k < (root - 2) * (b - k):
                out.append(FundamentalSolution(z, x, which))
                out.append(FundamentalSolution(-z, x, which))
        x += 1
    return sorted(out, key=lambda f: (f.x0_or_y1, f.z0))


def admissible_fundamental_solutions(a: int, b: int, which: Literal["first", "second"] = "first") -> list[FundamentalSolution]:
    """Box solutions whose class can contain z = sqrt(bc + 4), i.e. z0^2 = 4 (mod b).

    Every box solution has k z0^2 = 4k (mod b) with k = a or a+1, so when
    gcd(k, b) = 1 nothing is dropped.  Otherwise z^2 mod b is constant along
    the class, and classes with z0^2 != 4 (mod b) never give an integer c.
    """
    return [f for f in fundamental_solutions(a, b, which) if (f.z0 * f.z0 - 4) % b == 0]


# ---------------------------------------------------------------------------
# recurrences


def _recurrence(first: int, second: int, coeff: int) -> Iterator[tuple[int, int]]:
    u0, u1 = first, second
    k = 0
    while True:
        yield k, u0
        u0, u1 = u1, coeff * u1 - u0
        k += 1


@dataclass(frozen=True)
class SequencePair:
    context: PairContext

    def v(self) -> Iterator[tuple[int, int]]:
        c = self.context
        return _recurrence(2 * c.epsilon, c.epsilon * c.s + c.b, c.s)

    def w(self) -> Iterator[tuple[int, int]]:
        c = self.context
        return _recurrence(2 * c.epsilon, c.epsilon * c.t + c.b, c.t)

    def v_term(self, m: int) -> int:
        return _term(self.v(), m)

    def w_term(self, n: int) -> int:
        return _term(self.w(), n)


def _term(gen: Iterator[tuple[int, int]], k: int) -> int:
    if k < 0:
        raise DomainError("index must be non-negative")
    for i, value in gen:
        if i == k:
            return value
    raise AssertionError("unreachable")


def sequence_pair(a: int, b: int, epsilon: int) -> SequencePair:
    return SequencePair(pair_context(a, b, epsilon))


def closed_form_v(
    context: PairContext,
    m: int,
    precision_bits: int = DEFAULT_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
) -> int:
    """Evaluate v_m from the explicit two-term formula and round it.

    v_m = (e*sqrt(a) + sqrt(b))/sqrt(a) * alpha^m + (e*sqrt(a) - sqrt(b))/sqrt(a) * alpha'^m
    with alpha, alpha' = (s +- sqrt(ab))/2.
    """
    if m < 0:
        raise DomainError("index must be non-negative")
    a, b, s, e = context.a, context.b, context.s, context.epsilon
    # about log2(alpha) bits per index, plus guard bits
    start = max(precision_bits, m * (s.bit_length() + 1) + 64)

    def attempt(prec: int) -> int:
        ra, rb, rab = real(a, prec).sqrt(), real(b, prec).sqrt(), real(a * b, prec).sqrt()
        alpha, alpha_bar = (s + rab) / 2, (s - rab) / 2
        value = (e * ra + rb) / ra * alpha**m + (e * ra - rb) / ra * alpha_bar**m
        n = value.unique_integer()
        if n is None:
            raise PrecisionError(f"closed form for v_{m} not resolved at {prec} bits")
        return n

    return escalate(attempt, start, max(cap, start))


def closed_form_enclosure(context: PairContext, m: int, which: Literal["v", "w"] = "v",
                          precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    k = context.a if which == "v" else context.a + 1
    root = context.s if which == "v" else context.t
    e, b, prec = context.epsilon, context.b, precision_bits
    rk, rb, rkb = real(k, prec).sqrt(), real(b, prec).sqrt(), real(k * b, prec).sqrt()
    unit, unit_bar = (root + rkb) / 2, (root - rkb) / 2
    return (e * rk + rb) / rk * unit**m + (e * rk - rb) / rk * unit_bar**m


def congruence_class_mod_b2(
    context: PairContext, index: int, parity: int, which: Literal["v", "w"] = "v"
) -> int:
    """Residue mod b^2 of v_{2k+parity} (or w_{2k+parity}), with k = index."""
    if index < 0 or parity not in (0, 1):
        raise DomainError("index must be >= 0 and parity 0 or 1")
    b, e, k = context.b, context.epsilon, index
    coeff, root = (context.a, context.s) if which == "v" else (context.a + 1, context.t)
    if parity == 0:
        r = 2 * e + b * (coeff * e * k * k + root * k)
    else:
        # k(k+1) is even
        r = e * root + b * (coeff * root * e * (k * (k + 1) // 2) + (2 * k + 1))
    return r % (b * b)


# ---------------------------------------------------------------------------
# intersections


@dataclass
class Intersection:
    a: int
    b: int
    epsilon: int
    m: int
    n: int
    z: int
    derived_c: int
    checks: dict[str, bool] = field(default_factory=dict)

    def as_record(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "epsilon": self.epsilon,
            "m": self.m,
            "n": self.n,
            "z": self.z,
            "derived_c": self.derived_c,
        }

    @property
    def violations(self) -> list[str]:
        return [name for name, ok in self.checks.items() if not ok]


def index_relation_checks(a: int, b: int, m: int, n: int) -> dict[str, bool]:
    """Evaluate the index relations every genuine intersection should obey.

    These are only guaranteed under the minimality assumption on (a, b)
    (a = 3 contexts violate it), so they are reported, never raised.
    """
    return {
        "both_even": m % 2 == 0 and n % 2 == 0,
        "m_gt_n": m > n,
        "n_le_m_le_1.5n+1": n <= m and 2 * m <= 3 * n + 2,
        # m > 0.4672 * sqrt(b/(a+1)), exactly: m^2 (a+1) > 0.4672^2 b
        "m_above_gap_bound": m > 0 and m * m * (a + 1) > GAP_CONSTANT**2 * b,
    }


def find_intersections(a: int, b: int, m_max: int, epsilons=(1, -1)) -> list[Intersection]:
    """All v_m = w_n with 0 <= m <= m_max giving a positive c = (z^2 - 4)/b.

    The trivial coincidence v_0 = w_0 = 2e (c = 0) is not reported.
    """
    out = []
    for e in epsilons:
        pair = sequence_pair(a, b, e)
        w_iter = pair.w()
        n, w = next(w_iter)
        for m, v in pair.v():
            if m > m_max:
                break
            while w < v:
                n, w = next(w_iter)
            if w == v and v * v > 4:
                c, rem = divmod(v * v - 4, b)
                hit = Intersection(a, b, e, m, n, v, c, index_relation_checks(a, b, m, n))
                hit.checks["c_integral"] = rem == 0
                out.append(hit)
    out.sort(key=lambda h: (h.m, h.n, h.epsilon))
    return out
