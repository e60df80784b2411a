"""Exact integer primitives and certified real arithmetic.

Certified reals are Arb balls (via python-flint): a dyadic midpoint and a
radius such that the exact value always lies inside.  Every operation runs at
an explicit working precision; results carry the precision they were built
with so that callers can re-evaluate at a higher one when a decision is not
yet certified.

flint keeps its working precision in a process-global context, so these
functions are safe across processes but not across threads.
"""

from __future__ import annotations

import decimal
import enum
import math
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, TypeVar, Union

import flint
from flint import arb, fmpq, fmpz

from .errors import DomainError, PrecisionError

DEFAULT_PRECISION = 256
DEFAULT_PRECISION_CAP = 16384

Number = Union[int, Fraction]
T = TypeVar("T")


# ---------------------------------------------------------------------------
# integers


def isqrt(n: int) -> int:
    """floor(sqrt(n)) for n >= 0."""
    if n < 0:
        raise DomainError(f"isqrt of negative number {n}")
    return math.isqrt(n)


def perfect_square_root(n: int) -> int | None:
    if n < 0:
        return None
    r = math.isqrt(n)
    return r if r * r == n else None


# ---------------------------------------------------------------------------
# certified reals


@contextmanager
def working_precision(bits: int):
    old = flint.ctx.prec
    flint.ctx.prec = bits
    try:
        yield
    finally:
        flint.ctx.prec = old


def _arb_to_fraction(x: arb) -> Fraction:
    man, exp = x.man_exp()
    man, exp = int(man), int(exp)
    return Fraction(man * (1 << exp)) if exp >= 0 else Fraction(man, 1 << -exp)


def _to_arb(value, prec: int) -> arb:
    if isinstance(value, CertifiedReal):
        return value.ball
    with working_precision(prec):
        if isinstance(value, arb):
            return value
        if isinstance(value, bool):
            raise TypeError("bool is not a number here")
        if isinstance(value, int):
            return arb(fmpz(value))
        if isinstance(value, Fraction):
            return arb(fmpq(value.numerator, value.denominator))
        if isinstance(value, str):
            f = Fraction(value)
            return arb(fmpq(f.numerator, f.denominator))
    raise TypeError(f"cannot lift {type(value).__name__} to a certified real")


class Sign(enum.Enum):
    NEGATIVE = -1
    INDETERMINATE = 0
    POSITIVE = 1


@dataclass(frozen=True)
class CertifiedReal:
    ball: arb = field(repr=False)
    precision_bits: int = DEFAULT_PRECISION

    @classmethod
    def of(cls, value, precision_bits: int = DEFAULT_PRECISION) -> "CertifiedReal":
        """Enclose an int, Fraction or decimal string such as '2.96e28'."""
        return cls(_to_arb(value, precision_bits), precision_bits)

    # -- views ---------------------------------------------------------------

    @property
    def midpoint(self) -> Fraction:
        return _arb_to_fraction(self.ball.mid())

    @property
    def radius(self) -> Fraction:
        return _arb_to_fraction(self.ball.rad())

    @property
    def lower(self) -> Fraction:
        return self.midpoint - self.radius

    @property
    def upper(self) -> Fraction:
        return self.midpoint + self.radius

    def is_finite(self) -> bool:
        return self.ball.is_finite()

    def contains(self, value) -> bool:
        if isinstance(value, float):
            value = Fraction(value)
        if isinstance(value, (int, Fraction)):
            return self.lower <= value <= self.upper
        return self.ball.contains(_to_arb(value, self.precision_bits))

    def sign(self) -> Sign:
        if not self.is_finite():
            return Sign.INDETERMINATE
        if self.ball > 0:
            return Sign.POSITIVE
        if self.ball < 0:
            return Sign.NEGATIVE
        return Sign.INDETERMINATE

    def unique_integer(self) -> int | None:
        """The only integer inside the enclosure, if the radius is < 1/2."""
        if not self.is_finite() or self.radius >= Fraction(1, 2):
            return None
        n = round(self.midpoint)
        return n if self.contains(n) else None

    def floor(self) -> int | None:
        """floor(x) if it is the same for every point of the enclosure."""
        if not self.is_finite():
            return None
        lo, hi = math.floor(self.lower), math.floor(self.upper)
        return lo if lo == hi else None

    def floor_upper(self) -> int:
        return math.floor(self.upper)

    def decimal_bounds(self, digits: int = 30) -> tuple[str, str]:
        """Outward-rounded decimal endpoints, for serialization."""
        lo, hi = self.lower, self.upper
        ctx_lo = decimal.Context(prec=digits, rounding=decimal.ROUND_FLOOR)
        ctx_hi = decimal.Context(prec=digits, rounding=decimal.ROUND_CEILING)
        lo_d = ctx_lo.divide(decimal.Decimal(lo.numerator), decimal.Decimal(lo.denominator))
        hi_d = ctx_hi.divide(decimal.Decimal(hi.numerator), decimal.Decimal(hi.denominator))
        return str(lo_d), str(hi_d)

    def __float__(self) -> float:
        return float(self.midpoint)

    def __str__(self) -> str:
        return self.ball.str(10, radius=True)

    def __repr__(self) -> str:
        return f"CertifiedReal({self.ball.str(15, radius=True)}, prec={self.precision_bits})"

    # -- arithmetic ----------------------------------------------------------

    def _binary(self, other, op) -> "CertifiedReal":
        prec = self.precision_bits
        if isinstance(other, CertifiedReal):
            prec = min(prec, other.precision_bits)
        y = _to_arb(other, prec)
        with working_precision(prec):
            return CertifiedReal(op(self.ball, y), prec)

    def __add__(self, other):
        return self._binary(other, lambda x, y: x + y)

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, lambda x, y: x - y)

    def __rsub__(self, other):
        return self._binary(other, lambda x, y: y - x)

    def __mul__(self, other):
        return self._binary(other, lambda x, y: x * y)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, lambda x, y: x / y)

    def __rtruediv__(self, other):
        return self._binary(other, lambda x, y: y / x)

    def __neg__(self):
        return CertifiedReal(-self.ball, self.precision_bits)

    def __abs__(self):
        return CertifiedReal(abs(self.ball), self.precision_bits)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise TypeError("only integer powers are supported")
        with working_precision(self.precision_bits):
            return CertifiedReal(self.ball ** k, self.precision_bits)

    def sqrt(self) -> "CertifiedReal":
        return certified_sqrt(self)

    def log(self) -> "CertifiedReal":
        return certified_log(self)

    def exp(self) -> "CertifiedReal":
        with working_precision(self.precision_bits):
            return CertifiedReal(self.ball.exp(), self.precision_bits)


def real(value, precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    return CertifiedReal.of(value, precision_bits)


def certified_sqrt(x: CertifiedReal | Number, precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    if not isinstance(x, CertifiedReal):
        x = real(x, precision_bits)
    if x.sign() is Sign.NEGATIVE:
        raise DomainError(f"square root of negative enclosure {x}")
    with working_precision(x.precision_bits):
        return CertifiedReal(x.ball.sqrt(), x.precision_bits)


def certified_log(x: CertifiedReal | Number, precision_bits: int = DEFAULT_PRECISION) -> CertifiedReal:
    if not isinstance(x, CertifiedReal):
        x = real(x, precision_bits)
    if x.sign() is not Sign.POSITIVE:
        raise DomainError(f"log of enclosure not strictly positive: {x}")
    with working_precision(x.precision_bits):
        return CertifiedReal(x.ball.log(), x.precision_bits)


def certified_max(*xs: CertifiedReal) -> CertifiedReal:
    """Enclosure of max(xs): [max of lowers, max of uppers]."""
    prec = min(x.precision_bits for x in xs)
    best = xs[0].ball
    with working_precision(prec):
        for x in xs[1:]:
            best = best.max(x.ball)
    return CertifiedReal(best, prec)


def certified_sign(
    x: CertifiedReal | Callable[[int], CertifiedReal],
    escalate_to: int = DEFAULT_PRECISION_CAP,
    precision_bits: int = DEFAULT_PRECISION,
) -> Sign:
    """Sign of ``x``, escalating precision when ``x`` is a recomputable expression.

    ``x`` may be a fixed enclosure or a callable mapping a precision (bits) to
    an enclosure.  Callables are re-evaluated at doubled precision until the
    sign is certified or ``escalate_to`` is exceeded.
    """
    if isinstance(x, CertifiedReal):
        return x.sign()
    prec = precision_bits
    while True:
        s = x(prec).sign()
        if s is not Sign.INDETERMINATE or prec * 2 > escalate_to:
            return s
        prec *= 2


def escalate(
    fn: Callable[[int], T],
    precision_bits: int = DEFAULT_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
) -> T:
    """Call ``fn(prec)``, doubling ``prec`` on PrecisionError up to ``cap``."""
    prec = precision_bits
    while True:
        try:
            return fn(prec)
        except PrecisionError:
            if prec * 2 > cap:
                raise
            prec *= 2


def distance_to_nearest_integer(x: CertifiedReal) -> CertifiedReal:
    """Enclosure of ||x||, the distance from x to the nearest integer."""
    if not x.is_finite() or x.radius >= Fraction(1, 4):
        raise PrecisionError(f"enclosure too wide for nearest-integer distance: {x}")
    n = round(x.midpoint)
    d = abs(x - n)
    if d.upper > Fraction(1, 2):
        raise PrecisionError(f"nearest integer of {x} is ambiguous")
    return d


# ---------------------------------------------------------------------------
# continued fractions


@dataclass(frozen=True)
class ContinuedFraction:
    partial_quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.partial_quotients)


def iter_partial_quotients(x: CertifiedReal) -> Iterator[int]:
    """Yield certified partial quotients of x until the enclosure runs out."""
    index = 0
    while True:
        a = x.floor()
        if a is None:
            raise PrecisionError(f"partial quotient {index} not certified", index=index)
        yield a
        frac = x - a
        if frac.sign() is not Sign.POSITIVE:
            raise PrecisionError(
                f"remainder after partial quotient {index} not certified nonzero",
                index=index + 1,
            )
        x = 1 / frac
        index += 1


def convergents_from(quotients) -> Iterator[tuple[int, int]]:
    p_prev, q_prev, p, q = 1, 0, None, None
    p_prev2, q_prev2 = 0, 1
    for a in quotients:
        p = a * p_prev + p_prev2
        q = a * q_prev + q_prev2
        yield p, q
        p_prev2, q_prev2, p_prev, q_prev = p_prev, q_prev, p, q


def continued_fraction_of(x: CertifiedReal, depth: int) -> ContinuedFraction:
    quotients: list[int] = []
    it = iter_partial_quotients(x)
    while len(quotients) < depth:
        quotients.append(next(it))
    return ContinuedFraction(tuple(quotients), tuple(convergents_from(quotients)))
