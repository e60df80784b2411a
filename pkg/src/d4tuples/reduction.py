"""Baker-Davenport reduction of huge bounds on m.

Dividing 0 < Lambda < alpha^(1-2m) by log(beta) gives

    0 < m*kappa - n + mu < A * B^(-m),
    kappa = log(alpha)/log(beta), mu = log(gamma)/log(beta),
    A = alpha/log(beta), B = alpha^2.

For a convergent p/q of kappa with q > 6M, if eps0 = ||mu q|| - M |q kappa - p| > 0
then every solution with m <= M has m < log(A q / eps0) / log(B).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Optional

from .arith import (
    DEFAULT_PRECISION,
    DEFAULT_PRECISION_CAP,
    CertifiedReal,
    Sign,
    distance_to_nearest_integer,
    iter_partial_quotients,
)
from .bounds import linear_form_params
from .errors import DomainError, PrecisionError, ResourceError
from .pell import find_intersections, pair_context

log = logging.getLogger(__name__)

MAX_CF_DEPTH = 5000
EXTRA_CONVERGENTS = 10


@dataclass(frozen=True)
class ReductionInstance:
    a: int
    b: int
    epsilon: int
    kappa: CertifiedReal
    mu: CertifiedReal
    A: CertifiedReal
    B: CertifiedReal
    M: int

    @property
    def precision_bits(self) -> int:
        return self.kappa.precision_bits


@dataclass(frozen=True)
class BDStep:
    epsilon: int
    q: int
    p: int
    eps0: CertifiedReal
    new_M: int
    skipped: int
    precision_bits: int


@dataclass
class ReductionTranscript:
    a: int
    b: int
    M0: int
    steps: list[tuple[int, BDStep]] = field(default_factory=list)
    bounds: list[int] = field(default_factory=list)
    final_M: int = 0
    precision_used: int = 0
    status: str = "stable"

    @property
    def rounds(self) -> int:
        return len(self.bounds)

    @property
    def resolved(self) -> bool:
        return self.status != "failed"

    def records(self) -> list[dict]:
        out = []
        for round_index, step in self.steps:
            lo, hi = step.eps0.decimal_bounds()
            out.append({
                "a": self.a,
                "b": self.b,
                "epsilon": step.epsilon,
                "step": round_index,
                "q": step.q,
                "eps0_lo": lo,
                "eps0_hi": hi,
                "new_M": step.new_M,
                "precision_bits": step.precision_bits,
            })
        return out


def build_instance(a: int, b: int, epsilon: int, M: int,
                   precision_bits: int = DEFAULT_PRECISION) -> ReductionInstance:
    if M < 1:
        raise DomainError(f"M must be at least 1, got {M}")
    prec = max(precision_bits, 2 * M.bit_length() + 64)
    lf = linear_form_params(pair_context(a, b, epsilon), prec)
    lb = lf.log_beta
    return ReductionInstance(
        a, b, epsilon,
        kappa=lf.log_alpha / lb,
        mu=lf.log_gamma / lb,
        A=lf.alpha / lb,
        B=lf.alpha * lf.alpha,
        M=M,
    )


def convergents_beyond(x: CertifiedReal, minimum: int, extra: int) -> list[tuple[int, int]]:
    """The first convergent p/q of x with q > minimum and the next ``extra`` ones."""
    out: list[tuple[int, int]] = []
    p2, q2, p1, q1 = 0, 1, 1, 0
    for depth, a in enumerate(iter_partial_quotients(x)):
        if depth >= MAX_CF_DEPTH:
            raise ResourceError(f"no convergent denominator above {minimum} within {MAX_CF_DEPTH} terms")
        p, q = a * p1 + p2, a * q1 + q2
        p2, q2, p1, q1 = p1, q1, p, q
        if q > minimum:
            out.append((p, q))
            if len(out) > extra:
                return out
    raise AssertionError("unreachable")


def bd_step(inst: ReductionInstance, skip: int = 0) -> Optional[BDStep]:
    """One reduction step with the (skip+1)-th convergent denominator above 6M.

    Returns None when eps0 is not certified positive.  Raises PrecisionError
    when the continued fraction or the nearest-integer distances cannot be
    certified at the instance's precision.
    """
    p, q = convergents_beyond(inst.kappa, 6 * inst.M, skip)[skip]
    kappa_err = abs(inst.kappa * q - p)
    eps0 = distance_to_nearest_integer(inst.mu * q) - inst.M * kappa_err
    if eps0.sign() is not Sign.POSITIVE:
        return None
    bound = (inst.A * q / eps0).log() / inst.B.log()
    new_M = max(0, bound.floor_upper())
    return BDStep(inst.epsilon, q, p, eps0, new_M, skip, inst.precision_bits)


def _branch_step(a: int, b: int, epsilon: int, M: int, precision_bits: int, cap: int) -> Optional[BDStep]:
    prec = precision_bits
    while True:
        try:
            inst = build_instance(a, b, epsilon, M, prec)
            for skip in range(EXTRA_CONVERGENTS + 1):
                step = bd_step(inst, skip)
                if step is not None:
                    return step
        except PrecisionError as exc:
            log.debug("(%d, %d, %+d) M=%d at %d bits: %s", a, b, epsilon, M, prec, exc)
        if prec * 2 > cap:
            return None
        prec *= 2


def reduce_pair(a: int, b: int, M0: int, max_steps: int = 5,
                precision_bits: int = DEFAULT_PRECISION, cap: int = DEFAULT_PRECISION_CAP,
                epsilons=(1, -1)) -> ReductionTranscript:
    """Iterate reduction steps on both sign branches until M stops dropping."""
    if M0 < 1:
        raise DomainError(f"M0 must be at least 1, got {M0}")
    tr = ReductionTranscript(a, b, M0)
    M = M0
    while True:
        if tr.rounds >= max_steps:
            tr.status = "max_steps"
            break
        if M < 1:
            tr.status = "stable"
            break
        steps = [_branch_step(a, b, e, M, precision_bits, cap) for e in epsilons]
        if any(s is None for s in steps):
            tr.status = "failed"
            break
        new_M = max(s.new_M for s in steps)
        if new_M >= M:
            tr.status = "stable"
            break
        round_index = tr.rounds + 1
        tr.steps.extend((round_index, s) for s in steps)
        tr.precision_used = max([tr.precision_used] + [s.precision_bits for s in steps])
        tr.bounds.append(new_M)
        M = new_M
    tr.final_M = M
    return tr


def brute_force_oracle(a: int, b: int, M: int) -> list[tuple[int, int, int, int]]:
    """All intersections v_m = w_n with 2 <= m <= M, by direct scan."""
    if M > 10**4:
        raise DomainError("brute force is limited to M <= 10^4")
    return [(h.m, h.n, h.z, h.epsilon) for h in find_intersections(a, b, M) if h.m >= 2]
