"""Acceptance criteria, one test each.

Every test records a single PASS/FAIL line with its runtime; the lines are
printed at the end of the pytest run (see conftest.py) and also when this file
is executed directly.
"""

import subprocess
import sys
import time
from contextlib import contextmanager

import pytest
from hypothesis import given, settings, strategies as st

from d4tuples.arith import Sign
from d4tuples.bounds import (
    hypergeometric_eliminates,
    index_gap_negative,
    large_a_contradiction,
    large_a_contradiction_all,
    linear_form,
    linear_form_is_small,
    linear_form_params,
    rickert_lambda,
    sextuple_m_bound,
)
from d4tuples.pell import (
    b1,
    b2,
    b3,
    b_nu,
    admissible_fundamental_solutions,
    closed_form_v,
    congruence_class_mod_b2,
    find_intersections,
    fundamental_solutions,
    pair_context,
    sequence_pair,
)
from d4tuples.reduction import brute_force_oracle
from d4tuples.verify import campaign_b1, campaign_b2, conjecture1_scan

RESULTS: list[str] = []

# coefficients as printed, highest degree first
PRINTED = {
    1: (64, 32),
    2: (1024, 1536, 704, 96),
    3: (16384, 40960, 37888, 15872, 2944, 192),
    4: (262144, 917504, 1294336, 942080, 375808, 80384, 80384, 320),
}


@contextmanager
def criterion(number: int, title: str, budget_s: float):
    start = time.perf_counter()
    note = []
    try:
        yield note
    except BaseException as exc:
        took = time.perf_counter() - start
        detail = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        RESULTS.append(f"criterion {number:>2} FAIL  {title} ({took:.2f}s): {detail[:160]}")
        raise
    took = time.perf_counter() - start
    if took > budget_s:
        RESULTS.append(f"criterion {number:>2} FAIL  {title} ({took:.2f}s over {budget_s:g}s budget)")
        pytest.fail(f"criterion {number} took {took:.2f}s, budget {budget_s}s")
    extra = f": {'; '.join(note)}" if note else ""
    RESULTS.append(f"criterion {number:>2} PASS  {title} ({took:.2f}s){extra}")


def _poly(coeffs, a):
    v = 0
    for c in coeffs:
        v = v * a + c
    return v


def test_criterion_01_quadruple_regression():
    with criterion(1, "check 3 4 15 224 / extend 3 4 15", 5.0) as note:
        # the budget covers two interpreter start-ups; each command is timed below
        for argv, expect in ((["check", "3", "4", "15", "224"], "D(4)-tuple: yes"),
                             (["extend", "3", "4", "15"], "d+ = 224")):
            t = time.perf_counter()
            proc = subprocess.run([sys.executable, "-m", "d4tuples.cli", *argv],
                                  capture_output=True, text=True)
            took = time.perf_counter() - t
            assert proc.returncode == 0 and expect in proc.stdout, proc.stdout + proc.stderr
            assert took < 1.0, f"{argv[0]} took {took:.2f}s"
            note.append(f"{argv[0]} {took:.2f}s")
        assert "{3, 4, 15, 224} is a D(4)-quadruple" in proc.stdout


def test_criterion_02_b_nu_polynomials():
    with criterion(2, "(s_nu^2-4)/a equals printed b_1..b_4, a in [1,10]", 1.0):
        mismatches = [(a, nu, b_nu(a, nu) - _poly(PRINTED[nu], a))
                      for nu in (1, 2, 3, 4) for a in range(1, 11)
                      if b_nu(a, nu) != _poly(PRINTED[nu], a)]
        assert not mismatches, f"printed polynomial differs at (a, nu, computed - printed): {mismatches[:3]}"


def test_criterion_03_known_intersection():
    with criterion(3, "(3,15): v_2 = w_2 = 58, c = 224, 0 < Lambda < alpha^-3", 1.0) as note:
        hits = find_intersections(3, 15, 50)
        assert [(h.m, h.n, h.z, h.epsilon) for h in hits] == [(2, 2, 58, -1)]
        assert hits[0].derived_c == 224
        ctx = pair_context(3, 15, -1)
        assert linear_form_is_small(ctx, 2, 2)
        lam = linear_form(ctx, 2, 2)
        alpha = linear_form_params(ctx).alpha
        assert lam.sign() is Sign.POSITIVE and (alpha ** -3 - lam).sign() is Sign.POSITIVE
        note.append(f"Lambda in [{lam.decimal_bounds(8)[0]}, {lam.decimal_bounds(8)[1]}]")


def test_criterion_04_sextuple_bound():
    with criterion(4, "sextuple_m_bound(170016) in [4.0e19, 4.5e19]", 1.0) as note:
        M = sextuple_m_bound(b2(5))
        assert b2(5) == 170016
        assert 4 * 10**19 <= M <= 45 * 10**18
        assert abs(M - 43 * 10**18) <= 43 * 10**18 // 20
        note.append(f"M = {M}")


def test_criterion_05_hypergeometric_elimination():
    with criterion(5, "hypergeometric: b_2 pairs not eliminated, b_3 pairs eliminated, a >= 6 contradiction", 5.0) as note:
        b3_ok = {a: hypergeometric_eliminates(a, b3(a)) for a in range(1, 6)}
        assert all(b3_ok.values()), b3_ok
        assert large_a_contradiction(6) and large_a_contradiction_all()
        b2_verdicts = {a: hypergeometric_eliminates(a, b2(a)) for a in range(1, 6)}
        note.append(f"b_2 verdicts {b2_verdicts}")
        eliminated = [a for a, v in b2_verdicts.items() if v]
        assert not eliminated, f"(a, b_2(a)) already eliminated for a in {eliminated}"


def test_criterion_06_b2_sweep():
    with criterion(6, "campaign_b2 closes the five (a, b_2(a)) with final_M <= 6 below the gap floor", 60.0) as note:
        results = [r for r in campaign_b2() if r.b == b2(r.a) and r.a <= 5]
        assert len(results) == 5
        for r in results:
            assert r.closed and r.final_M <= 6 and r.detail["final_M_below_gap_floor"], r
            assert float(r.detail["gap_floor_lo"]) > 12
        note.append("first bounds " + str([r.detail["bounds"][0] for r in results]))


def test_criterion_07_b1_sweep():
    with criterion(7, "campaign_b1(a_max=500): final_M <= 1 in <= 3 steps, a != 3", 30 * 60.0) as note:
        results = campaign_b1(500)
        open_cases = [r.a for r in results if r.a != 3 and not (r.closed and r.final_M <= 1 and r.steps <= 3)]
        assert not open_cases, open_cases[:10]
        assert next(r for r in results if r.a == 3).verdict.value == "skipped"
        note.append(f"max steps {max(r.steps for r in results)}")


def test_criterion_08_oracle_consistency():
    with criterion(8, "brute force: no m >= 2 hit for (a, b_1(a)), a <= 50, a != 3, m <= 1000; a = 3 family found", 300.0):
        bad = [a for a in range(1, 51) if a != 3 and brute_force_oracle(a, b1(a), 1000)]
        assert not bad, bad
        # the a = 3 family lives on the second solution class, b = 15
        assert brute_force_oracle(3, 15, 1000) == [(2, 2, 58, -1)]


def test_criterion_09_scan():
    with criterion(9, "scan to c <= 10^4: no violation with c < 0.25 b^3; {3,4,15,224} confirmed", 600.0) as note:
        rep = conjecture1_scan(10**4)
        assert rep.violations_below == []
        assert (3, 4, 15, 224) in rep.quadruples
        note.append(f"{rep.triples_seen} triples, {rep.pairs_checked} shared pairs, "
                    f"{len(rep.violations_above)} violations with c >= 0.25 b^3")


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 60), st.integers(1, 3), st.sampled_from([1, -1]), st.integers(0, 50),
       st.integers(0, 15), st.integers(0, 1), st.sampled_from(["v", "w"]))
def _recurrence_properties(a, nu, e, m, k, parity, which):
    ctx = pair_context(a, b_nu(a, nu), e)
    pair = sequence_pair(a, ctx.b, e)
    assert closed_form_v(ctx, m) == pair.v_term(m)
    term = pair.v_term if which == "v" else pair.w_term
    assert congruence_class_mod_b2(ctx, k, parity, which) == term(2 * k + parity) % ctx.b**2


def test_criterion_10_certified_properties():
    with criterion(10, "closed forms, congruences mod b^2, z0^2 = 4 mod b, lambda < 2, precision stability", 300.0) as note:
        _recurrence_properties()
        classes = 0
        for a in range(1, 15):
            for nu in (1, 2, 3):
                b = b_nu(a, nu)
                for which in ("first", "second"):
                    k = a if which == "first" else a + 1
                    for f in fundamental_solutions(a, b, which):
                        assert (k * (f.z0**2 - 4)) % b == 0
                    for f in admissible_fundamental_solutions(a, b, which):
                        assert (f.z0**2 - 4) % b == 0
                        classes += 1
        for a in range(1, 30):
            base = a * (a + 1)
            k0 = -(-270 * a * (a + 1) ** 2 // base)
            for mult in (k0, k0 + 1, 3 * k0, 100 * k0):
                assert (2 - rickert_lambda(a, mult * base).lam).sign() is Sign.POSITIVE
        ctx = pair_context(3, 15, -1)
        verdicts = set()
        for p in (128, 256, 512, 1024, 4096):
            verdicts.add((
                tuple(hypergeometric_eliminates(a, b2(a), p) for a in range(1, 7)),
                tuple(hypergeometric_eliminates(a, b3(a), p) for a in range(1, 6)),
                large_a_contradiction(6, precision_bits=p),
                linear_form_is_small(ctx, 2, 2, p),
                index_gap_negative(ctx, 2, 2, p),
            ))
        assert len(verdicts) == 1
        note.append(f"{classes} admissible classes")


if __name__ == "__main__":
    code = pytest.main([__file__, "-q", "-p", "no:cacheprovider"])
    sys.exit(code)
