"""Verification campaigns: hypergeometric elimination, the two reduction sweeps,
the identities for two triples sharing b and c, and desk-scale brute force.

Campaign work items are independent and keyed; ``run_campaign`` runs them in a
process pool, checkpoints one marker file per key, and aggregates the records
in key order so the output does not depend on the worker count.
"""

from __future__ import annotations

import csv
import enum
import json
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from itertools import combinations
from pathlib import Path
from typing import Optional

from .arith import DEFAULT_PRECISION, DEFAULT_PRECISION_CAP, Sign, perfect_square_root, real
from .bounds import (
    derive_b1_m_constant,
    hypergeometric_eliminates,
    large_a_contradiction,
    large_a_contradiction_all,
    log_alpha,
    m_lower_bound,
    sextuple_m_bound,
)
from .errors import DomainError, PrecisionError
from .pell import b1, b2, b3, find_intersections, second_class_b_values
from .reduction import brute_force_oracle, reduce_pair
from .tuples import d_minus, is_d4_tuple, partner_table, regularity_relation_holds, triples_with_largest

log = logging.getLogger(__name__)

B1_A_MAX = 18072
B2_A_MAX = 5
B2_FINAL_M = 6
B1_FINAL_M = 1
ORACLE_FLOOR = 20

EXIT_OK = 0
EXIT_UNRESOLVED = 2
EXIT_COUNTEREXAMPLE = 3


class Verdict(str, enum.Enum):
    ELIMINATED_HYPERGEOMETRIC = "eliminated_hypergeometric"
    REDUCED = "reduced"
    SOLUTION_FOUND = "solution_found"
    UNRESOLVED = "unresolved"
    SKIPPED = "skipped"


@dataclass
class CaseResult:
    a: int
    b: int
    verdict: Verdict
    final_M: Optional[int] = None
    steps: int = 0
    precision_bits: int = 0
    closed: bool = False
    solutions: list = field(default_factory=list)
    detail: dict = field(default_factory=dict)
    transcript: list = field(default_factory=list)
    wall_ms: int = 0

    def as_record(self) -> dict:
        rec = asdict(self)
        rec["verdict"] = self.verdict.value
        del rec["wall_ms"]
        return rec

    @property
    def status(self) -> str:
        if self.verdict is Verdict.SOLUTION_FOUND:
            return "counterexample"
        if self.verdict is Verdict.SKIPPED:
            return "skipped"
        return "closed" if self.closed else "unresolved"


# ---------------------------------------------------------------------------
# b = b_2 and beyond


def b2_initial_bound() -> int:
    """m < M0 for every pair (a, b_2(a)), a <= 5; b_2(5) is the largest b."""
    return sextuple_m_bound(b2(B2_A_MAX))


def _oracle_solutions(a: int, b: int, final_M: int) -> list:
    return brute_force_oracle(a, b, max(final_M, ORACLE_FLOOR))


def b2_pair_case(a: int, M0: Optional[int] = None, max_steps: int = 5,
                 precision_bits: int = DEFAULT_PRECISION, cap: int = DEFAULT_PRECISION_CAP) -> CaseResult:
    b = b2(a)
    start = time.perf_counter()
    M0 = b2_initial_bound() if M0 is None else M0
    floor = m_lower_bound(a, b, precision_bits=precision_bits)
    tr = reduce_pair(a, b, M0, max_steps=max_steps, precision_bits=precision_bits, cap=cap)
    sols = _oracle_solutions(a, b, tr.final_M)
    below_floor = (floor - tr.final_M).sign() is Sign.POSITIVE
    detail = {
        "M0": M0,
        "bounds": tr.bounds,
        "reduction_status": tr.status,
        "gap_floor_lo": floor.decimal_bounds(12)[0],
        "final_M_below_gap_floor": below_floor,
        "hypergeometric_eliminates": hypergeometric_eliminates(a, b, precision_bits, cap),
    }
    verdict = Verdict.SOLUTION_FOUND if sols else (Verdict.REDUCED if tr.resolved else Verdict.UNRESOLVED)
    return CaseResult(
        a, b, verdict, tr.final_M, tr.rounds, tr.precision_used,
        closed=not sols and tr.resolved and tr.final_M <= B2_FINAL_M and below_floor,
        solutions=sols, detail=detail, transcript=tr.records(),
        wall_ms=int(1000 * (time.perf_counter() - start)),
    )


def hypergeometric_case(a: int, b: int, precision_bits: int = DEFAULT_PRECISION,
                        cap: int = DEFAULT_PRECISION_CAP) -> CaseResult:
    start = time.perf_counter()
    try:
        ok = hypergeometric_eliminates(a, b, precision_bits, cap)
    except PrecisionError as exc:
        return CaseResult(a, b, Verdict.UNRESOLVED, detail={"error": str(exc)})
    verdict = Verdict.ELIMINATED_HYPERGEOMETRIC if ok else Verdict.UNRESOLVED
    return CaseResult(a, b, verdict, closed=ok, precision_bits=precision_bits,
                      wall_ms=int(1000 * (time.perf_counter() - start)))


def large_a_case(precision_bits: int = DEFAULT_PRECISION) -> CaseResult:
    """All a >= 6 with b >= b_2 at once (reported under a = 6)."""
    start = time.perf_counter()
    at6 = large_a_contradiction(6, precision_bits=precision_bits)
    all_a = large_a_contradiction_all(6, precision_bits=precision_bits)
    ok = at6 and all_a
    return CaseResult(6, b2(6), Verdict.ELIMINATED_HYPERGEOMETRIC if ok else Verdict.UNRESOLVED,
                      closed=ok, precision_bits=precision_bits,
                      detail={"contradiction_at_6": at6, "relaxed_all_a_ge_6": all_a,
                              "eliminates_b2_6": hypergeometric_eliminates(6, b2(6), precision_bits)},
                      wall_ms=int(1000 * (time.perf_counter() - start)))


def b2_item_keys() -> list[str]:
    keys = [f"b2:{a}" for a in range(1, B2_A_MAX + 1)]
    keys += [f"b3:{a}" for a in range(1, B2_A_MAX + 1)]
    keys.append("large-a")
    return keys


def b2_item(key: str, max_steps: int = 5, precision_bits: int = DEFAULT_PRECISION,
            cap: int = DEFAULT_PRECISION_CAP) -> CaseResult:
    if key == "large-a":
        return large_a_case(precision_bits)
    kind, a = key.split(":")
    a = int(a)
    if kind == "b2":
        return b2_pair_case(a, max_steps=max_steps, precision_bits=precision_bits, cap=cap)
    if kind == "b3":
        return hypergeometric_case(a, b3(a), precision_bits, cap)
    raise DomainError(f"unknown b2-campaign item {key!r}")


def campaign_b2(precision_bits: int = DEFAULT_PRECISION, cap: int = DEFAULT_PRECISION_CAP) -> list[CaseResult]:
    return [b2_item(k, precision_bits=precision_bits, cap=cap) for k in b2_item_keys()]


# ---------------------------------------------------------------------------
# b = b_1


def b1_initial_bound(a: int, precision_bits: int = DEFAULT_PRECISION) -> int:
    """A bound m < M0 valid for the pair (a, 64a + 32).

    The two-logarithm route only bounds m once nu = m - n is controlled, so
    the general bound from the three-logarithm form is used, maxed with the
    nu = 2 value of the re-derived b_1 estimate.
    """
    b = b1(a)
    nu2_bound = derive_b1_m_constant().safe_constant * 4 * log_alpha(a, b, precision_bits)
    return max(sextuple_m_bound(b, precision_bits), math.ceil(nu2_bound.upper))


def b1_case(a: int, max_steps: int = 3, precision_bits: int = DEFAULT_PRECISION,
            cap: int = DEFAULT_PRECISION_CAP) -> CaseResult:
    b = b1(a)
    start = time.perf_counter()
    if a == 3:
        # excluded: {3, 4} is a D(4)-pair and the extra class
        # of solutions gives the known quadruples {3, 4, c, d+}
        return CaseResult(a, b, Verdict.SKIPPED, detail={"reason": "a = 3 is excluded"},
                          wall_ms=int(1000 * (time.perf_counter() - start)))
    M0 = b1_initial_bound(a, precision_bits)
    tr = reduce_pair(a, b, M0, max_steps=max_steps, precision_bits=precision_bits, cap=cap)
    sols = _oracle_solutions(a, b, tr.final_M) if tr.final_M <= 10**4 else []
    residual_ok = tr.final_M <= 10**4 and not sols
    verdict = Verdict.SOLUTION_FOUND if sols else (Verdict.REDUCED if tr.resolved else Verdict.UNRESOLVED)
    return CaseResult(
        a, b, verdict, tr.final_M, tr.rounds, tr.precision_used,
        closed=tr.resolved and not sols and (tr.final_M <= B1_FINAL_M or residual_ok),
        solutions=sols,
        detail={"M0": M0, "bounds": tr.bounds, "reduction_status": tr.status},
        transcript=tr.records(),
        wall_ms=int(1000 * (time.perf_counter() - start)),
    )


def campaign_b1(a_max: int = B1_A_MAX, a_min: int = 1, max_steps: int = 3,
                precision_bits: int = DEFAULT_PRECISION, cap: int = DEFAULT_PRECISION_CAP) -> list[CaseResult]:
    if a_max > B1_A_MAX:
        raise DomainError(f"a_max must not exceed {B1_A_MAX}")
    return [b1_case(a, max_steps, precision_bits, cap) for a in range(a_min, a_max + 1)]


# ---------------------------------------------------------------------------
# two triples sharing b and c


@dataclass
class SharedPairReport:
    a1: int
    a2: int
    b: int
    c: int
    d1: int
    d2: int
    relation_holds: tuple[bool, bool]
    lambdas: dict
    lambdas_in_range: dict
    conclusion_holds: bool
    is_quadruple: bool

    @property
    def ok(self) -> bool:
        return all(self.relation_holds) and self.conclusion_holds and self.is_quadruple


def _lambda(a: int, b: int, c: int, d: int) -> Fraction:
    # c = a*b*d + lambda * max{d, b}
    return Fraction(c - a * b * d, max(d, b))


def shared_pair_identity_check(a1: int, a2: int, b: int, c: int) -> SharedPairReport:
    if not 0 < a1 < a2 < b < c:
        raise DomainError("need 0 < a1 < a2 < b < c")
    if 4 * c >= b**3:
        raise DomainError("the check covers c < 0.25 b^3 only")
    if not (is_d4_tuple((a1, b, c)) and is_d4_tuple((a2, b, c))):
        raise DomainError(f"{{{a1}, {b}, {c}}} and {{{a2}, {b}, {c}}} must both be D(4)-triples")
    d1, d2 = d_minus(a1, b, c), d_minus(a2, b, c)
    per_index = (_lambda(a1, b, c, d1), _lambda(a2, b, c, d2))
    common = (_lambda(a1, b, c, d1), _lambda(a1, b, c, d2))
    in_range = lambda pair: all(1 < x < 4 for x in pair)  # noqa: E731
    return SharedPairReport(
        a1, a2, b, c, d1, d2,
        relation_holds=(regularity_relation_holds(a1, d1, b, c), regularity_relation_holds(a2, d2, b, c)),
        lambdas={"per_index": per_index, "common_a1": common},
        lambdas_in_range={"per_index": in_range(per_index), "common_a1": in_range(common)},
        conclusion_holds=(d1 == a2 and d2 == a1),
        is_quadruple=is_d4_tuple((a1, a2, b, c)),
    )


def inequality21_chain(a1: int, b: int, d1: int, precision_bits: int = DEFAULT_PRECISION) -> dict[str, bool]:
    """Replay the chain 2t1 < 4d1/b + 1  =>  ...  =>  c > a1^2 b^3/4 + 3b/4.

    Needs {a1, d1} to be a D(4)-pair (t1 integral).  c is c+(a1, b, d1),
    evaluated as a certified real, so {a1, b, d1} need not be a triple.
    """
    t1 = perfect_square_root(a1 * d1 + 4)
    if t1 is None:
        raise DomainError(f"{a1}*{d1}+4 is not a square")
    out = {"hypothesis": 2 * t1 * b < 4 * d1 + b}
    if not out["hypothesis"]:
        return out
    p = precision_bits
    r = real(a1 * b + 4, p).sqrt()
    u = real(b * d1 + 4, p).sqrt()
    c_plus = a1 + b + d1 + (a1 * b * d1 + r * t1 * u) / 2
    out["d1 > b(a1 b - 2)/4"] = 4 * d1 > b * (a1 * b - 2)
    out["t1 >= a1 b/2"] = 2 * t1 >= a1 * b
    out["d1 > b(a1 b - 1)/4"] = 4 * d1 > b * (a1 * b - 1)
    out["c+ > b + d1 + a1 b d1"] = (c_plus - (b + d1 + a1 * b * d1)).sign() is Sign.POSITIVE
    out["b + d1 + a1 b d1 > a1^2 b^3/4 + 3b/4"] = 4 * (b + d1 + a1 * b * d1) > a1 * a1 * b**3 + 3 * b
    return out


@dataclass
class ScanReport:
    limit: int
    c_range: tuple[int, int]
    triples_seen: int = 0
    pairs_checked: int = 0
    violations_below: list = field(default_factory=list)
    violations_above: list = field(default_factory=list)
    quadruples: list = field(default_factory=list)
    identity_failures: list = field(default_factory=list)
    lambda_reading_counts: dict = field(default_factory=lambda: {"per_index": 0, "common_a1": 0, "checked": 0})

    def merge(self, other: "ScanReport") -> None:
        self.c_range = (min(self.c_range[0], other.c_range[0]), max(self.c_range[1], other.c_range[1]))
        self.triples_seen += other.triples_seen
        self.pairs_checked += other.pairs_checked
        self.violations_below += other.violations_below
        self.violations_above += other.violations_above
        self.quadruples += other.quadruples
        self.identity_failures += other.identity_failures
        for k, v in other.lambda_reading_counts.items():
            self.lambda_reading_counts[k] += v


def scan_cells(c_lo: int, c_hi: int, identities: bool = False, partners=None) -> ScanReport:
    """For every c in [c_lo, c_hi], every b < c, test all a1 < a2 < b forming triples."""
    rep = ScanReport(c_hi, (c_lo, c_hi))
    for c in range(max(c_lo, 3), c_hi + 1):
        by_b: dict[int, list[int]] = {}
        for a, b in triples_with_largest(c, partners):
            by_b.setdefault(b, []).append(a)
            rep.triples_seen += 1
        for b, as_ in sorted(by_b.items()):
            for a1, a2 in combinations(sorted(as_), 2):
                rep.pairs_checked += 1
                quad = perfect_square_root(a1 * a2 + 4) is not None
                below = 4 * c < b**3
                if quad:
                    rep.quadruples.append((a1, a2, b, c))
                else:
                    (rep.violations_below if below else rep.violations_above).append((a1, a2, b, c))
                if identities and below:
                    r = shared_pair_identity_check(a1, a2, b, c)
                    counts = rep.lambda_reading_counts
                    counts["checked"] += 1
                    counts["per_index"] += r.lambdas_in_range["per_index"]
                    counts["common_a1"] += r.lambdas_in_range["common_a1"]
                    if not r.ok:
                        rep.identity_failures.append((a1, a2, b, c))
    return rep


def two_triple_scan(limit: int, identities: bool = False) -> ScanReport:
    if limit < 12:
        raise DomainError("limit must be at least 12")
    return scan_cells(3, limit, identities, partner_table(limit))


@dataclass
class SpotcheckReport:
    a_max: int
    m_max: int
    hits: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        for (a, _b), found in self.hits.items():
            if a != 3 and found:
                return False
        if any(a == 3 for a, _ in self.hits):
            return any(found for (a, _), found in self.hits.items() if a == 3)
        return True


def spotcheck_pairs(a: int) -> list[int]:
    bs = [b1(a), b2(a)]
    if a == 3:
        bs = second_class_b_values(1) + bs
    return bs


def spotcheck_item(a: int, m_max: int) -> dict[tuple[int, int], list]:
    return {(a, b): [(h.m, h.n, h.z, h.epsilon) for h in find_intersections(a, b, m_max) if h.m >= 2]
            for b in spotcheck_pairs(a)}


def pair_extension_spotcheck(a_max: int, m_max: int) -> SpotcheckReport:
    """Search v_m = w_n directly, independent of every analytic bound."""
    if a_max > 50 or m_max > 200:
        raise DomainError("spotcheck is limited to a_max <= 50, m_max <= 200")
    rep = SpotcheckReport(a_max, m_max)
    for a in range(1, a_max + 1):
        rep.hits.update(spotcheck_item(a, m_max))
    return rep


# interface names kept for existing callers and the campaign command
theorem15_identity_check = shared_pair_identity_check
conjecture1_scan = two_triple_scan
theorem_ap1_spotcheck = pair_extension_spotcheck


# ---------------------------------------------------------------------------
# campaign runner


CAMPAIGNS = ("b1", "b2", "conjecture1", "theorem15", "spotcheck")


@dataclass
class CampaignSpec:
    name: str
    a_range: Optional[tuple[int, int]] = None
    b_rule: str = "b1"
    max_steps: int = 3
    precision: int = DEFAULT_PRECISION
    precision_cap: int = DEFAULT_PRECISION_CAP
    parallelism: int = 1
    checkpoint_path: Optional[Path] = None
    output_dir: Optional[Path] = None
    limit: int = 10_000
    m_max: int = 200
    block: int = 500

    def __post_init__(self):
        if self.name not in CAMPAIGNS:
            raise DomainError(f"unknown campaign {self.name!r}; expected one of {', '.join(CAMPAIGNS)}")
        if self.name in ("b1", "spotcheck"):
            if self.a_range is None:
                self.a_range = (1, B1_A_MAX if self.name == "b1" else 50)
            lo, hi = self.a_range
            if lo < 1 or hi < lo:
                raise DomainError(f"empty a_range {self.a_range}")
        if self.parallelism < 1:
            raise DomainError("parallelism must be at least 1")

    def keys(self) -> list[str]:
        if self.name == "b2":
            return b2_item_keys()
        if self.name in ("b1", "spotcheck"):
            lo, hi = self.a_range
            return [f"a={a}" for a in range(lo, hi + 1)]
        return [f"c={lo}-{min(lo + self.block - 1, self.limit)}" for lo in range(3, self.limit + 1, self.block)]


def _case_record(res: CaseResult) -> dict:
    rec = res.as_record()
    rec["status"] = res.status
    return rec


def run_item(spec: CampaignSpec, key: str) -> tuple[dict, int]:
    """Run one work item; return (deterministic record, wall milliseconds)."""
    start = time.perf_counter()
    if spec.name == "b2":
        rec = _case_record(b2_item(key, max_steps=5, precision_bits=spec.precision, cap=spec.precision_cap))
    elif spec.name == "b1":
        a = int(key.split("=")[1])
        rec = _case_record(b1_case(a, spec.max_steps, spec.precision, spec.precision_cap))
    elif spec.name == "spotcheck":
        a = int(key.split("=")[1])
        hits = spotcheck_item(a, spec.m_max)
        found = any(hits.values())
        status = ("closed" if found else "unresolved") if a == 3 else ("counterexample" if found else "closed")
        rec = {"a": a, "hits": {str(b): v for (_, b), v in hits.items()}, "status": status}
    else:
        lo, hi = (int(x) for x in key.split("=")[1].split("-"))
        rep = scan_cells(lo, hi, identities=spec.name == "theorem15")
        bad = rep.identity_failures if spec.name == "theorem15" else rep.violations_below + rep.violations_above
        rec = {
            "c_lo": lo, "c_hi": hi,
            "triples": rep.triples_seen, "pairs": rep.pairs_checked,
            "violations_below": rep.violations_below, "violations_above": rep.violations_above,
            "quadruples": rep.quadruples, "identity_failures": rep.identity_failures,
            "lambda_reading_counts": rep.lambda_reading_counts,
            "status": "counterexample" if bad else "closed",
        }
    rec["key"] = key
    return rec, int(1000 * (time.perf_counter() - start))


def _run_item_star(args):
    return run_item(*args)


class Checkpoint:
    """A directory of per-key JSON marker files; one writer per key."""

    def __init__(self, root: Path, campaign: str):
        self.dir = Path(root) / campaign
        self.dir.mkdir(parents=True, exist_ok=True)

    def _path(self, key: str) -> Path:
        return self.dir / (key.replace("/", "_").replace(":", "_") + ".json")

    def load(self, key: str) -> Optional[dict]:
        p = self._path(key)
        if not p.exists():
            return None
        with open(p) as fh:
            return json.load(fh)

    def store(self, key: str, record: dict, wall_ms: int) -> None:
        p = self._path(key)
        tmp = p.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            json.dump({"record": record, "wall_ms": wall_ms}, fh, sort_keys=True)
        os.replace(tmp, p)


@dataclass
class CampaignOutcome:
    exit_status: int
    summary: dict
    records: list[dict]


def _exit_status(records: list[dict]) -> int:
    statuses = {r["status"] for r in records}
    if "counterexample" in statuses:
        return EXIT_COUNTEREXAMPLE
    if "unresolved" in statuses:
        return EXIT_UNRESOLVED
    return EXIT_OK


def summarize(spec: CampaignSpec, records: list[dict]) -> dict:
    counts: dict[str, int] = {}
    for r in records:
        label = r.get("verdict", r["status"])
        counts[label] = counts.get(label, 0) + 1
    finals = [r["final_M"] for r in records if r.get("final_M") is not None]
    summary = {
        "campaign": spec.name,
        "items": len(records),
        "verdict_counts": dict(sorted(counts.items())),
        "status_counts": {s: sum(r["status"] == s for r in records) for s in
                          ("closed", "skipped", "unresolved", "counterexample")},
        "max_final_M": max(finals) if finals else None,
        "precision": spec.precision,
        "exit_status": _exit_status(records),
    }
    if spec.name in ("conjecture1", "theorem15"):
        summary["violations_below"] = sum(len(r["violations_below"]) for r in records)
        summary["violations_above"] = sum(len(r["violations_above"]) for r in records)
        summary["quadruples"] = sum(len(r["quadruples"]) for r in records)
        summary["identity_failures"] = sum(len(r["identity_failures"]) for r in records)
    return summary


def _write_reports(spec: CampaignSpec, records: list[dict], walls: dict[str, int], summary: dict) -> None:
    out = Path(spec.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / f"{spec.name}.jsonl", "w") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True) + "\n")
    with open(out / f"{spec.name}_summary.json", "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    with open(out / f"{spec.name}.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        if spec.name in ("b1", "b2"):
            w.writerow(["a", "b", "verdict", "final_M", "steps", "precision_bits", "wall_ms"])
            for r in records:
                w.writerow([r["a"], r["b"], r["verdict"], r["final_M"], r["steps"],
                            r["precision_bits"], walls.get(r["key"], 0)])
        else:
            w.writerow(["key", "status", "wall_ms"])
            for r in records:
                w.writerow([r["key"], r["status"], walls.get(r["key"], 0)])


def run_campaign(spec: CampaignSpec, max_items: Optional[int] = None) -> CampaignOutcome:
    """Run (or resume) a campaign.

    ``max_items`` stops after that many new items, simulating an interrupted
    run; the outcome then only covers the items done so far.
    """
    keys = spec.keys()
    ckpt = Checkpoint(spec.checkpoint_path, spec.name) if spec.checkpoint_path else None
    done: dict[str, dict] = {}
    walls: dict[str, int] = {}
    if ckpt:
        for k in keys:
            stored = ckpt.load(k)
            if stored is not None:
                done[k] = stored["record"]
                walls[k] = stored["wall_ms"]
    todo = [k for k in keys if k not in done]
    if max_items is not None:
        todo = todo[:max_items]
    log.info("campaign %s: %d items, %d from checkpoint, %d to run",
             spec.name, len(keys), len(done), len(todo))

    def accept(key: str, rec: dict, wall: int) -> None:
        done[key] = rec
        walls[key] = wall
        if ckpt:
            ckpt.store(key, rec, wall)

    if spec.parallelism == 1 or len(todo) <= 1:
        for k in todo:
            accept(k, *run_item(spec, k))
    else:
        with ProcessPoolExecutor(max_workers=spec.parallelism) as pool:
            futures = {pool.submit(_run_item_star, (spec, k)): k for k in todo}
            for fut in as_completed(futures):
                accept(futures[fut], *fut.result())

    records = [done[k] for k in keys if k in done]
    summary = summarize(spec, records)
    if len(records) < len(keys):
        summary["incomplete"] = len(keys) - len(records)
        summary["exit_status"] = max(summary["exit_status"], EXIT_UNRESOLVED)
    if spec.output_dir:
        _write_reports(spec, records, walls, summary)
    return CampaignOutcome(summary["exit_status"], summary, records)
