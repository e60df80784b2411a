"""Command-line interface: d4tuples {check, extend, intersect, bounds, reduce, campaign}.

Exit codes: 0 success, 1 negative answer from ``check``, 2 unresolved,
3 counterexample, 64 usage error, 65 input is not a valid tuple/pair,
74 report or checkpoint storage failure.
"""

from __future__ import annotations

import argparse
import csv
import decimal
import json
import logging
import os
import shutil
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .arith import DEFAULT_PRECISION, DEFAULT_PRECISION_CAP
from .bounds import hypergeometric_eliminates, m_lower_bound, sextuple_m_bound
from .errors import D4Error, DomainError, PrecisionError
from .pell import b1, b2, find_intersections, pair_context
from .reduction import reduce_pair
from .tuples import DTriple, is_d4_tuple, regular_extensions, regularity_relation_holds, witness_table
from .verify import CAMPAIGNS, EXIT_UNRESOLVED, CampaignSpec, b1_initial_bound, run_campaign

EXIT_NO = 1
EXIT_USAGE = 64
EXIT_DATA = 65
PRECISION_CEILING = 2**20

ENV_PREFIX = "D4_"
DEFAULT_CONFIG = Path("~/.config/d4tuples.conf")

log = logging.getLogger("d4tuples")


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class CliConfig:
    precision_bits: int = DEFAULT_PRECISION
    precision_cap: int = DEFAULT_PRECISION_CAP
    workers: int = 1
    output_dir: Path = Path("reports")
    format: str = "text"

    def validate(self):
        if not 64 <= self.precision_bits <= self.precision_cap <= PRECISION_CEILING:
            raise UsageError(f"need 64 <= precision ({self.precision_bits}) <= precision cap "
                             f"({self.precision_cap}) <= {PRECISION_CEILING}")
        if self.workers < 1:
            raise UsageError("workers must be at least 1")
        if self.format not in ("text", "json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")


_CONFIG_KEYS = {
    "precision": ("precision_bits", int),
    "precision_cap": ("precision_cap", int),
    "workers": ("workers", int),
    "output_dir": ("output_dir", Path),
    "format": ("format", str),
}


def read_config_file(path: Path) -> dict[str, str]:
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected key=value")
            key, value = (x.strip() for x in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in _CONFIG_KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = value
    return out


def resolve_config(args: argparse.Namespace, environ=os.environ) -> CliConfig:
    """Flags beat environment variables, which beat the config file."""
    values: dict[str, str] = {}
    cfg_path = getattr(args, "config", None) or environ.get(ENV_PREFIX + "CONFIG")
    if cfg_path:
        values.update(read_config_file(Path(cfg_path)))
    elif DEFAULT_CONFIG.expanduser().exists():
        values.update(read_config_file(DEFAULT_CONFIG.expanduser()))
    for key in _CONFIG_KEYS:
        env = environ.get(ENV_PREFIX + key.upper())
        if env is not None:
            values[key] = env
    for key in _CONFIG_KEYS:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    cfg = CliConfig()
    for key, raw in values.items():
        attr, conv = _CONFIG_KEYS[key]
        try:
            setattr(cfg, attr, conv(raw))
        except ValueError:
            raise UsageError(f"bad value for {key}: {raw!r}") from None
    cfg.validate()
    return cfg


# ---------------------------------------------------------------------------
# argument types


def positive_int(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be positive: {n}")
    return n


def big_bound(text: str) -> int:
    """Accept '43000000000000000000' or '4.3e19'; non-integers round up."""
    try:
        value = decimal.Decimal(text)
    except decimal.InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value.is_finite() or value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text}")
    return int(value.to_integral_value(rounding=decimal.ROUND_CEILING))


# ---------------------------------------------------------------------------
# output


def _emit(cfg: CliConfig, text_lines, payload, rows=None, header=None) -> None:
    if cfg.format == "json":
        json.dump(payload, sys.stdout, indent=2, sort_keys=True, default=str)
        sys.stdout.write("\n")
    elif cfg.format == "csv" and rows is not None:
        w = csv.writer(sys.stdout)
        w.writerow(header)
        w.writerows(rows)
    else:
        for line in text_lines:
            print(line)


# ---------------------------------------------------------------------------
# commands


def cmd_check(args, cfg: CliConfig) -> int:
    xs = args.numbers
    if len(xs) < 2:
        raise UsageError("check needs at least two integers")
    if len(set(xs)) != len(xs):
        raise UsageError(f"integers must be distinct: {xs}")
    table = witness_table(xs)
    ok = is_d4_tuple(xs)
    lines = [f"{x:>12} {y:>12}  {x}*{y}+4 = {x * y + 4:<16} {'square of ' + str(r) if r else 'not a square'}"
             for x, y, r in table]
    lines.append(f"D(4)-tuple: {'yes' if ok else 'no'}")
    payload = {"tuple": sorted(xs), "is_d4_tuple": ok,
               "witnesses": [{"x": x, "y": y, "root": r} for x, y, r in table]}
    _emit(cfg, lines, payload, [(x, y, r if r else "") for x, y, r in table], ["x", "y", "root"])
    return 0 if ok else EXIT_NO


def cmd_extend(args, cfg: CliConfig) -> int:
    t = DTriple.of(args.a, args.b, args.c)
    ext = regular_extensions(t)
    payload = {"triple": [t.a, t.b, t.c], "d_plus": ext.d_plus, "d_minus": ext.d_minus}
    lines = [f"triple {{{t.a}, {t.b}, {t.c}}}", f"d+ = {ext.d_plus}", f"d- = {ext.d_minus}"]
    for name, d in (("d+", ext.d_plus), ("d-", ext.d_minus)):
        rel = all(regularity_relation_holds(x, d, y, z) for x, y, z in
                  ((t.a, t.b, t.c), (t.b, t.a, t.c), (t.c, t.a, t.b)))
        quad = d > 0 and d not in (t.a, t.b, t.c) and is_d4_tuple((t.a, t.b, t.c, d))
        payload[f"{name}_regular"] = rel
        payload[f"{name}_quadruple"] = quad
        lines.append(f"{name}: regularity relation {'holds' if rel else 'FAILS'}; "
                     f"{{{t.a}, {t.b}, {t.c}, {d}}} {'is' if quad else 'is not'} a D(4)-quadruple")
    _emit(cfg, lines, payload, [(t.a, t.b, t.c, ext.d_plus, ext.d_minus)],
          ["a", "b", "c", "d_plus", "d_minus"])
    return 0


def cmd_intersect(args, cfg: CliConfig) -> int:
    for e in (1, -1):
        pair_context(args.a, args.b, e)
    hits = find_intersections(args.a, args.b, args.m_max)
    rows = [(h.m, h.n, h.z, h.epsilon, h.derived_c, ",".join(h.violations)) for h in hits]
    lines = [f"v_m = w_n for ({args.a}, {args.b}), m <= {args.m_max}: {len(hits)} found"]
    lines += [f"  m={m} n={n} z={z} eps={e:+d} c={c}" + (f"  [fails: {v}]" if v else "")
              for m, n, z, e, c, v in rows]
    payload = {"a": args.a, "b": args.b, "m_max": args.m_max,
               "intersections": [dict(h.as_record(), checks=h.checks) for h in hits]}
    _emit(cfg, lines, payload, rows, ["m", "n", "z", "epsilon", "c", "failed_checks"])
    return 0


def default_M0(a: int, b: int, prec: int) -> int:
    if b == b1(a):
        return b1_initial_bound(a, prec)
    if b < 96:
        raise UsageError(f"no default M0 for b={b} < 96; pass --M0")
    return sextuple_m_bound(b, prec)


def cmd_reduce(args, cfg: CliConfig) -> int:
    for e in (1, -1):
        pair_context(args.a, args.b, e)
    M0 = args.M0 if args.M0 is not None else default_M0(args.a, args.b, cfg.precision_bits)
    tr = reduce_pair(args.a, args.b, M0, max_steps=args.steps,
                     precision_bits=cfg.precision_bits, cap=cfg.precision_cap)
    recs = tr.records()
    lines = [f"reduce ({args.a}, {args.b}) from M0 = {M0}"]
    for r in recs:
        lines.append(f"  step {r['step']} eps={r['epsilon']:+d} q={r['q']} "
                     f"eps0 in [{r['eps0_lo']}, {r['eps0_hi']}] new M = {r['new_M']}")
    lines.append(f"final M = {tr.final_M} ({tr.status}, {tr.precision_used} bits)")
    payload = {"a": args.a, "b": args.b, "M0": M0, "bounds": tr.bounds, "final_M": tr.final_M,
               "status": tr.status, "precision_bits": tr.precision_used, "steps": recs}
    header = ["a", "b", "epsilon", "step", "q", "eps0_lo", "eps0_hi", "new_M", "precision_bits"]
    _emit(cfg, lines, payload, [[r[k] for k in header] for r in recs], header)
    return 0 if tr.resolved else EXIT_UNRESOLVED


def cmd_bounds(args, cfg: CliConfig) -> int:
    a, b, p = args.a, args.b, cfg.precision_bits
    pair_context(a, b)
    payload = {"a": a, "b": b}
    lines = [f"pair ({a}, {b})"]
    if b >= b1(a):
        lo = m_lower_bound(a, b, precision_bits=p)
        payload["m_lower_bound"] = lo.decimal_bounds(20)
        lines.append(f"  m > {lo.decimal_bounds(20)[0]}")
    if b >= 96:
        M = sextuple_m_bound(b, p, cfg.precision_cap)
        payload["m_upper_bound"] = M
        lines.append(f"  m < {M}")
    if b >= b2(a):
        ok = hypergeometric_eliminates(a, b, p, cfg.precision_cap)
        payload["hypergeometric_eliminates"] = ok
        lines.append(f"  hypergeometric elimination: {'yes' if ok else 'no'}")
    _emit(cfg, lines, payload)
    return 0


def cmd_campaign(args, cfg: CliConfig) -> int:
    out = Path(cfg.output_dir)
    ckpt = Path(args.checkpoint_dir) if args.checkpoint_dir else out / "checkpoints"
    if not args.resume and (ckpt / args.name).exists():
        shutil.rmtree(ckpt / args.name)
    a_range = None
    if args.name in ("b1", "spotcheck"):
        hi = args.a_max if args.a_max is not None else (18072 if args.name == "b1" else 50)
        a_range = (args.a_min, hi)
    spec = CampaignSpec(
        args.name, a_range=a_range, max_steps=args.steps,
        precision=cfg.precision_bits, precision_cap=cfg.precision_cap,
        parallelism=cfg.workers, checkpoint_path=ckpt, output_dir=out,
        limit=args.limit, m_max=args.m_max,
    )
    outcome = run_campaign(spec, max_items=args.max_items)
    s = outcome.summary
    lines = [f"campaign {s['campaign']}: {s['items']} items, exit status {outcome.exit_status}"]
    lines += [f"  {k}: {v}" for k, v in s["verdict_counts"].items()]
    if s.get("max_final_M") is not None:
        lines.append(f"  max final M: {s['max_final_M']}")
    for k in ("violations_below", "violations_above", "quadruples", "identity_failures", "incomplete"):
        if k in s:
            lines.append(f"  {k}: {s[k]}")
    lines.append(f"  reports in {out}")
    rows = [(r["key"], r["status"], r.get("final_M", "")) for r in outcome.records]
    _emit(cfg, lines, s, rows, ["key", "status", "final_M"])
    return outcome.exit_status


# ---------------------------------------------------------------------------
# parser


def _global_flags(defaults: bool) -> argparse.ArgumentParser:
    # defaults=False: subcommand copies must not overwrite values given before it
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--precision", type=int, help="working precision in bits", **kw)
    p.add_argument("--precision-cap", type=int, help="escalation cap in bits", **kw)
    p.add_argument("--workers", type=int, help="worker processes for campaigns", **kw)
    p.add_argument("--format", choices=("text", "json", "csv"), **kw)
    p.add_argument("--output-dir", help="directory for campaign reports", **kw)
    p.add_argument("--config", help="key=value config file", **kw)
    p.add_argument("-v", "--verbose", action="count", **({"default": 0} if defaults else kw))
    return p


def build_parser() -> Parser:
    parser = Parser(prog="d4tuples", description=__doc__.splitlines()[0],
                    parents=[_global_flags(True)])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = [_global_flags(False)]

    p = sub.add_parser("check", parents=common, help="test the D(4) property")
    p.add_argument("numbers", nargs="+", type=positive_int)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("extend", parents=common, help="regular extensions d+ and d- of a triple")
    for name in "abc":
        p.add_argument(name, type=positive_int)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("intersect", parents=common, help="find v_m = w_n")
    p.add_argument("a", type=positive_int)
    p.add_argument("b", type=positive_int)
    p.add_argument("--m-max", type=positive_int, default=200)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("bounds", parents=common, help="certified bounds on m for a pair")
    p.add_argument("a", type=positive_int)
    p.add_argument("b", type=positive_int)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("reduce", parents=common, help="Baker-Davenport reduction transcript")
    p.add_argument("a", type=positive_int)
    p.add_argument("b", type=positive_int)
    p.add_argument("--M0", type=big_bound, help="initial bound on m, e.g. 4.3e19")
    p.add_argument("--steps", type=positive_int, default=5)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("campaign", parents=common, help="run a verification campaign")
    p.add_argument("name", choices=CAMPAIGNS)
    p.add_argument("--a-min", type=positive_int, default=1)
    p.add_argument("--a-max", type=positive_int)
    p.add_argument("--limit", type=positive_int, default=10_000, help="largest c for scans")
    p.add_argument("--m-max", type=positive_int, default=200, help="index bound for spotcheck")
    p.add_argument("--steps", type=positive_int, default=3)
    p.add_argument("--resume", action="store_true", help="reuse existing checkpoints")
    p.add_argument("--checkpoint-dir")
    p.add_argument("--max-items", type=positive_int, help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_campaign)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose or 0, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = resolve_config(args)
        return args.func(args, cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"d4tuples: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DomainError, PrecisionError) as exc:
        print(f"d4tuples: {exc}", file=sys.stderr)
        return EXIT_DATA if isinstance(exc, DomainError) else EXIT_UNRESOLVED
    except D4Error as exc:
        print(f"d4tuples: {exc}", file=sys.stderr)
        return EXIT_UNRESOLVED
    except OSError as exc:
        print(f"d4tuples: {exc}", file=sys.stderr)
        return 74


if __name__ == "__main__":
    sys.exit(main())
