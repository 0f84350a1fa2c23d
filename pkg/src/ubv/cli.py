"""Command-line front end: ``ubv <subcommand> ...``.

Exit codes: 0 success, 1 a claim or verification failed, 2 usage error,
3 resource error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import analytic, arith, exact, reproduce, scanner, verifier
from .interval import DirectedValue
from .records import ScanReport, VerificationError
from .sieve import DEFAULT_SEGMENT_SIZE, SieveResourceError, primes_up_to

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3
MAX_K = 10**7


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    parallelism: int
    segment_size: int = DEFAULT_SEGMENT_SIZE
    long_run: bool = False
    output_format: str | None = None
    checkpoint_path: str | None = None
    output_path: str | None = None

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> RunConfig:
        threads = args.threads
        if threads is None:
            env = os.environ.get("UBV_THREADS")
            try:
                threads = int(env) if env else (os.cpu_count() or 1)
            except ValueError:
                raise UsageError(f"UBV_THREADS must be an integer, got {env!r}")
        if threads < 1:
            raise UsageError("--threads must be positive")
        if args.segment_size < 1:
            raise UsageError("--segment-size must be positive")
        if args.checkpoint and args.command != "primorials":
            raise UsageError("--checkpoint is only valid with the primorials command")
        return cls(threads, args.segment_size, args.long_run, args.format, args.checkpoint, args.output)


# -- formatting ------------------------------------------------------------------


def _fmt_ratio(r: DirectedValue) -> str:
    s = f"{r.mid:.6g}"
    if r.hi - r.lo > 1e-9:
        s += f" (width {r.hi - r.lo:.2g})"
    return s


def _report_human(rep: ScanReport, description: str = "") -> str:
    thr = "" if rep.threshold is None else f", threshold {float(rep.threshold):g}"
    key = "k" if rep.kind == "primorial" else "n"
    lines = [f"{rep.kind} over [{rep.lo}, {rep.hi}){thr}" + (f"  [{description}]" if description else "")]
    lines.append(f"  scanned {rep.total}, satisfying {rep.satisfying}, audited {rep.audited}")
    if rep.excluded:
        lines.append("  excluded: " + ", ".join(f"{n} ({why})" for n, why in rep.excluded))
    lines.append(f"  exceptions: {len(rep.exceptions)}")
    for r in rep.exceptions:
        lines.append(f"    {key} = {r.subject:>12}  ratio {_fmt_ratio(r.ratio)}")
    if rep.unresolved:
        lines.append(f"  UNRESOLVED: {[r.subject for r in rep.unresolved]}")
    if rep.max_ratio is not None:
        lines.append(f"  max ratio: {key} = {rep.max_ratio.subject}, {_fmt_ratio(rep.max_ratio.ratio)}")
    for k, v in sorted(rep.extra.items()):
        if k != "final_state":
            lines.append(f"  {k}: {v}")
    lines.append(f"  runtime {rep.runtime_ms / 1e3:.2f} s")
    return "\n".join(lines) + "\n"


def _render_report(rep: ScanReport, fmt: str, description: str = "") -> str:
    if fmt == "json":
        return rep.to_json() + "\n"
    if fmt == "csv":
        return rep.to_csv()
    return _report_human(rep, description)


def _rows_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(text: str, cfg: RunConfig):
    if cfg.output_path:
        Path(cfg.output_path).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------------


def cmd_eval(args, cfg: RunConfig) -> int:
    text = " ".join(args.value)
    f = arith.parse_factorization(text)
    n = f.value
    values = {kind.value: kind(f) for kind in arith.DivisorFunctionKind}
    ratios = {}
    for name, v in values.items():
        ratios[name] = exact.to_directed(exact.ratio(v, n, n)) if n >= 3 else None
    fmt = cfg.output_format or "human"
    star_eq_exp = values["sigma_star"] == values["sigma_exp"]
    if fmt == "json":
        out = {
            "n": str(n),
            "factorization": str(f),
            "values": {k: str(v) for k, v in values.items()},
            "ratios": {
                k: None if r is None else {"lo": repr(r.lo), "hi": repr(r.hi)} for k, r in ratios.items()
            },
            "sigma_star_equals_sigma_exp": star_eq_exp,
        }
        text = json.dumps(out, indent=2) + "\n"
    elif fmt == "csv":
        rows = [[k, v, "" if ratios[k] is None else repr(ratios[k].lo), "" if ratios[k] is None else repr(ratios[k].hi)]
                for k, v in values.items()]
        text = _rows_csv(["function", "value", "ratio_lo", "ratio_hi"], rows)
    else:
        lines = [f"n = {n} = {f}"]
        for k, v in values.items():
            r = ratios[k]
            rtxt = "undefined (n < 3)" if r is None else _fmt_ratio(r)
            lines.append(f"  {k:<11} {v}   / (n log log n) = {rtxt}")
        lines.append(f"  sigma_star == sigma_exp: {star_eq_exp}")
        text = "\n".join(lines) + "\n"
    _emit(text, cfg)
    return EXIT_OK


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        x = float(text)
        if not x.is_integer():
            raise UsageError(f"expected an integer, got {text!r}")
        return int(x)


def cmd_primorials(args, cfg: RunConfig) -> int:
    k_lo = _parse_int(args.k_lo)
    to_inf = args.k_hi.lower() in ("inf", "infinity", "oo")
    k_hi = verifier.TAIL_K if to_inf else _parse_int(args.k_hi)
    if k_hi > MAX_K:
        raise UsageError(f"k_hi beyond {MAX_K} is not supported")
    if not 2 <= k_lo <= k_hi:
        raise UsageError("need 2 <= k_lo <= k_hi")
    bound = max(20, int(k_hi * (math.log(k_hi) + math.log(math.log(max(k_hi, 3))))) + 1)
    table = primes_up_to(bound)
    rep = verifier.verify_primorial_range(k_lo, k_hi, args.threshold, table, checkpoint_path=cfg.checkpoint_path)
    status = EXIT_OK if rep.ok else EXIT_FAIL
    if to_inf:
        try:
            cert = verifier.asymptotic_tail_certificate(args.threshold, table)
            rep.extra["tail_certificate"] = cert.summary()
        except verifier.CertificateError as exc:
            rep.extra["tail_certificate"] = f"FAILED: {exc}"
            status = EXIT_FAIL
    fmt = cfg.output_format or "human"
    out = _render_report(rep, fmt)
    _emit(out, cfg)
    return status


def cmd_scan(args, cfg: RunConfig) -> int:
    lo, hi = _parse_int(args.lo), _parse_int(args.hi)
    kw = dict(threads=cfg.parallelism, segment_size=cfg.segment_size, long_run=cfg.long_run, audit=args.audit)
    if args.kind == "derbal":
        rep = scanner.scan_derbal(lo, hi, **kw)
    else:
        rep = scanner.threshold_scan(args.kind, lo, hi, args.threshold or "1.3007", **kw)
    _emit(_render_report(rep, cfg.output_format or "human", scanner.SCAN_KINDS[args.kind].description), cfg)
    return EXIT_OK if not rep.unresolved else EXIT_FAIL


def cmd_equality(args, cfg: RunConfig) -> int:
    lo, hi = _parse_int(args.lo), _parse_int(args.hi)
    found = scanner.equality_search(
        lo, hi, include_one=args.include_one,
        threads=cfg.parallelism, segment_size=cfg.segment_size, long_run=cfg.long_run,
    )
    fmt = cfg.output_format or "human"
    if fmt == "json":
        text = json.dumps(
            [{"n": str(w.n), "factorization": str(w.factorization), "common_value": str(w.common_value)} for w in found],
            indent=2,
        ) + "\n"
    elif fmt == "csv":
        text = _rows_csv(["n", "factorization", "common_value"], [[w.n, str(w.factorization), w.common_value] for w in found])
    else:
        text = f"sigma* = sigma_e on [{lo}, {hi}): {len(found)} values\n" + "".join(
            f"  {w.n:>12} = {w.factorization}   common value {w.common_value}\n" for w in found
        )
    _emit(text, cfg)
    return EXIT_OK


def cmd_density(args, cfg: RunConfig) -> int:
    hi = _parse_int(args.hi)
    res = scanner.density_sigma_star_gt(hi, threads=cfg.parallelism, segment_size=cfg.segment_size, long_run=cfg.long_run)
    fmt = cfg.output_format or "human"
    if fmt == "json":
        text = json.dumps({"hi": str(hi), "count": str(res.count), "proportion": repr(res.proportion)}, indent=2) + "\n"
    elif fmt == "csv":
        text = _rows_csv(["hi", "count", "proportion"], [[hi, res.count, repr(res.proportion)]])
    else:
        text = f"#{{n <= {hi} : sigma*(n) > sigma_e(n)}} = {res.count}, proportion {res.proportion!r}\n"
    _emit(text, cfg)
    return EXIT_OK


def cmd_bounds(args, cfg: RunConfig) -> int:
    lo, hi, points = float(args.lo), float(args.hi), int(args.points)
    if points < 2 or not lo < hi:
        raise UsageError("bounds needs lo < hi and at least 2 points")
    rows = []
    for i in range(points):
        x = round(lo * (hi / lo) ** (i / (points - 1)))
        a1 = analytic.A1(x, args.variant)
        a2 = analytic.A2(x)
        r = analytic.ratio_bound(x, args.variant)
        rows.append([x, a1.lo, a1.hi, a2.lo, a2.hi, r.lo, r.hi])
    header = ["x", "A1_lo", "A1_hi", "A2_lo", "A2_hi", "ratio_lo", "ratio_hi"]
    fmt = cfg.output_format or "csv"
    if fmt == "json":
        text = json.dumps([{h: (str(v) if h == "x" else repr(v)) for h, v in zip(header, row)} for row in rows], indent=2) + "\n"
    elif fmt == "csv":
        text = _rows_csv(header, [[row[0]] + [repr(v) for v in row[1:]] for row in rows])
    else:
        text = "".join(
            f"x = {row[0]:>16}  A1 {row[2]:.6g}  A2 {row[4]:.9g}  A1/A2 {row[6]:.6g}\n" for row in rows
        )
    _emit(text, cfg)
    return EXIT_OK


def cmd_reproduce(args, cfg: RunConfig) -> int:
    fmt = cfg.output_format or "human"

    def progress(res):
        if fmt == "human" and not cfg.output_path:
            print(f"{res.status:<8} {res.name:<18} {res.seconds:8.2f} s  {res.detail.splitlines()[0] if res.detail else ''}",
                  flush=True)

    results = reproduce.run_claims(long_run=cfg.long_run, threads=cfg.parallelism, only=args.only, progress=progress)
    if fmt == "json":
        text = json.dumps(
            [{"claim": r.name, "status": r.status, "seconds": f"{r.seconds:.2f}", "detail": r.detail} for r in results],
            indent=2,
        ) + "\n"
        _emit(text, cfg)
    elif fmt == "csv":
        _emit(_rows_csv(["claim", "status", "seconds", "detail"],
                        [[r.name, r.status, f"{r.seconds:.2f}", r.detail] for r in results]), cfg)
    elif cfg.output_path:
        _emit("".join(f"{r.status:<8} {r.name:<18} {r.seconds:8.2f} s  {r.detail}\n" for r in results), cfg)
    failed = [r.name for r in results if r.failed]
    if failed and fmt == "human":
        print(f"FAILED claims: {', '.join(failed)}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker threads (default: UBV_THREADS or cores)")
    common.add_argument("--segment-size", type=int, default=DEFAULT_SEGMENT_SIZE)
    common.add_argument("--long-run", action="store_true", help="allow scans beyond 10^7")
    common.add_argument("--format", choices=("json", "csv", "human"), default=None)
    common.add_argument("--checkpoint", metavar="PATH", default=None, help="primorials only")
    common.add_argument("--output", metavar="PATH", default=None)

    p = argparse.ArgumentParser(prog="ubv", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="all five divisor functions at n")
    e.add_argument("value", nargs="+", help='integer or factorization such as "2^49 * 4363953127297"')
    e.set_defaults(func=cmd_eval)

    pr = sub.add_parser("primorials", parents=[common], help="primorial ratio check for k_lo <= k <= k_hi")
    pr.add_argument("k_lo")
    pr.add_argument("k_hi", help="upper index, or 'inf' to add the analytic tail certificate")
    pr.add_argument("threshold", nargs="?", default="1.3007")
    pr.set_defaults(func=cmd_primorials)

    s = sub.add_parser("scan", parents=[common], help="threshold exceptions over [lo, hi)")
    s.add_argument("kind", choices=sorted(scanner.SCAN_KINDS))
    s.add_argument("lo")
    s.add_argument("hi")
    s.add_argument("threshold", nargs="?", default=None)
    s.add_argument("--audit", type=int, default=scanner.DEFAULT_AUDIT)
    s.set_defaults(func=cmd_scan)

    q = sub.add_parser("equality", parents=[common], help="n with sigma*(n) = sigma_e(n)")
    q.add_argument("lo")
    q.add_argument("hi")
    q.add_argument("--include-one", action="store_true")
    q.set_defaults(func=cmd_equality)

    dn = sub.add_parser("density", parents=[common], help="proportion of n <= hi with sigma* > sigma_e")
    dn.add_argument("hi")
    dn.set_defaults(func=cmd_density)

    b = sub.add_parser("bounds", parents=[common], help="tabulate A1, A2 and A1/A2 on a geometric grid")
    b.add_argument("lo")
    b.add_argument("hi")
    b.add_argument("points")
    b.add_argument("--variant", choices=analytic.VARIANTS, default="printed")
    b.set_defaults(func=cmd_bounds)

    r = sub.add_parser("reproduce", parents=[common], help="run every claim check")
    r.add_argument("--only", nargs="*", default=None, help="claim names to run")
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        cfg = RunConfig.from_args(args)
        return args.func(args, cfg)
    except (UsageError, arith.FactorizationError, scanner.ScanLimitError, analytic.DomainError, ValueError) as exc:
        print(f"ubv: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except VerificationError as exc:
        print(f"ubv: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (SieveResourceError, MemoryError) as exc:
        print(f"ubv: resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE


if __name__ == "__main__":
    sys.exit(main())
