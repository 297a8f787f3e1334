"""Command-line front end.

Subcommands: regularity, slopes, witness, survey, crosscheck.  Reports
go to stdout, logs to stderr.  Exit codes: 0 success, 1 usage error,
2 mathematical inconsistency, 3 witness search inconclusive (and
nothing worse happened).
"""

import argparse
import logging
import os
import sys

from . import cache as cachemod
from .dimensions import dim_cuspforms
from .errors import ConsistencyError, TraceBudgetExceeded
from .modsym import charpoly_cuspidal
from .slopes import (HeckeContext, is_regular, minimal_witness_report,
                     regularity_weight_range, tp_slopes, up_assembly,
                     up_slopes_direct)
from .survey import (FORMATS, ReportRow, SurveyConfig, SurveyResult,
                     compute_pair, render_report, run_survey)
from .traceforms import charpoly_from_traces, trace_feasible

log = logging.getLogger(__name__)

CACHE_ENV = "HECKESLOPES_CACHE"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INCONSISTENT = 2
EXIT_INCONCLUSIVE = 3

# Largest dim S_k(Gamma_0(Np)) for which crosscheck verifies the slope
# assembly against a direct level-Np computation; beyond it only the
# trace-vs-modsym identity is checked.
DIRECT_DIM_CAP = 45


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; the contract here reserves 2 for
    # mathematical inconsistency, so remap.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, "%s: error: %s\n" % (self.prog, message))


def _parse_int_set(text):
    """Parse "2,3,5" / "1-30" / "1-10,12" into a sorted tuple of ints."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError("empty range %r" % part)
            out.update(range(lo, hi + 1))
        else:
            out.add(int(part))
    if any(v < 1 for v in out):
        raise ValueError("levels and primes must be positive")
    return tuple(sorted(out))


def _resolve_cache_path(args):
    if args.cache is not None:
        return args.cache or None  # --cache "" disables caching explicitly
    return os.environ.get(CACHE_ENV) or None


def _add_common(sub, fmt_default="text"):
    sub.add_argument("--engine", choices=("modsym", "trace", "both"),
                     default="modsym", help="characteristic polynomial engine")
    sub.add_argument("--cache", default=None, metavar="PATH",
                     help="cache file (default: $%s if set)" % CACHE_ENV)
    sub.add_argument("--format", dest="fmt", choices=FORMATS, default=fmt_default)


def _print(text):
    sys.stdout.write(text)


# ----------------------------------------------------------------------
# regularity

def cmd_regularity(args):
    cache = cachemod.CharpolyCache(_resolve_cache_path(args))
    try:
        with cachemod.activate(cache):
            verdict = is_regular(args.p, args.N, args.engine)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    summary = "regular" if verdict.regular else "irregular, j=%d" % verdict.j
    if args.fmt == "csv":
        lines = ["p,N,k,dim,slopes,zero_count,verdict"]
        for row in verdict.table:
            slopes = ";".join(str(s) for s in row.slopes.as_list())
            lines.append("%d,%d,%d,%d,%s,%d,%s"
                         % (args.p, args.N, row.k, row.dim, slopes, row.zero_count, summary))
        _print("\n".join(lines) + "\n")
    elif args.fmt == "jsonl":
        import json
        for row in verdict.table:
            _print(json.dumps({
                "p": args.p, "N": args.N, "k": row.k, "dim": row.dim,
                "slopes": [str(s) for s in row.slopes.as_list()],
                "zero_count": row.zero_count}) + "\n")
        _print(json.dumps({"p": args.p, "N": args.N, "verdict": summary}) + "\n")
    else:
        _print("T_%d slopes on S_k(Gamma_0(%d)), weights %s\n"
               % (args.p, args.N, list(regularity_weight_range(args.p))))
        for row in verdict.table:
            note = " (vacuous)" if row.k % 2 else ""
            _print("  k=%-2d dim=%-3d slopes=%s zero_count=%d%s\n"
                   % (row.k, row.dim, row.slopes, row.zero_count, note))
        _print("verdict: %s\n" % summary)
    return EXIT_OK


# ----------------------------------------------------------------------
# slopes

def cmd_slopes(args):
    cache = cachemod.CharpolyCache(_resolve_cache_path(args))
    rows = []
    try:
        with cachemod.activate(cache):
            for k in range(2, args.k_max + 1, 2):
                ctx = HeckeContext(args.p, args.N, k)
                slopes, zeros = tp_slopes(ctx, args.engine)
                asm = up_assembly(ctx, args.engine)
                rows.append((k, dim_cuspforms(k, args.N), slopes, zeros, asm))
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    if args.fmt == "csv":
        lines = ["p,N,k,dim,tp_slopes,zero_count,up_slopes,new_multiplicity"]
        for k, dim, slopes, zeros, asm in rows:
            lines.append("%d,%d,%d,%d,%s,%d,%s,%d" % (
                args.p, args.N, k, dim, ";".join(str(s) for s in slopes.as_list()),
                zeros, ";".join(str(s) for s in asm.combined.as_list()),
                asm.new_multiplicity))
        _print("\n".join(lines) + "\n")
    elif args.fmt == "jsonl":
        import json
        for k, dim, slopes, zeros, asm in rows:
            _print(json.dumps({
                "p": args.p, "N": args.N, "k": k, "dim": dim,
                "tp_slopes": [str(s) for s in slopes.as_list()],
                "zero_count": zeros,
                "up_slopes": [str(s) for s in asm.combined.as_list()],
                "new_multiplicity": asm.new_multiplicity}) + "\n")
    else:
        _print("T_%d at level %d and assembled U_%d at level %d\n"
               % (args.p, args.N, args.p, args.N * args.p))
        for k, dim, slopes, zeros, asm in rows:
            _print("  k=%-3d dim=%-3d T: %s zeros=%d | U: %s (new x%d)\n"
                   % (k, dim, slopes, zeros, asm.combined, asm.new_multiplicity))
    return EXIT_OK


# ----------------------------------------------------------------------
# witness

def cmd_witness(args):
    cache = cachemod.CharpolyCache(_resolve_cache_path(args))
    try:
        with cachemod.activate(cache):
            row = compute_pair(args.p, args.N, args.k_max, args.engine)
            label = ""
            if row.verdict == "irregular" and row.status == "ok":
                label = minimal_witness_report(args.p, args.N, args.k_max or None,
                                               args.engine).label
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    result = SurveyResult([row], [], [])
    _print(render_report(result, args.fmt))
    if label and args.fmt == "text":
        _print("minimal witness weight vs {j, j+(p-1)}: %s\n" % label)
    return EXIT_INCONCLUSIVE if row.status == "inconclusive" else EXIT_OK


# ----------------------------------------------------------------------
# survey

def cmd_survey(args):
    try:
        primes = _parse_int_set(args.p)
        levels = _parse_int_set(args.N)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    config = SurveyConfig(primes=primes, levels=levels, k_max=args.k_max,
                          engine=args.engine, cache_path=_resolve_cache_path(args),
                          fmt=args.fmt, workers=args.workers)
    result = run_survey(config)
    _print(render_report(result, config.fmt))
    if any(kind in ("ConsistencyError", "ArithmeticError") for _, _, kind, _ in result.errors):
        return EXIT_INCONSISTENT
    if any(row.status == "inconclusive" for row in result.rows):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# ----------------------------------------------------------------------
# crosscheck

def cmd_crosscheck(args):
    try:
        primes = _parse_int_set(args.p)
        levels = _parse_int_set(args.N)
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    cache = cachemod.CharpolyCache(_resolve_cache_path(args))
    failures = []
    for lineno, reason in cache.rejects:
        failures.append("corrupt cache record at line %d (%s); reproduce: "
                        "inspect %s" % (lineno, reason, cache.path))
    engines_checked = engines_skipped = direct_checked = direct_skipped = 0
    points = [(p, N, k)
              for p in primes for N in levels if N % p
              for k in range(2, args.k_max + 1, 2)]
    if not points:
        print("warning: empty grid, nothing to check", file=sys.stderr)
        _print("crosscheck: PASS (trivial, empty grid)\n")
        return EXIT_OK
    with cachemod.activate(cache):
        for p, N, k in points:
            ctx = HeckeContext(p, N, k)
            if trace_feasible(k, N, p):
                g = charpoly_from_traces(k, N, p)
                fm = cachemod.fetch_or_compute(
                    p, N, k, "modsym", lambda k=k, N=N, p=p: charpoly_cuspidal(k, N, p))
                engines_checked += 1
                if fm != g:
                    failures.append(
                        "engine mismatch at (k=%d, N=%d, p=%d): modsym %r vs trace %r; "
                        "reproduce: heckeslopes crosscheck --p %d --N %d --k-max %d"
                        % (k, N, p, list(fm.coeffs), list(g.coeffs), p, N, k))
            else:
                engines_skipped += 1
            if dim_cuspforms(k, N * p) <= args.direct_cap:
                asm = up_assembly(ctx)
                direct = up_slopes_direct(ctx)
                direct_checked += 1
                if asm.combined != direct:
                    failures.append(
                        "assembly mismatch at (k=%d, N=%d, p=%d): %r vs direct %r; "
                        "reproduce: heckeslopes slopes --p %d --N %d --k-max %d"
                        % (k, N, p, asm.combined, direct, p, N, k))
            else:
                direct_skipped += 1
    _print("engine identity:   %d checked, %d beyond trace budget\n"
           % (engines_checked, engines_skipped))
    _print("assembly = direct: %d checked, %d beyond dim cap %d\n"
           % (direct_checked, direct_skipped, args.direct_cap))
    if failures:
        for failure in failures:
            _print("FAIL %s\n" % failure)
        _print("crosscheck: FAIL (%d)\n" % len(failures))
        return EXIT_INCONSISTENT
    _print("crosscheck: PASS\n")
    return EXIT_OK


# ----------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="heckeslopes",
                     description="Exact Hecke slope computations on Gamma_0 levels")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("regularity", help="low-weight T_p slope table and verdict")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    _add_common(sp)
    sp.set_defaults(func=cmd_regularity)

    sp = sub.add_parser("slopes", help="T_p and assembled U_p slopes, weights 2..k-max")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--k-max", dest="k_max", type=int, default=12)
    _add_common(sp)
    sp.set_defaults(func=cmd_slopes)

    sp = sub.add_parser("witness", help="search for a U_p slope strictly in (0,1)")
    sp.add_argument("--p", type=int, required=True)
    sp.add_argument("--N", type=int, required=True)
    sp.add_argument("--k-max", dest="k_max", type=int, default=0,
                    help="even search bound (default: max(50, j+2(p-1)))")
    _add_common(sp)
    sp.set_defaults(func=cmd_witness)

    sp = sub.add_parser("survey", help="regularity/witness report over a (p, N) grid")
    sp.add_argument("--p", required=True, help="primes, e.g. 2,3,5")
    sp.add_argument("--N", required=True, help="levels, e.g. 1-30 or 11,13")
    sp.add_argument("--k-max", dest="k_max", type=int, default=0)
    sp.add_argument("--workers", type=int, default=1)
    _add_common(sp, fmt_default="csv")
    sp.set_defaults(func=cmd_survey)

    sp = sub.add_parser("crosscheck", help="trace vs modsym and assembly vs direct")
    sp.add_argument("--p", default="2,3,5,7,11,13")
    sp.add_argument("--N", default="1-14")
    sp.add_argument("--k-max", dest="k_max", type=int, default=16)
    sp.add_argument("--direct-cap", dest="direct_cap", type=int, default=DIRECT_DIM_CAP,
                    help="skip direct level-Np checks above this dimension")
    _add_common(sp)
    sp.set_defaults(func=cmd_crosscheck)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(stream=sys.stderr, level=logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ConsistencyError as exc:
        print("inconsistency: %s" % exc, file=sys.stderr)
        return EXIT_INCONSISTENT
    except TraceBudgetExceeded as exc:
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_USAGE
    except BrokenPipeError:
        return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
