"""Command-line front end.

Every subcommand prints one schema-1 JSON record (or CSV rows with
``--csv``) on stdout; diagnostics go to stderr.  Exit codes: 0 success,
1 usage error, 2 verification failure, 3 resource limit exceeded.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
import time
from datetime import datetime, timezone
from typing import Any, Dict, Optional, Sequence

from .arith import PrimeBasis, enumerate_smooth
from .bench import SUITES, run_bench
from .cache import ResultCache, ResultRecord, canonical_key
from .errors import ParameterError, ResourceLimitError
from .limits import (alpha_k_enclosure, decrease_verdict, finite_n_gap, fn_exact,
                     fnk_product, log2_bracket)
from .smoothgrid import count_smooth_primitive
from .verify import verify_inequalities

EXIT_OK, EXIT_USAGE, EXIT_VERIFY, EXIT_RESOURCE = 0, 1, 2, 3
BYTES_PER_ENTRY = 256
DEFAULT_MEMO_BUDGET = 512 * 2 ** 20


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class Context:
    def __init__(self, args: argparse.Namespace):
        self.workers = args.threads or os.cpu_count() or 1
        self.entries = max(1, args.memo_budget // BYTES_PER_ENTRY)


def _count_fields(value: int, log2_only: bool = False) -> Any:
    lo, hi = log2_bracket(value)
    if log2_only:
        return {"log2_lower": lo, "log2_upper": hi}
    return str(value)


def cmd_fn(args, ctx):
    return {"n": args.n}, str(fn_exact(args.n, ctx.entries))


def cmd_fnk(args, ctx):
    value = fnk_product(args.n, args.k, workers=ctx.workers, max_states=ctx.entries)
    return {"n": args.n, "k": args.k, "log2_only": args.log2_only}, \
        _count_fields(value, args.log2_only)


def cmd_pk(args, ctx):
    return {"k": args.k, "x": args.x}, str(count_smooth_primitive(args.x, args.k, ctx.entries))


def _enclosure_fields(enc) -> Dict[str, Any]:
    return {"k": enc.k, "L": enc.L, "lower_log2": enc.lower_log2,
            "upper_log2": enc.upper_log2, "error_budget": enc.error_budget,
            "lower": enc.lower_value, "upper": enc.upper_value,
            "width": enc.upper_value - enc.lower_value}


def cmd_alpha(args, ctx):
    enc = alpha_k_enclosure(args.k, args.L, args.tol, workers=ctx.workers,
                            max_states=ctx.entries)
    result = _enclosure_fields(enc)
    if args.compare_next:
        nxt = alpha_k_enclosure(args.k + 1, args.L, args.tol, workers=ctx.workers,
                                max_states=ctx.entries)
        result["next"] = _enclosure_fields(nxt)
        result["decrease"] = decrease_verdict(nxt, enc)
    return {"k": args.k, "L": args.L, "tol": args.tol, "compare_next": args.compare_next}, result


def cmd_verify(args, ctx):
    report = verify_inequalities(args.n_max, args.k_max)
    checks = [{"name": c.name, "params": list(c.params), "pass": c.passed,
               "witness": {k: str(v) for k, v in c.witness.items()}} for c in report.checks]
    return {"n_max": args.n_max, "k_max": args.k_max}, \
        {"all_passed": report.all_passed, "checks": checks}


def cmd_gap(args, ctx):
    enc = alpha_k_enclosure(args.k, args.L, workers=ctx.workers, max_states=ctx.entries)
    rows = []
    for n in args.n:
        gap = finite_n_gap(n, args.k, enc, workers=ctx.workers)
        rows.append({"n": n, "k": args.k, "midpoint_log2": enc.midpoint_log2, "gap": gap})
    return {"n": list(args.n), "k": args.k, "L": args.L}, rows


def cmd_bench(args, ctx):
    rows, agree = run_bench(args.suite)
    return {"suite": args.suite}, {"agree": agree, "rows": rows}


def cmd_smooth(args, ctx):
    values = enumerate_smooth(args.x, PrimeBasis.of(args.k))
    return {"x": args.x, "k": args.k}, {"count": len(values), "values": values}


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     help="emit a JSON record (default)")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv",
                     help="emit CSV rows")
    common.add_argument("--threads", type=int, default=1, help="worker processes, 0 = auto")
    common.add_argument("--cache-dir", default=None,
                        help="result cache directory (default: $PRIMLIM_CACHE)")
    common.add_argument("--no-cache", action="store_true")
    common.add_argument("--memo-budget", type=int, default=DEFAULT_MEMO_BUDGET,
                        help="approximate bytes for memo tables and DP layers")
    common.add_argument("--reproducible", action="store_true",
                        help="pin timestamp and runtime_ms so output is byte-stable")

    parser = _Parser(prog="primlim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(func=func)
        return p

    p = add("fn", cmd_fn, "exact f(n)")
    p.add_argument("--n", type=int, required=True)
    p = add("fnk", cmd_fnk, "exact f(n, k) by product decomposition")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--log2-only", action="store_true")
    p = add("pk", cmd_pk, "exact P_k(x)")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--x", type=_positive, required=True)
    p = add("alpha", cmd_alpha, "rigorous enclosure of alpha_k")
    p.add_argument("--k", type=_positive, required=True)
    p.add_argument("--L", type=int, default=2 ** 16)
    p.add_argument("--tol", type=float, default=2.0 ** -40)
    p.add_argument("--compare-next", action="store_true",
                   help="also enclose alpha_{k+1} and report whether the decrease is certified")
    p = add("verify", cmd_verify, "check the inequalities between f(n) and f(n, k)")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--k-max", type=int, required=True)
    p = add("gap", cmd_gap, "distance of log2 f(n,k)/n from the alpha_k midpoint")
    p.add_argument("--n", type=_positive, nargs="+", required=True)
    p.add_argument("--k", type=_positive, default=1)
    p.add_argument("--L", type=int, default=2 ** 20)
    p = add("bench", cmd_bench, "time the counting engines and cross-check them")
    p.add_argument("--suite", choices=sorted(SUITES), default="quick")
    p = add("smooth", cmd_smooth, "list basis-smooth integers up to x")
    p.add_argument("--x", type=_positive, required=True)
    p.add_argument("--k", type=_positive, required=True)
    return parser


def _flatten(d: Dict[str, Any]) -> str:
    return ";".join(f"{k}={v}" for k, v in d.items())


def to_csv(record: ResultRecord) -> str:
    """CSV rendering.

    verify: ``name,params,pass,witness``; bench: ``instance,engine,count,runtime_ms``;
    gap: ``n,k,midpoint_log2,gap``; everything else: ``op,params,field,value``.
    """
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    res = record.result
    if record.op == "verify":
        w.writerow(["name", "params", "pass", "witness"])
        for c in res["checks"]:
            w.writerow([c["name"], " ".join(map(str, c["params"])),
                        str(c["pass"]).lower(), _flatten(c["witness"])])
    elif record.op == "bench":
        w.writerow(["instance", "engine", "count", "runtime_ms"])
        for r in res["rows"]:
            w.writerow([r["instance"], r["engine"], r["count"], r["runtime_ms"]])
    elif record.op == "gap":
        w.writerow(["n", "k", "midpoint_log2", "gap"])
        for r in res:
            w.writerow([r["n"], r["k"], repr(r["midpoint_log2"]), repr(r["gap"])])
    else:
        w.writerow(["op", "params", "field", "value"])
        params = _flatten(record.params)
        fields = res if isinstance(res, dict) else {"count": res}
        for key, val in fields.items():
            if key == "values":
                val = " ".join(map(str, val))
            elif isinstance(val, dict):
                val = _flatten(val)
            w.writerow([record.op, params, key, val])
    return buf.getvalue()


def _timestamp(reproducible: bool) -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if reproducible and epoch is None:
        epoch = "0"
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch is not None \
        else datetime.now(timezone.utc)
    return when.isoformat(timespec="seconds").replace("+00:00", "Z")


def _exit_code(record: ResultRecord) -> int:
    if record.op == "verify" and not record.result["all_passed"]:
        return EXIT_VERIFY
    if record.op == "bench" and not record.result["agree"]:
        return EXIT_VERIFY
    return EXIT_OK


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"primlim: {exc}", file=stderr)
        return EXIT_USAGE
    if args.threads < 0 or args.memo_budget < 1:
        print("primlim: --threads must be >= 0 and --memo-budget positive", file=stderr)
        return EXIT_USAGE
    ctx = Context(args)

    def compute() -> ResultRecord:
        t0 = time.perf_counter()
        params, result = args.func(args, ctx)
        ms = int(round((time.perf_counter() - t0) * 1000))
        return ResultRecord(op=args.command, params=params, result=result,
                            timestamp=_timestamp(args.reproducible),
                            runtime_ms=0 if args.reproducible else ms)

    try:
        cache = None if args.no_cache or args.command == "bench" \
            else ResultCache.from_env(args.cache_dir)
        if cache is None:
            record = compute()
        else:
            key = canonical_key(args.command, _key_params(args))
            record, hit = cache.lookup_store(key, compute)
            if hit:
                print(f"primlim: served from cache {cache.path_for(key).name}", file=stderr)
    except ParameterError as exc:
        print(f"primlim: {exc}", file=stderr)
        return EXIT_USAGE
    except ResourceLimitError as exc:
        print(f"primlim: resource limit: {exc}", file=stderr)
        return EXIT_RESOURCE
    except MemoryError:
        print("primlim: resource limit: out of memory", file=stderr)
        return EXIT_RESOURCE

    if (args.fmt or "json") == "csv":
        stdout.write(to_csv(record))
    else:
        stdout.write(record.to_json() + "\n")
    return _exit_code(record)


_NON_KEY = {"fmt", "threads", "cache_dir", "no_cache", "memo_budget", "reproducible",
            "func", "command"}


def _key_params(args: argparse.Namespace) -> Dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k not in _NON_KEY}


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
