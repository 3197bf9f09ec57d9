"""Command-line front end.

Subcommands: salie, gauss, ramanujan, hilbert, classnum, alpha-g,
identity-check, circle, local-l2, conjecture-scan, statement-scan,
selftest.  Exit codes: 0 success, 1 usage error or failed check,
2 domain error, 3 inconclusive result.

Scalar results print as bare values (re,im for complex) in csv format;
scans emit delimited rows, and --plot renders a figure alongside the
delimited output.  All randomness flows from --seed through the
counter-based generator, and scan timing columns are zeroed unless
--wall-times is given, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from typing import List, Optional

from . import acceptance, expsums, hyperbolic, quadpairs, report
from .arith import hilbert_p
from .cache import Cache
from .conjecture import ConjectureParams, StatementParams, dyadic_scan, statement_sum
from .rng import Stream

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DOMAIN = 2
EXIT_INCONCLUSIVE = 3


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read_config(path: str) -> dict:
    out = {}
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line without '=': {raw.strip()!r}")
            key, val = (s.strip() for s in line.split("=", 1))
            out[key.replace("-", "_")] = val
    return out


def _build_parser() -> _Parser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--threads", type=int, default=None, help="worker count for scans")
    common.add_argument("--seed", type=int, default=None, help="seed for all randomness")
    common.add_argument("--cache-dir", default=None, help="result cache directory")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--config", default=None, help="key = value defaults file")
    common.add_argument(
        "--wall-times", action="store_true", help="write real wall times in scan rows"
    )

    p = _Parser(prog="hlsums", description=__doc__, parents=[common])
    sub = p.add_subparsers(dest="command", metavar="command", parser_class=_Parser)

    sp = sub.add_parser("salie", parents=[common], help="Salie sum T(m,n;c)")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--method", choices=("direct", "fast"), default="direct")

    sp = sub.add_parser("gauss", parents=[common], help="quadratic Gauss sum")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--c", type=int, required=True)
    sp.add_argument("--direct", action="store_true", help="sum term by term")

    sp = sub.add_parser("ramanujan", parents=[common], help="Ramanujan sum c_q(n)")
    sp.add_argument("--q", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)

    sp = sub.add_parser("hilbert", parents=[common], help="Hilbert symbol (a,b)_p")
    sp.add_argument("--a", type=int, required=True)
    sp.add_argument("--b", type=int, required=True)
    sp.add_argument("--p", type=int, required=True)

    sp = sub.add_parser("classnum", parents=[common], help="class number of form pairs")
    sp.add_argument("--d1", type=int, required=True)
    sp.add_argument("--d2", type=int, required=True)
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--box", type=int, default=None)
    sp.add_argument("--growth", type=int, default=4)

    sp = sub.add_parser("alpha-g", parents=[common], help="divisor-character sum")
    sp.add_argument("--t1", type=int, required=True)
    sp.add_argument("--t2", type=int, required=True)
    sp.add_argument("--f", type=int, required=True)
    sp.add_argument("--g", type=int, default=None, help="exclusion modulus (default: profile G)")

    sp = sub.add_parser("identity-check", parents=[common], help="randomized identity checks")
    sp.add_argument(
        "--lemma",
        "--name",
        dest="name",
        required=True,
        help="salie-decomposition, gauss-closed, ramanujan-closed, reciprocity, "
        "hilbert-product or salie-oracle (numeric aliases accepted)",
    )
    sp.add_argument("--trials", type=int, default=200)

    sp = sub.add_parser("circle", parents=[common], help="orbit count N(z, X)")
    sp.add_argument("--x", type=float, required=True)
    sp.add_argument("--y", type=float, required=True)
    sp.add_argument("--X", type=float, required=True, dest="big_x")
    sp.add_argument("--naive-check", action="store_true")
    sp.add_argument("--grid", type=int, default=None, help="grid scan over a region")
    sp.add_argument("--region", default=None, help="x0,x1,y0,y1 for --grid")
    sp.add_argument("--plot", default=None, help="render error figure to this path")

    sp = sub.add_parser("local-l2", parents=[common], help="local L2 error norm")
    sp.add_argument("--x0", type=float, required=True)
    sp.add_argument("--x1", type=float, required=True)
    sp.add_argument("--y0", type=float, required=True)
    sp.add_argument("--y1", type=float, required=True)
    sp.add_argument("--X", type=float, required=True, dest="big_x")
    sp.add_argument("--grid", type=int, default=16)

    sp = sub.add_parser("conjecture-scan", parents=[common], help="dyadic cancellation scan")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--L", type=int, required=True, dest="big_l")
    sp.add_argument("--K", type=int, required=True, dest="big_k")
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--alpha", type=float, default=0.0)
    sp.add_argument("--b-bound", type=float, default=1.0)
    sp.add_argument("--c-min", type=float, default=1024.0)
    sp.add_argument("--c-max", type=float, default=65536.0)
    sp.add_argument("--points", type=int, default=7)
    sp.add_argument("--plot", default=None, help="render slope figure to this path")

    sp = sub.add_parser("statement-scan", parents=[common], help="boxed four-parameter sum")
    sp.add_argument("--K", type=int, required=True, dest="big_k")
    sp.add_argument("--u", type=int, required=True)
    sp.add_argument("--r1", type=int, required=True)
    sp.add_argument("--r2", type=int, required=True)
    sp.add_argument("--r3", type=int, required=True)
    sp.add_argument("--r4", type=int, required=True)
    sp.add_argument("--C", type=float, required=True, dest="big_c")
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--M", type=float, required=True, dest="big_m")
    sp.add_argument("--X", type=float, required=True, dest="big_x")
    sp.add_argument("--kappa", type=int, choices=(-1, 1), required=True)

    sp = sub.add_parser("selftest", parents=[common], help="run the acceptance criteria")
    sp.add_argument("--criteria", default=None, help="comma-separated criterion numbers")
    sp.add_argument("--report-dir", default="reports")

    return p


def _resolve_runtime(args) -> dict:
    cfg = {}
    if args.config:
        cfg = _read_config(args.config)
    threads = args.threads if args.threads is not None else int(cfg.get("threads", 1))
    seed = args.seed if args.seed is not None else int(cfg.get("seed", acceptance.DEFAULT_SEED))
    cache_dir = args.cache_dir or cfg.get("cache_dir") or os.environ.get("HL_CACHE_DIR")
    fmt = args.format or cfg.get("format", "csv")
    out = args.out or cfg.get("out")
    if threads < 1:
        raise ValueError("threads must be >= 1")
    return {
        "threads": threads,
        "seed": seed,
        "cache": Cache(cache_dir) if cache_dir else None,
        "format": fmt,
        "out": out,
        "wall_times": args.wall_times,
    }


def _emit(text: str, runtime: dict) -> None:
    if runtime["out"]:
        with open(runtime["out"], "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _emit_scalar(values: dict, runtime: dict) -> None:
    if runtime["format"] == "json":
        import json

        _emit(json.dumps(values, sort_keys=True), runtime)
    else:
        _emit(",".join(report.fmt(v) if isinstance(v, float) else str(v) for v in values.values()), runtime)


def _emit_rows(rows: List[dict], header: List[str], runtime: dict) -> None:
    if runtime["format"] == "json":
        import io

        buf = io.StringIO()
        report.write_json_rows(rows, buf)
        _emit(buf.getvalue(), runtime)
    else:
        lines = [",".join(header)]
        lines.extend(",".join(str(row[h]) for h in header) for row in rows)
        _emit("\n".join(lines) + "\n", runtime)


def _complex_out(z: complex, runtime: dict) -> None:
    _emit_scalar({"re": z.real + 0.0, "im": z.imag + 0.0}, runtime)


def _identity_check(name: str, trials: int, seed: int) -> tuple:
    """Returns (passed, summary line)."""
    aliases = {
        "3.17": "salie-decomposition",
        "3.95": "gauss-closed",
        "3.108": "ramanujan-closed",
        "3.84": "reciprocity",
    }
    name = aliases.get(name, name)
    rs = Stream(seed)
    worst = 0.0
    if name == "salie-decomposition":
        done = 0
        while done < trials:
            t1, t2 = rs.randint(3, 50), rs.randint(3, 50)
            gam, k = rs.randint(1, 50), rs.randint(1, 20)
            if math.gcd(gam, k) != 1:
                continue
            d = rs.randint(1, 200)
            if math.gcd(d, 2 * (t1 * t1 - 4) * gam * k) != 1:
                continue
            n_freq, c_res = rs.randint(-100, 100), rs.randint(-100, 100)
            lhs = expsums.constrained_residue_sum(t1, t2, d, gam, k, n_freq, c_res)
            rhs = expsums.salie_decomposition_sum(t1, t2, d, gam, k, n_freq, c_res)
            worst = max(worst, abs(lhs - rhs) / math.sqrt(gam * d))
            done += 1
        return worst <= 1e-8, worst
    if name == "gauss-closed":
        done = 0
        while done < trials:
            c = 2 * rs.randint(0, 250) + 1
            b = rs.randint(1, c)
            if math.gcd(b, c) != 1:
                continue
            a = rs.randint(0, c)
            diff = abs(
                expsums.gauss_quadratic(a, b, c) - expsums.gauss_quadratic(a, b, c, direct=True)
            )
            worst = max(worst, diff / math.sqrt(c))
            done += 1
        return worst <= 1e-9, worst
    if name == "ramanujan-closed":
        for _ in range(trials):
            q = rs.randint(1, 500)
            n = rs.randint(0, q)
            if expsums.ramanujan(q, n) != expsums.ramanujan_direct(q, n):
                return False, float("inf")
        return True, 0.0
    if name == "reciprocity":
        done = 0
        while done < trials:
            t1 = 2 * rs.randint(1, 30) + 1
            t2 = 2 * rs.randint(1, 30) + 1
            f = 2 * rs.randint(3, 900) + 1
            if f * f <= (t1 * t1 - 4) * (t2 * t2 - 4):
                continue
            try:
                prof = quadpairs.local_profile(t1, t2, f)
                n = f * f - (t1 * t1 - 4) * (t2 * t2 - 4)
                from .arith import factorize

                for dv in factorize(n).divisors():
                    if math.gcd(dv, prof.G) == 1:
                        if not quadpairs.complementary_divisor_check(
                            t1, t2, f, prof.G, prof.R, dv
                        ):
                            return False, float("inf")
            except (ValueError, ArithmeticError):
                continue
            done += 1
        return True, 0.0
    if name == "hilbert-product":
        from .arith import factorize, hilbert_inf

        for _ in range(trials):
            a = rs.randint(-10000, 10000) or 1
            b = rs.randint(-10000, 10000) or 1
            prod = hilbert_inf(a, b)
            for p in factorize(abs(2 * a * b)).primes():
                prod *= hilbert_p(a, b, p)
            if prod != 1:
                return False, float("inf")
        return True, 0.0
    if name == "salie-oracle":
        from .arith import factorize

        done = 0
        while done < trials:
            c = 2 * rs.randint(0, 1000) + 1
            m = rs.randint(-2 * c, 2 * c)
            n = rs.randint(-2 * c, 2 * c)
            diff = abs(expsums.salie_fast(m, n, c, factorize(c)) - expsums.salie_direct(m, n, c))
            worst = max(worst, diff / math.sqrt(c))
            done += 1
        return worst <= 1e-9, worst
    raise ValueError(f"unknown identity name {name!r}")


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not args.command:
        parser.print_help()
        return EXIT_USAGE
    try:
        runtime = _resolve_runtime(args)
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"hlsums: {exc}\n")
        return EXIT_USAGE

    try:
        return _dispatch(args, runtime)
    except ValueError as exc:
        sys.stderr.write(f"hlsums: domain error: {exc}\n")
        return EXIT_DOMAIN


def _dispatch(args, runtime) -> int:
    cmd = args.command

    if cmd == "salie":
        fn = expsums.salie_direct if args.method == "direct" else expsums.salie_fast
        _complex_out(fn(args.m, args.n, args.c), runtime)
        return EXIT_OK

    if cmd == "gauss":
        _complex_out(expsums.gauss_quadratic(args.a, args.b, args.c, direct=args.direct), runtime)
        return EXIT_OK

    if cmd == "ramanujan":
        _emit_scalar({"value": expsums.ramanujan(args.q, args.n)}, runtime)
        return EXIT_OK

    if cmd == "hilbert":
        _emit_scalar({"value": hilbert_p(args.a, args.b, args.p)}, runtime)
        return EXIT_OK

    if cmd == "classnum":
        budget = None
        if args.box is not None:
            budget = quadpairs.Budget(box=args.box, growth=args.growth)
        key = {
            "d1": args.d1,
            "d2": args.d2,
            "t": args.t,
            "box": args.box or quadpairs.default_budget(args.d1, args.d2, args.t).box,
            "growth": args.growth,
        }
        cache = runtime["cache"]
        cached = cache.lookup("classnum", key) if cache else None
        if cached is not None:
            _emit_scalar({"h": int(cached)}, runtime)
            return EXIT_OK
        res = quadpairs.class_number(args.d1, args.d2, args.t, budget)
        if res.status != "ok":
            sys.stderr.write(f"hlsums: inconclusive at box {res.box}; raise --box\n")
            return EXIT_INCONCLUSIVE
        if cache:
            cache.store("classnum", key, res.value)
        _emit_scalar({"h": res.value}, runtime)
        return EXIT_OK

    if cmd == "alpha-g":
        g_excl = args.g
        if g_excl is None:
            g_excl = quadpairs.local_profile(args.t1, args.t2, args.f).G
        _emit_scalar({"value": quadpairs.alpha_g(args.t1, args.t2, args.f, g_excl)}, runtime)
        return EXIT_OK

    if cmd == "identity-check":
        passed, worst = _identity_check(args.name, args.trials, runtime["seed"])
        status = "PASS" if passed else "FAIL"
        _emit(
            f"{status} {args.name}: {args.trials} trials, max scaled deviation {worst:.3e}",
            runtime,
        )
        return EXIT_OK if passed else EXIT_USAGE

    if cmd == "circle":
        rows = []
        if args.grid:
            if not args.region:
                raise ValueError("--grid needs --region x0,x1,y0,y1")
            x0, x1, y0, y1 = (float(s) for s in args.region.split(","))
            for i in range(args.grid):
                for j in range(args.grid):
                    x = x0 + (i + 0.5) * (x1 - x0) / args.grid
                    y = y0 + (j + 0.5) * (y1 - y0) / args.grid
                    n_val = hyperbolic.count_orbit(complex(x, y), args.big_x).total
                    rows.append((x, y, args.big_x, n_val))
        else:
            z = complex(args.x, args.y)
            res = hyperbolic.count_orbit(z, args.big_x)
            if args.naive_check:
                naive = hyperbolic.count_orbit_naive(
                    z, args.big_x, hyperbolic.suggest_entry_bound(z, args.big_x)
                )
                if naive.total != res.total:
                    sys.stderr.write("hlsums: naive oracle disagrees\n")
                    return EXIT_USAGE
            rows.append((args.x, args.y, args.big_x, res.total))
        table = [
            {
                "x": report.fmt(x),
                "y": report.fmt(y),
                "X": report.fmt(bx),
                "N": n_val,
                "err": report.fmt(n_val - 3.0 * bx),
            }
            for x, y, bx, n_val in rows
        ]
        _emit_rows(table, ["x", "y", "X", "N", "err"], runtime)
        if args.plot:
            report.render_error_grid_figure(rows, args.plot, title="orbit count error")
        return EXIT_OK

    if cmd == "local-l2":
        val = hyperbolic.local_l2(
            (args.x0, args.x1, args.y0, args.y1), args.big_x, args.grid
        )
        _emit_scalar({"value": val + 0.0}, runtime)
        return EXIT_OK

    if cmd == "conjecture-scan":
        base = ConjectureParams(
            args.m, args.n, args.big_l, args.big_k, args.r, args.c_min,
            args.alpha, args.b_bound,
        )
        if args.points < 1:
            raise ValueError("points must be >= 1")
        if args.points == 1:
            cs = [args.c_min]
        else:
            ratio = (args.c_max / args.c_min) ** (1.0 / (args.points - 1))
            cs = [args.c_min * ratio**k for k in range(args.points)]
        records, slope, resid = dyadic_scan(base, cs, workers=runtime["threads"])
        if runtime["cache"]:
            for rec in records:
                key = {
                    "m": args.m, "n": args.n, "L": args.big_l, "K": args.big_k,
                    "r": args.r, "alpha": args.alpha, "C": rec.big_c,
                }
                runtime["cache"].store("conjecture_sum", key, [rec.sum_re, rec.sum_im])
                runtime["cache"].store("conjecture_terms", key, rec.terms)
        rows = report.scan_rows(records, base, wall_times=runtime["wall_times"])
        _emit_rows(rows, report.SCAN_HEADER, runtime)
        sys.stderr.write(f"fitted slope of log(C*|sum|) vs log C: {slope:+.4f} (residual {resid:.3e})\n")
        if args.plot:
            report.render_scan_figure(records, slope, args.plot, title="dyadic cancellation scan")
        return EXIT_OK

    if cmd == "statement-scan":
        params = StatementParams(
            big_k=args.big_k, u=args.u, r1=args.r1, r2=args.r2, r3=args.r3, r4=args.r4,
            big_c=args.big_c, a=args.a, big_m=args.big_m, big_x=args.big_x, kappa=args.kappa,
        )
        _complex_out(statement_sum(params), runtime)
        return EXIT_OK

    if cmd == "selftest":
        numbers = None
        if args.criteria:
            numbers = [int(s) for s in args.criteria.split(",")]
        results = acceptance.run_all(
            numbers,
            seed=runtime["seed"],
            workers=runtime["threads"] if runtime["threads"] > 1 else 8,
            report_dir=args.report_dir,
        )
        return EXIT_OK if all(r.passed for r in results) else EXIT_USAGE

    raise AssertionError(f"unhandled command {cmd}")  # unreachable


if __name__ == "__main__":
    sys.exit(main())
