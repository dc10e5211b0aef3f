"""Command-line entry point ``cipolla``.

Exit codes: 0 success, 1 a verification found violations, 2 usage or domain error.
Every flag may also be set through an environment variable ``CIPOLLA_<FLAG>``
(for instance ``CIPOLLA_DIGITS=50``); explicit flags win.
"""

from __future__ import annotations

import argparse
import csv
import enum
import io
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import mpmath
from mpmath import mp

from . import constants as C
from . import numerics as NUM
from . import polyengine as PE
from . import primes as PR
from .errors import CipollaError

EXIT_OK, EXIT_VIOLATIONS, EXIT_ERROR = 0, 1, 2


class OutputFormat(enum.Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


AUTO = "AUTO"


@dataclass
class RunConfig:
    subcommand: str
    digits: int = 30
    terms: int | str = AUTO
    fmt: OutputFormat = OutputFormat.TEXT
    cache_dir: Path | None = None
    jobs: int = 1
    sieve_limit: int = PR.DEFAULT_SIEVE_LIMIT
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.digits < 6:
            raise ValueError("--digits must be >= 6")
        if self.terms != AUTO and (not isinstance(self.terms, int) or self.terms < 0):
            raise ValueError("--terms must be a nonnegative integer")
        if self.cache_dir is not None:
            self.cache_dir = Path(self.cache_dir)
            self.cache_dir.mkdir(parents=True, exist_ok=True)


class _Usage(Exception):
    pass


def _env(name, default, conv=str):
    v = os.environ.get("CIPOLLA_" + name)
    return default if v in (None, "") else conv(v)


def _num(v, digits):
    # scientific notation once the integer part has more digits than were computed
    return mpmath.nstr(v, digits, min_fixed=-mpmath.inf, max_fixed=digits) if mpmath.isfinite(v) else str(v)


def _emit(cfg: RunConfig, obj, text: str, rows=None, header=None):
    if cfg.fmt is OutputFormat.JSON:
        sys.stdout.write(json.dumps(obj, sort_keys=True) + "\n")
    elif cfg.fmt is OutputFormat.CSV and rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        sys.stdout.write(buf.getvalue())
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _parse_int_list(spec: str) -> list[int]:
    """``"1-15,20,30"`` -> [1..15, 20, 30]."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            a, b = part.split("-", 1)
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _parse_big_int(s: str) -> int:
    s = s.strip().lower().replace("_", "")
    if "e" in s:
        m, e = s.split("e", 1)
        v = NUM.to_mpf(s)
        if int(v) != v:
            raise ValueError(f"{s} is not an integer")
        return int(v)
    if "^" in s:
        b, e = s.split("^", 1)
        return int(b) ** int(e)
    return int(s)


# ---------------------------------------------------------------------------
# subcommands


def cmd_poly(cfg: RunConfig) -> int:
    n = cfg.options["n"]
    if n < 0:
        raise _Usage("--n must be >= 0")
    P = PE.poly_P(n)
    obj = P.to_json_obj()
    text = P.to_text()
    if cfg.options.get("q"):
        if n < 1:
            raise _Usage("Q_n is defined for n >= 1")
        Q = PE.poly_Q(n)
        obj = {"P": obj, "Q": Q.to_json_obj()}
        text = f"P_{n} = {text}\nQ_{n} = {Q.to_text()}"
    rows = [(k, str(c)) for k, c in enumerate(P.scaled_coeffs)]
    _emit(cfg, obj, text, rows, ("k", f"coeff_times_{P.denom}"))
    return EXIT_OK


def cmd_triangle(cfg: RunConfig) -> int:
    N = cfg.options["N"]
    kind = cfg.options["kind"]
    tri = PE.coeff_triangle_a(N) if kind == "a" else PE.coeff_triangle_b(N)
    if cfg.fmt is OutputFormat.JSON:
        sys.stdout.write(PE.triangle_to_json(tri))
    elif cfg.fmt is OutputFormat.CSV:
        sys.stdout.write(PE.triangle_to_csv(tri))
    else:
        lines = [f"{n}: " + " ".join(str(v) for v in tri.row(n)) for n in range(tri.first_row, tri.N + 1)]
        sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_constants(cfg: RunConfig) -> int:
    d = cfg.digits
    Ns = _parse_int_list(cfg.options["N"]) if cfg.options.get("N") else list(C.TABULATED_N)
    rows = [C.constants_row(N, d, cfg.cache_dir) for N in Ns]
    obj = {"digits": d, "rows": [r.to_json_obj() for r in rows]}
    show = min(d, 12)
    lines = [f"{'N':>3} {'c_N':>{show + 4}} {'d_N':>{show + 4}} {'x_N':>{show + 4}}"]
    for r in rows:
        lines.append(f"{r.N:>3} {_num(r.c_N, show):>{show + 4}} {_num(r.d_N, show):>{show + 4}} {_num(r.x_N, show):>{show + 4}}")
    csv_rows = [(r.N, _num(r.c_N, d), _num(r.d_N, d), _num(r.x_N, d)) for r in rows]
    if cfg.options.get("z"):
        zs = [C.z_const(N, d) for N in range(2, 12)]
        obj["z"] = [{"N": z.N, "z_N": _num(z.z_N, 10), "z_prime": _num(z.z_prime, 10)} for z in zs]
        lines.append("")
        lines.append(f"{'N':>3} {'z_N':>14} {'z_prime':>14}")
        lines.extend(f"{z.N:>3} {_num(z.z_N, 10):>14} {_num(z.z_prime, 10):>14}" for z in zs)
    _emit(cfg, obj, "\n".join(lines), csv_rows, ("N", "c_N", "d_N", "x_N"))
    return EXIT_OK


def cmd_ali(cfg: RunConfig) -> int:
    d = cfg.digits
    with mp.workdps(d + NUM.GUARD):
        u = NUM.to_mpf(cfg.options["u"])
        value = NUM.ali(u, d)
        if cfg.terms == AUTO:
            res = NUM.auto_expand(u, d)
            N = res.N_used
            # the stopping rule gives only a heuristic radius; certify where a theorem applies
            cert = NUM.bound_for(u, N, res.value) if N <= 11 else res.bound
        elif cfg.terms >= 1:
            res = NUM.f_N_eval(u, cfg.terms, d)
            N, cert = cfg.terms, res.bound
        else:
            res = NUM.f_N_eval(u, 0, d)
            N, cert = 0, res.bound
        obj = {
            "value": _num(value, d),
            "digits": d,
            "N": N,
            "expansion": _num(res.value, d),
            "radius": _num(cert.radius, 10),
            "theorem": cert.justification.value,
        }
    text = (
        f"ali(u)      = {obj['value']}\n"
        f"f_N(u)      = {obj['expansion']}\n"
        f"N_used      = {N}\n"
        f"radius      = {obj['radius']}\n"
        f"theorem     = {obj['theorem']}"
    )
    _emit(cfg, obj, text, [tuple(obj[k] for k in ("value", "digits", "N", "radius", "theorem"))],
          ("value", "digits", "N", "radius", "theorem"))
    return EXIT_OK


def cmd_li(cfg: RunConfig) -> int:
    d = cfg.digits
    with mp.workdps(d + NUM.GUARD):
        v = NUM.li(NUM.to_mpf(cfg.options["x"]), d)
        s = _num(v, d)
    _emit(cfg, {"value": s, "digits": d}, s, [(s, d)], ("value", "digits"))
    return EXIT_OK


def cmd_nthprime(cfg: RunConfig) -> int:
    n = _parse_big_int(cfg.options["n"])
    p = PR.nth_prime(n, cfg.sieve_limit)
    _emit(cfg, {"n": str(n), "p": str(p)}, str(p), [(n, p)], ("n", "p"))
    return EXIT_OK


def cmd_sprime(cfg: RunConfig) -> int:
    d = cfg.digits
    with mp.workdps(d + NUM.GUARD):
        n = NUM.to_mpf(cfg.options["n"]) if not cfg.options["n"].isdigit() else int(cfg.options["n"])
        v = PR.s_N(n, cfg.options["order"], d)
        s = _num(v, d)
    _emit(cfg, {"value": s, "N": cfg.options["order"], "digits": d}, s, [(s,)], ("value",))
    return EXIT_OK


def _report_obj(rep):
    return {
        "name": rep.name,
        "status": rep.status.value,
        "checked": rep.checked,
        "violations": [list(v) if isinstance(v, tuple) else v for v in rep.violations],
    }


def _compress(ns):
    """[1,2,3,5] -> "1..3,5"."""
    out, i = [], 0
    while i < len(ns):
        j = i
        while j + 1 < len(ns) and ns[j + 1] == ns[j] + 1:
            j += 1
        out.append(str(ns[i]) if i == j else f"{ns[i]}..{ns[j]}")
        i = j + 1
    return ",".join(out)


def cmd_verify(cfg: RunConfig) -> int:
    check, hi = cfg.options["check"], _parse_big_int(cfg.options["to"])
    lo = cfg.options.get("start")
    if check == "tdistance":
        rep = PR.check_tdistance(lo or 1, hi, cfg.digits, jobs=cfg.jobs, max_limit=cfg.sieve_limit)
        viol = _compress(rep.violations)
    elif check == "classical":
        rep = PR.check_classical(hi, max_limit=cfg.sieve_limit)
        viol = ", ".join(f"{n}:{k}" for n, k in rep.violations)
    else:
        rep = PR.check_schoenfeld(hi, max_limit=cfg.sieve_limit)
        viol = ", ".join(f"{x}:{k}" for x, k in rep.violations)
    text = rep.summary() + (f"\nviolations: {viol}" if rep.violations else "")
    _emit(cfg, _report_obj(rep), text, [(rep.name, rep.status.value, rep.checked, len(rep.violations))],
          ("name", "status", "checked", "violations"))
    return EXIT_OK if rep.passed else EXIT_VIOLATIONS


def cmd_roots(cfg: RunConfig) -> int:
    d = cfg.digits
    ns = _parse_int_list(str(cfg.options["n"]))
    entries = [PR.real_roots(n, d) for n in ns]
    obj = {str(e.n): [_num(r.mid, d) for r in e.roots] for e in entries}
    lines = [f"P_{e.n}: " + (", ".join(_num(r.mid, d) for r in e.roots) or "no real roots") for e in entries]
    rows = [(e.n, i, _num(r.mid, d)) for e in entries for i, r in enumerate(e.roots)]
    _emit(cfg, obj, "\n".join(lines), rows, ("n", "index", "root"))
    return EXIT_OK


def cmd_r3(cfg: RunConfig) -> int:
    d = max(cfg.digits, 50)
    rep = PR.r3_window(d)
    obj = {
        "y0": _num(rep.y0, 15),
        "threshold": _num(rep.threshold, 20),
        "s3": PR.decimal_digits(rep.s3, 46),
        "ali": PR.decimal_digits(rep.ali_n, 46),
        "upper": PR.decimal_digits(rep.upper, 46),
        "upper_below_s3": rep.upper_below_s3,
    }
    text = "\n".join(
        [
            f"y0            = {obj['y0']}",
            f"threshold n   = {obj['threshold']}",
            f"s_3(n)        = {_num(rep.s3, 46)}",
            f"ali(n)        = {_num(rep.ali_n, 46)}",
            f"ali + radius  = {_num(rep.upper, 46)}",
            f"upper < s_3   = {rep.upper_below_s3}",
        ]
    )
    _emit(cfg, obj, text, [tuple(obj.values())], tuple(obj))
    return EXIT_OK if rep.upper_below_s3 else EXIT_VIOLATIONS


def cmd_bench(cfg: RunConfig) -> int:
    Ns = _parse_int_list(str(cfg.options["N"]))
    rows = []
    for N in Ns:
        t = time.perf_counter()
        ops = PE.op_count_model(N)
        wall = time.perf_counter() - t
        rows.append((N, ops, PE.op_count_formula(N), round(wall, 4)))
    obj = [{"N": N, "ops": o, "formula": f, "seconds": w} for N, o, f, w in rows]
    text = "\n".join([f"{'N':>5} {'ops':>10} {'formula':>10} {'seconds':>9}"] + [
        f"{N:>5} {o:>10} {f:>10} {w:>9.4f}" for N, o, f, w in rows])
    _emit(cfg, obj, text, rows, ("N", "ops", "formula", "seconds"))
    return EXIT_OK if all(o == f for _, o, f, _ in rows) else EXIT_VIOLATIONS


COMMANDS = {
    "poly": cmd_poly,
    "triangle": cmd_triangle,
    "constants": cmd_constants,
    "ali": cmd_ali,
    "li": cmd_li,
    "nthprime": cmd_nthprime,
    "sprime": cmd_sprime,
    "verify": cmd_verify,
    "roots": cmd_roots,
    "r3": cmd_r3,
    "bench": cmd_bench,
}


# ---------------------------------------------------------------------------
# parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(message)


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False, allow_abbrev=False)
    p.add_argument("--digits", type=int, default=_env("DIGITS", 30, int))
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=_env("FORMAT", "") == "json")
    fmt.add_argument("--csv", action="store_true", default=_env("FORMAT", "") == "csv")
    p.add_argument("--jobs", type=int, default=_env("JOBS", 1, int))
    p.add_argument("--cache-dir", default=_env("CACHE_DIR", None))
    p.add_argument("--sieve-limit", type=_parse_big_int, default=_env("SIEVE_LIMIT", PR.DEFAULT_SIEVE_LIMIT, _parse_big_int))
    terms = p.add_mutually_exclusive_group()
    terms.add_argument("--terms", type=int, default=None)
    terms.add_argument("--auto", action="store_true")
    return p


def _add_verify(sub, common):
    p = sub.add_parser("verify", parents=[common], help="run an inequality sweep")
    p.add_argument("--check", choices=("tdistance", "classical", "schoenfeld"), required=True)
    p.add_argument("--to", required=True)
    p.add_argument("--from", dest="start", type=int, default=None)


def _add_roots(sub, common):
    p = sub.add_parser("roots", parents=[common], help="real roots of P_n")
    p.add_argument("--n", required=True, help="index or list such as 1-23")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = _Parser(prog="cipolla", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("poly", parents=[common], help="print P_n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", action="store_true", help="also print Q_n")

    p = sub.add_parser("triangle", parents=[common], help="print a(n,k) or b(n,k)")
    p.add_argument("--kind", choices=("a", "b"), default="a")
    p.add_argument("--N", type=int, required=True)

    p = sub.add_parser("constants", parents=[common], help="c_N, d_N, x_N tables")
    p.add_argument("--N", default=None, help="list such as 1-15,20,30")
    p.add_argument("--z", action="store_true", help="also compute z_2..z_11")

    p = sub.add_parser("ali", parents=[common], help="ali(u) with the truncated expansion")
    p.add_argument("--u", required=True)

    p = sub.add_parser("li", parents=[common], help="li(x)")
    p.add_argument("--x", required=True)

    p = sub.add_parser("nthprime", parents=[common], help="the n-th prime")
    p.add_argument("--n", required=True)

    p = sub.add_parser("sprime", parents=[common], help="s_N(n)")
    p.add_argument("--n", required=True)
    p.add_argument("--N", dest="order", type=int, default=3)

    _add_verify(sub, common)
    _add_roots(sub, common)
    sub.add_parser("r3", parents=[common], help="reproduce the r_3 window")

    p = sub.add_parser("bench", parents=[common], help="coefficient-operation counts and timing")
    p.add_argument("--N", default="10,50,100")

    grp = sub.add_parser("primes", help="prime-side checks")
    psub = grp.add_subparsers(dest="primes_command", parser_class=_Parser)
    psub.required = True
    _add_verify(psub, common)
    _add_roots(psub, common)
    psub.add_parser("r3", parents=[common], help="reproduce the r_3 window")
    return parser


def parse_config(argv) -> RunConfig:
    args = build_parser().parse_args(argv)
    command = args.primes_command if args.command == "primes" else args.command
    fmt = OutputFormat.JSON if args.json else OutputFormat.CSV if args.csv else OutputFormat.TEXT
    if args.terms is not None:
        terms = args.terms
    elif args.auto:
        terms = AUTO
    else:
        terms = _env("TERMS", AUTO, lambda s: AUTO if s.upper() == AUTO else int(s))
    skip = {"command", "primes_command", "digits", "json", "csv", "jobs", "cache_dir", "sieve_limit", "terms", "auto"}
    options = {k: v for k, v in vars(args).items() if k not in skip}
    return RunConfig(command, args.digits, terms, fmt, args.cache_dir, args.jobs, args.sieve_limit, options)


def main(argv=None) -> int:
    try:
        cfg = parse_config(sys.argv[1:] if argv is None else argv)
        return COMMANDS[cfg.subcommand](cfg)
    except _Usage as e:
        print(f"cipolla: error: {e}", file=sys.stderr)
        return EXIT_ERROR
    except (CipollaError, ValueError, ArithmeticError) as e:
        print(f"cipolla: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
