"""Command line entry point ``skl``.

Subcommands: eval, solve, verify, limits, table.  Options can also come
from a flat ``key=value`` file given with ``--config``; flags on the
command line win.  Exit status: 0 ok, 1 failed check, 2 invalid input.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from . import kernels as kn
from .data import Bump, Gaussian, GridDatum, RadialPoly
from .errors import ConvergenceError, SingKernError
from .quadrature import QuadratureSpec, Scheme
from .solvers import Problem, SolveRequest, solve
from . import verify as vf

SUBCOMMANDS = ("eval", "solve", "verify", "limits", "table")
TABLE_HEADER = ["n", "k", "t", "r", "value", "branch", "est_error"]


class UsageError(ValueError):
    pass


def fmt(x) -> str:
    """Shortest round-trip text for a float."""
    return repr(float(x))


# ------------------------------------------------------------------ parsing


def parse_int_range(text: str) -> list[int]:
    """'3', '2..5' (inclusive) or '2,4,6'."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            try:
                lo, hi = int(lo), int(hi)
            except ValueError:
                raise UsageError(f"bad integer range {part!r}") from None
            if hi < lo:
                raise UsageError(f"empty range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            try:
                out.append(int(part))
            except ValueError:
                raise UsageError(f"bad integer {part!r}") from None
    return out


def parse_float_range(text: str) -> list[float]:
    """'0.5', 'start:stop:step' (stop included when on the grid) or '0.1,0.2'.

    Grid points are computed in decimal arithmetic so that 0:0.99:0.01
    yields exactly 0.0, 0.01, ..., 0.99.
    """
    out = []
    for part in str(text).split(","):
        part = part.strip()
        try:
            if ":" in part:
                bits = [Decimal(b) for b in part.split(":")]
                if len(bits) != 3:
                    raise UsageError(f"range {part!r} must be start:stop:step")
                a, b, h = bits
                if h <= 0 or b < a:
                    raise UsageError(f"bad range {part!r}")
                count = int((b - a) / h) + 1
                out.extend(float(a + i * h) for i in range(count))
            else:
                out.append(float(Decimal(part)))
        except InvalidOperation:
            raise UsageError(f"bad number {part!r}") from None
    return out


def parse_vector(text: str, n: int | None = None) -> np.ndarray:
    try:
        v = np.array([float(s) for s in str(text).split(",")], dtype=float)
    except ValueError:
        raise UsageError(f"bad vector {text!r}") from None
    if n is not None and v.shape != (n,):
        raise UsageError(f"vector {text!r} must have {n} components")
    return v


def parse_datum(text: str, n: int):
    """Datum spec ``kind[:key=value]...``, vectors comma-separated.

    gaussian:width=0.5:amplitude=1:center=0.2,0,0
    bump:radius=1:center=0,0
    poly:coefficients=1,0.5        (powers of |Y - center|^2)
    const:2
    grid:path=data.csv:method=linear
    """
    kind, *rest = str(text).split(":")
    kind = kind.strip().lower()
    opts = {}
    for item in rest:
        if kind == "const" and "=" not in item:
            opts["value"] = item
            continue
        if "=" not in item:
            raise UsageError(f"datum option {item!r} must be key=value")
        key, val = item.split("=", 1)
        opts[key.strip()] = val.strip()

    def center():
        return parse_vector(opts.pop("center"), n) if "center" in opts else np.zeros(n)

    def scalar(key, default):
        return float(opts.pop(key, default))

    try:
        if kind == "gaussian":
            d = Gaussian(center(), scalar("width", 1.0), scalar("amplitude", 1.0))
        elif kind == "bump":
            d = Bump(center(), scalar("radius", 1.0), scalar("amplitude", 1.0))
        elif kind == "poly":
            d = RadialPoly(center(), list(parse_vector(opts.pop("coefficients", "1"))))
        elif kind == "const":
            d = RadialPoly(np.zeros(n), [scalar("value", 1.0)])
        elif kind == "grid":
            if "path" not in opts:
                raise UsageError("grid datum needs path=")
            d = GridDatum.from_csv(opts.pop("path"), method=opts.pop("method", "cubic"))
        else:
            raise UsageError(f"unknown datum kind {kind!r}")
    except (TypeError, ValueError) as e:
        if isinstance(e, UsageError):
            raise
        raise UsageError(f"bad datum {text!r}: {e}") from None
    if opts:
        raise UsageError(f"unused datum options {sorted(opts)}")
    d.check_dim(n)
    return d


def read_config(path) -> dict[str, str]:
    """Flat key=value file; '#' starts a comment; dashes and underscores are interchangeable."""
    cfg = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected key=value")
        key, val = line.split("=", 1)
        cfg[key.strip().replace("_", "-")] = val.strip()
    return cfg


def _config_argv(cfg: dict[str, str], sub: argparse.ArgumentParser) -> list[str]:
    flags = {s: a for a in sub._actions for s in a.option_strings}
    argv = []
    for key, val in cfg.items():
        flag = "--" + key
        if flag not in flags:
            raise UsageError(f"config key {key!r} is not an option of this command")
        if isinstance(flags[flag], argparse._StoreTrueAction):
            if val.lower() in ("1", "true", "yes", "on"):
                argv.append(flag)
        else:
            argv.append(f"{flag}={val}")
    return argv


# ----------------------------------------------------------------- commands


def _geometry_r(args, n) -> float:
    if args.r is not None:
        if args.X is not None or args.Y is not None:
            raise UsageError("give either --r or --X/--Y")
        return float(args.r)
    if args.X is None:
        raise UsageError("geometry needed: --r, or --X (and optionally --Y)")
    X = parse_vector(args.X, n)
    Y = parse_vector(args.Y, n) if args.Y is not None else np.zeros(n)
    return kn.radial_distance(X, Y)


def cmd_eval(args, out) -> int:
    q = kn.KernelQuery(args.n, args.k, args.t, _geometry_r(args, args.n))
    val, branch, err = kn.evaluate_kernel(args.kernel, q)
    if args.verbose:
        print(f"value={fmt(val)}", f"branch={branch}", f"est_error={fmt(err)}", sep="\n", file=out)
    else:
        print(fmt(val), file=out)
    return 0


def _quad_spec(args):
    if args.scheme is None and args.nodes is None and args.rel_tol is None:
        return None
    kw = {}
    if args.scheme is not None:
        kw["scheme"] = Scheme(args.scheme)
    if args.nodes is not None:
        kw["nodes"] = args.nodes
    if args.rel_tol is not None:
        kw["rel_tol"] = args.rel_tol
    return QuadratureSpec(**kw)


def cmd_solve(args, out) -> int:
    if args.X is None:
        raise UsageError("solve needs --X")
    datum = parse_datum(args.datum, args.n)
    req = SolveRequest(Problem(args.problem), args.n, args.k, args.t, parse_vector(args.X, args.n),
                       datum, quad=_quad_spec(args), cross_check=args.cross_check)
    res = solve(req)
    d = res.diagnostics
    lines = [f"value={fmt(res.value)}", f"est_error={fmt(res.est_error)}",
             f"branch={d.branch}", f"nodes={d.nodes}"]
    if d.cross_check is not None:
        lines.append(f"cross_check={fmt(d.cross_check)}")
    print("\n".join(lines), file=out)
    return 0


def cmd_verify(args, out) -> int:
    suites = vf.SUITES if args.suite == "all" else [s.strip() for s in args.suite.split(",")]
    unknown = set(suites) - set(vf.SUITES)
    if unknown:
        raise UsageError(f"unknown suite(s) {sorted(unknown)}; choose from {', '.join(vf.SUITES)} or all")
    ns = parse_int_range(args.n)
    for n in ns:
        if not kn.N_MIN <= n <= kn.N_MAX:
            raise UsageError(f"n={n} outside {kn.N_MIN}..{kn.N_MAX}")
    results = vf.run_suite(suites, ns, seed=args.seed, points=args.points,
                           identity_cases=args.identity_cases)
    rows = [[r.suite, r.name, "PASS" if r.passed else "FAIL", fmt(r.value), fmt(r.threshold), r.detail]
            for r in results]
    for row in rows:
        print(f"{row[2]} {row[0]:<10} {row[1]:<34} value={row[3]} threshold={row[4]} {row[5]}".rstrip(),
              file=out)
    failed = sum(not r.passed for r in results)
    print(f"{len(results)} checks, {failed} failed", file=out)
    if args.output:
        with open(args.output, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["suite", "name", "status", "value", "threshold", "detail"])
            w.writerows(rows)
    return 1 if failed else 0


_DEFAULT_LADDERS = {
    vf.LimitTarget.HEAT_K0: [2.0 ** -j for j in range(6, 13)],
    vf.LimitTarget.WAVE_K0: [2.0 ** -j for j in range(6, 13)],
    vf.LimitTarget.HEAT_IC: [4.0 ** -j for j in range(1, 9)],
    vf.LimitTarget.WAVE_IC0: [10.0 ** -j for j in range(1, 4)],
    vf.LimitTarget.WAVE_IC1: [10.0 ** -j for j in range(1, 4)],
}


def cmd_limits(args, out) -> int:
    target = vf.LimitTarget(args.target)
    ladder = parse_float_range(args.ladder) if args.ladder else _DEFAULT_LADDERS[target]
    if target in (vf.LimitTarget.HEAT_K0, vf.LimitTarget.WAVE_K0):
        probes = []
        for item in args.probes.split(","):
            try:
                t, r = (float(s) for s in item.split(":"))
            except ValueError:
                raise UsageError(f"probe {item!r} must be t:r") from None
            probes.append((t, r))
        rep = vf.limit_ladder(target, args.n, ladder, probes)
    else:
        if args.k is None:
            raise UsageError(f"{target.value} needs --k")
        datum = parse_datum(args.datum, args.n)
        X = parse_vector(args.X, args.n) if args.X is not None else np.zeros(args.n)
        rep = vf.limit_ladder(target, args.n, ladder, k=args.k, datum=datum, points=[X])
    print("param,distance,ratio", file=out)
    ratios = [math.nan] + rep.ratios
    for (p, d), q in zip(rep.ladder, ratios):
        print(f"{fmt(p)},{fmt(d)},{'' if math.isnan(q) else fmt(q)}", file=out)
    return 0


def table_rows(kernel, ns, ks, ts, rs):
    for n in ns:
        for k in ks:
            for t in ts:
                for r in rs:
                    val, branch, err = kn.evaluate_kernel(kernel, kn.KernelQuery(n, k, t, r))
                    yield [str(n), fmt(k), fmt(t), fmt(r), fmt(val), branch, fmt(err)]


def cmd_table(args, out) -> int:
    ns, ks = parse_int_range(args.n), parse_float_range(args.k)
    ts, rs = parse_float_range(args.t), parse_float_range(args.r)
    # validate the whole grid before writing anything
    for n in ns:
        for k in ks:
            for t in ts:
                for r in rs:
                    kn.KernelQuery(n, k, t, r)
                    if args.kernel in ("wave", "classical_wave") and r >= t:
                        raise UsageError(f"r={r} is not inside the cone t={t}")
    rows = list(table_rows(args.kernel, ns, ks, ts, rs))
    if args.output:
        fh = open(args.output, "w", newline="")
    else:
        fh = out
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TABLE_HEADER)
        w.writerows(rows)
    finally:
        if fh is not out:
            fh.close()
    return 0


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="skl", description="Singular heat and wave kernels.")
    p.add_argument("--config", help="key=value file; command-line flags override it")
    sub = p.add_subparsers(dest="command", metavar="{eval,solve,verify,limits,table}")
    kinds = sorted(kn.KERNELS)

    e = sub.add_parser("eval", help="evaluate one kernel value")
    e.add_argument("--kernel", choices=kinds, default="heat")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--k", type=float, required=True)
    e.add_argument("--t", type=float, required=True)
    e.add_argument("--r", type=float)
    e.add_argument("--X", help="comma-separated point")
    e.add_argument("--Y", help="comma-separated source point (default origin)")
    e.add_argument("--verbose", action="store_true", help="also print branch and error estimate")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("solve", help="solve a Cauchy problem at one point")
    s.add_argument("--problem", choices=[m.value for m in Problem], default="heat")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=float, required=True)
    s.add_argument("--t", type=float, required=True)
    s.add_argument("--X", help="comma-separated evaluation point")
    s.add_argument("--datum", default="gaussian", help="e.g. gaussian:width=0.5:center=0.1,0,0")
    s.add_argument("--scheme", choices=[m.value for m in Scheme])
    s.add_argument("--nodes", type=int)
    s.add_argument("--rel-tol", type=float)
    s.add_argument("--cross-check", action="store_true")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="run the verification suite")
    v.add_argument("--suite", default="all", help=f"all or a comma list of {', '.join(vf.SUITES)}")
    v.add_argument("--n", default=f"{kn.N_MIN}..{kn.N_MAX}", help="e.g. 2..5 or 2,4")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--points", type=int, default=5, help="random probes per (n, k)")
    v.add_argument("--identity-cases", type=int, default=200)
    v.add_argument("--output", help="summary CSV path")
    v.set_defaults(func=cmd_verify)

    lm = sub.add_parser("limits", help="distance to a limit along a ladder")
    lm.add_argument("--target", choices=[m.value for m in vf.LimitTarget], required=True)
    lm.add_argument("--n", type=int, required=True)
    lm.add_argument("--ladder", help="decreasing values, e.g. 0.1,0.01,0.001")
    lm.add_argument("--probes", default="1:0.5,0.5:0.2", help="t:r pairs for the k -> 0 targets")
    lm.add_argument("--k", type=float)
    lm.add_argument("--datum", default="gaussian")
    lm.add_argument("--X")
    lm.set_defaults(func=cmd_limits)

    tb = sub.add_parser("table", help="CSV sweep over (n, k, t, r)")
    tb.add_argument("--kernel", choices=kinds, default="heat")
    tb.add_argument("--n", required=True)
    tb.add_argument("--k", required=True)
    tb.add_argument("--t", required=True)
    tb.add_argument("--r", required=True, help="value, list, or start:stop:step")
    tb.add_argument("--output")
    tb.set_defaults(func=cmd_table)
    return p


def _strip_config(argv):
    out, skip = [], False
    for a in argv:
        if skip:
            skip = False
        elif a == "--config":
            skip = True
        elif not a.startswith("--config="):
            out.append(a)
    return out


def main(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        pre_parser = argparse.ArgumentParser(add_help=False)
        pre_parser.add_argument("--config")
        pre, rest = pre_parser.parse_known_args(argv)
        if pre.config:
            cfg = read_config(pre.config)
            named = [a for a in rest if a in SUBCOMMANDS]
            command = named[0] if named else cfg.get("subcommand")
            cfg.pop("subcommand", None)
            if command is None:
                raise UsageError("no subcommand given")
            subparser = parser._subparsers._group_actions[0].choices.get(command)
            if subparser is None:
                raise UsageError(f"unknown subcommand {command!r}")
            extra = _config_argv(cfg, subparser)
            rest = _strip_config(argv)
            if command in rest:
                rest.remove(command)
            # config values go first so that explicit flags override them
            argv = [command] + extra + rest
        args = parser.parse_args(argv)
        if args.command is None:
            parser.print_usage(sys.stderr)
            return 2
        return args.func(args, out)
    except SystemExit as e:
        return int(e.code or 0)
    except ConvergenceError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (SingKernError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
