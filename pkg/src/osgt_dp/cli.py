"""Command-line front end.

Exit codes: 0 success, 1 invalid input or unsolvable calibration,
2 internal-consistency or oracle failure. Tables go to stdout as CSV with a
header row (or JSON with ``--format json``); diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import warnings
from typing import Any, Sequence

from . import __version__, calibrate, dist, figures, selftest
from .account import (
    CaseBoundary,
    delta_quadrature,
    gaussian_delta,
    gaussian_delta_via_renyi,
    osgt_delta,
    osgt_delta_via_renyi,
    osgt_renyi_closed_form,
    osgt_renyi_k_dim,
    osgt_renyi_worst_case,
    osgt_zcdp,
    renyi_quadrature,
)
from .account.oracle import PrecisionFloorWarning
from .dist import OsgtParams
from .errors import CalibrationError, ConsistencyError, DomainError
from .figures import SCHEMA_VERSION, Table
from .mech import Sensitivity
from .rng import SEED_ENV, make_rng

EXIT_OK, EXIT_DOMAIN, EXIT_CONSISTENCY = 0, 1, 2
ORACLE_DELTA_RTOL = 1e-6
ORACLE_DELTA_FLOOR = 1e-13
ORACLE_RENYI_RTOL = 1e-8


class _Parser(argparse.ArgumentParser):
    """Usage errors are domain errors (exit 1), not argparse's default 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_DOMAIN, f"{self.prog}: error: {message}\n")


class _OracleMismatch(Exception):
    pass


# ---------------------------------------------------------------- output


def _fmt(value: Any, precision: int, sci: bool) -> str:
    if isinstance(value, bool) or isinstance(value, int) or isinstance(value, str):
        return str(value)
    if value is None:
        return ""
    v = float(value)
    if not math.isfinite(v):
        return repr(v)
    if sci:
        return f"{v:.{precision - 1}e}"
    return f"{v:.{precision}g}"


def _json_value(text: str, value: Any) -> Any:
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    v = float(text)
    return v if math.isfinite(v) else text


def emit(table: Table, args: argparse.Namespace, command: str) -> None:
    cells = [[_fmt(v, args.precision, c in table.sci_columns) for c, v in zip(table.columns, row)]
             for row in table.rows]
    if args.format == "json":
        rows = [{c: _json_value(t, v) for c, t, v in zip(table.columns, trow, row)}
                for trow, row in zip(cells, table.rows)]
        doc = {"schema_version": SCHEMA_VERSION, "command": command, "columns": table.columns,
               "rows": rows, "meta": table.meta}
        json.dump(doc, sys.stdout, indent=1, default=str)
        sys.stdout.write("\n")
        return
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(table.columns)
    w.writerows(cells)


# ---------------------------------------------------------------- commands


def _params(args) -> OsgtParams:
    return OsgtParams(args.m, args.sigma2)


def _scaled_dev(value: float, oracle: float, floor: float = 0.0) -> float:
    return abs(value - oracle) / max(abs(oracle), abs(value), floor)


def cmd_sample(args) -> int:
    if args.n < 1:
        raise DomainError(f"n must be >= 1, got {args.n}")
    x, _ = dist.sample_n(_params(args), args.n, make_rng(args.seed))
    if args.format == "json":
        json.dump({"schema_version": SCHEMA_VERSION, "command": "sample", "seed": args.seed,
                   "values": [float(_fmt(v, args.precision, False)) for v in x]}, sys.stdout)
        sys.stdout.write("\n")
    else:
        sys.stdout.write("".join(_fmt(v, args.precision, False) + "\n" for v in x))
    return EXIT_OK


def _eps_list(raw: Sequence[str], p: OsgtParams, d: float) -> list[float]:
    out = []
    for e in raw:
        if e.lower() in ("star", "eps_star"):
            out.append(CaseBoundary.of(p, d).eps_star)
        else:
            try:
                out.append(float(e))
            except ValueError:
                raise DomainError(f"eps must be a number or 'star', got {e!r}") from None
    return out


def cmd_delta(args) -> int:
    p = _params(args)
    eps_star = CaseBoundary.of(p, args.Delta).eps_star
    cols = ["eps", "delta", "branch"]
    sci = {"delta"}
    if args.gaussian:
        cols.append("delta_gaussian")
        sci.add("delta_gaussian")
    if args.oracle:
        cols += ["delta_oracle", "rel_deviation"]
        sci |= {"delta_oracle", "rel_deviation"}
    rows, failed = [], []
    sigma_g2 = dist.variance(p)
    for e in _eps_list(args.eps, p, args.Delta):
        point = osgt_delta(p, args.Delta, e)
        row: list[Any] = [e, point.delta, "small_eps" if e <= eps_star else "large_eps"]
        if args.gaussian:
            row.append(gaussian_delta(sigma_g2, args.Delta, e).delta)
        if args.oracle:
            with warnings.catch_warnings(record=True) as caught:
                warnings.simplefilter("always", PrecisionFloorWarning)
                oracle = delta_quadrature(p, args.Delta, e)
            for w in caught:
                print(f"note: eps={e:g}: {w.message}", file=sys.stderr)
            dev = _scaled_dev(point.delta, oracle, ORACLE_DELTA_FLOOR)
            row += [oracle, dev]
            if dev > ORACLE_DELTA_RTOL:
                failed.append(e)
        rows.append(tuple(row))
    meta = {"m": p.m, "sigma2": p.sigma2, "Delta": args.Delta, "eps_star": eps_star}
    if args.gaussian:
        meta["sigma_g2"] = sigma_g2
    emit(Table(cols, rows, frozenset(sci), meta), args, "delta")
    if failed:
        raise _OracleMismatch(f"oracle deviation above {ORACLE_DELTA_RTOL:g} at eps = {failed}")
    return EXIT_OK


def cmd_zcdp(args) -> int:
    p = _params(args)
    rows = []
    for a in args.alpha:
        z = osgt_zcdp(p, args.Delta2, args.k, a)
        rows.append((a, z.zeta, z.rho, z.bound))
    emit(Table(["alpha", "zeta", "rho", "bound"], rows,
               meta={"m": p.m, "sigma2": p.sigma2, "Delta2": args.Delta2, "k": args.k}), args, "zcdp")
    return EXIT_OK


def cmd_renyi(args) -> int:
    p = _params(args)
    if args.oracle and (args.k > 1 or args.worst_case):
        raise DomainError("--oracle applies to the one-dimensional divergence at the given Delta only")
    cols = ["alpha", "tau"]
    if args.worst_case:
        cols += ["argmax_d", "at_endpoint"]
    if args.oracle:
        cols += ["tau_oracle", "rel_deviation"]
    s = Sensitivity.identical(args.Delta, args.k)
    rows, failed = [], []
    for a in args.alpha:
        if args.worst_case:
            wc = osgt_renyi_worst_case(p, args.Delta, a, args.grid_n)
            rows.append((a, wc.evaluation.tau, wc.argmax, wc.at_endpoint))
            continue
        ev = osgt_renyi_k_dim(p, s, a) if args.k > 1 else osgt_renyi_closed_form(p, args.Delta, a)
        row: list[Any] = [a, ev.tau]
        if args.oracle:
            oracle = renyi_quadrature(p, args.Delta, a)
            dev = _scaled_dev(ev.tau, oracle)
            row += [oracle, dev]
            if dev > ORACLE_RENYI_RTOL:
                failed.append(a)
        rows.append(tuple(row))
    meta = {"m": p.m, "sigma2": p.sigma2, "Delta": args.Delta, "k": args.k}
    emit(Table(cols, rows, frozenset({"rel_deviation"}), meta), args, "renyi")
    if failed:
        raise _OracleMismatch(f"oracle deviation above {ORACLE_RENYI_RTOL:g} at alpha = {failed}")
    return EXIT_OK


def cmd_convert(args) -> int:
    p = _params(args)
    s = Sensitivity.identical(args.Delta, args.k)
    sigma_g2 = args.sigma_g2 if args.sigma_g2 is not None else dist.variance(p)
    rows = []
    for e in args.eps:
        t = osgt_delta_via_renyi(p, s, e)
        g = gaussian_delta_via_renyi(sigma_g2, s.delta2, e)
        ratio = g.delta / t.delta if t.delta > 0 else math.inf
        rows.append((e, t.delta, t.alpha, g.delta, g.alpha, ratio))
    meta = {"m": p.m, "sigma2": p.sigma2, "Delta": args.Delta, "k": args.k,
            "Delta2": s.delta2, "sigma_g2": sigma_g2}
    emit(Table(["eps", "delta_osgt", "alpha_osgt", "delta_gaussian", "alpha_gaussian", "ratio"], rows,
               frozenset({"delta_osgt", "delta_gaussian"}), meta), args, "convert")
    return EXIT_OK


def cmd_calibrate(args) -> int:
    if args.solve == "eps":
        if args.gaussian:
            sg2 = args.sigma_g2
            if sg2 is None:
                if args.m is None or args.sigma2 is None:
                    raise DomainError("gaussian eps calibration needs --sigma-g2 or --m and --sigma2")
                sg2 = dist.variance(OsgtParams(args.m, args.sigma2))
            value = calibrate.gaussian_epsilon_for_delta(sg2, args.Delta, args.target_delta)
            meta = {"mechanism": "gaussian", "sigma_g2": sg2}
        else:
            if args.m is None or args.sigma2 is None:
                raise DomainError("eps calibration needs --m and --sigma2")
            value = calibrate.epsilon_for_delta(OsgtParams(args.m, args.sigma2), args.Delta, args.target_delta)
            meta = {"mechanism": "osgt", "m": args.m, "sigma2": args.sigma2}
    else:
        if args.eps is None:
            raise DomainError("sigma2 calibration needs --eps")
        if args.gaussian:
            value = calibrate.gaussian_sigma2_for_target(args.Delta, args.eps, args.target_delta)
            meta = {"mechanism": "gaussian"}
        else:
            if args.m is None:
                raise DomainError("sigma2 calibration needs --m")
            value = calibrate.sigma2_for_target(args.m, args.Delta, args.eps, args.target_delta)
            meta = {"mechanism": "osgt", "m": args.m}
        meta["eps"] = args.eps
    meta.update({"Delta": args.Delta, "target_delta": args.target_delta})
    emit(Table([args.solve], [(value,)], meta=meta), args, "calibrate")
    return EXIT_OK


def _override_value(text: str) -> Any:
    parts = text.split(",")
    vals = []
    for t in parts:
        try:
            vals.append(int(t))
        except ValueError:
            try:
                vals.append(float(t))
            except ValueError:
                raise DomainError(f"override value {text!r} is not numeric") from None
    return tuple(float(v) for v in vals) if len(vals) > 1 else vals[0]


def cmd_reproduce(args) -> int:
    overrides = {}
    for item in args.set or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise DomainError(f"--set expects key=value, got {item!r}")
        overrides[key.strip()] = _override_value(val.strip())
    table = figures.reproduce(args.figure, **overrides)
    emit(table, args, f"reproduce {args.figure}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    results = selftest.run()
    total = 0.0
    for r in results:
        total += r.seconds
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name:<24} {r.seconds:8.3f}s  {r.detail}")
    bad = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(bad)}/{len(results)} checks passed in {total:.2f}s")
    if bad:
        print(f"failed: {', '.join(bad)}", file=sys.stderr)
        return EXIT_CONSISTENCY
    return EXIT_OK


# ---------------------------------------------------------------- parser


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--precision", type=_positive_int, default=12, help="significant digits (default 12)")

    osgt = argparse.ArgumentParser(add_help=False)
    osgt.add_argument("--m", type=float, required=True, help="offset m >= 0")
    osgt.add_argument("--sigma2", type=float, required=True, help="scale parameter sigma^2 > 0")

    parser = _Parser(prog="osgt-dp", description="OSGT noise: sampling, privacy accounting, calibration.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("sample", parents=[common, osgt], help="draw OSGT variates, one per line")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=None, help=f"defaults to ${SEED_ENV}, then 0")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("delta", parents=[common, osgt], help="exact delta(eps) of the 1-D mechanism")
    p.add_argument("--Delta", type=float, required=True, help="sensitivity")
    p.add_argument("--eps", nargs="+", required=True, help="one or more eps values; 'star' is the branch boundary")
    p.add_argument("--oracle", action="store_true", help="also integrate numerically and report the deviation")
    p.add_argument("--gaussian", action="store_true", help="add the Gaussian at matched variance")
    p.set_defaults(func=cmd_delta)

    p = sub.add_parser("zcdp", parents=[common, osgt], help="zCDP parameters (zeta, rho)")
    p.add_argument("--Delta2", type=float, required=True)
    p.add_argument("--k", type=_positive_int, default=1)
    p.add_argument("--alpha", type=float, nargs="+", required=True)
    p.set_defaults(func=cmd_zcdp)

    p = sub.add_parser("renyi", parents=[common, osgt], help="Renyi divergence of order alpha")
    p.add_argument("--Delta", type=float, required=True, help="per-coordinate sensitivity")
    p.add_argument("--k", type=_positive_int, default=1, help="number of coordinates (all moving by Delta)")
    p.add_argument("--alpha", type=float, nargs="+", required=True)
    p.add_argument("--oracle", action="store_true")
    p.add_argument("--worst-case", action="store_true", help="maximise over shifts in [0, Delta]")
    p.add_argument("--grid-n", type=_positive_int, default=101)
    p.set_defaults(func=cmd_renyi)

    p = sub.add_parser("convert", parents=[common, osgt], help="Renyi-to-(eps, delta) conversion vs Gaussian")
    p.add_argument("--Delta", type=float, required=True, help="per-coordinate sensitivity")
    p.add_argument("--k", type=_positive_int, default=1)
    p.add_argument("--eps", type=float, nargs="+", required=True)
    p.add_argument("--sigma-g2", type=float, default=None, help="Gaussian variance (default: OSGT variance)")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("calibrate", parents=[common], help="solve for eps or sigma2 at a delta target")
    p.add_argument("--solve", choices=("eps", "sigma2"), required=True)
    p.add_argument("--m", type=float)
    p.add_argument("--sigma2", type=float)
    p.add_argument("--Delta", type=float, required=True)
    p.add_argument("--eps", type=float)
    p.add_argument("--target-delta", type=float, required=True)
    p.add_argument("--gaussian", action="store_true")
    p.add_argument("--sigma-g2", type=float, default=None)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("reproduce", parents=[common], help="emit the data behind a comparison figure")
    p.add_argument("figure", choices=sorted(figures.BUILDERS))
    p.add_argument("--set", action="append", metavar="KEY=VALUE", help="override a preset parameter")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("selftest", help="run the invariant and oracle-equivalence checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "seed", 0) is None:
        args.seed = int(os.environ.get(SEED_ENV, 0))
    try:
        return args.func(args)
    except (DomainError, CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConsistencyError, _OracleMismatch) as exc:
        print(f"consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY


if __name__ == "__main__":
    sys.exit(main())
