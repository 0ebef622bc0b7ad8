"""Command line front end.

Every subcommand emits a single machine-readable document (JSON by default,
CSV on request) carrying the resolved configuration, the seed, the package
version, and wall time, so runs can be replayed and diffed.

Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
3 resource limit refused.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time

import numpy as np

from . import __version__, calibration, moments, proxy, rmf, theta, verify
from .errors import CharmomentsError, OutOfRange, TooLarge
from .modarith import build_modulus

SCHEMA = "charmoments/1"


def _emit(doc: dict, fmt: str, stream) -> None:
    if fmt == "json":
        json.dump(doc, stream, indent=2, sort_keys=True, default=_jsonable)
        stream.write("\n")
        return
    # CSV: flatten the result rows; config travels in a comment header
    rows = doc.get("results", [])
    if isinstance(rows, dict):
        rows = [rows]
    buf = io.StringIO()
    stream.write(f"# schema={doc['schema']} version={doc['version']}\n")
    stream.write(f"# config={json.dumps(doc['config'], sort_keys=True, default=_jsonable)}\n")
    if rows:
        keys = sorted({k for r in rows for k in r})
        writer = csv.DictWriter(buf, fieldnames=keys)
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _jsonable(r.get(k, "")) for k in keys})
    stream.write(buf.getvalue())


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _document(args, config: dict, results, started: float) -> dict:
    return {
        "schema": SCHEMA,
        "version": __version__,
        "command": args.command,
        "config": _jsonable(config),
        "seed": getattr(args, "seed", None),
        "wall_time_s": round(time.monotonic() - started, 6),
        "results": _jsonable(results),
    }


# ---------------------------------------------------------------------------
# subcommands

def _cmd_char_moment(args, cal) -> tuple[dict, int]:
    mod = build_modulus(args.q)
    rows = []
    for x in args.x:
        est = moments.char_moment(mod, x, args.k,
                                  exclude_principal=not args.include_principal,
                                  divisor=args.divisor)
        row = {"q": args.q, "x": x, "k": args.k, "moment": est.value,
               "kind": est.kind}
        if args.k == 1.0 and not args.include_principal and args.divisor == "phi":
            row["closed_form"] = moments.second_moment_closed_form(args.q, x)
        rows.append(row)
    config = {"q": args.q, "x": args.x, "k": args.k, "divisor": args.divisor,
              "include_principal": args.include_principal}
    return {"config": config, "results": rows}, 0


def _cmd_rmf_mc(args, cal) -> tuple[dict, int]:
    rows = []
    for x in args.x:
        est = moments.rmf_moment_mc(x, args.k, trials=args.trials, seed=args.seed)
        row = {"x": x, "k": args.k, "trials": est.trials,
               "estimate": est.value, "stderr": est.stderr}
        if args.exact:
            row["exact"] = rmf.exact_moment_2k(x, int(args.k))
        rows.append(row)
    config = {"x": args.x, "k": args.k, "trials": args.trials,
              "exact": args.exact}
    return {"config": config, "results": rows}, 0


def _cmd_verify(args, cal) -> tuple[dict, int]:
    reports = verify.run_suite(args.suite, args.q, args.seed, cal)
    rows = [{"name": r.name, "lhs": r.lhs, "rhs": r.rhs, "relation": r.relation,
             "tolerance": r.tolerance, "passed": r.passed, "context": r.context}
            for r in reports]
    ok = all(r.passed for r in reports)
    config = {"suite": args.suite, "q": args.q,
              "calibration": cal.as_dict()}
    return {"config": config, "results": rows}, (0 if ok else 1)


def _cmd_theta(args, cal) -> tuple[dict, int]:
    results = []
    for q in args.q:
        mod = build_modulus(q)
        if args.moment is not None:
            even = theta.theta_moment(mod, args.moment, "even")
            odd = theta.theta_moment(mod, args.moment, "odd")
            results.append({"q": q, "k": args.moment,
                            "even_moment": even.value, "odd_moment": odd.value,
                            "odd_over_even": odd.value / even.value
                            if even.value > 0 else None})
        else:
            vals = theta.theta_all(mod)
            idx = args.char if args.char is not None else list(range(min(8, q - 1)))
            results.extend({"q": q, "a": a, "value": complex(vals[a].value),
                            "tail_bound": vals[a].tail_bound,
                            "truncation_point": vals[a].truncation_point}
                           for a in idx)
    config = {"q": args.q, "moment": args.moment, "char": args.char}
    return {"config": config, "results": results}, 0


def _cmd_proxy(args, cal) -> tuple[dict, int]:
    if args.profile == "paper":
        params = proxy.build_params(log_x=args.log_x, k=args.k, c0=args.c0,
                                    profile="paper")
    elif args.log_x is not None:
        # desk chain at a scale whose x itself would overflow a float
        if args.y is None or args.y <= 1:
            raise OutOfRange("desk profile with --log-x needs --y > 1")
        m = len(args.j) if args.j else 1
        params = proxy.build_params(log_x=args.log_x, k=args.k,
                                    c0=args.log_x / math.log(args.y),
                                    profile="desk", levels_m=m,
                                    j_values=args.j, q=args.q)
    else:
        params = proxy.desk_params(x=args.x, y=args.y, k=args.k,
                                   levels_m=len(args.j) if args.j else 1,
                                   j_values=args.j, q=args.q)
    levels = [{"m": i + 1, "log_y_m": lv.log_hi, "j_m": lv.j,
               "penalty_exp": params.penalty_exp(i + 1)}
              for i, lv in enumerate(params.levels)]
    results = {"k": params.k, "c0": params.c0, "log_x": params.log_x,
               "levels": levels, "shift_count": len(params.shift_values()),
               "poly_length_log": params.poly_length_log()}
    if args.weights_seed is not None:
        src = proxy.SampleSource(rmf.sample(args.weights_seed,
                                            int(params.y) + 1))
        results["weight"] = proxy.proxy_weight(params, src)
        results["exp_weight_total"] = proxy.exp_weight_total(params, src)
    config = {"profile": args.profile, "k": args.k, "c0": args.c0,
              "log_x": args.log_x, "x": args.x, "y": args.y, "j": args.j,
              "q": args.q, "weights_seed": args.weights_seed}
    return {"config": config, "results": results}, 0


def _cmd_shape(args, cal) -> tuple[dict, int]:
    mod = build_modulus(args.q)
    pts = []
    for x in args.x:
        est = moments.char_moment(mod, x, args.k)
        pts.append((x, est.value))
    fit = moments.shape_fit(pts, args.k)
    results = {"points": [{"x": x, "moment": m} for x, m in pts],
               "exponent": fit.exponent, "exponent_stderr": fit.exponent_stderr,
               "intercept": fit.intercept, "residual": fit.residual,
               "reference_exponent": (args.k - 1.0) ** 2}
    config = {"q": args.q, "k": args.k, "x": args.x}
    return {"config": config, "results": results}, 0


# ---------------------------------------------------------------------------

def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, default=1, help="deterministic base seed")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--threads", type=int, default=1,
                   help="accepted for symmetry; results never depend on it")
    p.add_argument("--calibration", default=None,
                   help="path to a JSON calibration override")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="charmoments",
                                 description="moments of character sums and "
                                             "their random-model counterparts")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("char-moment", help="2k-th moment of prefix character sums")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--divisor", choices=("phi", "nontrivial"), default="phi")
    p.add_argument("--include-principal", action="store_true")
    _add_common(p)
    p.set_defaults(fn=_cmd_char_moment)

    p = sub.add_parser("rmf-mc", help="Monte Carlo moments of random "
                                      "multiplicative sums")
    p.add_argument("--x", type=float, nargs="+", required=True)
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--trials", type=int, default=20000)
    p.add_argument("--exact", action="store_true",
                   help="also compute the exact moment when feasible")
    _add_common(p)
    p.set_defaults(fn=_cmd_rmf_mc)

    p = sub.add_parser("verify", help="run a dual-route verification suite")
    p.add_argument("--suite", default="full",
                   choices=sorted(verify.SUITES) + ["full"])
    p.add_argument("--q", type=int, default=101)
    _add_common(p)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("theta", help="theta values and moments")
    p.add_argument("--q", type=int, nargs="+", required=True)
    p.add_argument("--moment", type=float, default=None,
                   help="compute both parities' 2k-th moments instead of raw values")
    p.add_argument("--char", type=int, nargs="+", default=None,
                   help="character indices to report values for")
    _add_common(p)
    p.set_defaults(fn=_cmd_theta)

    p = sub.add_parser("proxy", help="resolve proxy-weight parameters")
    p.add_argument("--profile", choices=("paper", "desk"), default="desk")
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--c0", type=float, default=None)
    p.add_argument("--log-x", dest="log_x", type=float, default=None)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--y", type=float, default=None)
    p.add_argument("--j", type=int, nargs="+", default=None)
    p.add_argument("--q", type=int, default=None)
    p.add_argument("--weights-seed", type=int, default=None,
                   help="evaluate the weight on one sampled source")
    _add_common(p)
    p.set_defaults(fn=_cmd_proxy)

    p = sub.add_parser("shape", help="fit the growth exponent of moments "
                                     "across scales")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--k", type=float, default=2.0)
    p.add_argument("--x", type=float, nargs="+", required=True)
    _add_common(p)
    p.set_defaults(fn=_cmd_shape)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    started = time.monotonic()
    try:
        cal = calibration.load(args.calibration)
        payload, code = args.fn(args, cal)
    except TooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CharmomentsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    doc = _document(args, payload["config"], payload["results"], started)
    _emit(doc, args.format, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
