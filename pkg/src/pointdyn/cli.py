"""Command-line front end: ``pointdyn analyze|converge|verify|theorem``.

Exit codes: 0 when every result passed or was inconclusive, 1 on a
mismatch (or a harness disagreement), 2 on a usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .convergence import ConvergenceConfig, classify_convergence, sup_distance
from .errors import PointDynError, PreconditionError
from .fixtures import (
    CHECKS,
    FAIL,
    INCONCLUSIVE,
    PASS,
    REGISTRY,
    RunReport,
    check_property,
    mismatches,
    resolve_family,
    resolve_map,
    select,
    verify_fixtures,
)
from .maps import map_from_json, orbit
from .metric import format_rational, parse_rational
from .theorems import CLAUSES, HarnessScale, run_clause
from .verdict import DEFAULT_SCALE, ScaleConfig

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad command-line input; the message names the offending flag."""


def _rational(flag, text):
    try:
        return parse_rational(text)
    except PointDynError as exc:
        raise UsageError(f"{flag}: {exc}") from None


def _rational_list(flag, text):
    out = []
    for i, part in enumerate(text.split(","), 1):
        part = part.strip()
        if not part:
            raise UsageError(f"{flag}: entry {i} is empty")
        try:
            out.append(parse_rational(part))
        except PointDynError as exc:
            raise UsageError(f"{flag}: entry {i}: {exc}") from None
    return tuple(out)


def threads() -> int:
    raw = os.environ.get("POINTDYN_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"POINTDYN_THREADS: expected a positive integer, got {raw!r}") from None
    if n < 1:
        raise UsageError(f"POINTDYN_THREADS: expected a positive integer, got {n}")
    return n


def scale_from_args(args) -> ScaleConfig:
    cfg = DEFAULT_SCALE
    if getattr(args, "scale", None):
        path = Path(args.scale)
        try:
            data = json.loads(path.read_text())
        except OSError as exc:
            raise UsageError(f"--scale: cannot read {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"--scale: {path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        try:
            cfg = ScaleConfig.from_json(data)
        except (PointDynError, TypeError, ValueError) as exc:
            raise UsageError(f"--scale: {exc}") from None
    changes = {}
    if args.horizon is not None:
        changes["horizon"] = args.horizon
    if args.grid is not None:
        changes["grid"] = _rational("--grid", args.grid)
    if args.delta_sweep is not None:
        changes["delta_sweep"] = _rational_list("--delta-sweep", args.delta_sweep)
    if args.epsilon_list is not None:
        changes["eps_list"] = _rational_list("--epsilon-list", args.epsilon_list)
    if args.seed is not None:
        changes["seed"] = args.seed
    try:
        return cfg.with_(**changes)
    except PointDynError as exc:
        raise UsageError(str(exc)) from None


def load_map(args):
    if bool(args.map) == bool(args.fixture):
        raise UsageError("give exactly one of --map or --fixture")
    if args.fixture:
        return resolve_map(args.fixture), args.fixture
    text = args.map
    if text.lstrip().startswith("{"):
        src, label = text, "--map"
    else:
        try:
            src, label = Path(text).read_text(), text
        except OSError as exc:
            raise UsageError(f"--map: cannot read {text}: {exc.strerror}") from None
    try:
        data = json.loads(src)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{label}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return map_from_json(data), label
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"{label}: malformed map description ({exc})") from None


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def emit(report: RunReport, args):
    text = report.dumps()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- commands ------------------------------------------------------------------------

def cmd_analyze(args, argv) -> int:
    cfg = scale_from_args(args)
    f, label = load_map(args)
    x = _rational("--point", args.point)
    props = [p.strip() for p in args.property.split(",") if p.strip()]
    if not props:
        raise UsageError("--property: no property given")
    report = RunReport(argv, {"scale": cfg.to_json(), "map": label}, cfg.seed, [])
    for prop in props:
        report.results.append(check_property(f, x, prop, cfg).to_json())
    if args.csv:
        seg = orbit(f, x, cfg.horizon)
        write_csv(args.csv, ["k", "point", "approx"],
                  [(k, format_rational(p), float(p)) for k, p in zip(seg.indices, seg.points)])
    emit(report.finish(), args)
    return EXIT_OK


def cmd_converge(args, argv) -> int:
    cfg = scale_from_args(args)
    fam = resolve_family(args.family)
    if args.n_max is not None:
        fam.n_max = args.n_max
    ccfg = ConvergenceConfig(horizon=cfg.horizon)
    rep = classify_convergence(fam, ccfg)
    report = RunReport(argv, {"convergence": ccfg.to_json(), "family": fam.to_json()}, cfg.seed,
                       [{**rep.to_json(), "hierarchy_ok": rep.hierarchy_ok()}])
    if args.csv:
        rows = []
        for n in ccfg.probe_set(fam.n_max):
            b = sup_distance(fam(n), fam.limit, ccfg.grid)
            rows.append((n, format_rational(b.lower), format_rational(b.upper), float(b.upper)))
        write_csv(args.csv, ["n", "sup_lower", "sup_upper", "approx"], rows)
    emit(report.finish(), args)
    return EXIT_OK if rep.hierarchy_ok() else EXIT_MISMATCH


def _verify_one(name, cfg, hs):
    return verify_fixtures(select(name), cfg, hs)


def cmd_verify(args, argv) -> int:
    cfg = scale_from_args(args)
    hs = HarnessScale(horizon=min(cfg.horizon, HarnessScale().horizon))
    entries = select(args.selector)
    workers = min(threads(), len(entries))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            chunks = list(pool.map(_verify_one, [e.name for e in entries], [cfg] * len(entries),
                                   [hs] * len(entries)))
        results = [r for chunk in chunks for r in chunk]
    else:
        results = verify_fixtures(entries, cfg, hs)
    report = RunReport(argv, {"scale": cfg.to_json(), "harness": hs.to_json(), "selector": args.selector},
                       cfg.seed, list(results))
    counts = {k: sum(r["outcome"] == k for r in results) for k in (PASS, FAIL, INCONCLUSIVE)}
    report.results.append({"summary": counts})
    emit(report.finish(), args)
    if not args.quiet:
        for r in results:
            e = r["expectation"]
            at = "" if e["point"] is None else f" at {e['point']}"
            print(f"{r['outcome']:12s} {r['fixture']:6s} {e['kind']} {e['target']} {e['property']}{at}: "
                  f"expected {e['expected']}, got {r['computed']}", file=sys.stderr)
        print(f"{counts[PASS]} passed, {counts[FAIL]} failed, {counts[INCONCLUSIVE]} inconclusive",
              file=sys.stderr)
    return EXIT_MISMATCH if mismatches(results) else EXIT_OK


def cmd_theorem(args, argv) -> int:
    cfg = scale_from_args(args)
    hs = HarnessScale(args.tail_start, args.tail_end, args.harness_horizon)
    fam = resolve_family(args.family)
    x = _rational("--point", args.point)
    report = RunReport(argv, {"scale": cfg.to_json(), "harness": hs.to_json(), "family": fam.to_json()},
                       cfg.seed, [])
    code = EXIT_OK
    try:
        rec = run_clause(args.clause, fam, x, cfg, hs)
    except PreconditionError as exc:
        report.results.append({"clause": args.clause, "refused": exc.hypothesis, "message": str(exc)})
    else:
        report.results.append(rec.to_json())
        code = EXIT_OK if rec.agree else EXIT_MISMATCH
    emit(report.finish(), args)
    return code


# -- parser --------------------------------------------------------------------------

def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pointdyn", description="Pointwise dynamics at explicitly bounded scale.")
    sub = p.add_subparsers(dest="command", required=True)

    scale = argparse.ArgumentParser(add_help=False)
    g = scale.add_argument_group("scale")
    g.add_argument("--horizon", type=_positive_int, help="orbit horizon (default 200)")
    g.add_argument("--grid", help="grid mesh p/q (default 1/4096)")
    g.add_argument("--delta-sweep", help="comma-separated decreasing rationals")
    g.add_argument("--epsilon-list", help="comma-separated rationals")
    g.add_argument("--seed", type=int, help="seed for pseudo-orbit noise and perturbations")
    g.add_argument("--scale", help="JSON file with a full scale configuration")
    g.add_argument("--out", help="write the JSON report here instead of stdout")

    a = sub.add_parser("analyze", parents=[scale], help="check pointwise properties of one map")
    a.add_argument("--fixture", help="registered map, e.g. E3.1:f or E3.10:f2")
    a.add_argument("--map", help="JSON map description (file path or inline)")
    a.add_argument("--point", required=True, help="rational point p/q")
    a.add_argument("--property", required=True, help=f"comma-separated, from: {', '.join(CHECKS)}")
    a.add_argument("--csv", help="also write the orbit of the point as CSV")

    c = sub.add_parser("converge", parents=[scale], help="classify the convergence mode of a family")
    c.add_argument("--family", required=True, help="registry name, const:<map> or JSON descriptor")
    c.add_argument("--n-max", type=_positive_int)
    c.add_argument("--csv", help="also write the sup-distance series as CSV")

    v = sub.add_parser("verify", parents=[scale], help="compare fixtures with their ground truths")
    v.add_argument("selector", help=f"'all' or comma-separated: {', '.join(REGISTRY)}")
    v.add_argument("--quiet", action="store_true", help="no per-expectation lines on stderr")

    t = sub.add_parser("theorem", parents=[scale], help="run one limit-transfer harness clause")
    t.add_argument("--clause", required=True, choices=list(CLAUSES))
    t.add_argument("--family", required=True)
    t.add_argument("--point", required=True)
    t.add_argument("--tail-start", type=_positive_int, default=HarnessScale().M, help="M (default 8)")
    t.add_argument("--tail-end", type=_positive_int, default=HarnessScale().N, help="N (default 16)")
    t.add_argument("--harness-horizon", type=_positive_int, default=HarnessScale().horizon)
    return p


COMMANDS = {"analyze": cmd_analyze, "converge": cmd_converge, "verify": cmd_verify, "theorem": cmd_theorem}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, ["pointdyn", *argv])
    except (UsageError, PointDynError) as exc:
        print(f"pointdyn {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
