"""Command line driver.

Subcommands:

* ``run``              - execute the task list of an experiment config
* ``suite``            - run a named verification suite
* ``toric energy``     - convergence table for the energy of a metric pair
* ``segments maximal`` - evaluate the quantized maximal segment at one t
* ``segments verify``  - run verification checks and write a report

Outputs are deterministic: rationals render as "num/den" strings, decimal
columns appear only in convergence tables, files are written atomically,
and re-running a command reproduces its artifacts byte for byte.  The
exit status is 0 on success, 1 when a verification check fails (the
counterexample is serialized in the report and echoed to stderr), and 2
on usage or config errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from .config import ConfigError, load_config, metric_pair
from .field import INF, format_fraction, parse_fraction
from .graded import asymptotic_stats, check_submultiplicative, serialize_counterexample
from .norms import distance, join, spectrum, volume
from .geodesics import geodesic
from .segments import diagnostics, legendre_segment, maximal_segment
from .suites import SUITE_NAMES, detect_non_psh, run_suite
from .toric import d1_metric, energy


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_fraction(obj)
    if obj is INF:
        return "inf"
    if isinstance(obj, float) and math.isinf(obj):
        return "inf"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _write_text(path, text):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _render(data, fmt):
    """Render rows as CSV when possible, everything else as JSON."""
    is_table = (
        isinstance(data, list)
        and data
        and all(isinstance(r, dict) for r in data)
    )
    if fmt == "csv" and is_table:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=list(data[0].keys()))
        writer.writeheader()
        for row in data:
            writer.writerow({k: _scalar(v) for k, v in row.items()})
        return buf.getvalue(), "csv"
    text = json.dumps(_jsonable(data), indent=2, sort_keys=True)
    return text + "\n", "json"


def _scalar(v):
    if isinstance(v, Fraction):
        return format_fraction(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return v


def _resolve_out(out, default_name, ext):
    """Interpret --out as a file when it has a data extension, else a dir."""
    if out is None:
        return None
    root, suffix = os.path.splitext(out)
    if suffix in (".json", ".csv"):
        parent = os.path.dirname(out)
        if parent:
            os.makedirs(parent, exist_ok=True)
        return out
    os.makedirs(out, exist_ok=True)
    return os.path.join(out, f"{default_name}.{ext}")


def _emit(data, fmt, out, default_name):
    """Write (or print) one artifact; returns the path written, if any."""
    text, ext = _render(data, fmt)
    path = _resolve_out(out, default_name, ext)
    if path is None:
        sys.stdout.write(text)
        return None
    if path.endswith(".csv") and ext == "json":
        path = path[:-4] + ".json"
    _write_text(path, text)
    return path


# ---------------------------------------------------------------------------
# run: config task list


def _task_kmax(task, args, fallback=8):
    if "kmax" in task:
        return int(task["kmax"])
    if args.kmax is not None:
        return args.kmax
    return fallback


def _parse_p(raw):
    if raw == "inf":
        return math.inf
    return int(raw)


def _run_verify(task, cfg, args):
    """Returns (report dict, ok, counterexample or None)."""
    target = task["target"]
    if target == "submultiplicative":
        gn = cfg.graded[task["graded"]]
        violation = check_submultiplicative(gn)
        ok = violation is None
        ce = None if ok else serialize_counterexample(violation)
        return {"target": target, "status": "pass" if ok else "fail",
                "counterexample": ce}, ok, ce
    if target == "segment_psh":
        path = cfg.paths[task["path"]]
        witness = detect_non_psh(path.ring, path.samples)
        ok = witness is None
        return {"target": target, "status": "pass" if ok else "fail",
                "counterexample": witness}, ok, witness
    # theoremB: exactness flags of the maximal-segment diagnostics
    phi0, phi1 = (cfg.metrics[name] for name in task["metrics"])
    report = diagnostics(phi0, phi1, kmax=_task_kmax(task, args, 4))
    problems = []
    if not report["energy_affine_exact"]:
        problems.append({"check": "energy-affine",
                         "energies": report["energy_along_segment"]})
    for level in report["d1_geodesic_per_level"]:
        if not level["geodesic_exact"]:
            problems.append({"check": "d1-geodesic", "k": level["k"]})
    for label, gap in report["endpoint_recovery"].items():
        if not gap["recovered"]:
            problems.append({"check": "endpoint", "end": label,
                             "relation": gap["relation"]})
    ok = not problems
    ce = None if ok else problems
    return {"target": target, "status": "pass" if ok else "fail",
            "counterexample": ce, "diagnostics": report}, ok, ce


def _run_task(idx, task, cfg, args):
    """Returns (artifact data, ok flag, counterexample)."""
    op = task["op"]
    if op == "spectrum":
        n0, n1 = (cfg.norms[x] for x in task["norms"])
        rows = [{"i": i, "lambda": format_fraction(v)}
                for i, v in enumerate(spectrum(n0, n1))]
        return rows, True, None
    if op == "distance":
        n0, n1 = (cfg.norms[x] for x in task["norms"])
        p = _parse_p(task.get("p", 1))
        value = distance(n0, n1, p)
        return [{"p": "inf" if p == math.inf else str(p),
                 "value": format_fraction(Fraction(value))}], True, None
    if op == "volume":
        n0, n1 = (cfg.norms[x] for x in task["norms"])
        return [{"value": format_fraction(volume(n0, n1))}], True, None
    if op == "join":
        n0, n1 = (cfg.norms[x] for x in task["norms"])
        return join(n0, n1).to_json(), True, None
    if op == "geodesic":
        n0, n1 = (cfg.norms[x] for x in task["norms"])
        t = parse_fraction(str(task["t"]))
        return geodesic(n0, n1).at(t).to_json(), True, None
    if op == "asymptotic":
        g0, g1 = (cfg.graded[x] for x in task["graded"])
        p = _parse_p(task.get("p", 1))
        oracle = task.get("oracle_limit")
        oracle = parse_fraction(str(oracle)) if oracle is not None else None
        values, limit = asymptotic_stats(g0, g1, p, oracle_limit=oracle)
        rows = []
        for k, v in values:
            rows.append({
                "k": k,
                "exact_value": format_fraction(v),
                "decimal_value": f"{float(v):.12g}",
                "oracle_limit": "" if limit is None else format_fraction(limit),
            })
        return rows, True, None
    if op in ("energy", "d1"):
        phi0, phi1 = (cfg.metrics[x] for x in task["metrics"])
        fn = energy if op == "energy" else d1_metric
        res = fn(phi0, phi1, kmax=_task_kmax(task, args))
        return res.rows(), True, None
    if op == "maximal":
        phi0, phi1 = (cfg.metrics[x] for x in task["metrics"])
        t = parse_fraction(str(task["t"]))
        return maximal_segment(phi0, phi1, t, kmax=_task_kmax(task, args)).to_json(), True, None
    if op == "legendre":
        phi0, phi1 = (cfg.metrics[x] for x in task["metrics"])
        t = parse_fraction(str(task["t"]))
        return legendre_segment(phi0, phi1, t).to_json(), True, None
    if op == "diagnostics":
        phi0, phi1 = (cfg.metrics[x] for x in task["metrics"])
        return diagnostics(phi0, phi1, kmax=_task_kmax(task, args, 4)), True, None
    if op == "suite":
        rows = run_suite(task.get("name", "all"),
                         seed=int(task.get("seed", args.seed)))
        ok = all(r["status"] == "pass" for r in rows)
        failing = [r for r in rows if r["status"] != "pass"]
        return rows, ok, failing or None
    if op == "verify":
        return _run_verify(task, cfg, args)
    raise ConfigError(f"task {idx}: unhandled op {op!r}")  # pragma: no cover


def cmd_run(args):
    cfg = load_config(args.config)
    out_dir = args.out or cfg.output_path or "."
    fmt = args.format or cfg.output_format
    os.makedirs(out_dir, exist_ok=True)
    summary = []
    failed = False
    for idx, task in enumerate(cfg.tasks):
        data, ok, counterexample = _run_task(idx, task, cfg, args)
        name = f"{idx:03d}_{task['op']}"
        text, ext = _render(data, fmt)
        path = os.path.join(out_dir, f"{name}.{ext}")
        _write_text(path, text)
        entry = {"task": idx, "op": task["op"],
                 "status": "pass" if ok else "fail",
                 "artifact": os.path.basename(path)}
        if counterexample is not None:
            entry["counterexample"] = _jsonable(counterexample)
            print(f"task {idx} ({task['op']}): FAIL "
                  f"counterexample = {json.dumps(_jsonable(counterexample))}",
                  file=sys.stderr)
            failed = True
        summary.append(entry)
        print(f"task {idx} ({task['op']}): {'ok' if ok else 'FAIL'} -> {path}")
    report_path = os.path.join(out_dir, "report.json")
    _write_text(report_path,
                json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# suite / toric / segments


def _print_suite(rows):
    width = max(len(r["check"]) for r in rows)
    for r in rows:
        tag = "exact " if r["exact"] else "approx"
        print(f"[{r['status'].upper():4s}] {tag} {r['check']:{width}s}  {r['detail']}")
    n_fail = sum(1 for r in rows if r["status"] != "pass")
    print(f"{len(rows) - n_fail}/{len(rows)} checks passed")
    return n_fail


def cmd_suite(args):
    rows = run_suite(args.name, seed=args.seed)
    n_fail = _print_suite(rows)
    if args.out is not None:
        path = _emit(rows, args.format or "json", args.out, f"suite_{args.name}")
        print(f"wrote {path}")
    return 1 if n_fail else 0


def cmd_toric_energy(args):
    cfg = load_config(args.config)
    names = args.pair.split(",") if args.pair else None
    phi0, phi1 = metric_pair(cfg, names)
    res = energy(phi0, phi1, kmax=args.kmax or 8)
    path = _emit(res.rows(), args.format or cfg.output_format, args.out, "energy")
    print(f"energy limit = {format_fraction(res.limit)}"
          + (f" -> {path}" if path else ""))
    return 0


def cmd_segments_maximal(args):
    cfg = load_config(args.config)
    names = args.pair.split(",") if args.pair else None
    phi0, phi1 = metric_pair(cfg, names)
    t = parse_fraction(args.t)
    if not 0 <= t <= 1:
        raise ConfigError(f"--t must lie in [0, 1], got {args.t}")
    metric = maximal_segment(phi0, phi1, t, kmax=args.kmax or 8)
    path = _emit(metric.to_json(), "json", args.out, f"maximal_t_{t.numerator}_{t.denominator}")
    pieces = len(metric.potential.pieces)
    print(f"maximal segment at t = {args.t}: potential with {pieces} pieces"
          + (f" -> {path}" if path else ""))
    return 0


def cmd_segments_verify(args):
    if args.suite is None and args.config is None:
        raise ConfigError("segments verify needs --suite or --config")
    if args.suite is not None:
        rows = run_suite(args.suite, seed=args.seed)
        n_fail = _print_suite(rows)
        report = {"suite": args.suite, "seed": args.seed, "checks": rows}
        if args.out is not None:
            path = _emit(report, "json", args.out, f"report_{args.suite}")
            print(f"wrote {path}")
        return 1 if n_fail else 0
    cfg = load_config(args.config)
    verify_tasks = [t for t in cfg.tasks if t.get("op") == "verify"]
    if not verify_tasks:
        raise ConfigError(f"{args.config} defines no verify tasks")
    failed = False
    checks = []
    for idx, task in enumerate(verify_tasks):
        report, ok, counterexample = _run_verify(task, cfg, args)
        checks.append(report)
        status = "pass" if ok else "FAIL"
        print(f"verify {task['target']}: {status}")
        if not ok:
            print(f"counterexample = {json.dumps(_jsonable(counterexample))}",
                  file=sys.stderr)
            failed = True
    if args.out is not None:
        path = _emit({"checks": checks}, "json", args.out, "verify_report")
        print(f"wrote {path}")
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(parser, config_required=False):
    parser.add_argument("--config", required=config_required,
                        help="experiment config JSON")
    parser.add_argument("--kmax", type=int, default=None,
                        help="quantization depth override")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for the random-instance suites")
    parser.add_argument("--out", default=None,
                        help="output directory (or .json/.csv file)")
    parser.add_argument("--format", choices=("csv", "json"), default=None,
                        help="table format (default from config, else json)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="geonorm",
        description="exact geometry of non-archimedean norms, graded norms, "
                    "and toric psh segments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="execute a config's task list")
    _add_common(p_run, config_required=True)
    p_run.set_defaults(fn=cmd_run)

    p_suite = sub.add_parser("suite", help="run a verification suite")
    p_suite.add_argument("name", choices=("all",) + SUITE_NAMES)
    _add_common(p_suite)
    p_suite.set_defaults(fn=cmd_suite)

    p_toric = sub.add_parser("toric", help="toric metric computations")
    toric_sub = p_toric.add_subparsers(dest="toric_command", required=True)
    p_energy = toric_sub.add_parser("energy",
                                    help="energy convergence table for a pair")
    _add_common(p_energy, config_required=True)
    p_energy.add_argument("--pair", default=None,
                          help="comma-separated metric names (default: the "
                               "config's only two metrics)")
    p_energy.set_defaults(fn=cmd_toric_energy)

    p_seg = sub.add_parser("segments", help="maximal segments and verification")
    seg_sub = p_seg.add_subparsers(dest="segments_command", required=True)
    p_max = seg_sub.add_parser("maximal", help="evaluate the maximal segment")
    _add_common(p_max, config_required=True)
    p_max.add_argument("--t", required=True, help="parameter in [0, 1], e.g. 1/2")
    p_max.add_argument("--pair", default=None,
                       help="comma-separated metric names")
    p_max.set_defaults(fn=cmd_segments_maximal)
    p_verify = seg_sub.add_parser("verify", help="run checks, write a report")
    _add_common(p_verify)
    p_verify.add_argument("--suite", choices=("all",) + SUITE_NAMES, default=None)
    p_verify.set_defaults(fn=cmd_segments_verify)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
