"""Command-line front end.

Subcommands:

  mi            mutual information for an interval configuration
  converge      resolution study with Richardson extrapolation
  tau-audit     randomized operator-inequality battery (tau engine)
  fan-audit     Fan inequality and half-power bound battery
  embed         exact rational lattice embedding from a Gram matrix
  index-analog  entropy/index gap on random states

Exit codes: 0 success, 1 audited inequality violated, 2 usage error,
3 numerical failure (diagnostic JSON on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys

from . import audits, fermion, lattice
from .report import canonical_json, csv_lines

USAGE_ERROR = 2
NUMERICAL_ERROR = 3


def _write(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _load_json_arg(inline: str | None, path: str | None, flag: str):
    if inline is not None:
        return json.loads(inline)
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    raise SystemExit(f"error: {flag} required")


def _interval_config(args) -> fermion.IntervalConfig:
    if args.input:
        payload = _load_json_arg(None, args.input, "--input")
        intervals = payload["intervals"]
        resolution = payload.get("resolution", args.resolution)
        components = payload.get("components", args.components)
    else:
        intervals = _load_json_arg(args.intervals, None, "--intervals")
        resolution = args.resolution
        components = args.components
    return fermion.IntervalConfig(intervals=tuple(tuple(iv) for iv in intervals),
                                  resolution=resolution, components=components)


def cmd_mi(args) -> int:
    cfg = _interval_config(args)
    fractions = [float(f) for f in args.fractions.split(",")] if args.fractions else [0.25, 0.5, 0.75, 1.0]
    series = fermion.mi_convergence(cfg, fractions)
    if args.format == "csv":
        _write(csv_lines(("window", "value"), zip(series.window_sizes, series.values)), args.output)
    else:
        payload = {
            "mi_nats": series.values[-1],
            "series": [{"window": w, "value": v} for w, v in zip(series.window_sizes, series.values)],
            "extrapolated": series.extrapolated,
            "extrapolation_error": series.extrapolation_error,
        }
        _write(canonical_json(payload), args.output)
    return 0


def cmd_converge(args) -> int:
    cfg = _interval_config(args)
    resolutions = [float(r) for r in args.resolutions.split(",")]
    study = fermion.resolution_study(cfg, resolutions)
    if args.format == "csv":
        _write(csv_lines(("resolution", "value"), zip(study["resolutions"], study["values"])), args.output)
    else:
        _write(canonical_json(study), args.output)
    return 0


def _emit_audits(reports, args) -> int:
    if args.format == "csv":
        rows = []
        for rep in reports:
            rows.append((rep.suite, rep.trials, rep.violations, rep.worst_margin))
        _write(csv_lines(("suite", "trials", "violations", "worst_margin"), rows), args.output)
    else:
        _write(canonical_json([rep.to_payload() for rep in reports]), args.output)
    return 1 if any(rep.violations for rep in reports) else 0


def cmd_tau_audit(args) -> int:
    return _emit_audits(audits.tau_audit(args.trials, args.seed), args)


def cmd_fan_audit(args) -> int:
    return _emit_audits(audits.spectral_audit(args.trials, args.seed), args)


def cmd_embed(args) -> int:
    gram_payload = _load_json_arg(args.gram, args.input, "--gram")
    if isinstance(gram_payload, dict):
        gram_payload = gram_payload["gram"]
    g = lattice.GramMatrix(tuple(tuple(row) for row in gram_payload))
    emb = lattice.embed_rational(g)
    k, int_rows = lattice.integralize(emb)
    payload = {
        "rank": emb.n,
        "target_dimension": emb.r,
        "k": k,
        "even": lattice.is_even(g),
        "segment_lengths": list(emb.segment_lengths),
        "vectors": [[str(v) for v in row] for row in emb.rows],
        "scaled_integer_vectors": [list(row) for row in int_rows],
        "residuals": [str(rv) for rv in emb.residuals],
    }
    if emb.r <= args.dense_limit:
        payload["dense_vectors"] = [[f"{v.numerator}/{v.denominator}" for v in vec]
                                    for vec in emb.dense_vectors(max_r=args.dense_limit)]
    _write(canonical_json(payload), args.output)
    return 0


def cmd_index_analog(args) -> int:
    reports = [audits.index_audit(args.trials, args.seed, k=args.k),
               audits.pimsner_popa_audit(args.trials, args.seed + 1, k=args.k)]
    return _emit_audits(reports, args)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="araki-mi",
                                     description="free-fermion mutual information and operator inequality toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--output", "-o", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("mi", help="mutual information for two disjoint intervals")
    p.add_argument("--intervals", help='inline JSON, e.g. "[[0,1],[2,3]]"')
    p.add_argument("--input", help="JSON config file")
    p.add_argument("--resolution", type=float, default=64)
    p.add_argument("--components", type=int, default=1)
    p.add_argument("--fractions", help="comma-separated window fractions ending at 1")
    common(p)
    p.set_defaults(func=cmd_mi)

    p = sub.add_parser("converge", help="resolution study with Richardson extrapolation")
    p.add_argument("--intervals")
    p.add_argument("--input")
    p.add_argument("--resolution", type=float, default=64)
    p.add_argument("--components", type=int, default=1)
    p.add_argument("--resolutions", default="32,64,128,256")
    common(p)
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("tau-audit", help="pinching/resolvent inequality battery")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_tau_audit)

    p = sub.add_parser("fan-audit", help="singular-value inequality battery")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_fan_audit)

    p = sub.add_parser("embed", help="exact rational embedding of an integral lattice")
    p.add_argument("--gram", help='inline JSON matrix, e.g. "[[2,-1],[-1,2]]"')
    p.add_argument("--input", help='JSON file {"gram": [[...], ...]}')
    p.add_argument("--dense-limit", type=int, default=512)
    common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("index-analog", help="entropy/index gap on random states")
    p.add_argument("--k", type=int, default=2)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_index_analog)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, KeyError, json.JSONDecodeError, FileNotFoundError, SystemExit) as exc:
        sys.stderr.write(canonical_json({"error": "usage", "detail": str(exc)}) + "\n")
        return USAGE_ERROR
    except ArithmeticError as exc:
        sys.stderr.write(canonical_json({"error": "numerical", "detail": str(exc)}) + "\n")
        return NUMERICAL_ERROR
    except RuntimeError as exc:
        sys.stderr.write(canonical_json({"error": "numerical", "detail": str(exc)}) + "\n")
        return NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
