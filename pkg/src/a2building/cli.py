"""Command-line surface.

Every command is a pure function of (config bytes, seed): identical inputs
produce byte-identical CSV/JSON artifacts at any worker count.  Exit
codes: 0 success/pass, 1 error, 2 refuted or witness found,
3 inconclusive.
"""

import argparse
import json
import os
import sys

from . import __version__
from .config import ConfigError, load_config
from .errors import (
    A2BuildingError,
    BudgetExhausted,
    MarginInfeasible,
    WordCollision,
)
from .fixedpoint import local_global_fixed_point
from .isometry import classify
from .pingpong import free_group_certificate, verify_certificate
from .walks import (
    combinatorial_convergence_stats,
    drift_estimate,
    empirical_boundary_measure,
    find_independent_srh_pair,
    opposite_pair_frequency,
    srh_proportion_curve,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_REFUTED = 2
EXIT_INCONCLUSIVE = 3


def _write(out_dir, name, text):
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    with open(path, "w") as fh:
        fh.write(text)
    return path


def _json_text(payload):
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _csv_text(header, rows):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


def cmd_classify(cfg, args):
    section = cfg.section("classify")
    reports = []
    rejected = 0
    for i, mat in enumerate(section["elements"]):
        g = cfg.element(mat, f"config.classify.elements[{i}]")
        if not g.is_type_preserving:
            reports.append(
                {
                    "element": g.to_json(),
                    "error": f"not type-preserving: type_shift={g.type_shift}",
                }
            )
            rejected += 1
            continue
        reports.append({"element": g.to_json(), "classification": classify(g).to_json(g)})
    payload = {"config_sha256": cfg.hash, "reports": reports}
    path = _write(args.out, "classify.json", _json_text(payload))
    print(f"classify: {len(reports) - rejected} classified, {rejected} rejected -> {path}")
    return EXIT_ERROR if rejected else EXIT_OK


def cmd_proportion(cfg, args):
    section = cfg.section("proportion", args.seed)
    curve = srh_proportion_curve(
        cfg.spec(),
        [int(n) for n in section["n_grid"]],
        section["trials"],
        section["seed"],
        workers=args.workers,
    )
    rows = curve.rows()
    csv_rows = [
        (
            r["n"],
            r["trials"],
            r["successes"],
            r["fraction"],
            repr(r["wilson_low"]),
            repr(r["wilson_high"]),
        )
        for r in rows
    ]
    csv_path = _write(
        args.out,
        "proportion.csv",
        _csv_text(
            ("n", "trials", "successes", "fraction", "wilson_low", "wilson_high"),
            csv_rows,
        ),
    )
    payload = {
        "config_sha256": cfg.hash,
        "seed": section["seed"],
        "rows": [
            {
                "n": r["n"],
                "trials": r["trials"],
                "successes": r["successes"],
                "fraction": str(r["fraction"]),
                "wilson_low": r["wilson_low"],
                "wilson_high": r["wilson_high"],
            }
            for r in rows
        ],
    }
    _write(args.out, "proportion.json", _json_text(payload))
    for r in rows:
        print(
            f"n={r['n']:<5d} srh fraction {r['successes']}/{r['trials']}"
            f" = {float(r['fraction']):.3f}"
        )
    print(f"proportion: wrote {csv_path}")
    return EXIT_OK


def cmd_drift(cfg, args):
    section = cfg.section("drift", args.seed)
    est = drift_estimate(
        cfg.spec(),
        section["n"],
        section["trials"],
        section["seed"],
        basepoint=cfg.basepoint,
        workers=args.workers,
    )
    csv_path = _write(
        args.out,
        "drift.csv",
        _csv_text(
            ("n", "trials", "mean1", "mean2", "mean3", "gap12", "gap23", "regular"),
            [
                (
                    est.n,
                    est.trials,
                    est.mean[0],
                    est.mean[1],
                    est.mean[2],
                    est.gaps[0],
                    est.gaps[1],
                    est.regular,
                )
            ],
        ),
    )
    payload = {
        "config_sha256": cfg.hash,
        "seed": est.seed,
        "n": est.n,
        "trials": est.trials,
        "mean": [str(c) for c in est.mean],
        "spread": [[str(a), str(b)] for a, b in est.spread],
        "gaps": [str(g) for g in est.gaps],
        "regular": est.regular,
    }
    _write(args.out, "drift.json", _json_text(payload))
    print(f"drift: mean {tuple(str(c) for c in est.mean)} regular={est.regular}")
    print(f"drift: wrote {csv_path}")
    return EXIT_OK


def cmd_converge(cfg, args):
    section = cfg.section("converge", args.seed)
    stats = combinatorial_convergence_stats(
        cfg.spec(),
        section["n_max"],
        section["trials"],
        section["seed"],
        basepoint=cfg.basepoint,
        workers=args.workers,
    )
    hist = stats.histogram()
    rows = sorted(
        ((("unstabilized" if k == "unstabilized" else k), v) for k, v in hist.items()),
        key=lambda kv: (isinstance(kv[0], str), kv[0]),
    )
    csv_path = _write(
        args.out, "converge.csv", _csv_text(("stabilization_time", "count"), rows)
    )
    payload = {
        "config_sha256": cfg.hash,
        "seed": stats.seed,
        "n_max": stats.n_max,
        "trials": stats.trials,
        "stabilized": stats.stabilized,
        "fraction_stabilized": str(stats.fraction_stabilized),
        "histogram": {str(k): v for k, v in rows},
    }
    _write(args.out, "converge.json", _json_text(payload))
    print(
        f"converge: {stats.stabilized}/{stats.trials} stabilized "
        f"by n={stats.n_max}"
    )
    print(f"converge: wrote {csv_path}")
    return EXIT_OK


def cmd_opposite(cfg, args):
    section = cfg.section("opposite", args.seed)
    freq = opposite_pair_frequency(
        cfg.spec(),
        section["n"],
        section["trials"],
        section["seed"],
        basepoint=cfg.basepoint,
        workers=args.workers,
    )
    lo, hi = freq.wilson
    csv_path = _write(
        args.out,
        "opposite.csv",
        _csv_text(
            ("n", "trials", "successes", "fraction", "wilson_low", "wilson_high"),
            [(freq.n, freq.trials, freq.successes, freq.fraction, repr(lo), repr(hi))],
        ),
    )
    payload = {
        "config_sha256": cfg.hash,
        "seed": freq.seed,
        "n": freq.n,
        "trials": freq.trials,
        "successes": freq.successes,
        "fraction": str(freq.fraction),
        "wilson": [lo, hi],
    }
    _write(args.out, "opposite.json", _json_text(payload))
    print(f"opposite: fraction {freq.successes}/{freq.trials}")
    print(f"opposite: wrote {csv_path}")
    return EXIT_OK


def cmd_boundary(cfg, args):
    section = cfg.section("boundary", args.seed)
    hist = empirical_boundary_measure(
        cfg.spec(),
        section["n"],
        section["trials"],
        section["seed"],
        basepoint=cfg.basepoint,
        depth=section["depth"],
        workers=args.workers,
    )
    h1 = dict(hist.counts)
    h2 = dict(hist.convolved_counts)
    keys = sorted(set(h1) | set(h2))
    csv_path = _write(
        args.out,
        "boundary.csv",
        _csv_text(
            ("cylinder", "count", "convolved_count"),
            [("/".join(k) or "<apex>", h1.get(k, 0), h2.get(k, 0)) for k in keys],
        ),
    )
    payload = {
        "config_sha256": cfg.hash,
        "seed": hist.seed,
        "n": hist.n,
        "depth": hist.depth,
        "trials": hist.trials,
        "bins": len(keys),
        "stationarity_defect": str(hist.stationarity_defect),
        "histogram": {"/".join(k) or "<apex>": h1.get(k, 0) for k in keys},
    }
    _write(args.out, "boundary.json", _json_text(payload))
    print(
        f"boundary: {len(keys)} bins, stationarity defect "
        f"{hist.stationarity_defect}"
    )
    print(f"boundary: wrote {csv_path}")
    return EXIT_OK


def cmd_pair(cfg, args):
    section = cfg.section("pair", args.seed)
    try:
        pair = find_independent_srh_pair(cfg.spec(), section["seed"], section["budget"])
    except BudgetExhausted as exc:
        payload = {"config_sha256": cfg.hash, "verdict": "inconclusive", "reason": str(exc)}
        _write(args.out, "pair.json", _json_text(payload))
        print(f"pair: {exc}")
        return EXIT_INCONCLUSIVE
    payload = {
        "config_sha256": cfg.hash,
        "verdict": "found",
        "steps_used": pair.steps_used,
        "g1": pair.g1.to_json(),
        "g2": pair.g2.to_json(),
        "flags": {
            "c1_plus": pair.flags[0].to_json(),
            "c1_minus": pair.flags[1].to_json(),
            "c2_plus": pair.flags[2].to_json(),
            "c2_minus": pair.flags[3].to_json(),
        },
    }
    path = _write(args.out, "pair.json", _json_text(payload))
    print(f"pair: found after {pair.steps_used} steps -> {path}")
    return EXIT_OK


def cmd_free_cert(cfg, args):
    section = cfg.section("free_cert")
    g1 = cfg.element(section["g1"], "config.free_cert.g1")
    g2 = cfg.element(section["g2"], "config.free_cert.g2")
    try:
        cert = free_group_certificate(
            g1,
            g2,
            power=section["power"],
            word_depth=section["word_depth"],
            margin=section["margin"],
            sampling_trials=section["sampling_trials"],
            sampling_seed=section["sampling_seed"],
        )
    except WordCollision as exc:
        payload = {
            "config_sha256": cfg.hash,
            "verdict": "refuted",
            "collision_word": exc.word,
        }
        _write(args.out, "free_cert.json", _json_text(payload))
        print(f"free-cert: refuted, word {exc.word!r} acts as identity")
        return EXIT_REFUTED
    payload = cert.to_json()
    payload["config_sha256"] = cfg.hash
    path = _write(args.out, "free_cert.json", _json_text(payload))
    print(
        f"free-cert: verdict {cert.verdict} (power {cert.power}, "
        f"margin {cert.margin}) -> {path}"
    )
    return EXIT_OK if cert.verdict == "pass" else EXIT_INCONCLUSIVE


def cmd_verify(args):
    try:
        with open(args.certificate) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"verify: cannot read certificate: {exc}")
        return EXIT_ERROR
    verdict = verify_certificate(data)
    print(f"verify: {verdict}")
    if verdict == "pass":
        return EXIT_OK
    if verdict == "refuted":
        return EXIT_REFUTED
    return EXIT_INCONCLUSIVE


def cmd_fixed_point(cfg, args):
    section = cfg.section("fixed_point")
    report = local_global_fixed_point(
        list(cfg.generators),
        radius=section["radius"],
        word_depth=section["word_depth"],
        basepoint=cfg.basepoint,
    )
    payload = report.to_json()
    payload["config_sha256"] = cfg.hash
    path = _write(args.out, "fixed_point.json", _json_text(payload))
    print(f"fixed-point: verdict {report.verdict} -> {path}")
    if report.verdict == "fixed_vertex":
        return EXIT_OK
    if report.verdict == "witness":
        return EXIT_REFUTED
    return EXIT_INCONCLUSIVE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="a2building",
        description="Exact lattice model of the rank-2 affine building for "
        "3x3 matrix groups: random-walk statistics, isometry "
        "classification, freeness certificates and fixed-point search.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    needing_config = [
        ("classify", cmd_classify, "classify configured elements"),
        ("proportion", cmd_proportion, "strongly-regular fraction along the walk"),
        ("drift", cmd_drift, "mean Cartan projection over n"),
        ("converge", cmd_converge, "germ stabilization statistics"),
        ("opposite", cmd_opposite, "opposite-germ frequency of two walks"),
        ("pair", cmd_pair, "search for an independent strongly regular pair"),
        ("free-cert", cmd_free_cert, "build a freeness certificate"),
        ("fixed-point", cmd_fixed_point, "local-to-global fixed point search"),
        ("boundary", cmd_boundary, "empirical boundary cylinder histogram"),
    ]
    for name, fn, help_text in needing_config:
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, help="path to the JSON config")
        sp.add_argument("--seed", type=int, default=None, help="override section seed")
        sp.add_argument("--workers", type=int, default=1, help="worker processes")
        sp.add_argument("--out", default=".", help="output directory")
        sp.set_defaults(fn=fn, needs_config=True)
    vp = sub.add_parser("verify", help="re-verify a serialized certificate")
    vp.add_argument("--certificate", required=True, help="certificate JSON path")
    vp.set_defaults(fn=cmd_verify, needs_config=False)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.needs_config:
            cfg = load_config(args.config)
            return args.fn(cfg, args)
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except MarginInfeasible as exc:
        print(f"margin infeasible: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except A2BuildingError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
