"""Command-line interface.

Commands:
    ingest          convert raw answers to a cached matrix in [-1, 1]
    evaluate        run the hold-out evaluation (or a baseline) and save a report
    tune-confidence grid-search the confidence weights on a saved report
    predict         predict one user's unknown preferences
    infer-norms     complete a user's profile and emit norm decisions
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .config import (
    confidence_params,
    experiment_config,
    load_config,
    parse_scale,
    similarity_params,
    threshold_policy,
)
from .errors import NormcastError, NoSimilarUsersError
from .evaluate import BaselineKind, ExperimentReport, run_baseline, run_experiment, tune_confidence
from .ingest import dump_csv, load_csv
from .norms import norm_for_value, write_norm_records
from .prediction import FallbackPolicy, fallback_value, make_average_predictor
from .separation import get_separation_measure


def _add_config_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="JSON config file")


def _cmd_ingest(args: argparse.Namespace) -> int:
    scale = parse_scale(args.scale)
    matrix = load_csv(args.input, scale=scale)
    dump_csv(matrix, args.out)
    print(f"wrote {matrix.n_entries} entries ({len(matrix.users)} users, "
          f"{len(matrix.elements)} elements) to {args.out}")
    return 0


def _cmd_evaluate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if args.scale is not None:
        cfg["scale"] = args.scale
    ground = load_csv(args.matrix)
    xcfg = experiment_config(cfg, args.hardness, args.seed)
    if args.baseline == "none":
        report = run_experiment(ground, xcfg)
    else:
        report = run_baseline(ground, xcfg, BaselineKind(args.baseline))
    report.save(args.report)
    print(f"kind: {report.kind}")
    print(f"n_predictions: {report.n_predictions} (coverage {report.coverage:.4f})")
    print(f"mean_distance: {report.mean_distance:.4f}")
    print(f"sd_distance: {report.sd_distance:.4f}")
    print(f"report written to {args.report}")
    return 0


def _cmd_tune_confidence(args: argparse.Namespace) -> int:
    report = ExperimentReport.load(args.report)
    best = tune_confidence(report, grid_step=args.step)
    print(f"best_rho: {best.rho}")
    print(f"best_mu: {best.mu}")
    print(f"best_spearman: {best.corr:.4f}")
    return 0


def _build_predictor(cfg: dict, *, with_confidence: bool):
    sep = get_separation_measure(cfg["separation"])
    conf = confidence_params(cfg) if with_confidence else None
    return make_average_predictor(sep, similarity_params(cfg), conf_params=conf)


def _cmd_predict(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    matrix = load_csv(args.matrix)
    predictor = _build_predictor(cfg, with_confidence=True)
    elements = [args.element] if args.element else [
        x for x in matrix.elements if matrix.get(args.user, x) is None
    ]
    print("element_id,predicted,confidence")
    for x in elements:
        try:
            pred = predictor(matrix, args.user, x)
        except NoSimilarUsersError:
            print(f"{x},,")
            continue
        print(f"{x},{pred.value!r},{pred.confidence!r}")
    return 0


def _cmd_infer_norms(args: argparse.Namespace) -> int:
    cfg = load_config(args.config)
    if args.eps_prh is not None:
        cfg["eps_prh"] = args.eps_prh
    if args.eps_per is not None:
        cfg["eps_per"] = args.eps_per
    if args.context_table is not None:
        cfg["context_table"] = args.context_table
    policy = threshold_policy(cfg if args.policy is None else {**cfg, "policy": args.policy})
    context_vars = dict(kv.split("=", 1) for kv in args.context)
    matrix = load_csv(args.matrix)
    predictor = _build_predictor(cfg, with_confidence=True)
    fallback = FallbackPolicy(cfg["fallback"])

    decisions = []
    skipped = 0
    row = matrix.row(args.user)
    for x in matrix.elements:
        value: float | None = row.get(x)
        if value is not None:
            confidence: float | None = 1.0  # the preference is known, not predicted
        else:
            try:
                pred = predictor(matrix, args.user, x)
                value, confidence = pred.value, pred.confidence
            except NoSimilarUsersError:
                value, confidence = fallback_value(matrix, x, fallback), None
        if value is None or (policy.requires_confidence and confidence is None):
            skipped += 1
            continue
        decisions.append(norm_for_value(x, value, confidence, policy, context_vars))

    if args.out:
        with open(args.out, "w", encoding="utf-8") as handle:
            write_norm_records(handle, args.user, decisions)
        print(f"{len(decisions)} decisions written to {args.out}")
    else:
        write_norm_records(sys.stdout, args.user, decisions)
    if skipped:
        print(f"note: {skipped} elements left unregulated (no usable prediction)",
              file=sys.stderr)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="normcast", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=f"normcast {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="convert raw answers to a [-1, 1] matrix cache")
    p.add_argument("--input", required=True, help="CSV with user_id,element_id,answer")
    p.add_argument("--scale", default=None, help="input scale as lo:hi, e.g. 1:5")
    p.add_argument("--out", required=True, help="output matrix CSV")
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("evaluate", help="run the hold-out evaluation")
    p.add_argument("--matrix", required=True, help="matrix CSV with values in [-1, 1]")
    p.add_argument("--hardness", default="regular", choices=["regular", "medium", "hard"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--baseline", default="none", choices=["none", "random", "element_mean"])
    p.add_argument("--scale", default=None,
                   help="answer scale for reported distances, e.g. 1:5 (default: native)")
    p.add_argument("--report", required=True, help="output report file")
    _add_config_arg(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("tune-confidence", help="grid-search confidence weights on a report")
    p.add_argument("--report", required=True, help="report file from `normcast evaluate`")
    p.add_argument("--step", type=float, default=0.01)
    p.set_defaults(func=_cmd_tune_confidence)

    p = sub.add_parser("predict", help="predict a user's unknown preferences")
    p.add_argument("--matrix", required=True)
    p.add_argument("--user", required=True)
    p.add_argument("--element", default=None, help="single element (default: all unknowns)")
    _add_config_arg(p)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("infer-norms", help="complete a profile and emit norm decisions")
    p.add_argument("--matrix", required=True)
    p.add_argument("--user", required=True)
    p.add_argument("--policy", default=None, choices=["hard", "confident", "contextual"])
    p.add_argument("--eps-prh", type=float, default=None, dest="eps_prh")
    p.add_argument("--eps-per", type=float, default=None, dest="eps_per")
    p.add_argument("--context-table", default=None, help="JSON thresholds per context value")
    p.add_argument("--context", action="append", default=[], metavar="VAR=VALUE",
                   help="context variable (repeatable)")
    p.add_argument("--out", default=None, help="output CSV (default: stdout)")
    _add_config_arg(p)
    p.set_defaults(func=_cmd_infer_norms)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NormcastError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
