"""Command-line interface.

Exit codes: 0 success, 2 violations found, 3 configuration or input error,
4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import CASE_IDS
from .exceptions import (
    ConfigError,
    ConvergenceError,
    DigestError,
    DimensionError,
    NonFiniteError,
    UINormsError,
)
from .harness import CampaignConfig, replay, run_campaign, tightness_search
from .matrix import load_matrix, matrix_to_json
from .norms import NormFamily, norm_eval
from .spectral import singular_values

EXIT_OK = 0
EXIT_VIOLATION = 2
EXIT_CONFIG = 3
EXIT_NUMERICAL = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _int_list(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _float_list(text):
    return [v.strip() for v in text.split(",") if v.strip()]


def _write_json(path, obj):
    text = json.dumps(obj, indent=2) + "\n"
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _cmd_verify(args):
    base = CampaignConfig.load(args.config).to_dict() if args.config else {}
    overrides = {
        "cases": None if args.cases is None else (
            "all" if args.cases == "all" else [c for c in args.cases.split(",") if c]),
        "trials_per_case": args.trials,
        "dims": args.dims,
        "block_counts": args.blocks,
        "seed": args.seed,
        "tol_scale": args.tol_scale,
        "schatten_ps": args.schatten_ps,
    }
    base.update({k: v for k, v in overrides.items() if v is not None})
    config = CampaignConfig.from_dict(base)
    report = run_campaign(config, jobs=args.jobs)
    _write_json(args.out, report)
    for case_id, s in report["cases"].items():
        print(f"{case_id:10s} trials={s['trials']:6d} violations={s['violations']} "
              f"errors={s['errors']} max_ratio={s['max_ratio']}", file=sys.stderr)
    print(f"total trials={report['total_trials']} violations={report['total_violations']} "
          f"errors={report['total_errors']} wall={report['wall_time_s']}s", file=sys.stderr)
    if report["total_violations"]:
        return EXIT_VIOLATION
    if report["total_errors"]:
        return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_svd(args):
    for s in singular_values(load_matrix(args.input)):
        print(f"{s:.12g}")
    return EXIT_OK


def _cmd_norm(args):
    try:
        family = NormFamily.parse(args.family)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    a = load_matrix(args.input)
    try:
        value = norm_eval(a, family)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    print(f"{value:.12g}")
    return EXIT_OK


def _cmd_tightness(args):
    if args.case not in CASE_IDS:
        raise ConfigError(f"unknown case id {args.case!r}")
    outcome, inputs = tightness_search(args.case, args.budget, args.dim, seed=args.seed,
                                       n=args.blocks, tol_scale=args.tol_scale)
    matrices = {
        name: [json.loads(matrix_to_json(m)) for m in v] if isinstance(v, list)
        else json.loads(matrix_to_json(v))
        for name, v in inputs.items()
    }
    _write_json(args.out, {"outcome": outcome.to_dict(), "inputs": matrices})
    print(f"{args.case}: best ratio {outcome.ratio:.12g}", file=sys.stderr)
    return EXIT_OK if outcome.holds else EXIT_VIOLATION


def _cmd_replay(args):
    config = CampaignConfig.load(args.config)
    outcome = replay(args.digest, config)
    _write_json(None, outcome.to_dict())
    if outcome.error is not None:
        return EXIT_NUMERICAL
    return EXIT_OK if outcome.holds else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="uinorms", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("verify", help="run a verification campaign")
    p.add_argument("--cases", help="comma-separated case ids, or 'all'")
    p.add_argument("--trials", type=int, help="trials per case and grid point")
    p.add_argument("--dims", type=_int_list)
    p.add_argument("--blocks", type=_int_list, help="block counts for n-ary cases")
    p.add_argument("--seed", help="decimal or 0x-hex 64-bit seed")
    p.add_argument("--tol-scale", type=float)
    p.add_argument("--schatten-ps", type=_float_list, help="e.g. 1,1.5,2,3,inf")
    p.add_argument("--config", help="JSON config file; flags override its fields")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.add_argument("--out", help="report path (default: stdout)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("svd", help="print descending singular values")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=_cmd_svd)

    p = sub.add_parser("norm", help="evaluate a unitarily invariant norm")
    p.add_argument("--family", required=True, help="op | schatten:<p> | kyfan:<k>")
    p.add_argument("--in", dest="input", required=True)
    p.set_defaults(func=_cmd_norm)

    p = sub.add_parser("tightness", help="hill-climb the LHS/RHS ratio of one case")
    p.add_argument("--case", required=True)
    p.add_argument("--budget", type=int, default=500)
    p.add_argument("--dim", type=int, default=2)
    p.add_argument("--blocks", type=int, default=None)
    p.add_argument("--seed", default="0")
    p.add_argument("--tol-scale", type=float, default=1e-8)
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(func=_cmd_tightness)

    p = sub.add_parser("replay", help="re-run one trial from its digest")
    p.add_argument("--digest", required=True)
    p.add_argument("--config", required=True, help="config or report JSON")
    p.set_defaults(func=_cmd_replay)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, DigestError, DimensionError, NonFiniteError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, UINormsError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
