"""Command-line front door.

Exit codes: 0 success, 2 configuration error, 3 resource cap exceeded,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import config_from_dict
from .errors import ConfigError, IntegrityError, ResourceCapError
from .experiments import run_experiment
from .reporting import fmt17


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--out-dir", default=".", help="directory for report artifacts")
    parser.add_argument(
        "--format", choices=("json", "csv"), default="json", help="stdout summary format"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hspsim",
        description="Exact hidden-subgroup experiments on small finite groups",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("irreps", help="emit the irrep/character table of a group")
    p.add_argument("group")
    _add_common(p)

    p = sub.add_parser("fourier", help="build the Fourier operator and report residuals")
    p.add_argument("group")
    p.add_argument("--check", action="store_true", help="print the residual report")
    p.add_argument("--ordering", default="dim_then_label")
    _add_common(p)

    p = sub.add_parser("simulate", help="run the exact pipeline for an instance file")
    p.add_argument("--instance", required=True, help="instance JSON path")
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--second-transform", choices=("forward", "inverse"), default="forward")
    p.add_argument(
        "--measure-granularity",
        choices=("full_triple", "irrep_label_only"),
        default="full_triple",
    )
    _add_common(p)

    p = sub.add_parser("simon", help="bit-vector hidden subgroup end to end")
    p.add_argument("--n", type=int, required=True, help="register width")
    p.add_argument(
        "--hidden",
        required=True,
        help="comma-separated generator bitstrings, e.g. 101,011",
    )
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--oracle-seed", type=int, default=None)
    _add_common(p)

    p = sub.add_parser("shor", help="period finding over the finite image Z_Q")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--transversal", choices=("shor", "offset"), default="shor")
    p.add_argument("--bound", type=int, default=1)
    p.add_argument("--trials", type=int, default=0)
    p.add_argument("--allow-any-q", action="store_true")
    _add_common(p)

    p = sub.add_parser("sweep-transversal", help="peak-mass sweep over offset seeds")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--a", type=int, required=True)
    p.add_argument("--Q", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p.add_argument("--seeds", type=int, required=True)
    p.add_argument("--allow-any-q", action="store_true")
    _add_common(p)

    p = sub.add_parser("recover", help="rank subgroup candidates against a distribution CSV")
    p.add_argument("--dist", required=True, help="distribution CSV path")
    p.add_argument("--group", required=True)
    p.add_argument("--oracle-seed", type=int, default=None)
    _add_common(p)

    return parser


def _config_dict(args: argparse.Namespace) -> dict:
    if args.command == "irreps":
        return {"experiment": "irreps", "group": args.group, "seed": args.seed}
    if args.command == "fourier":
        return {
            "experiment": "fourier-check",
            "group": args.group,
            "ordering": args.ordering,
            "seed": args.seed,
        }
    if args.command == "simulate":
        try:
            instance = json.loads(Path(args.instance).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ConfigError(f"cannot read instance file: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"instance file is not valid JSON: {exc}") from exc
        if not isinstance(instance, dict):
            raise ConfigError("instance file must hold a JSON object")
        unknown = sorted(set(instance) - {"group", "hidden_generators", "seed"})
        if unknown:
            raise ConfigError(f"unknown field {unknown[0]!r} in instance file")
        return {
            "experiment": "simulate",
            "group": instance.get("group"),
            "hidden_generators": instance.get("hidden_generators", []),
            "oracle_seed": instance.get("seed", 0),
            "trials": args.trials,
            "second_transform": args.second_transform,
            "measure_granularity": args.measure_granularity,
            "seed": args.seed,
        }
    if args.command == "simon":
        gens = []
        for token in args.hidden.split(","):
            token = token.strip()
            if token and not set(token) <= {"0", "1"}:
                raise ConfigError(f"field 'hidden': {token!r} is not a bitstring")
            if token and len(token) != args.n:
                raise ConfigError(
                    f"field 'hidden': {token!r} does not have length n = {args.n}"
                )
            if token:
                gens.append([int(b) for b in token])
        d = {
            "experiment": "simon",
            "group": f"Z2^{args.n}",
            "hidden_generators": gens,
            "trials": args.trials,
            "seed": args.seed,
        }
        if args.oracle_seed is not None:
            d["oracle_seed"] = args.oracle_seed
        return d
    if args.command == "shor":
        d = {
            "experiment": "shor",
            "N": args.N,
            "a": args.a,
            "Q": args.Q,
            "transversal": {"kind": args.transversal, "bound": args.bound},
            "trials": args.trials,
            "seed": args.seed,
        }
        if args.allow_any_q:
            d["allow_any_q"] = True
        return d
    if args.command == "sweep-transversal":
        d = {
            "experiment": "sweep-transversal",
            "N": args.N,
            "a": args.a,
            "Q": args.Q,
            "bound": args.bound,
            "seeds": args.seeds,
            "seed": args.seed,
        }
        if args.allow_any_q:
            d["allow_any_q"] = True
        return d
    if args.command == "recover":
        d = {
            "experiment": "recover",
            "dist": args.dist,
            "group": args.group,
            "seed": args.seed,
        }
        if args.oracle_seed is not None:
            d["oracle_seed"] = args.oracle_seed
        return d
    raise ConfigError(f"unknown command {args.command!r}")


def _print_summary(report: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2))
        return
    if "distribution" in report:
        print("outcome_label,probability")
        for label, p in report["distribution"]:
            print(f"{label},{fmt17(p)}")
    elif "candidates" in report:
        print("rank,elements,total_variation")
        for i, cand in enumerate(report["candidates"]):
            print(f"{i},{'|'.join(cand['elements'])},{fmt17(cand['total_variation'])}")
    else:
        for key, value in sorted(report.items()):
            if isinstance(value, float):
                print(f"{key},{fmt17(value)}")
            elif isinstance(value, (int, str)):
                print(f"{key},{value}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_dict(_config_dict(args))
        report = run_experiment(cfg, args.out_dir)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapError as exc:
        print(f"resource cap exceeded: {exc}", file=sys.stderr)
        return 3
    except IntegrityError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return 4
    _print_summary(report, args.format)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
