"""
Command-line interface for padicskew.

Usage::

    padicskew --command defect-scan --input t.json --n-max 8 --format csv
    padicskew --command category-sweep --samples 200 --rank 3 --k-max 32 --jobs 4
    padicskew --command build-conjugator --input pair.json --eps 1/4
    padicskew --command rigidify --input s.json --eps 1/4

Exit codes: ``0`` success, ``1`` usage or parse error, ``2`` an exact check
was falsified, ``3`` resolution or rank-cap limit.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional

from padicskew.errors import (
    ConfigError,
    ExclusionViolation,
    PadicSkewError,
    ResolutionError,
)
from padicskew.experiments.base import FORMATS, ExperimentConfig
from padicskew.experiments.registry import ExperimentRegistry
from padicskew.runner import ExperimentRunner
from padicskew.utils.rational import parse_rational
from padicskew.utils.serialization import dumps

logger = logging.getLogger(__name__)


class _ArgumentParser(argparse.ArgumentParser):
    """Reports usage errors as :class:`ConfigError` so they map to exit code 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        raise ConfigError(f"Usage: {message}")


def _parse_args(argv: Optional[list[str]] = None) -> argparse.Namespace:
    parser = _ArgumentParser(
        prog="padicskew",
        description="Exact experiments on p-adic skew products of the unit square.",
    )
    parser.add_argument(
        "--command",
        required=True,
        choices=ExperimentRegistry.available(),
        help="Experiment to run.",
    )
    parser.add_argument("--input", type=Path, help="JSON input document.")
    parser.add_argument("--p", type=int, default=2, help="Base of sampled corpora.")
    parser.add_argument("--rank", type=int, help="Rank bound, tower depth or reference rank.")
    parser.add_argument("--n-max", dest="n_max", type=int, default=8)
    parser.add_argument("--k-max", dest="k_max", type=int, default=8)
    parser.add_argument("--eps", help="Target accuracy as num/den.")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=20)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", type=Path, help="Write the report here instead of stdout.")
    parser.add_argument("--format", choices=FORMATS, default="json")
    parser.add_argument(
        "--decimal",
        action="store_true",
        help="Add 20-digit decimal columns next to rationals in CSV output.",
    )
    parser.add_argument(
        "-v",
        "--verbose",
        action="count",
        default=0,
        help="-v for progress, -vv for per-step detail.",
    )
    return parser.parse_args(argv)


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    """Build the validated :class:`ExperimentConfig` for parsed arguments."""
    return ExperimentConfig(
        command=args.command,
        input=args.input,
        p=args.p,
        rank=args.rank,
        n_max=args.n_max,
        k_max=args.k_max,
        eps=parse_rational(args.eps, "eps") if args.eps is not None else None,
        seed=args.seed,
        samples=args.samples,
        jobs=args.jobs,
        out=args.out,
        format=args.format,
        decimal=args.decimal,
    )


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = _parse_args(argv)
        _configure_logging(args.verbose)
        result, text = ExperimentRunner(config_from_args(args)).execute()
    except ExclusionViolation as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(dumps({"counterexample": exc.counterexample}))
        return exc.exit_code
    except ResolutionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        if exc.required_rank is not None:
            print(f"required rank: {exc.required_rank}", file=sys.stderr)
        return exc.exit_code
    except PadicSkewError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code

    if text is not None:
        sys.stdout.write(text)
    if result.summary:
        print(result.summary, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    raise SystemExit(main())
