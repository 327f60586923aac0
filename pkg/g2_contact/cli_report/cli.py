from __future__ import annotations
import argparse
import logging
import sys
from typing import List, Optional

from ..enum import DifferentiationMode, OutputFormat, Suite
from ..fields import DegenerateFieldError
from .config import RunConfig
from .report import emit, run

logger = logging.getLogger(__name__)

EXIT_SUCCESS = 0
EXIT_ASSERTION_FAILURE = 1
EXIT_USAGE_ERROR = 2
EXIT_DEGENERATE_FIELD = 3
EXIT_IO_ERROR = 4


def _comma_list(value: str) -> List[str]:
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="g2-contact",
        description="Build, classify and test almost contact metric structures on the flat G2 torus."
    )
    parser.add_argument("--config", required=True, help="Field-spec file (JSON or TOML) or bundled spec name.")
    parser.add_argument(
        "--suite",
        type=_comma_list,
        default=None,
        help=f"Comma-separated suites among {', '.join(Suite)}. Default: algebra,classify,theorems."
    )
    parser.add_argument("--out", default=".", help="Output directory.")
    parser.add_argument(
        "--format",
        type=_comma_list,
        default=None,
        help=f"Comma-separated output formats among {', '.join(OutputFormat)}. Default: json."
    )
    parser.add_argument("--seed", type=int, default=None, help="Seed of the subsampling and random families.")
    parser.add_argument("--resolution", type=int, default=None, help="Grid points N per axis, N >= 4.")
    parser.add_argument("--subsamples", type=int, default=None, help="Number of sampled grid points.")
    parser.add_argument("--tol", type=float, default=None, help="Relative classification tolerance.")
    parser.add_argument(
        "--mode",
        choices=[str(mode) for mode in DifferentiationMode],
        default=str(DifferentiationMode.EXACT),
        help="Differentiation mode."
    )
    parser.add_argument(
        "--log-level",
        default="WARNING",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Logging level."
    )

    return parser.parse_args(argv)


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command-line entry point.

    Returns
    -------
    status : int
        0 when every assertion passes, 1 on an assertion failure, 2 on a usage or configuration error, 3 on a
        degenerate field and 4 on an I/O error.
    """
    args = parse_args(argv)
    logging.basicConfig(level=args.log_level, format="%(levelname)s %(name)s: %(message)s")

    try:
        config = RunConfig.from_file(
            args.config,
            suites=args.suite,
            resolution=args.resolution,
            subsamples=args.subsamples,
            seed=args.seed,
            tol=args.tol,
            formats=args.format,
            out=args.out,
            mode=args.mode
        )
    except (OSError, ValueError) as error:
        logger.error(f"Invalid configuration: {error}")
        return EXIT_USAGE_ERROR

    try:
        report = run(config)
    except DegenerateFieldError as error:
        logger.error(str(error))
        return EXIT_DEGENERATE_FIELD

    try:
        paths = emit(report, config.formats, config.out)
    except OSError as error:
        logger.error(f"Could not write the report: {error}")
        return EXIT_IO_ERROR

    for path in paths:
        print(path)

    if not report.passed:
        failure = report.first_failure
        logger.error(f"Assertion failed: {failure.name} (residual {failure.residual:.3e} > {failure.tolerance:g})")
        return EXIT_ASSERTION_FAILURE

    return EXIT_SUCCESS


if __name__ == "__main__":
    sys.exit(main())
