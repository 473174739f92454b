"""
Command-line interface.

    omegapy eval <name> <x>
    omegapy modulus <name> [--grid-n N] [--closed-form] [--out PATH]
    omegapy figures [--out-dir DIR]
    omegapy verify [--grid-n N] [--seed S] [--samples K] [--summary PATH]

Exit codes: 0 success, 1 a verification check failed, 2 usage,
configuration, domain or I/O error.
"""

import argparse
import csv
import logging
import os
import sys
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, TextIO

import numpy as np
from prettytable import PrettyTable

from . import __version__
from .analysis import VerificationReport, run_suite
from .errors import ConfigError, OmegaError, PreconditionError
from .modulus import find_delta_star, modulus_grid, omega_g_closed, omega_g_table
from .real_fn import GALLERY, build_f, build_g, build_h, gallery

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_ERROR = 2

FIGURE_POINTS = 2 ** 12 + 1
SUMMARY_HEADER = "name,samples,max_violation,tolerance,passed"


@dataclass(frozen=True)
class RunConfig:
    """Parameters of a command-line run."""

    grid_n: int = 20001
    delta_star_tol: float = 1e-12
    seed: int = 42
    samples: int = 100_000
    output_path: str = ""
    h_grid_n: int = 10001
    lipschitz_grid_n: int = 4001
    ac_trials: int = 200
    workers: int = 1

    def __post_init__(self):
        if self.grid_n < 1000:
            raise ConfigError(f"grid_n must be at least 1000, got {self.grid_n}")
        if self.h_grid_n < 1000:
            raise ConfigError(f"h_grid_n must be at least 1000, got {self.h_grid_n}")
        if self.lipschitz_grid_n < 2:
            raise ConfigError(f"lipschitz_grid_n must be at least 2, got {self.lipschitz_grid_n}")
        if not 0.0 < self.delta_star_tol <= 1e-6:
            raise ConfigError(f"delta_star_tol must lie in (0, 1e-6], got {self.delta_star_tol}")
        if self.samples < 1:
            raise ConfigError(f"samples must be positive, got {self.samples}")
        if self.ac_trials < 1:
            raise ConfigError(f"ac_trials must be positive, got {self.ac_trials}")
        if self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")


def _fmt(value: float) -> str:
    return f"{float(value):.15g}"


def _write_csv(path: str, header: Sequence[str], columns: Iterable[np.ndarray]) -> None:
    """Write columns as CSV to `path`, or to stdout when path is empty."""
    rows = zip(*[np.asarray(c, dtype=float).tolist() for c in columns])
    if path:
        with open(path, "w", newline="") as handle:
            _emit(handle, header, rows)
        logger.info("wrote %s", path)
    else:
        _emit(sys.stdout, header, rows)


def _emit(handle: TextIO, header: Sequence[str], rows) -> None:
    writer = csv.writer(handle, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])


def cmd_eval(name: str, x: float) -> int:
    """Print gallery function `name` at x with 15 significant digits."""
    print(_fmt(gallery(name)(x)))
    return EXIT_OK


def cmd_modulus(name: str, config: RunConfig, use_closed_form: bool = False) -> int:
    """Emit the modulus table of `name` as `delta,omega` CSV."""
    if use_closed_form:
        if name != "g":
            raise PreconditionError("a closed form is only available for g")
        table = omega_g_table(config.grid_n)
    else:
        table = modulus_grid(gallery(name), config.grid_n, workers=config.workers)
    _write_csv(config.output_path, ("delta", "omega"), (table.deltas, table.values))
    return EXIT_OK


def cmd_figures(output_dir: str, config: RunConfig) -> int:
    """Write fig1_f_g.csv, fig2_omega.csv and fig3_h.csv into output_dir."""
    os.makedirs(output_dir, exist_ok=True)
    f, g, h = build_f(), build_g(), build_h()

    xs = np.linspace(0.0, 7.0, FIGURE_POINTS)
    _write_csv(os.path.join(output_dir, "fig1_f_g.csv"), ("x", "f", "g"), (xs, f(xs), g(xs)))

    table = modulus_grid(g, config.grid_n, workers=config.workers)
    _write_csv(os.path.join(output_dir, "fig2_omega.csv"), ("delta", "omega_closed", "omega_grid"),
               (table.deltas, omega_g_closed(table.deltas), table.values))

    xs = np.linspace(0.0, 2.0, FIGURE_POINTS)
    _write_csv(os.path.join(output_dir, "fig3_h.csv"), ("x", "h"), (xs, h(xs)))
    return EXIT_OK


def format_reports(reports: List[VerificationReport]) -> PrettyTable:
    table = PrettyTable(["check", "samples", "max violation", "tolerance", "passed"])
    table.align["check"] = "l"
    for report in reports:
        table.add_row([report.check_name, report.samples, f"{report.max_violation:.3e}",
                       f"{report.tolerance:.1e}", "yes" if report.passed else "NO"])
    return table


def write_summary(path: str, reports: List[VerificationReport]) -> None:
    with open(path, "w", newline="") as handle:
        handle.write(SUMMARY_HEADER + "\n")
        for report in reports:
            handle.write(report.summary_line() + "\n")
    logger.info("wrote %s", path)


def cmd_verify(config: RunConfig, summary_path: str = "summary.csv") -> int:
    """Run every check, print a table, write the summary; 0 iff all passed."""
    delta_star = find_delta_star(config.delta_star_tol)
    print(f"delta* = {_fmt(delta_star)}")
    reports = run_suite(
        grid_n=config.grid_n, samples=config.samples, seed=config.seed,
        delta_star_tol=config.delta_star_tol, h_grid_n=config.h_grid_n,
        lipschitz_grid_n=config.lipschitz_grid_n, ac_trials=config.ac_trials,
        workers=config.workers,
    )
    print(format_reports(reports))
    if summary_path:
        write_summary(summary_path, reports)
    failed = sum(not r.passed for r in reports)
    print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="omegapy",
        description="Minimal moduli of continuity of the Cantor-type construction.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    parser.add_argument("--workers", type=int, default=1, help="threads for table building")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate a gallery function")
    p_eval.add_argument("name", choices=sorted(GALLERY))
    p_eval.add_argument("x", type=float)

    p_mod = sub.add_parser("modulus", help="modulus table as CSV")
    p_mod.add_argument("name", choices=sorted(GALLERY))
    p_mod.add_argument("--grid-n", type=int, default=RunConfig.grid_n)
    p_mod.add_argument("--closed-form", action="store_true", help="closed form (g only)")
    p_mod.add_argument("--out", default="", help="output CSV (default: stdout)")

    p_fig = sub.add_parser("figures", help="figure data as CSV files")
    p_fig.add_argument("--out-dir", default=".")
    p_fig.add_argument("--grid-n", type=int, default=RunConfig.grid_n)

    p_ver = sub.add_parser("verify", help="run the verification suite")
    p_ver.add_argument("--grid-n", type=int, default=RunConfig.grid_n)
    p_ver.add_argument("--seed", type=int, default=RunConfig.seed)
    p_ver.add_argument("--samples", type=int, default=RunConfig.samples)
    p_ver.add_argument("--summary", default="summary.csv", help="summary file ('' to skip)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "eval":
            return cmd_eval(args.name, args.x)
        if args.command == "modulus":
            config = RunConfig(grid_n=args.grid_n, output_path=args.out, workers=args.workers)
            return cmd_modulus(args.name, config, args.closed_form)
        if args.command == "figures":
            return cmd_figures(args.out_dir, RunConfig(grid_n=args.grid_n, workers=args.workers))
        config = RunConfig(grid_n=args.grid_n, seed=args.seed, samples=args.samples,
                           workers=args.workers)
        return cmd_verify(config, args.summary)
    except (OmegaError, ValueError, OSError) as exc:
        print(f"omegapy: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
