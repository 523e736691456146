"""Command-line interface: campaign runner, complexity tables, one-shot verify.

Subcommands:
    campaign <config>     run a Monte Carlo campaign from a config file
    complexity            emit the component-count table as CSV
    verify                synthesize + verify one channel realization

Worker count for campaigns comes from --workers or the MILAC_WORKERS
environment variable (flag wins). Exit status is 0 only if every
verification passed its budget.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .campaign import (
    ConfigError,
    complexity_table,
    parse_config,
    run_campaign,
    verify_only,
)
from .fileio import load_matrix_csv, load_real_matrix_csv
from .netcore import DEFAULT_Y0

__all__ = ["main"]

_WORKERS_ENV = "MILAC_WORKERS"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="milac",
        description="Analog linear precoding networks: synthesis, verification, campaigns.",
    )
    parser.add_argument(
        "--verbose", action="store_true", help="log progress at INFO level"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_campaign = sub.add_parser(
        "campaign", help="run a Monte Carlo campaign from a key=value config file"
    )
    p_campaign.add_argument("config", type=Path, help="path to the config file")
    p_campaign.add_argument(
        "--workers",
        type=int,
        default=None,
        help=f"process count (default: ${_WORKERS_ENV} or 1)",
    )

    p_complexity = sub.add_parser(
        "complexity", help="tabulate stem vs fully-connected component counts"
    )
    p_complexity.add_argument(
        "--streams", required=True, help="comma-separated stream counts"
    )
    p_complexity.add_argument(
        "--antennas", required=True, help="comma-separated antenna counts"
    )
    p_complexity.add_argument(
        "--out", type=Path, default=None, help="write CSV here instead of stdout"
    )

    p_verify = sub.add_parser(
        "verify", help="synthesize and verify both sides for one channel"
    )
    p_verify.add_argument("--seed", type=int, default=None, help="channel seed")
    p_verify.add_argument(
        "--dims",
        required=True,
        help="N_S,N_T,N_R for a seeded channel, or bare N_S with --channel",
    )
    p_verify.add_argument(
        "--arch", choices=("stem", "fully"), default="stem", help="architecture"
    )
    p_verify.add_argument(
        "--channel", type=Path, default=None, help="CSV file with the channel matrix"
    )
    p_verify.add_argument(
        "--susceptance",
        type=Path,
        default=None,
        help="CSV file with a susceptance matrix to verify instead of synthesizing",
    )
    p_verify.add_argument(
        "--side",
        choices=("tx", "rx"),
        default="tx",
        help="which side --susceptance applies to",
    )
    p_verify.add_argument("--y0", type=float, default=DEFAULT_Y0)
    p_verify.add_argument(
        "--dump-blocks",
        metavar="DIR",
        default=None,
        help="dump per-step synthesis blocks as CSV into DIR",
    )
    return parser


def _resolve_workers(flag_value: int | None) -> int | None:
    if flag_value is not None:
        return flag_value
    env = os.environ.get(_WORKERS_ENV)
    return int(env) if env else None


def _parse_int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part.strip()]


def _cmd_campaign(args: argparse.Namespace) -> int:
    config = parse_config(args.config.read_text())
    summary = run_campaign(config, workers=_resolve_workers(args.workers))
    print(f"trials: {len(summary.records)}")
    print(f"max verification residual: {summary.max_residual:.3e}")
    print(f"wrote {summary.trials_csv}")
    print(f"wrote {summary.summary_csv}")
    print(f"status: {'ok' if summary.ok else 'FAILED'}")
    return 0 if summary.ok else 1


def _cmd_complexity(args: argparse.Namespace) -> int:
    text = complexity_table(_parse_int_list(args.streams), _parse_int_list(args.antennas))
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
        print(f"wrote {args.out}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    dims = _parse_int_list(args.dims)
    channel = None
    if args.channel is not None:
        if len(dims) != 1:
            raise ConfigError("--dims must be a bare stream count when --channel is given")
        channel = load_matrix_csv(args.channel)
        n_streams, n_tx, n_rx = dims[0], None, None
    else:
        if len(dims) != 3:
            raise ConfigError("--dims must be N_S,N_T,N_R for a seeded channel")
        if args.seed is None:
            raise ConfigError("--seed is required without --channel")
        n_streams, n_tx, n_rx = dims
    susceptance = None
    if args.susceptance is not None:
        susceptance = load_real_matrix_csv(args.susceptance)
    result = verify_only(
        n_streams=n_streams,
        seed=args.seed,
        channel=channel,
        n_tx=n_tx,
        n_rx=n_rx,
        architecture=args.arch,
        y0=args.y0,
        susceptance=susceptance,
        susceptance_side=args.side,
        dump_dir=args.dump_blocks,
    )
    print("transmit side:")
    print(result.tx_report.to_text())
    print("receive side:")
    print(result.rx_report.to_text())
    print(f"rate: {result.rate!r}")
    print(f"capacity: {result.capacity!r}")
    print(f"relative rate gap: {result.rate_gap_rel:.3e}")
    print(f"status: {'ok' if result.ok else 'FAILED'}")
    return 0 if result.ok else 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "campaign":
            return _cmd_campaign(args)
        if args.command == "complexity":
            return _cmd_complexity(args)
        return _cmd_verify(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
