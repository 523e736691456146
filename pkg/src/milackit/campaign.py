"""Configuration-driven Monte Carlo campaigns and reporting helpers.

A campaign sweeps a grid of (stream count, antenna count, SNR) points, draws
seeded channels, synthesizes transmit and receive networks per architecture,
and checks per realization that the achieved rate matches the water-filling
capacity. Outputs are plot-ready long-format CSV files with a versioned
schema header.

Determinism: every trial's channel seed is a splitmix-style mix of
(master seed, grid index, trial index), so results are a pure function of the
configuration regardless of worker count or scheduling.
"""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Sequence

import numpy as np

from .archgraph import (
    circuit_complexity,
    complete_complexity_count,
    complete_graph,
    mask_from_graph,
    stem_complexity_count,
    tx_stem_graph,
)
from .chancap import (
    ChannelRealization,
    achievable_rate,
    capacity,
    rayleigh_channel,
    water_filling,
)
from .netcore import (
    DEFAULT_Y0,
    combiner_from_admittance,
    lossless_admittance,
    precoder_from_admittance,
)
from .stemopt import VerificationReport, synthesize_rx, synthesize_tx, verify_rx, verify_tx

__all__ = [
    "CSV_SCHEMA_HEADER",
    "ConfigError",
    "CampaignConfig",
    "TrialRecord",
    "CampaignSummary",
    "parse_config",
    "mix_seed",
    "run_campaign",
    "complexity_table",
    "VerifyOnlyResult",
    "verify_only",
]

CSV_SCHEMA_HEADER = "# milac-kit v1"

_ARCHITECTURES = ("stem", "fully")

_MASK64 = (1 << 64) - 1

logger = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Raised for malformed or infeasible campaign configurations."""


def mix_seed(*parts: int) -> int:
    """Deterministic 64-bit mix of integer parts (splitmix-style chaining)."""
    state = 0
    for part in parts:
        state = (state + (int(part) & _MASK64)) & _MASK64
        z = (state + 0x9E3779B97F4A7C15) & _MASK64
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        state = z ^ (z >> 31)
    return state


@dataclass(frozen=True)
class CampaignConfig:
    """Validated campaign grid and execution parameters.

    Attributes:
        n_streams_list: Stream counts to sweep.
        n_antennas_list: Antenna counts (transmit = receive).
        snr_db_list: Transmit-power to noise-power ratios in dB.
        trials: Channel realizations per grid point.
        seed: 64-bit master seed.
        architectures: Subset of ("stem", "fully").
        y0: Reference admittance for synthesis.
        verify_tol: Budget for every verification residual.
        rate_tol: Relative budget for |rate - capacity| per realization.
        output_dir: Directory receiving trials.csv and summary.csv.
    """

    n_streams_list: tuple[int, ...]
    n_antennas_list: tuple[int, ...]
    snr_db_list: tuple[float, ...]
    trials: int = 100
    seed: int = 0
    architectures: tuple[str, ...] = _ARCHITECTURES
    y0: float = DEFAULT_Y0
    verify_tol: float = 1e-8
    rate_tol: float = 1e-9
    output_dir: str = "campaign-out"

    def __post_init__(self) -> None:
        object.__setattr__(self, "n_streams_list", tuple(int(v) for v in self.n_streams_list))
        object.__setattr__(self, "n_antennas_list", tuple(int(v) for v in self.n_antennas_list))
        object.__setattr__(self, "snr_db_list", tuple(float(v) for v in self.snr_db_list))
        object.__setattr__(self, "architectures", tuple(self.architectures))
        if not self.n_streams_list or not self.n_antennas_list or not self.snr_db_list:
            raise ConfigError("n_streams, n_antennas, and snr_db must be nonempty")
        if any(v < 1 for v in self.n_streams_list + self.n_antennas_list):
            raise ConfigError("stream and antenna counts must be >= 1")
        bad = [
            (ns, n)
            for ns in self.n_streams_list
            for n in self.n_antennas_list
            if ns > n
        ]
        if bad:
            raise ConfigError(f"infeasible grid points (n_streams > n_antennas): {bad}")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not self.architectures or any(a not in _ARCHITECTURES for a in self.architectures):
            raise ConfigError(
                f"architectures must be a nonempty subset of {_ARCHITECTURES}, "
                f"got {self.architectures}"
            )
        if len(set(self.architectures)) != len(self.architectures):
            raise ConfigError(f"duplicate architectures: {self.architectures}")
        if self.y0 <= 0.0:
            raise ConfigError(f"y0 must be positive, got {self.y0}")
        if self.verify_tol <= 0.0 or self.rate_tol <= 0.0:
            raise ConfigError("tolerances must be positive")

    @property
    def grid(self) -> list[tuple[int, int, float]]:
        """Grid points in sweep order: streams outer, antennas, then SNR."""
        return list(product(self.n_streams_list, self.n_antennas_list, self.snr_db_list))


_CONFIG_KEYS = {
    "n_streams",
    "n_antennas",
    "snr_db",
    "trials",
    "seed",
    "architectures",
    "y0",
    "verify_tol",
    "rate_tol",
    "output_dir",
}


def parse_config(text: str) -> CampaignConfig:
    """Parse the flat key = value campaign config format.

    Grammar: one ``key = value`` pair per line; ``#`` starts a comment; blank
    lines ignored; list values are comma-separated. Keys: n_streams,
    n_antennas, snr_db (required lists), trials, seed, architectures, y0,
    verify_tol, rate_tol, output_dir (optional).
    """
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key, _, value = stripped.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        if not value:
            raise ConfigError(f"line {lineno}: empty value for {key!r}")
        raw[key] = value

    def split_list(key: str) -> list[str]:
        return [part.strip() for part in raw[key].split(",")]

    missing = {"n_streams", "n_antennas", "snr_db"} - raw.keys()
    if missing:
        raise ConfigError(f"missing required keys: {sorted(missing)}")
    try:
        kwargs: dict = {
            "n_streams_list": tuple(int(v) for v in split_list("n_streams")),
            "n_antennas_list": tuple(int(v) for v in split_list("n_antennas")),
            "snr_db_list": tuple(float(v) for v in split_list("snr_db")),
        }
        if "trials" in raw:
            kwargs["trials"] = int(raw["trials"])
        if "seed" in raw:
            kwargs["seed"] = int(raw["seed"])
        if "architectures" in raw:
            kwargs["architectures"] = tuple(split_list("architectures"))
        if "y0" in raw:
            kwargs["y0"] = float(raw["y0"])
        if "verify_tol" in raw:
            kwargs["verify_tol"] = float(raw["verify_tol"])
        if "rate_tol" in raw:
            kwargs["rate_tol"] = float(raw["rate_tol"])
        if "output_dir" in raw:
            kwargs["output_dir"] = raw["output_dir"]
    except ValueError as exc:
        raise ConfigError(f"bad value: {exc}") from exc
    return CampaignConfig(**kwargs)


@dataclass(frozen=True)
class TrialRecord:
    """One channel realization's results across architectures."""

    n_streams: int
    n_antennas: int
    snr_db: float
    trial: int
    seed: int
    rates: dict[str, float]
    capacity: float
    max_residual: float
    verify_ok: bool
    rate_ok: bool
    wall_time: float


def _design_pair(chan: ChannelRealization, arch: str, y0: float, trial_seed: int,
                 arch_index: int):
    tx = synthesize_tx(chan.right, y0, arch, seed=mix_seed(trial_seed, arch_index, 0))
    rx = synthesize_rx(chan.left, y0, arch, seed=mix_seed(trial_seed, arch_index, 1))
    if tx.attempts > 1 or rx.attempts > 1:
        logger.info(
            "phase regularization engaged (arch=%s, attempts tx=%d rx=%d)",
            arch, tx.attempts, rx.attempts,
        )
    return tx, rx


def _verify_pair(tx, rx, arch: str, y0: float):
    n_ports = tx.susceptance.n_ports
    mask = None if arch == "stem" else mask_from_graph(complete_graph(n_ports))
    rep_tx = verify_tx(tx.susceptance, tx.target, y0, mask=mask)
    rep_rx = verify_rx(rx.susceptance, rx.target, y0, mask=mask)
    return rep_tx, rep_rx


def _run_trial(config: CampaignConfig, grid_index: int, trial_index: int,
               n_streams: int, n_antennas: int, snr_db: float) -> TrialRecord:
    start = time.perf_counter()
    trial_seed = mix_seed(config.seed, grid_index, trial_index)
    chan = rayleigh_channel(n_antennas, n_antennas, trial_seed, n_streams=n_streams)
    p_tx = 10.0 ** (snr_db / 10.0)
    noise = 1.0
    powers = water_filling(chan.eigenvalues, p_tx, noise)
    cap = capacity(chan.eigenvalues, powers, p_tx, noise)
    rates: dict[str, float] = {}
    max_residual = 0.0
    structure_ok = True
    for arch_index, arch in enumerate(config.architectures):
        tx, rx = _design_pair(chan, arch, config.y0, trial_seed, arch_index)
        f = precoder_from_admittance(
            lossless_admittance(tx.susceptance), n_streams, n_antennas, config.y0
        )
        g = combiner_from_admittance(
            lossless_admittance(rx.susceptance), n_streams, n_antennas, config.y0
        )
        rates[arch] = achievable_rate(g, chan.h, f, powers, p_tx, noise)
        rep_tx, rep_rx = _verify_pair(tx, rx, arch, config.y0)
        max_residual = max(max_residual, rep_tx.max_residual(), rep_rx.max_residual())
        structure_ok = structure_ok and all(
            r.mask_ok and r.symmetry_ok for r in (rep_tx, rep_rx)
        )
    verify_ok = structure_ok and max_residual <= config.verify_tol
    rate_ok = all(
        abs(rate - cap) <= config.rate_tol * max(cap, np.finfo(float).tiny)
        for rate in rates.values()
    )
    return TrialRecord(
        n_streams=n_streams,
        n_antennas=n_antennas,
        snr_db=snr_db,
        trial=trial_index,
        seed=trial_seed,
        rates=rates,
        capacity=cap,
        max_residual=max_residual,
        verify_ok=verify_ok,
        rate_ok=rate_ok,
        wall_time=time.perf_counter() - start,
    )


def _trial_args(config: CampaignConfig):
    for grid_index, (n_streams, n_antennas, snr_db) in enumerate(config.grid):
        for trial_index in range(config.trials):
            yield (config, grid_index, trial_index, n_streams, n_antennas, snr_db)


def _run_trial_star(args) -> TrialRecord:
    return _run_trial(*args)


@dataclass(frozen=True)
class CampaignSummary:
    """Outcome of run_campaign."""

    records: tuple[TrialRecord, ...]
    trials_csv: Path
    summary_csv: Path
    max_residual: float
    ok: bool


def _fmt(value: float | None) -> str:
    return "" if value is None else repr(float(value))


def _mean_std(values: Sequence[float]) -> tuple[float, float]:
    n = len(values)
    mean = math.fsum(values) / n
    if n == 1:
        return mean, 0.0
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return mean, math.sqrt(var)


def _trials_csv_text(config: CampaignConfig, records: Sequence[TrialRecord]) -> str:
    lines = [
        CSV_SCHEMA_HEADER,
        "trial,seed,n_streams,n_tx,n_rx,snr_db,rate_stem,rate_fully,capacity",
    ]
    for r in records:
        lines.append(
            ",".join(
                [
                    str(r.trial),
                    str(r.seed),
                    str(r.n_streams),
                    str(r.n_antennas),
                    str(r.n_antennas),
                    _fmt(r.snr_db),
                    _fmt(r.rates.get("stem")),
                    _fmt(r.rates.get("fully")),
                    _fmt(r.capacity),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _summary_csv_text(config: CampaignConfig, records: Sequence[TrialRecord]) -> str:
    lines = [
        CSV_SCHEMA_HEADER,
        "n_streams,n_antennas,snr_db,trials,rate_stem_mean,rate_stem_std,"
        "rate_fully_mean,rate_fully_std,capacity_mean,capacity_std,max_residual",
    ]
    for grid_index, (n_streams, n_antennas, snr_db) in enumerate(config.grid):
        group = records[grid_index * config.trials : (grid_index + 1) * config.trials]
        cells = [str(n_streams), str(n_antennas), _fmt(snr_db), str(len(group))]
        for arch in _ARCHITECTURES:
            if arch in config.architectures:
                mean, std = _mean_std([r.rates[arch] for r in group])
                cells.extend([_fmt(mean), _fmt(std)])
            else:
                cells.extend(["", ""])
        mean, std = _mean_std([r.capacity for r in group])
        cells.extend([_fmt(mean), _fmt(std)])
        cells.append(_fmt(max(r.max_residual for r in group)))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def run_campaign(config: CampaignConfig, workers: int | None = None) -> CampaignSummary:
    """Execute the campaign grid and write trials.csv plus summary.csv.

    Args:
        config: Validated campaign configuration.
        workers: Process count; None or 1 runs serially. Output bytes are
            identical for any worker count.

    Returns:
        CampaignSummary; ``ok`` is True only if every trial passed both the
        verification-residual and the rate-identity budgets.
    """
    args = list(_trial_args(config))
    n_workers = 1 if workers is None else max(1, int(workers))
    started = time.perf_counter()
    if n_workers == 1:
        records = [_run_trial_star(a) for a in args]
    else:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            records = list(pool.map(_run_trial_star, args, chunksize=1))
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    trials_csv = out_dir / "trials.csv"
    summary_csv = out_dir / "summary.csv"
    trials_csv.write_text(_trials_csv_text(config, records))
    summary_csv.write_text(_summary_csv_text(config, records))
    max_residual = max(r.max_residual for r in records)
    ok = all(r.verify_ok and r.rate_ok for r in records)
    logger.info(
        "campaign: %d trials over %d grid points in %.2fs (workers=%d), "
        "max residual %.3e, ok=%s",
        len(records), len(config.grid), time.perf_counter() - started, n_workers,
        max_residual, ok,
    )
    return CampaignSummary(tuple(records), trials_csv, summary_csv, max_residual, ok)


def complexity_table(n_streams_list: Sequence[int], n_antennas_list: Sequence[int]) -> str:
    """Tabulate component counts of both architectures as CSV text.

    Each row carries the closed-form stem and fully-connected counts for a
    (stream count, antenna count) pair; every value is cross-checked against
    an explicit graph construction before emission. Pairs with fewer antennas
    than streams are skipped.
    """
    lines = [CSV_SCHEMA_HEADER, "n_streams,n_antennas,complexity_stem,complexity_fully"]
    for n_streams in n_streams_list:
        n_streams = int(n_streams)
        for n_antennas in n_antennas_list:
            n_antennas = int(n_antennas)
            if n_antennas < n_streams:
                continue
            stem = stem_complexity_count(n_streams, n_antennas)
            fully = complete_complexity_count(n_streams + n_antennas)
            stem_counted = circuit_complexity(tx_stem_graph(n_streams, n_antennas)).count
            fully_counted = circuit_complexity(complete_graph(n_streams + n_antennas)).count
            if stem != stem_counted or fully != fully_counted:
                raise RuntimeError(
                    f"complexity cross-check failed at ({n_streams}, {n_antennas}): "
                    f"closed form ({stem}, {fully}) vs counted "
                    f"({stem_counted}, {fully_counted})"
                )
            lines.append(f"{n_streams},{n_antennas},{stem},{fully}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VerifyOnlyResult:
    """Reports and rate check for a single channel realization."""

    tx_report: VerificationReport
    rx_report: VerificationReport
    rate: float
    capacity: float
    rate_gap_rel: float
    ok: bool


def verify_only(
    *,
    n_streams: int,
    seed: int | None = None,
    channel: np.ndarray | None = None,
    n_tx: int | None = None,
    n_rx: int | None = None,
    architecture: str = "stem",
    y0: float = DEFAULT_Y0,
    susceptance: np.ndarray | None = None,
    susceptance_side: str = "tx",
    verify_tol: float = 1e-8,
    rate_tol: float = 1e-9,
    dump_dir=None,
) -> VerifyOnlyResult:
    """Synthesize and verify both sides for one channel realization.

    Args:
        n_streams: Stream count.
        seed: Channel seed; required unless an explicit channel is given.
        channel: Complex N_R x N_T channel matrix overriding seeded drawing.
        n_tx, n_rx: Channel dimensions when drawing from the seed.
        architecture: "stem" or "fully" for both sides.
        susceptance: Optional externally supplied susceptance matrix to
            verify in place of synthesizing the side named by
            susceptance_side; checked against the raw (unrotated) target.
        verify_tol, rate_tol: Pass/fail budgets mirrored from campaigns.

    Returns:
        VerifyOnlyResult; ``ok`` requires all residuals within verify_tol,
        mask and symmetry checks passing, and the rate identity within
        rate_tol relative.
    """
    if channel is None:
        if seed is None or n_tx is None or n_rx is None:
            raise ValueError("need either a channel matrix or (seed, n_tx, n_rx)")
        chan = rayleigh_channel(n_rx, n_tx, seed, n_streams=n_streams)
    else:
        chan = ChannelRealization.from_matrix(np.asarray(channel, dtype=complex), n_streams)
    if susceptance_side not in ("tx", "rx"):
        raise ValueError(f"susceptance_side must be 'tx' or 'rx', got {susceptance_side!r}")
    k = chan.n_streams
    base_seed = mix_seed(0 if seed is None else seed, 97)
    if architecture == "fully":
        mask_tx = mask_from_graph(complete_graph(k + chan.n_tx))
        mask_rx = mask_from_graph(complete_graph(chan.n_rx + k))
    else:
        mask_tx = mask_rx = None

    if susceptance is not None and susceptance_side == "tx":
        b_tx = np.asarray(getattr(susceptance, "array", susceptance), dtype=float)
        tx_target = chan.right
    else:
        res = synthesize_tx(chan.right, y0, architecture, seed=mix_seed(base_seed, 0),
                            dump_dir=dump_dir)
        b_tx, tx_target = res.susceptance, res.target
    if susceptance is not None and susceptance_side == "rx":
        b_rx = np.asarray(getattr(susceptance, "array", susceptance), dtype=float)
        rx_target = chan.left
    else:
        res = synthesize_rx(chan.left, y0, architecture, seed=mix_seed(base_seed, 1),
                            dump_dir=dump_dir)
        b_rx, rx_target = res.susceptance, res.target

    rep_tx = verify_tx(b_tx, tx_target, y0, mask=mask_tx)
    rep_rx = verify_rx(b_rx, rx_target, y0, mask=mask_rx)
    p_tx_power = 1.0
    noise = 1.0
    powers = water_filling(chan.eigenvalues, p_tx_power, noise)
    cap = capacity(chan.eigenvalues, powers, p_tx_power, noise)
    f = precoder_from_admittance(lossless_admittance(b_tx), k, chan.n_tx, y0)
    g = combiner_from_admittance(lossless_admittance(b_rx), k, chan.n_rx, y0)
    rate = achievable_rate(g, chan.h, f, powers, p_tx_power, noise)
    gap = abs(rate - cap) / max(cap, np.finfo(float).tiny)
    ok = (
        rep_tx.max_residual() <= verify_tol
        and rep_rx.max_residual() <= verify_tol
        and rep_tx.mask_ok and rep_rx.mask_ok
        and rep_tx.symmetry_ok and rep_rx.symmetry_ok
        and gap <= rate_tol
    )
    return VerifyOnlyResult(rep_tx, rep_rx, rate, cap, gap, ok)
