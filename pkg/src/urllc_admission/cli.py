"""Command-line front end emitting CSV sweeps and driving the simulator.

Subcommands::

    rate        per-MCS and adaptive throughput vs SNR (bits/s)
    nmin        minimum codeword length vs SNR, with per-MCS feasibility markers
    thresholds  MCS selection thresholds (half-open SNR ranges)
    delay       worst-case delay vs SNR under adaptive MCS selection
    admission   minimum-bandwidth admission boundary vs SNR
    simulate    multi-cell drop simulation with a dominance regression check

SNR is accepted and reported in dB; conversion to linear happens at this
boundary.  Numeric cells carry 6 significant digits.  Unbounded delays
serialize as the literal token ``inf``; infeasible selections and
bandwidths as ``infeasible``; inapplicable cells stay empty.  Exit status
is 0 on success, 1 on a usage error and 2 when the simulator's dominance
check fails.

Every subcommand is a pure function of its flags and config file, so
identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import sys
from dataclasses import replace
from typing import Optional, Sequence, TextIO

from . import qos as qos_mod
from . import sim as sim_mod
from .fbl_rate import ChannelPoint, Snr, fit_for, rate_mqam, throughput
from .mcs import (
    McsCatalogue,
    SnrThresholdTable,
    build_threshold_table,
    blocklength_bound,
    default_catalogue,
    full_catalogue,
    min_blocklength,
    practical_blocklength,
    select_mcs,
    snr_threshold,
)
from .numerics import bisect_monotone
from .qos import QosConstraint, TrafficSpec

__all__ = ["main"]

USAGE_ERROR = 1
DOMINANCE_ERROR = 2

_DEFAULT_MCS = "0,5,11,20,27"


class _Parser(argparse.ArgumentParser):
    """Argument parser whose usage failures exit with status 1."""

    def error(self, message: str):  # noqa: D102 - argparse hook
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_ERROR)


def _probability(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"must lie strictly in (0, 1): {text}")
    return value


def _positive_float(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not (math.isfinite(value) and value > 0.0):
        raise argparse.ArgumentTypeError(f"must be a positive finite number: {text}")
    return value


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1: {text}")
    return value


def _mcs_list(text: str) -> list[int]:
    items = [piece.strip() for piece in text.split(",") if piece.strip()]
    if not items:
        raise argparse.ArgumentTypeError("MCS subset must not be empty")
    try:
        indices = [int(piece) for piece in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"MCS subset must be integer indices: {text!r}")
    if len(set(indices)) != len(indices):
        raise argparse.ArgumentTypeError(f"duplicate MCS index in {text!r}")
    return indices


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _snr_grid(args: argparse.Namespace) -> list[float]:
    lo, hi, step = args.snr_min_db, args.snr_max_db, args.snr_step_db
    if hi < lo:
        raise argparse.ArgumentTypeError("--snr-max-db must not be below --snr-min-db")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [lo + i * step for i in range(count)]


def _add_sweep_flags(parser: argparse.ArgumentParser, *, snr_min: float, snr_max: float) -> None:
    parser.add_argument("--snr-min-db", type=float, default=snr_min)
    parser.add_argument("--snr-max-db", type=float, default=snr_max)
    parser.add_argument("--snr-step-db", type=_positive_float, default=0.25)


def _subset_catalogue(indices: Sequence[int]) -> McsCatalogue:
    table = full_catalogue()
    try:
        return table.subset(indices)
    except KeyError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _open_out(args: argparse.Namespace):
    if args.out is None:
        return sys.stdout, False
    return open(args.out, "w", newline=""), True


def _writer(stream: TextIO) -> "csv.Writer":
    return csv.writer(stream, lineterminator="\n")


def _adaptive_rate(
    snr: Snr, table: SnrThresholdTable, k: int, epsilon: float
) -> tuple[Optional[int], Optional[float]]:
    chosen = select_mcs(snr, table)
    if chosen is None:
        return None, None
    n_hat = practical_blocklength(k, chosen)
    rate = rate_mqam(
        ChannelPoint(snr=snr, blocklength=n_hat, epsilon=epsilon),
        fit_for(chosen.modulation_order),
    )
    return chosen.index, rate


def _cmd_rate(args: argparse.Namespace) -> int:
    catalogue = _subset_catalogue(args.mcs)
    table = build_threshold_table(args.k_bits, args.epsilon, catalogue)
    grid = _snr_grid(args)
    stream, close = _open_out(args)
    try:
        out = _writer(stream)
        out.writerow(
            ["snr_db"] + [f"mcs_{entry.index}" for entry in catalogue] + ["adaptive"]
        )
        for db in grid:
            snr = Snr.from_db(db)
            row = [_fmt(db)]
            for entry in catalogue:
                n_hat = practical_blocklength(args.k_bits, entry)
                rate = rate_mqam(
                    ChannelPoint(snr=snr, blocklength=n_hat, epsilon=args.epsilon),
                    fit_for(entry.modulation_order),
                )
                row.append(_fmt(throughput(rate, args.bandwidth_hz)))
            _, adaptive = _adaptive_rate(snr, table, args.k_bits, args.epsilon)
            row.append(
                "infeasible" if adaptive is None else _fmt(throughput(adaptive, args.bandwidth_hz))
            )
            out.writerow(row)
    finally:
        if close:
            stream.close()
    return 0


def _cmd_nmin(args: argparse.Namespace) -> int:
    fit = fit_for(args.modulation_order)
    grid = _snr_grid(args)
    markers = []
    for entry in full_catalogue():
        if entry.modulation_order != args.modulation_order:
            continue
        if entry.index not in args.mcs:
            continue
        threshold = snr_threshold(args.k_bits, entry, args.epsilon)
        if threshold is not None and math.isfinite(threshold):
            markers.append((threshold, practical_blocklength(args.k_bits, entry), entry.index))
    stream, close = _open_out(args)
    try:
        out = _writer(stream)
        out.writerow(["snr_db", "n_min", "kind", "mcs_index"])
        for db in grid:
            n = min_blocklength(args.k_bits, Snr.from_db(db), args.epsilon, fit)
            out.writerow([_fmt(db), "infeasible" if n is None else str(n), "sweep", ""])
        for threshold, n_hat, index in sorted(markers):
            out.writerow([_fmt(threshold), str(n_hat), "marker", str(index)])
    finally:
        if close:
            stream.close()
    return 0


def _cmd_thresholds(args: argparse.Namespace) -> int:
    catalogue = _subset_catalogue(args.mcs)
    table = build_threshold_table(args.k_bits, args.epsilon, catalogue)
    lowers = [entry.snr_db for entry in table.entries]
    stream, close = _open_out(args)
    try:
        out = _writer(stream)
        out.writerow(
            ["mcs_index", "modulation_order", "blocklength", "snr_lower_db", "snr_upper_db"]
        )
        for position, entry in enumerate(table.entries):
            config = entry.mcs
            n_hat = practical_blocklength(args.k_bits, config)
            if not entry.feasible:
                lower = upper = "infeasible"
            else:
                lower = _fmt(entry.snr_db)
                # A feasible entry hands over to the next feasible one above it.
                following = [db for db in lowers[position + 1 :] if db is not None]
                upper = _fmt(following[0]) if following else "inf"
            out.writerow(
                [str(config.index), str(config.modulation_order), str(n_hat), lower, upper]
            )
    finally:
        if close:
            stream.close()
    return 0


def _cmd_delay(args: argparse.Namespace) -> int:
    catalogue = _subset_catalogue(args.mcs)
    table = build_threshold_table(args.k_bits, args.epsilon, catalogue)
    traffic = TrafficSpec(k=args.k_bits, tau=args.tau_s)
    grid = _snr_grid(args)

    def delay_at(db: float) -> tuple[Optional[int], float]:
        index, rate = _adaptive_rate(Snr.from_db(db), table, args.k_bits, args.epsilon)
        if rate is None or rate <= 0.0:
            return index, math.inf
        return index, qos_mod.delay_bound(traffic, throughput(rate, args.bandwidth_hz))

    stream, close = _open_out(args)
    try:
        out = _writer(stream)
        out.writerow(["snr_db", "mcs_index", "delay_s", "kind"])
        previous: Optional[tuple[float, float]] = None
        crossing: Optional[float] = None
        for db in grid:
            index, delay = delay_at(db)
            out.writerow(
                [
                    _fmt(db),
                    "" if index is None else str(index),
                    "inf" if math.isinf(delay) else _fmt(delay),
                    "sweep",
                ]
            )
            if crossing is None and previous is not None:
                prev_db, prev_delay = previous
                if prev_delay > args.d0_s >= delay:
                    crossing = bisect_monotone(
                        lambda x: delay_at(x)[1] - args.d0_s, prev_db, db, tol=1e-4
                    )
            previous = (db, delay)
        if crossing is not None:
            index, _ = delay_at(crossing)
            out.writerow(
                [
                    _fmt(crossing),
                    "" if index is None else str(index),
                    _fmt(args.d0_s),
                    "crossing",
                ]
            )
    finally:
        if close:
            stream.close()
    return 0


def _cmd_admission(args: argparse.Namespace) -> int:
    catalogue = _subset_catalogue(args.mcs)
    traffic = TrafficSpec(k=args.k_bits, tau=args.tau_s)
    constraint = QosConstraint(d0=args.d0_s, epsilon0=args.epsilon)
    points = qos_mod.admission_curve(
        traffic, constraint, [Snr.from_db(db) for db in _snr_grid(args)], catalogue
    )
    stream, close = _open_out(args)
    try:
        out = _writer(stream)
        out.writerow(["snr_db", "bandwidth_hz", "mcs_index"])
        for point in points:
            out.writerow(
                [
                    _fmt(point.snr_db),
                    _fmt(point.bandwidth_hz) if point.feasible else "infeasible",
                    "" if point.mcs_index is None else str(point.mcs_index),
                ]
            )
    finally:
        if close:
            stream.close()
    return 0


def _user_rows(users) -> list[list[str]]:
    rows = []
    for user in users:
        rows.append(
            [
                _fmt(user.snr_db),
                "" if user.selected_mcs is None else str(user.selected_mcs),
                _fmt(user.required_bandwidth_hz) if user.feasible else "infeasible",
                "true" if user.feasible else "false",
            ]
        )
    return rows


def _cmd_simulate(args: argparse.Namespace) -> int:
    if args.out is None:
        raise argparse.ArgumentTypeError("simulate requires --out DIRECTORY for its two CSVs")
    config = (
        sim_mod.ScenarioConfig.from_file(args.config)
        if args.config
        else sim_mod.ScenarioConfig()
    )
    if args.seed is not None:
        config = replace(config, rng_seed=args.seed)
    traffic = TrafficSpec(k=args.k_bits, tau=args.tau_s)
    constraint = QosConstraint(d0=args.d0_s, epsilon0=args.epsilon)
    catalogue = full_catalogue()
    curve = sim_mod.simulate(config, traffic, constraint, catalogue)

    # Regression guard: no simulated user may need less bandwidth than the
    # theory minimum over the same catalogue at its SNR.
    violations = 0
    feasible_users = [u for u in curve.users if u.feasible]
    for user in feasible_users:
        theory = qos_mod.admission_curve(
            traffic, constraint, [Snr.from_db(user.snr_db)], catalogue
        )[0].bandwidth_hz
        if user.required_bandwidth_hz < theory * (1.0 - 1e-9):
            violations += 1

    os.makedirs(args.out, exist_ok=True)
    header = ["snr_db", "mcs_index", "bandwidth_hz", "feasible"]
    with open(os.path.join(args.out, "users.csv"), "w", newline="") as handle:
        out = _writer(handle)
        out.writerow(header)
        out.writerows(_user_rows(curve.users))
    with open(os.path.join(args.out, "curve.csv"), "w", newline="") as handle:
        out = _writer(handle)
        out.writerow(header)
        out.writerows(_user_rows(sorted(feasible_users, key=lambda u: u.snr_db)))
    print(
        f"dominance: {violations} violations across {len(feasible_users)} feasible users"
        f" ({curve.coverage:.1%} coverage, {len(curve.users)} users,"
        f" {config.drops} drops, seed {config.rng_seed})"
    )
    return DOMINANCE_ERROR if violations else 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="urllc-admission", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", required=True, metavar="command")

    def common(sub: argparse.ArgumentParser, *, epsilon: float) -> None:
        sub.add_argument("--k-bits", type=_positive_int, default=256)
        sub.add_argument("--epsilon", type=_probability, default=epsilon)
        sub.add_argument("--mcs", type=_mcs_list, default=_mcs_list(_DEFAULT_MCS))
        sub.add_argument("--out", default=None)

    rate = commands.add_parser("rate", help="throughput vs SNR per MCS plus adaptive selection")
    common(rate, epsilon=1e-3)
    _add_sweep_flags(rate, snr_min=-10.0, snr_max=30.0)
    rate.add_argument("--bandwidth-hz", type=_positive_float, default=540e3)
    rate.set_defaults(handler=_cmd_rate)

    nmin = commands.add_parser("nmin", help="minimum codeword length vs SNR")
    common(nmin, epsilon=1e-5)
    _add_sweep_flags(nmin, snr_min=-10.0, snr_max=30.0)
    nmin.add_argument("--modulation-order", type=_positive_int, default=256, metavar="M")
    nmin.set_defaults(handler=_cmd_nmin)

    thresholds = commands.add_parser("thresholds", help="MCS selection thresholds")
    common(thresholds, epsilon=1e-3)
    thresholds.set_defaults(handler=_cmd_thresholds)

    delay = commands.add_parser("delay", help="worst-case delay vs SNR, adaptive MCS")
    common(delay, epsilon=1e-3)
    _add_sweep_flags(delay, snr_min=-10.0, snr_max=30.0)
    delay.add_argument("--bandwidth-hz", type=_positive_float, default=540e3)
    delay.add_argument("--tau-s", type=_positive_float, default=1e-3)
    delay.add_argument("--d0-s", type=_positive_float, default=1e-3)
    delay.set_defaults(handler=_cmd_delay)

    admission = commands.add_parser("admission", help="minimum-bandwidth admission boundary")
    common(admission, epsilon=1e-3)
    _add_sweep_flags(admission, snr_min=-10.0, snr_max=30.0)
    admission.add_argument("--tau-s", type=_positive_float, default=1e-3)
    admission.add_argument("--d0-s", type=_positive_float, default=1e-3)
    admission.set_defaults(handler=_cmd_admission)

    simulate = commands.add_parser("simulate", help="multi-cell drop simulation")
    common(simulate, epsilon=1e-3)
    simulate.add_argument("--tau-s", type=_positive_float, default=1e-3)
    simulate.add_argument("--d0-s", type=_positive_float, default=1e-3)
    simulate.add_argument("--config", default=None, help="scenario JSON path")
    simulate.add_argument("--seed", type=int, default=None)
    simulate.set_defaults(handler=_cmd_simulate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except argparse.ArgumentTypeError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ValueError, OSError) as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
