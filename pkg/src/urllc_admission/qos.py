"""Worst-case delay and minimum-bandwidth admission for periodic traffic.

A source emitting k bits every tau seconds admits the token-bucket arrival
envelope alpha(t) = (k/tau) t + k; a link delivering R bits/s provides the
rate service envelope beta(t) = R t.  The maximum horizontal distance
between the two curves bounds the queueing delay of every bit:

    delay <= k / R    provided    k / tau <= R,

and is unbounded when the arrival rate exceeds the service rate.  Only
these two curve shapes are modelled; general piecewise-linear min-plus
algebra is out of scope.

Inverting the bound against a delay budget d0 gives the smallest bandwidth
whose service rate R = W * R_ch meets it, W = k / (d0 * R_ch), with R_ch
the per-symbol rate of the chosen MCS at the operating SNR.  The stability
condition contributes a second floor k / (tau * R_ch); the admission value
is the larger of the two, so the bound it promises is never vacuous.

Selection behaviour worth knowing: sweeping the minimum bandwidth over a
catalogue picks, at each SNR, the cheapest feasible entry.  Within one
modulation order the lowest-rate entry has the longest codeword, hence the
smallest dispersion penalty, hence the highest per-symbol rate -- it both
becomes feasible first and stays cheapest.  Higher-rate same-order entries
(e.g. 256-QAM 0.93 next to 256-QAM 0.67) are therefore never the argmin;
they matter only under threshold-based selection, which always moves to
the highest feasible efficiency.  The admission curve consequently shows
jumps only where a new modulation order becomes both feasible and cheaper,
plus continuous crossovers where a higher order overtakes a lower one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .fbl_rate import ChannelPoint, Snr, fit_for, rate_mqam
from .mcs import McsCatalogue, McsConfig, practical_blocklength

__all__ = [
    "TrafficSpec",
    "ArrivalCurve",
    "ServiceCurve",
    "QosConstraint",
    "AdmissionPoint",
    "horizontal_deviation",
    "delay_bound",
    "min_bandwidth",
    "admission_curve",
]


@dataclass(frozen=True)
class TrafficSpec:
    """Periodic source: k information bits every tau seconds."""

    k: int
    tau: float

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"message length must be at least one bit, got {self.k!r}")
        if not (math.isfinite(self.tau) and self.tau > 0.0):
            raise ValueError(f"period must be a positive duration, got {self.tau!r}")

    @property
    def arrival_curve(self) -> "ArrivalCurve":
        return ArrivalCurve(rate=self.k / self.tau, burst=float(self.k))


@dataclass(frozen=True)
class ArrivalCurve:
    """Token-bucket envelope on cumulative arrivals: rate * t + burst."""

    rate: float
    burst: float

    def __post_init__(self) -> None:
        if self.rate < 0.0 or self.burst < 0.0:
            raise ValueError("arrival rate and burst must be non-negative")


@dataclass(frozen=True)
class ServiceCurve:
    """Rate envelope on cumulative service: rate * t."""

    rate: float

    def __post_init__(self) -> None:
        if self.rate < 0.0:
            raise ValueError("service rate must be non-negative")


@dataclass(frozen=True)
class QosConstraint:
    """Delay budget d0 (seconds) and target error probability."""

    d0: float
    epsilon0: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.d0) and self.d0 > 0.0):
            raise ValueError(f"delay budget must be positive, got {self.d0!r}")
        if not (0.0 < self.epsilon0 < 1.0):
            raise ValueError(f"error probability must lie in (0, 1), got {self.epsilon0!r}")


def horizontal_deviation(alpha: ArrivalCurve, beta: ServiceCurve) -> float:
    """Maximum horizontal distance between the two envelopes, in seconds.

    For a token bucket against a rate server this is burst / service_rate
    when the arrival rate does not exceed the service rate, and math.inf
    otherwise (the backlog then grows without bound).
    """
    if beta.rate <= 0.0 or alpha.rate > beta.rate:
        return math.inf
    return alpha.burst / beta.rate


def delay_bound(traffic: TrafficSpec, r2: float) -> float:
    """Worst-case delay of the periodic source over a link of r2 bits/s.

    Equals :func:`horizontal_deviation` of the derived curve pair:
    k / r2 under the stability condition k/tau <= r2, else math.inf.
    """
    if r2 < 0.0:
        raise ValueError(f"service rate must be non-negative, got {r2!r}")
    return horizontal_deviation(traffic.arrival_curve, ServiceCurve(rate=r2))


def min_bandwidth(
    traffic: TrafficSpec,
    qos: QosConstraint,
    snr: Snr,
    mcs: McsConfig,
) -> float:
    """Smallest bandwidth (Hz) meeting the delay budget with this MCS.

    math.inf when the entry is infeasible at this SNR, i.e. its codeword
    cannot carry the payload at the target error probability (equivalently,
    the SNR sits below the entry's selection threshold).  Otherwise the
    larger of the delay demand k / (d0 * R_ch) and the stability floor
    k / (tau * R_ch).
    """
    n_hat = practical_blocklength(traffic.k, mcs)
    point = ChannelPoint(snr=snr, blocklength=n_hat, epsilon=qos.epsilon0)
    rate = rate_mqam(point, fit_for(mcs.modulation_order))
    if n_hat * rate < traffic.k:
        return math.inf
    return max(traffic.k / (qos.d0 * rate), traffic.k / (traffic.tau * rate))


@dataclass(frozen=True)
class AdmissionPoint:
    """One point of the admission boundary: cheapest feasible bandwidth."""

    snr_db: float
    bandwidth_hz: float
    mcs_index: Optional[int]

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.bandwidth_hz)


def admission_curve(
    traffic: TrafficSpec,
    qos: QosConstraint,
    snr_grid: Sequence[Snr],
    catalogue: McsCatalogue,
) -> list[AdmissionPoint]:
    """Minimum bandwidth over all feasible catalogue entries, per grid SNR.

    Points where no entry is feasible carry bandwidth math.inf and no MCS
    index.  The grid must be non-empty and ascending in SNR; the resulting
    bandwidths are then non-increasing, since raising the SNR only grows
    the feasible set and improves every per-entry rate.
    """
    if not snr_grid:
        raise ValueError("SNR grid must be non-empty")
    dbs = [snr.db for snr in snr_grid]
    if any(b <= a for a, b in zip(dbs, dbs[1:])):
        raise ValueError("SNR grid must be strictly ascending")
    points = []
    for snr, db in zip(snr_grid, dbs):
        best_bw = math.inf
        best_index: Optional[int] = None
        for entry in catalogue:
            bw = min_bandwidth(traffic, qos, snr, entry)
            if bw < best_bw:
                best_bw = bw
                best_index = entry.index
        points.append(AdmissionPoint(snr_db=db, bandwidth_hz=best_bw, mcs_index=best_index))
    return points
