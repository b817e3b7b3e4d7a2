"""Desk-scale multi-cell drop simulator for admission-bandwidth validation.

Sites sit on a hexagonal lattice (centre site plus full rings) whose cells
are regular hexagons of the configured circumradius; the inter-site
distance is sqrt(3) times that radius.  Each drop deploys users uniformly
over the union of the cells, assigns each to the strongest (nearest) site,
computes a noise-limited downlink SNR through a log-distance pathloss, and
records the cheapest feasible MCS and its minimum bandwidth under the
given traffic and QoS target.

The model is deliberately noise-limited: no interference, no fading, no
scheduler.  Results are plotted against SNR, so whatever degrades the link
in a richer model is absorbed into that axis.  Default radio parameters
place per-user SNR roughly in [-5, 59] dB over serving distances of 10 to
500 m, covering every MCS selection threshold of the shipped catalogues.

Determinism: a master seed drives one sub-generator per drop (spawned in
drop order), and records are concatenated in the same order, so identical
configurations produce identical output regardless of how drops would be
scheduled.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, fields, replace
from typing import IO, Optional, Union

import numpy as np

from .fbl_rate import Snr
from .mcs import McsCatalogue
from .qos import QosConstraint, TrafficSpec, min_bandwidth

__all__ = [
    "ScenarioConfig",
    "UserSample",
    "EmpiricalCurve",
    "site_centers",
    "deploy",
    "link_snr",
    "simulate",
]

_PATHLOSS_MODELS = ("urban_macro", "free_space")
_ANTENNA_PATTERNS = ("omni", "parabolic")


@dataclass(frozen=True)
class ScenarioConfig:
    """Deployment geometry and radio parameters for one scenario.

    Pathloss models (d in metres, clamped below at ``min_link_distance_m``):

    * ``urban_macro``: intercept + slope * log10(d / 1000), defaults
      128.1 dB at 1 km with 37.6 dB/decade;
    * ``free_space``: 92.45 + 20 log10(carrier_ghz) + 20 log10(d / 1000).

    SNR is defined against thermal noise integrated over
    ``snr_ref_bandwidth_hz`` plus the receiver noise figure.  The
    ``parabolic`` antenna pattern applies the standard three-sector
    response -min(12 (theta/beamwidth)^2, front_to_back) dB and serves
    each user from the strongest sector; ``omni`` serves from the nearest
    site with sectors split by azimuth.
    """

    sites: int = 19
    sectors_per_site: int = 3
    cell_radius_m: float = 500.0
    users_per_sector: int = 10
    tx_power_dbm: float = 4.0
    noise_figure_db: float = 9.0
    noise_psd_dbm_hz: float = -174.0
    snr_ref_bandwidth_hz: float = 540e3
    pathloss_model: str = "urban_macro"
    pathloss_intercept_db: float = 128.1
    pathloss_exponent_db_per_decade: float = 37.6
    carrier_ghz: float = 2.0
    antenna_pattern: str = "omni"
    beamwidth_deg: float = 65.0
    front_to_back_db: float = 30.0
    min_link_distance_m: float = 10.0
    rng_seed: int = 1
    drops: int = 10

    def __post_init__(self) -> None:
        if self.sites < 1 or self.sectors_per_site < 1 or self.users_per_sector < 1:
            raise ValueError("site, sector and user counts must all be at least 1")
        if self.drops < 1:
            raise ValueError(f"drop count must be at least 1, got {self.drops!r}")
        if not self.cell_radius_m > 0.0:
            raise ValueError(f"cell radius must be positive, got {self.cell_radius_m!r}")
        if not 0.0 < self.min_link_distance_m <= self.cell_radius_m:
            raise ValueError("minimum link distance must lie in (0, cell_radius_m]")
        if self.pathloss_model not in _PATHLOSS_MODELS:
            raise ValueError(
                f"unknown pathloss model {self.pathloss_model!r}; choose from {_PATHLOSS_MODELS}"
            )
        if self.antenna_pattern not in _ANTENNA_PATTERNS:
            raise ValueError(
                f"unknown antenna pattern {self.antenna_pattern!r}; choose from {_ANTENNA_PATTERNS}"
            )
        if not self.snr_ref_bandwidth_hz > 0.0:
            raise ValueError("SNR reference bandwidth must be positive")

    @property
    def total_users(self) -> int:
        return self.sites * self.sectors_per_site * self.users_per_sector

    @classmethod
    def from_file(cls, source: Union[str, IO[str]]) -> "ScenarioConfig":
        """Read a config from JSON holding any subset of the field names."""
        if isinstance(source, str):
            with open(source) as handle:
                return cls.from_file(handle)
        raw = json.load(source)
        if not isinstance(raw, dict):
            raise ValueError("scenario config must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(raw) - known)
        if unknown:
            raise ValueError(f"unknown scenario config keys: {', '.join(unknown)}")
        return cls(**raw)


@dataclass
class UserSample:
    """One deployed user and, once simulated, its link and selection outcome."""

    position: tuple[float, float]
    serving_sector: int
    snr_db: float = math.nan
    selected_mcs: Optional[int] = None
    required_bandwidth_hz: float = math.inf

    @property
    def feasible(self) -> bool:
        return math.isfinite(self.required_bandwidth_hz)


@dataclass(frozen=True)
class EmpiricalCurve:
    """Per-user admission samples, plus the SNR-sorted feasible point cloud.

    Sorted bandwidths are non-increasing in SNR up to the rate formula's
    saturation wobble (relative increases below 1e-8, only between users
    far above the last selection threshold); step discontinuities appear
    where the cheapest modulation order changes.
    """

    points: tuple[tuple[float, float], ...]
    users: tuple[UserSample, ...]
    infeasible_count: int

    @property
    def coverage(self) -> float:
        return 1.0 - self.infeasible_count / len(self.users)


def site_centers(sites: int, cell_radius_m: float) -> np.ndarray:
    """Hexagonal-lattice site positions, centre first then full rings outward.

    Within a ring, sites are listed in the conventional corner-to-corner
    walk, so the layout is deterministic.  Raises if ``sites`` does not
    complete its outermost ring (1, 7, 19, 37, ... are valid counts).
    """
    isd = math.sqrt(3.0) * cell_radius_m
    a1 = np.array([isd, 0.0])
    a2 = np.array([0.5 * isd, 0.5 * math.sqrt(3.0) * isd])
    axial = [(0, 0)]
    ring = 1
    while len(axial) < sites:
        q, r = ring, -ring
        for dq, dr in ((0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0)):
            for _ in range(ring):
                axial.append((q, r))
                q, r = q + dq, r + dr
        ring += 1
    if len(axial) != sites:
        raise ValueError(
            f"{sites} sites do not form complete hexagonal rings; "
            f"use 1, 7, 19, 37, ... sites"
        )
    return np.array([q * a1 + r * a2 for q, r in axial])


def _in_hexagon(x: float, y: float, circumradius: float) -> bool:
    # Voronoi cell of the lattice: half-planes normal to the three lattice
    # axes at the apothem distance; vertices point along 30 + 60k degrees.
    apothem = 0.5 * math.sqrt(3.0) * circumradius + 1e-9
    half = 0.5 * math.sqrt(3.0)
    return (
        abs(x) <= apothem
        and abs(0.5 * x + half * y) <= apothem
        and abs(-0.5 * x + half * y) <= apothem
    )


def _sample_in_hexagon(rng: np.random.Generator, circumradius: float) -> tuple[float, float]:
    apothem = 0.5 * math.sqrt(3.0) * circumradius
    while True:
        x = rng.uniform(-apothem, apothem)
        y = rng.uniform(-circumradius, circumradius)
        if _in_hexagon(x, y, circumradius):
            return x, y


def _sector_gain_db(config: ScenarioConfig, offset_deg: np.ndarray) -> np.ndarray:
    wrapped = (offset_deg + 180.0) % 360.0 - 180.0
    return -np.minimum(
        12.0 * (wrapped / config.beamwidth_deg) ** 2, config.front_to_back_db
    )


def _serving_sector(
    config: ScenarioConfig, position: np.ndarray, centers: np.ndarray
) -> int:
    deltas = position - centers
    distances = np.hypot(deltas[:, 0], deltas[:, 1])
    if config.antenna_pattern == "omni":
        # Equal per-sector power from a site, so: nearest site, sector cut
        # by azimuth (boresights at 0, 120, 240 degrees; first site/sector
        # wins ties through argmin/integer floor).
        site = int(np.argmin(distances))
        azimuth = math.degrees(math.atan2(deltas[site, 1], deltas[site, 0])) % 360.0
        local = int(((azimuth + 60.0) % 360.0) // (360.0 / config.sectors_per_site))
        return site * config.sectors_per_site + local
    azimuths = np.degrees(np.arctan2(deltas[:, 1], deltas[:, 0]))
    clamped = np.maximum(distances, config.min_link_distance_m)
    loss = _pathloss_db(config, clamped)
    boresights = np.arange(config.sectors_per_site) * (360.0 / config.sectors_per_site)
    rx_power = (
        config.tx_power_dbm
        - loss[:, None]
        + _sector_gain_db(config, azimuths[:, None] - boresights[None, :])
    )
    best = int(np.argmax(rx_power))
    return (best // config.sectors_per_site) * config.sectors_per_site + (
        best % config.sectors_per_site
    )


def deploy(config: ScenarioConfig, seed=None) -> list[UserSample]:
    """Drop ``config.total_users`` users uniformly over the cell union.

    Each user is attached to its serving sector; link quality is filled in
    by :func:`link_snr` / :func:`simulate`.  Deterministic in
    (config, seed); ``seed`` is anything ``numpy.random.default_rng``
    accepts and defaults to ``config.rng_seed``.
    """
    rng = np.random.default_rng(config.rng_seed if seed is None else seed)
    centers = site_centers(config.sites, config.cell_radius_m)
    users = []
    for _ in range(config.total_users):
        # Uniform over the union of equal-area cells: pick a cell, then a
        # point inside it.  The cells tile the plane, so the chosen site is
        # also the nearest one.
        site = int(rng.integers(config.sites))
        dx, dy = _sample_in_hexagon(rng, config.cell_radius_m)
        position = centers[site] + np.array([dx, dy])
        sector = _serving_sector(config, position, centers)
        users.append(
            UserSample(position=(float(position[0]), float(position[1])), serving_sector=sector)
        )
    return users


def _pathloss_db(config: ScenarioConfig, distance_m) -> np.ndarray:
    d_km = np.asarray(distance_m, dtype=float) / 1000.0
    if config.pathloss_model == "urban_macro":
        return config.pathloss_intercept_db + config.pathloss_exponent_db_per_decade * np.log10(
            d_km
        )
    return 92.45 + 20.0 * np.log10(config.carrier_ghz) + 20.0 * np.log10(d_km)


def link_snr(
    position: tuple[float, float],
    config: ScenarioConfig,
    centers: Optional[np.ndarray] = None,
) -> float:
    """Noise-limited downlink SNR in dB from the strongest site.

    tx power minus pathloss minus integrated noise (PSD over the reference
    bandwidth, plus noise figure).  Distances below the configured minimum
    are clamped to it, so the SNR saturates rather than diverging at the
    site.  With the parabolic pattern the serving sector's antenna gain is
    included.
    """
    if centers is None:
        centers = site_centers(config.sites, config.cell_radius_m)
    deltas = np.asarray(position, dtype=float) - centers
    distances = np.hypot(deltas[:, 0], deltas[:, 1])
    clamped = np.maximum(distances, config.min_link_distance_m)
    noise_dbm = (
        config.noise_psd_dbm_hz
        + 10.0 * math.log10(config.snr_ref_bandwidth_hz)
        + config.noise_figure_db
    )
    rx = config.tx_power_dbm - _pathloss_db(config, clamped)
    if config.antenna_pattern == "parabolic":
        azimuths = np.degrees(np.arctan2(deltas[:, 1], deltas[:, 0]))
        boresights = np.arange(config.sectors_per_site) * (360.0 / config.sectors_per_site)
        gains = _sector_gain_db(config, azimuths[:, None] - boresights[None, :])
        rx = (rx[:, None] + gains).max(axis=1)
    return float(rx.max() - noise_dbm)


def simulate(
    config: ScenarioConfig,
    traffic: TrafficSpec,
    qos: QosConstraint,
    catalogue: McsCatalogue,
) -> EmpiricalCurve:
    """Run all drops and collect per-user admission bandwidths.

    Every user gets the catalogue entry that minimises
    :func:`urllc_admission.qos.min_bandwidth` at its SNR; users below every
    selection threshold are kept as infeasible records (excluded from the
    sorted curve, counted in ``infeasible_count``).
    """
    centers = site_centers(config.sites, config.cell_radius_m)
    drop_seeds = np.random.SeedSequence(config.rng_seed).spawn(config.drops)
    completed: list[UserSample] = []
    for drop_seed in drop_seeds:
        users = deploy(config, seed=drop_seed)
        for user in users:
            snr_db = link_snr(user.position, config, centers=centers)
            snr = Snr.from_db(snr_db)
            best_bw = math.inf
            best_index: Optional[int] = None
            for entry in catalogue:
                bw = min_bandwidth(traffic, qos, snr, entry)
                if bw < best_bw:
                    best_bw = bw
                    best_index = entry.index
            completed.append(
                replace(
                    user,
                    snr_db=snr_db,
                    selected_mcs=best_index,
                    required_bandwidth_hz=best_bw,
                )
            )
    feasible = sorted(
        ((u.snr_db, u.required_bandwidth_hz) for u in completed if u.feasible),
        key=lambda point: point[0],
    )
    return EmpiricalCurve(
        points=tuple(feasible),
        users=tuple(completed),
        infeasible_count=sum(1 for u in completed if not u.feasible),
    )
