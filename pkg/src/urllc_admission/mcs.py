"""NR modulation-and-coding catalogue, blocklength and SNR-threshold solvers.

An MCS entry pairs a square-QAM constellation with a binary code rate.  For
a payload of k information bits the codeword spans ceil(k / r_c) symbols,
where r_c is the overall code rate (binary rate times bits per symbol);
partial symbols round up because the codeword must carry every payload bit.

An entry is *feasible* at a given SNR when the achievable finite-length
rate over its codeword clears the payload:

    n_hat * R(n_hat, P, eps, M) >= k.

The smallest SNR where that holds is the entry's selection threshold.  An
entry whose rate cannot clear k/n_hat even deep in saturation is infeasible
outright -- the highest-rate 256-QAM entry at eps = 1e-5 is the canonical
case, since its 35-symbol codeword would need more than log2(256) bits per
symbol once the dispersion penalty is paid.

Two catalogues ship with the package: :func:`default_catalogue`, five
entries spanning the efficiency range of the NR PDSCH table (QPSK 0.12
through 256-QAM 0.93), and :func:`full_catalogue`, all 28 rate-bearing rows
of that table (indices 28-31 signal modulation only and carry no rate).
Custom catalogues load from CSV with header
``index,modulation_order,binary_code_rate``.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable, Iterator, Optional, Union

from .fbl_rate import ChannelPoint, ModulationFit, Snr, fit_for, rate_mqam
from .numerics import bisect_monotone

__all__ = [
    "McsConfig",
    "McsCatalogue",
    "ThresholdEntry",
    "SnrThresholdTable",
    "practical_blocklength",
    "min_blocklength",
    "blocklength_bound",
    "snr_threshold",
    "build_threshold_table",
    "select_mcs",
    "default_catalogue",
    "full_catalogue",
    "load_catalogue",
]

# Search box for threshold solving.  Entries still infeasible at the ceiling
# are reported as such; entries feasible all the way down to the floor get a
# -inf threshold (possible for tiny payloads, where the log2(n)/n term alone
# clears k even as P -> 0).
THRESHOLD_CEILING_DB = 50.0
THRESHOLD_FLOOR_DB = -60.0

_BLOCKLENGTH_CAP = 1_000_000

# The first few codeword lengths sit in a non-monotone pocket of the rate
# formula (the log2(n)/n term peaks at n = 3); they are scanned directly
# before the bisection takes over on the monotone tail.
_SCAN_LIMIT = 8


@dataclass(frozen=True)
class McsConfig:
    """One modulation-and-coding scheme.

    ``overall_code_rate`` is r_c = binary_code_rate * log2(M), the
    information bits carried per channel symbol.  It may be supplied
    explicitly (e.g. a published table value rounded to a few digits, kept
    verbatim) and is checked against the derived product within 1e-4;
    omitted, it is derived exactly.
    """

    index: int
    modulation_order: int
    binary_code_rate: float
    overall_code_rate: Optional[float] = None

    def __post_init__(self) -> None:
        if self.modulation_order < 2:
            raise ValueError(f"modulation order must be >= 2, got {self.modulation_order!r}")
        if not (0.0 < self.binary_code_rate < 1.0):
            raise ValueError(
                f"binary code rate must lie in (0, 1), got {self.binary_code_rate!r}"
            )
        derived = self.binary_code_rate * math.log2(self.modulation_order)
        if self.overall_code_rate is None:
            object.__setattr__(self, "overall_code_rate", derived)
        elif abs(self.overall_code_rate - derived) > 1e-4:
            raise ValueError(
                f"overall code rate {self.overall_code_rate!r} inconsistent with "
                f"binary rate {self.binary_code_rate!r} x log2({self.modulation_order})"
                f" = {derived!r}"
            )


@dataclass(frozen=True)
class McsCatalogue:
    """Immutable list of MCS entries, ascending in spectral efficiency."""

    entries: tuple[McsConfig, ...]

    def __post_init__(self) -> None:
        if not self.entries:
            raise ValueError("catalogue must contain at least one entry")
        rates = [e.overall_code_rate for e in self.entries]
        if any(b <= a for a, b in zip(rates, rates[1:])):
            raise ValueError("catalogue entries must be strictly increasing in overall code rate")
        if len({e.index for e in self.entries}) != len(self.entries):
            raise ValueError("catalogue entries must have distinct indices")

    def __iter__(self) -> Iterator[McsConfig]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def by_index(self, index: int) -> McsConfig:
        for entry in self.entries:
            if entry.index == index:
                return entry
        raise KeyError(f"no MCS with index {index} in catalogue")

    def subset(self, indices: Iterable[int]) -> "McsCatalogue":
        picked = sorted((self.by_index(i) for i in set(indices)), key=lambda e: e.overall_code_rate)
        return McsCatalogue(entries=tuple(picked))


# The five-entry evaluation subset, table values kept verbatim (binary and
# overall rates as published, rounded to 4-5 digits).
_DEFAULT_ROWS = (
    McsConfig(index=0, modulation_order=4, binary_code_rate=0.11719, overall_code_rate=0.2344),
    McsConfig(index=5, modulation_order=16, binary_code_rate=0.36914, overall_code_rate=1.4766),
    McsConfig(index=11, modulation_order=64, binary_code_rate=0.45508, overall_code_rate=2.7305),
    McsConfig(index=20, modulation_order=256, binary_code_rate=0.66650, overall_code_rate=5.3320),
    McsConfig(index=27, modulation_order=256, binary_code_rate=0.92578, overall_code_rate=7.4063),
)


def default_catalogue() -> McsCatalogue:
    """Five MCS levels with significantly different spectral efficiency."""
    return McsCatalogue(entries=_DEFAULT_ROWS)


def load_catalogue(source: Union[str, IO[str]]) -> McsCatalogue:
    """Load a catalogue from CSV with header index,modulation_order,binary_code_rate."""
    if isinstance(source, str):
        with open(source, newline="") as handle:
            return load_catalogue(handle)
    reader = csv.DictReader(source)
    expected = ["index", "modulation_order", "binary_code_rate"]
    if reader.fieldnames is None or list(reader.fieldnames) != expected:
        raise ValueError(f"catalogue CSV must have header {','.join(expected)}")
    entries = []
    for row in reader:
        try:
            entries.append(
                McsConfig(
                    index=int(row["index"]),
                    modulation_order=int(row["modulation_order"]),
                    binary_code_rate=float(row["binary_code_rate"]),
                )
            )
        except (TypeError, ValueError) as exc:
            raise ValueError(f"bad catalogue row {row!r}: {exc}") from exc
    entries.sort(key=lambda e: e.overall_code_rate)
    return McsCatalogue(entries=tuple(entries))


def full_catalogue() -> McsCatalogue:
    """All 28 rate-bearing rows of the NR PDSCH 256-QAM MCS table."""
    data = resources.files(__package__).joinpath("data/nr_pdsch_mcs_table2.csv")
    with data.open("r", newline="") as handle:
        return load_catalogue(handle)


def practical_blocklength(k: int, mcs: McsConfig) -> int:
    """Codeword length in symbols for a k-bit payload: ceil(k / r_c)."""
    if k < 1:
        raise ValueError(f"payload must be at least one bit, got {k!r}")
    return math.ceil(k / mcs.overall_code_rate)


def _carried_bits(n: float, snr: Snr, epsilon: float, fit: ModulationFit) -> float:
    return n * rate_mqam(ChannelPoint(snr=snr, blocklength=n, epsilon=epsilon), fit)


def min_blocklength(
    k: int,
    snr: Snr,
    epsilon: float,
    fit: ModulationFit,
    n_max: int = _BLOCKLENGTH_CAP,
) -> Optional[int]:
    """Smallest integer codeword length whose achievable rate carries k bits.

    Returns None when no n <= n_max suffices.  A payload beyond the
    asymptotic constellation ceiling (k > n_max * log2 M) is rejected
    against that ceiling before any rate is evaluated.
    """
    if k < 1:
        raise ValueError(f"payload must be at least one bit, got {k!r}")
    if n_max < 1:
        raise ValueError(f"search cap must be at least 1, got {n_max!r}")
    if k > fit.bits_per_symbol * n_max:
        return None

    for n in range(1, min(_SCAN_LIMIT, n_max) + 1):
        if _carried_bits(n, snr, epsilon, fit) >= k:
            return n
    if n_max <= _SCAN_LIMIT:
        return None

    # Beyond the scanned pocket n * R(n) is increasing in n (for eps >= 0.5
    # every term grows; for eps < 0.5 the rate itself is increasing where
    # positive), so the satisfying set is upward closed: double to bracket,
    # then bisect.
    lo = _SCAN_LIMIT
    hi = 2 * lo
    while True:
        if hi >= n_max:
            hi = n_max
            if _carried_bits(hi, snr, epsilon, fit) < k:
                return None
            break
        if _carried_bits(hi, snr, epsilon, fit) >= k:
            break
        lo = hi
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _carried_bits(mid, snr, epsilon, fit) >= k:
            hi = mid
        else:
            lo = mid
    return hi


def blocklength_bound(
    k: int,
    snr: Snr,
    epsilon: float,
    fit: ModulationFit,
    n_max: int = _BLOCKLENGTH_CAP,
) -> Optional[float]:
    """Real-valued blocklength at which n * R(n) first reaches k bits.

    The continuous counterpart of :func:`min_blocklength` (its ceiling is
    the integer answer).  Clipped below at 1.0.  None when infeasible.
    """
    n_int = min_blocklength(k, snr, epsilon, fit, n_max=n_max)
    if n_int is None:
        return None
    if n_int == 1:
        return 1.0
    return bisect_monotone(
        lambda n: _carried_bits(n, snr, epsilon, fit) - k,
        float(n_int - 1),
        float(n_int),
        tol=1e-9,
    )


def snr_threshold(
    k: int,
    mcs: McsConfig,
    epsilon: float,
    ceiling_db: float = THRESHOLD_CEILING_DB,
    floor_db: float = THRESHOLD_FLOOR_DB,
    tol_db: float = 1e-3,
) -> Optional[float]:
    """Smallest SNR (dB) at which ``mcs`` can carry a k-bit payload.

    The codeword length is fixed to :func:`practical_blocklength`; the
    threshold is where n_hat * R(n_hat, P, eps, M) crosses k, solved to
    ``tol_db``.  Returns None when the entry stays infeasible up to
    ``ceiling_db`` and -inf when it is feasible all the way down to
    ``floor_db``.

    Feasibility is treated as upward closed in SNR above the crossing,
    which holds whenever the required rate k/n_hat sits clear of the
    entry's saturated rate ceiling.  A payload within ~2e-3 bits/symbol of
    that ceiling can instead open a feasibility band around the saturation
    knee (an artifact of the fitted rate formula); the reported value is
    then the band's lower edge, or None if the band closes again before
    ``ceiling_db``.
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError(f"error probability must lie in (0, 1), got {epsilon!r}")
    n_hat = practical_blocklength(k, mcs)
    fit = fit_for(mcs.modulation_order)

    def margin(db: float) -> float:
        return _carried_bits(n_hat, Snr.from_db(db), epsilon, fit) - k

    if margin(ceiling_db) < 0.0:
        return None
    if margin(floor_db) >= 0.0:
        # Feasible at the floor.  For tiny payloads the log2(n)/n term alone
        # can clear k there while the sqrt(P) growth of the dispersion still
        # opens an infeasible dip at slightly higher SNR; the selection
        # threshold is then the top of that dip.  Scan for it coarsely.
        last_negative = None
        db = floor_db
        while db < ceiling_db:
            if margin(db) < 0.0:
                last_negative = db
            db += 1.0
        if last_negative is None:
            return -math.inf
        return bisect_monotone(margin, last_negative, ceiling_db, tol=tol_db)
    return bisect_monotone(margin, floor_db, ceiling_db, tol=tol_db)


@dataclass(frozen=True)
class ThresholdEntry:
    """Lower selection edge of one MCS at a fixed (k, eps) operating point."""

    mcs: McsConfig
    snr_db: Optional[float]

    @property
    def feasible(self) -> bool:
        return self.snr_db is not None


@dataclass(frozen=True)
class SnrThresholdTable:
    """Selection thresholds for a whole catalogue, ascending efficiency order.

    Intervals are half-open: an SNR exactly at an entry's threshold selects
    that entry, not its predecessor.
    """

    k_bits: int
    epsilon: float
    entries: tuple[ThresholdEntry, ...]


def build_threshold_table(
    k: int,
    epsilon: float,
    catalogue: McsCatalogue,
    ceiling_db: float = THRESHOLD_CEILING_DB,
) -> SnrThresholdTable:
    rows = tuple(
        ThresholdEntry(mcs=entry, snr_db=snr_threshold(k, entry, epsilon, ceiling_db=ceiling_db))
        for entry in catalogue
    )
    return SnrThresholdTable(k_bits=k, epsilon=epsilon, entries=rows)


def select_mcs(snr: Snr, thresholds: SnrThresholdTable) -> Optional[McsConfig]:
    """Highest-efficiency feasible entry whose threshold is at or below ``snr``.

    None when the SNR sits below every threshold.  Selection scans from the
    top, so it stays well-defined even for catalogues whose thresholds are
    not monotone in efficiency.
    """
    snr_db = snr.db
    for entry in reversed(thresholds.entries):
        if entry.snr_db is not None and snr_db >= entry.snr_db:
            return entry.mcs
    return None
