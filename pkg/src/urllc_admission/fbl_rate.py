"""Achievable rates over the complex AWGN channel at finite coding length.

All rates are per complex channel symbol (bits/symbol); multiply by the
occupied bandwidth in Hz to get bits/s (:func:`throughput`).  Two rate
expressions are provided:

* :func:`rate_gaussian_coding` -- normal approximation for an ideal
  Gaussian codebook,

      R = C(P) - sqrt(V(P)/n) * Qinv(eps) + log2(n)/n,

  with Shannon capacity C(P) = log2(1+P) and channel dispersion
  V(P) = P(P+2) / ((P+1)^2 ln^2 2).

* :func:`rate_mqam` -- the same penalty terms applied to a square M-QAM
  constellation, whose constrained mutual information has no closed form
  and is replaced by a multi-exponential decay fit

      I(P, M) ~= log2(M) * (1 - sum_j a_j exp(-b_j P)),

  with per-order coefficients compiled into :data:`MODULATION_FITS`.

Conventions
-----------
* SNR is held in linear units; dB appears only at the :class:`Snr`
  boundary.
* Rates can come out non-positive at low SNR or tiny blocklength and are
  returned as-is: clamping would hide infeasibility from the solvers in
  the MCS layer, which treat ``n * rate < k`` as "cannot carry k bits".
* The log2(n)/n term uses the blocklength exactly as supplied, fractional
  values included.  Integral blocklengths are the MCS layer's concern.

Fit behaviour, measured on a dense grid over P in [1e-4, 1e4]
-------------------------------------------------------------
* Every fitted curve stays strictly below log2(1+P), so the M-QAM rate
  never exceeds the Gaussian-codebook rate at matching arguments.
* The 256-QAM coefficients sum to 1 + 1e-6, so that fit dips to about
  -8e-6 bits/symbol as P -> 0+ and turns positive near P = 6e-6; the
  other three orders sum to 1 within 1e-6 and stay non-negative.
* For eps < 0.5 the finite-length rates are increasing in P only between
  two boundary effects.  Near zero the dispersion grows like P, so its
  square root enters with unbounded slope and the rate falls until a
  blocklength-dependent turn (around P = 0.26 for n = 35 at eps = 1e-5,
  around P = 0.004 for n = 1093); rates there are deeply negative and
  infeasible anyway.  At the top, each fit saturates exponentially while
  the dispersion still approaches its own limit as P^-2, so past a
  per-order knee (P ~ 14 for QPSK, ~112 for 16-QAM, ~608 for 64-QAM,
  ~2900 for 256-QAM, over blocklengths 35..1093) the rate declines again,
  by at most 1.8e-3 bits/symbol out to P = 1e4: numerically a plateau at
  the fit's ceiling minus the blocklength penalty.  Selection sweeps never
  see the decline (an order is only ever cheapest below its knee), but
  exact monotonicity assertions must stop at the knee.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .numerics import q_inverse

__all__ = [
    "Snr",
    "ModulationFit",
    "ChannelPoint",
    "MODULATION_FITS",
    "fit_for",
    "shannon_capacity",
    "channel_dispersion",
    "mqam_mutual_info",
    "rate_gaussian_coding",
    "rate_mqam",
    "throughput",
]

_LN2_SQUARED = math.log(2.0) ** 2

# Supremum of the channel dispersion: V(P) -> 1/ln^2(2) as P -> infinity.
DISPERSION_LIMIT = 1.0 / _LN2_SQUARED


@dataclass(frozen=True)
class Snr:
    """Signal-to-noise ratio as a dimensionless linear power ratio."""

    linear: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.linear) and self.linear > 0.0):
            raise ValueError(f"SNR must be a finite positive ratio, got {self.linear!r}")

    @classmethod
    def from_db(cls, db: float) -> "Snr":
        return cls(10.0 ** (db / 10.0))

    @property
    def db(self) -> float:
        return 10.0 * math.log10(self.linear)


@dataclass(frozen=True)
class ModulationFit:
    """Exponential-decay fit of one square QAM constellation's mutual information.

    ``a`` and ``b`` are the positive fit coefficients, one pair per decay
    term.  The ``a`` weights sum to 1 (within table rounding), which pins
    the fitted curve to ~0 at zero SNR.
    """

    order: int
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.order < 2 or 2 ** round(math.log2(self.order)) != self.order:
            raise ValueError(f"modulation order must be a power of two, got {self.order!r}")
        if len(self.a) != len(self.b) or not self.a:
            raise ValueError("coefficient lists must be non-empty and of equal length")
        if any(c <= 0.0 for c in self.a) or any(c <= 0.0 for c in self.b):
            raise ValueError("all fit coefficients must be positive")
        if abs(math.fsum(self.a) - 1.0) > 1e-5:
            raise ValueError(f"weights must sum to 1 within 1e-5, got {math.fsum(self.a)!r}")

    @property
    def term_count(self) -> int:
        return len(self.a)

    @property
    def bits_per_symbol(self) -> float:
        return math.log2(self.order)


#: Fitted coefficients for the four NR constellations (QPSK .. 256-QAM).
MODULATION_FITS: dict[int, ModulationFit] = {
    4: ModulationFit(
        order=4,
        a=(0.143281, 0.856719),
        b=(1.557531, 0.57239),
    ),
    16: ModulationFit(
        order=16,
        a=(0.658747, 0.117219, 0.224034),
        b=(0.115521, 1.467927, 0.482023),
    ),
    64: ModulationFit(
        order=64,
        a=(0.198324, 0.512831, 0.209086, 0.079759),
        b=(0.408618, 0.027517, 0.120616, 1.467118),
    ),
    256: ModulationFit(
        order=256,
        a=(0.228768, 0.229083, 0.118223, 0.423927),
        b=(0.183242, 0.038011, 0.994472, 0.006911),
    ),
}


def fit_for(order: int) -> ModulationFit:
    """Fit table lookup by constellation size (4, 16, 64 or 256)."""
    try:
        return MODULATION_FITS[order]
    except KeyError:
        raise ValueError(
            f"no mutual-information fit for modulation order {order!r}; "
            f"available orders: {sorted(MODULATION_FITS)}"
        ) from None


@dataclass(frozen=True)
class ChannelPoint:
    """One operating point: SNR, blocklength in symbols, target error probability.

    ``blocklength`` may be fractional (>= 1); the continuous relaxation is
    what the blocklength and threshold solvers invert.
    """

    snr: Snr
    blocklength: float
    epsilon: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.blocklength) and self.blocklength >= 1.0):
            raise ValueError(f"blocklength must be >= 1, got {self.blocklength!r}")
        if not (0.0 < self.epsilon < 1.0):
            raise ValueError(f"error probability must lie in (0, 1), got {self.epsilon!r}")


def shannon_capacity(snr: Snr) -> float:
    """Capacity of the complex AWGN channel, log2(1 + P) bits/symbol."""
    return math.log2(1.0 + snr.linear)


def channel_dispersion(snr: Snr) -> float:
    """Channel dispersion V(P) = P(P+2) / ((P+1)^2 ln^2 2).

    Strictly increasing in P, approaching 1/ln^2(2) ~= 2.0814 from below.
    """
    p = snr.linear
    return p * (p + 2.0) / ((p + 1.0) ** 2 * _LN2_SQUARED)


def mqam_mutual_info(snr: Snr, fit: ModulationFit) -> float:
    """Fitted constellation-constrained mutual information, bits/symbol.

    Mathematically strictly below log2(M) for all finite P; in double
    precision the value saturates to exactly log2(M) once every decay term
    falls under one ulp, i.e. for P beyond roughly 37 / min(b).
    """
    p = snr.linear
    decay = math.fsum(a * math.exp(-b * p) for a, b in zip(fit.a, fit.b))
    return fit.bits_per_symbol * (1.0 - decay)


def rate_gaussian_coding(point: ChannelPoint) -> float:
    """Normal-approximation achievable rate for a Gaussian codebook, bits/symbol."""
    n = point.blocklength
    return (
        shannon_capacity(point.snr)
        - math.sqrt(channel_dispersion(point.snr) / n) * q_inverse(point.epsilon)
        + math.log2(n) / n
    )


def rate_mqam(point: ChannelPoint, fit: ModulationFit) -> float:
    """Achievable rate under an M-QAM constellation, bits/symbol.

    Same blocklength penalty as :func:`rate_gaussian_coding` with the
    capacity replaced by the constellation's fitted mutual information.
    """
    n = point.blocklength
    return (
        mqam_mutual_info(point.snr, fit)
        - math.sqrt(channel_dispersion(point.snr) / n) * q_inverse(point.epsilon)
        + math.log2(n) / n
    )


def throughput(rate_per_symbol: float, bandwidth_hz: float) -> float:
    """Bits per second carried by ``bandwidth_hz`` of spectrum.

    One complex symbol per Hz per second, so this is a plain product.
    """
    if not bandwidth_hz > 0.0:
        raise ValueError(f"bandwidth must be positive, got {bandwidth_hz!r}")
    return rate_per_symbol * bandwidth_hz
