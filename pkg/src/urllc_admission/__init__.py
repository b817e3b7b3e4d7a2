"""Finite-blocklength link adaptation and admission bandwidth for URLLC.

The package derives how much spectrum a periodic low-latency source needs:
achievable rates at finite coding length over finite constellations
(:mod:`~urllc_admission.fbl_rate`), SNR thresholds for adaptive MCS
selection (:mod:`~urllc_admission.mcs`), worst-case delay bounds and the
minimum-bandwidth admission boundary (:mod:`~urllc_admission.qos`), and a
multi-cell drop simulator validating that boundary as a lower bound
(:mod:`~urllc_admission.sim`).  The ``urllc-admission`` console script
exposes all of it as CSV sweeps.
"""

from .fbl_rate import (
    MODULATION_FITS,
    ChannelPoint,
    ModulationFit,
    Snr,
    channel_dispersion,
    fit_for,
    mqam_mutual_info,
    rate_gaussian_coding,
    rate_mqam,
    shannon_capacity,
    throughput,
)
from .mcs import (
    McsCatalogue,
    McsConfig,
    SnrThresholdTable,
    ThresholdEntry,
    blocklength_bound,
    build_threshold_table,
    default_catalogue,
    full_catalogue,
    load_catalogue,
    min_blocklength,
    practical_blocklength,
    select_mcs,
    snr_threshold,
)
from .numerics import BracketError, bisect_monotone, q_function, q_inverse
from .qos import (
    AdmissionPoint,
    ArrivalCurve,
    QosConstraint,
    ServiceCurve,
    TrafficSpec,
    admission_curve,
    delay_bound,
    horizontal_deviation,
    min_bandwidth,
)
from .sim import EmpiricalCurve, ScenarioConfig, UserSample, deploy, link_snr, simulate

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # numerics
    "BracketError",
    "q_function",
    "q_inverse",
    "bisect_monotone",
    # channel rates
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
    # MCS catalogue and solvers
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
    # delay and admission
    "TrafficSpec",
    "ArrivalCurve",
    "ServiceCurve",
    "QosConstraint",
    "AdmissionPoint",
    "horizontal_deviation",
    "delay_bound",
    "min_bandwidth",
    "admission_curve",
    # simulator
    "ScenarioConfig",
    "UserSample",
    "EmpiricalCurve",
    "deploy",
    "link_snr",
    "simulate",
]
