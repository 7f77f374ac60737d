"""Terahertz LoS channel modeling with a standing-wave correction.

Library layout:

* :mod:`swchan.model` — immutable domain types and the closed-form math
  (floating-intercept path loss, standing-wave gain, SWR relations, link
  budget, horn-antenna presets).
* :mod:`swchan.fitting` — the estimation pipeline: OLS line fit, residual
  analysis, extremum/period detection, and derivative-free refinement of
  (|Gamma|, phase, k).
* :mod:`swchan.synth` — seeded synthetic campaign generator (pinned
  SplitMix64/Box-Muller stream) and the explicit complex-superposition
  oracle used to verify the closed form.
* :mod:`swchan.formats` — campaign CSV and report JSON formats.
* :mod:`swchan.cli` — the ``swchan`` command-line tool.
"""

from ._version import __version__
from .errors import (
    BandMismatchError,
    DegenerateInputError,
    DistanceBelowReferenceError,
    FileFormatError,
    InsufficientExtremaError,
    InvalidExtremaError,
    InvalidGridError,
    SwchanError,
)
from .fitting import (
    DEFAULT_FIT_CONFIG,
    FitConfig,
    FitReport,
    MeasurementSet,
    ResidualSeries,
    detect_extrema,
    estimate_k_from_period,
    fit_channel,
    fit_sffl_ols,
    initial_gamma_estimate,
    refine_fit,
    residuals,
)
from .formats import Report, parse_report, read_campaign_csv, write_campaign_csv, write_report
from .model import (
    ANTENNA_PRESETS,
    AntennaSpec,
    ChannelModel,
    ComplexReflection,
    Frequency,
    SfflParams,
    StandingWaveParams,
    combined_path_loss,
    gamma_mag_from_extrema,
    path_loss_sffl,
    predicted_received_power,
    standing_wave_gain_db,
    standing_wave_magnitude_sq,
    swr_of_gamma,
)
from .synth import (
    DEFAULT_GRID,
    SplitMix64,
    SynthConfig,
    generate_measurements,
    grid_distances,
    oracle_standing_wave,
    standard_normals,
)

__all__ = [
    "__version__",
    "ANTENNA_PRESETS",
    "AntennaSpec",
    "BandMismatchError",
    "ChannelModel",
    "ComplexReflection",
    "DEFAULT_FIT_CONFIG",
    "DEFAULT_GRID",
    "DegenerateInputError",
    "DistanceBelowReferenceError",
    "FileFormatError",
    "FitConfig",
    "FitReport",
    "Frequency",
    "InsufficientExtremaError",
    "InvalidExtremaError",
    "InvalidGridError",
    "MeasurementSet",
    "Report",
    "ResidualSeries",
    "SfflParams",
    "SplitMix64",
    "StandingWaveParams",
    "SwchanError",
    "SynthConfig",
    "combined_path_loss",
    "detect_extrema",
    "estimate_k_from_period",
    "fit_channel",
    "fit_sffl_ols",
    "gamma_mag_from_extrema",
    "generate_measurements",
    "grid_distances",
    "initial_gamma_estimate",
    "oracle_standing_wave",
    "parse_report",
    "path_loss_sffl",
    "predicted_received_power",
    "read_campaign_csv",
    "refine_fit",
    "residuals",
    "standard_normals",
    "standing_wave_gain_db",
    "standing_wave_magnitude_sq",
    "swr_of_gamma",
    "write_campaign_csv",
    "write_report",
]
