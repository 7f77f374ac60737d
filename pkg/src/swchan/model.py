"""Closed-form channel-model mathematics for short-range terahertz LoS links.

The mean path loss follows a floating-intercept power law in log-distance,

    PL(d) = alpha + 10 * beta * log10(d / d0),        d >= d0

and the standing wave that builds up between two facing horn antennas is
modeled as the superposition of a forward wave and a single reflected wave
with complex reflection coefficient Gamma and effective wavenumber k.  The
squared magnitude of the superposed field, normalized to the forward
amplitude, is

    |V_net|^2 / |A|^2 = 1 + |Gamma|^2 + 2*|Gamma|*cos(2*k*(d - d0) + phase)

which oscillates in distance with period pi / k between (1 - |Gamma|)^2 and
(1 + |Gamma|)^2.  Expressed in dB this is a gain that is subtracted from the
power-law path loss to form the combined model.

Conventions used throughout the package: distances in meters, frequencies in
GHz, powers in dB/dBm, angles in radians.  dB conversion uses factor 20 for
voltage-like amplitudes and factor 10 for power-like quantities; each
function states which one it applies.  All types are immutable values and
all functions are pure, so everything here is thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BandMismatchError, DistanceBelowReferenceError, InvalidExtremaError

TWO_PI = 2.0 * math.pi


def _validate(condition: bool, exc: type, message: str) -> None:
    if not condition:
        raise exc(message)


@dataclass(frozen=True)
class Frequency:
    """Carrier center frequency in GHz."""

    center_ghz: float

    def __post_init__(self):
        _validate(self.center_ghz > 0, ValueError, f"center frequency must be positive, got {self.center_ghz}")


@dataclass(frozen=True)
class SfflParams:
    """Floating-intercept power-law parameters.

    alpha_db is the intercept at the reference distance d0_m, beta the
    path-loss exponent (2 in ideal free space) and sigma_db the standard
    deviation of the zero-mean Gaussian shadow-fading term.  sigma_db is
    carried for reporting and synthesis only; mean-model prediction is
    deterministic.
    """

    alpha_db: float
    beta: float
    sigma_db: float = 0.0
    d0_m: float = 0.10

    def __post_init__(self):
        _validate(self.d0_m > 0, ValueError, f"reference distance must be positive, got {self.d0_m}")
        _validate(self.sigma_db >= 0, ValueError, f"shadow-fading sigma must be >= 0, got {self.sigma_db}")


@dataclass(frozen=True)
class ComplexReflection:
    """Complex reflection coefficient as magnitude and phase.

    Magnitude must lie in [0, 1) (passive reflection, finite SWR); the phase
    is normalized into [0, 2*pi) on construction.
    """

    magnitude: float
    phase_rad: float = 0.0

    def __post_init__(self):
        _validate(0.0 <= self.magnitude < 1.0, ValueError,
                  f"reflection magnitude must be in [0, 1), got {self.magnitude}")
        object.__setattr__(self, "phase_rad", float(self.phase_rad) % TWO_PI)

    @classmethod
    def from_complex(cls, value: complex) -> "ComplexReflection":
        return cls(abs(value), math.atan2(value.imag, value.real))

    @property
    def as_complex(self) -> complex:
        return self.magnitude * complex(math.cos(self.phase_rad), math.sin(self.phase_rad))


@dataclass(frozen=True)
class StandingWaveParams:
    """Reflection coefficient plus the effective wavenumber of the pattern.

    k_rad_per_m is a free fitted parameter governing the spatial period
    pi / k of the interference pattern; it is not required to equal the
    physical free-space wavenumber (coarse distance sampling aliases the
    true oscillation).
    """

    gamma: ComplexReflection
    k_rad_per_m: float

    def __post_init__(self):
        _validate(self.k_rad_per_m > 0, ValueError, f"wavenumber must be positive, got {self.k_rad_per_m}")


@dataclass(frozen=True)
class ChannelModel:
    """A fitted channel: power-law parameters plus standing-wave parameters."""

    frequency: Frequency
    sffl: SfflParams
    standing: StandingWaveParams


@dataclass(frozen=True)
class AntennaSpec:
    """Horn antenna datasheet values (waveguide band, beamwidth, gain)."""

    band_name: str
    band_low_ghz: float
    band_high_ghz: float
    half_power_beamwidth_deg: float
    gain_dbi: float
    beam_waist_radius_mm: float

    def __post_init__(self):
        _validate(0 < self.band_low_ghz < self.band_high_ghz, ValueError,
                  f"antenna band must satisfy 0 < low < high, got {self.band_low_ghz}..{self.band_high_ghz}")

    def covers(self, frequency: Frequency) -> bool:
        return self.band_low_ghz <= frequency.center_ghz <= self.band_high_ghz


# VDI horn antennas used on the measurement bench.
ANTENNA_PRESETS = {
    "WR-2.2": AntennaSpec("WR-2.2", 325.0, 500.0, 12.0, 25.0, 1.3),
    "WR-4.3": AntennaSpec("WR-4.3", 170.0, 260.0, 13.0, 21.0, 2.7),
    "WR-6.5": AntennaSpec("WR-6.5", 110.0, 170.0, 13.0, 21.0, 4.1),
}


def _check_distance(d, d0_m: float) -> None:
    if np.any(np.asarray(d) < d0_m):
        raise DistanceBelowReferenceError(
            f"distance {d!r} below reference distance d0={d0_m} m; the model is defined for d >= d0")


def path_loss_sffl(p: SfflParams, d):
    """Mean floating-intercept path loss in dB at distance(s) ``d``.

    PL(d) = alpha + 10 * beta * log10(d / d0).  Deterministic: the shadow
    fading term is applied only by the synthetic generator, never by
    prediction.  Accepts a scalar or ndarray of distances (meters).

    Raises
    ------
    DistanceBelowReferenceError
        If any distance is below ``p.d0_m``.
    """
    _check_distance(d, p.d0_m)
    d = np.asarray(d, dtype=float)
    out = p.alpha_db + 10.0 * p.beta * np.log10(d / p.d0_m)
    return out if out.ndim else float(out)


def standing_wave_magnitude_sq(s: StandingWaveParams, d, d0_m: float):
    """Squared standing-wave magnitude |V_net|^2 / |A|^2 (unitless).

    1 + |Gamma|^2 + 2*|Gamma|*cos(2*k*(d - d0) + phase); the forward
    amplitude cancels in the ratio, so the result lies in
    [(1 - |Gamma|)^2, (1 + |Gamma|)^2] and is periodic in d with period
    pi / k.  Accepts scalar or ndarray distances.
    """
    _check_distance(d, d0_m)
    d = np.asarray(d, dtype=float)
    g = s.gamma.magnitude
    out = 1.0 + g * g + 2.0 * g * np.cos(2.0 * s.k_rad_per_m * (d - d0_m) + s.gamma.phase_rad)
    return out if out.ndim else float(out)


def standing_wave_gain_db(s: StandingWaveParams, d, d0_m: float):
    """Standing-wave gain in dB: 10*log10 of the squared magnitude ratio.

    Power-like quantity, factor 10.  Bounded by 20*log10(1 - |Gamma|) and
    20*log10(1 + |Gamma|); always finite because |Gamma| < 1.
    """
    out = 10.0 * np.log10(standing_wave_magnitude_sq(s, d, d0_m))
    return out if np.ndim(out) else float(out)


def combined_path_loss(m: ChannelModel, d):
    """Path loss of the combined model: power law minus standing-wave gain.

    The constructive part of the interference pattern increases the
    received signal, so its dB gain is subtracted from the power-law path
    loss.  With |Gamma| = 0 this reduces exactly to ``path_loss_sffl``.
    """
    out = path_loss_sffl(m.sffl, d) - standing_wave_gain_db(m.standing, d, m.sffl.d0_m)
    return out if np.ndim(out) else float(out)


def swr_of_gamma(g: ComplexReflection) -> float:
    """Standing-wave ratio Vmax/Vmin = (1 + |Gamma|) / (1 - |Gamma|), >= 1."""
    return (1.0 + g.magnitude) / (1.0 - g.magnitude)


def gamma_mag_from_extrema(v_max: float, v_min: float) -> float:
    """Reflection magnitude from voltage extrema: (Vmax - Vmin) / (Vmax + Vmin).

    ``v_max`` and ``v_min`` are linear voltage amplitudes (convert dB
    readings with factor 20 first).  Inverse of ``swr_of_gamma`` in the
    sense gamma_mag_from_extrema(1 + g, 1 - g) == g.

    Raises
    ------
    InvalidExtremaError
        If v_min <= 0 or v_max < v_min.
    """
    if v_min <= 0.0 or v_max < v_min:
        raise InvalidExtremaError(f"need v_max >= v_min > 0, got v_max={v_max}, v_min={v_min}")
    return (v_max - v_min) / (v_max + v_min)


def predicted_received_power(m: ChannelModel, tx_power_dbm: float,
                             tx: AntennaSpec, rx: AntennaSpec, d):
    """Link-budget prediction in dBm: Ptx + Gtx + Grx - combined path loss.

    Raises
    ------
    BandMismatchError
        If the model's carrier frequency is outside either antenna's band.
    """
    for ant in (tx, rx):
        if not ant.covers(m.frequency):
            raise BandMismatchError(
                f"antenna {ant.band_name} ({ant.band_low_ghz}-{ant.band_high_ghz} GHz) does not cover "
                f"{m.frequency.center_ghz} GHz")
    out = tx_power_dbm + tx.gain_dbi + rx.gain_dbi - combined_path_loss(m, d)
    return out if np.ndim(out) else float(out)
