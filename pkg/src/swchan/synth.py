"""Seeded synthetic measurement generation and the complex standing-wave oracle.

Reproducibility contract
------------------------
Synthetic campaigns are golden-file tested, so the random number generation
is pinned to a named, portable algorithm rather than any platform default:

* Uniforms come from SplitMix64 (Steele, Lea & Flood's 64-bit mixer).  The
  state advances by the odd constant 0x9E3779B97F4A7C15 per draw and the
  output is the xor-shift/multiply finalizer of the new state.  A 53-bit
  mantissa is taken from the top bits, giving doubles on a 2^-53 lattice.
* Gaussians use the explicit Box-Muller transform: for each sample two
  uniforms u1, u2 are drawn in order and

      z = sqrt(-2 * ln(1 - u1)) * cos(2 * pi * u2)

  (1 - u1 keeps the log argument in (0, 1]).  One Gaussian is produced per
  uniform pair; the sine twin is discarded so the stream layout stays
  trivially portable.

Any implementation of these two steps, in any language, reproduces the
generated measurement sets bit-for-bit for a given seed.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidGridError
from .fitting import MeasurementSet
from .model import TWO_PI, ChannelModel, ComplexReflection, combined_path_loss

_MASK64 = (1 << 64) - 1

# Default measurement grid of the bench campaign: 10.16 cm to 81.28 cm in
# 5.08 cm (2 inch) increments, 15 positions.
DEFAULT_GRID = (0.1016, 0.8128, 0.0508)


class SplitMix64:
    """Minimal SplitMix64 stream; see the module docstring for the contract."""

    def __init__(self, seed: int):
        self._state = int(seed) & _MASK64

    def next_uint64(self) -> int:
        self._state = (self._state + 0x9E3779B97F4A7C15) & _MASK64
        z = self._state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_uniform(self) -> float:
        """Double in [0, 1) on the 2^-53 lattice."""
        return (self.next_uint64() >> 11) * 2.0 ** -53

    def next_gaussian(self) -> float:
        """Standard normal via Box-Muller (cosine branch, two uniforms)."""
        u1 = self.next_uniform()
        u2 = self.next_uniform()
        return math.sqrt(-2.0 * math.log(1.0 - u1)) * math.cos(TWO_PI * u2)


def standard_normals(seed: int, n: int) -> np.ndarray:
    """The first ``n`` Gaussian draws of the seeded stream."""
    rng = SplitMix64(seed)
    return np.array([rng.next_gaussian() for _ in range(n)])


def grid_distances(start_m: float, stop_m: float, step_m: float) -> np.ndarray:
    """Expand a (start, stop, step) sweep into explicit distances.

    The stop value is included when it lies on the step lattice (within float
    tolerance), matching the bench campaign convention.
    """
    if step_m <= 0 or stop_m <= start_m:
        raise InvalidGridError(f"grid needs step > 0 and stop > start, got {start_m}:{stop_m}:{step_m}")
    n = int(math.floor((stop_m - start_m) / step_m + 1e-9)) + 1
    if n < 3:
        raise InvalidGridError(f"grid {start_m}:{stop_m}:{step_m} produces {n} distances, need >= 3")
    return start_m + step_m * np.arange(n)


@dataclass(frozen=True)
class SynthConfig:
    """Forward-model configuration for one synthetic campaign.

    ``distances`` is either an explicit sequence of meters or a
    (start_m, stop_m, step_m) grid; the default is the bench grid.
    ``sigma_db`` is the shadow-fading standard deviation and ``seed`` feeds
    the SplitMix64 stream.  ``forward_amplitude`` is the forward-wave
    amplitude used by the complex oracle; it cancels in the normalized gain,
    so generation itself only depends on the model.
    """

    model: ChannelModel
    distances: tuple = DEFAULT_GRID
    sigma_db: float = 0.0
    seed: int = 0
    forward_amplitude: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "distances", tuple(float(x) for x in self.distances))
        if len(self.distances) == 0:
            raise InvalidGridError("distances must not be empty")
        if self.sigma_db < 0:
            raise InvalidGridError(f"sigma_db must be >= 0, got {self.sigma_db}")
        if self.forward_amplitude <= 0:
            raise InvalidGridError(f"forward amplitude must be positive, got {self.forward_amplitude}")

    def distance_array(self) -> np.ndarray:
        # A 3-tuple whose last entry is below its second is a (start, stop,
        # step) grid; explicit point triples are strictly increasing, so the
        # two readings cannot collide on valid input.
        if len(self.distances) == 3 and self.distances[2] < self.distances[1]:
            d = grid_distances(*self.distances)
        else:
            d = np.asarray(self.distances, dtype=float)
        if d.size < 3:
            raise InvalidGridError(f"need at least 3 distances, got {d.size}")
        if np.any(np.diff(d) <= 0):
            raise InvalidGridError("distances must be strictly increasing")
        if d[0] < self.model.sffl.d0_m:
            raise InvalidGridError(f"distances must be >= d0={self.model.sffl.d0_m} m")
        return d


def generate_measurements(c: SynthConfig) -> MeasurementSet:
    """Sample the forward model: combined path loss plus Gaussian shadow fading.

    PL_i = combined_path_loss(d_i) + sigma_db * z_i with z_i from the seeded
    SplitMix64/Box-Muller stream in distance order.  sigma_db = 0 returns the
    exact deterministic forward model; identical configs (same seed) produce
    bit-identical measurement sets.
    """
    d = c.distance_array()
    pl = np.asarray(combined_path_loss(c.model, d), dtype=float)
    if c.sigma_db > 0:
        pl = pl + c.sigma_db * standard_normals(c.seed, d.size)
    return MeasurementSet(c.model.frequency, tuple(zip(d.tolist(), pl.tolist())), c.model.sffl.d0_m)


def oracle_standing_wave(gamma: ComplexReflection, k_rad_per_m: float, d: float,
                         d0_m: float, a: complex = 1.0 + 0.0j):
    """Standing wave by explicit complex superposition; the independent oracle.

    Builds the forward wave a*exp(-i*k*(d-d0)) and the reflected wave
    Gamma*a*exp(+i*k*(d-d0)) as raw complex exponentials, sums them, and
    returns (v_net, |v_net|^2) with the magnitude taken as v_net * conj(v_net).
    No algebraic simplification happens here, which is the point: the closed
    form in :func:`swchan.model.standing_wave_magnitude_sq` is verified
    against this routine.
    """
    if d < d0_m:
        raise InvalidGridError(f"oracle needs d >= d0, got d={d}, d0={d0_m}")
    a = complex(a)
    phase = k_rad_per_m * (d - d0_m)
    v_f = cmath.exp(-1j * phase) * a
    v_r = gamma.as_complex * cmath.exp(1j * phase) * a
    v_net = v_f + v_r
    return v_net, (v_net * v_net.conjugate()).real
