"""Parameter estimation for the standing-wave channel model.

The pipeline mirrors how one works up a distance sweep by hand:

1. ordinary least squares on (10*log10(d/d0), PL) gives the floating
   intercept alpha and path-loss exponent beta;
2. the fit-minus-measured residual series exposes the standing-wave ripple;
3. residual extrema give a first reflection magnitude via the SWR relation
   and the spacing of consecutive maxima gives a first wavenumber k = pi/T;
4. a coarse grid over (|Gamma|, phase, k) followed by derivative-free
   coordinate descent fine-tunes the standing-wave parameters by minimizing
   the RMS error of the combined model.

alpha and beta stay fixed at their OLS values during refinement.  All
functions are pure and deterministic: identical inputs produce bit-identical
FitReports, and grid/descent ties are broken toward smaller |Gamma|, then
smaller k.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInputError, InsufficientExtremaError, InvalidExtremaError
from .model import (
    TWO_PI,
    ChannelModel,
    ComplexReflection,
    Frequency,
    SfflParams,
    StandingWaveParams,
    gamma_mag_from_extrema,
    path_loss_sffl,
)


@dataclass(frozen=True)
class MeasurementSet:
    """Distance-swept path-loss samples at a single center frequency.

    ``samples`` is an ordered tuple of (distance_m, path_loss_db) pairs with
    strictly increasing distances, all at or beyond the reference distance.
    """

    frequency: Frequency
    samples: tuple
    d0_m: float = 0.10

    def __post_init__(self):
        object.__setattr__(self, "samples", tuple((float(d), float(pl)) for d, pl in self.samples))
        d = np.array([s[0] for s in self.samples])
        pl = np.array([s[1] for s in self.samples])
        if len(self.samples) < 3:
            raise DegenerateInputError(f"insufficient samples: need at least 3, got {len(self.samples)}")
        if not np.all(np.diff(d) > 0):
            raise DegenerateInputError("distances must be strictly increasing")
        if d[0] < self.d0_m:
            raise DegenerateInputError(f"all distances must be >= d0={self.d0_m} m, got {d[0]}")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(pl))):
            raise DegenerateInputError("distances and path-loss values must be finite")

    @property
    def distances_m(self) -> np.ndarray:
        return np.array([s[0] for s in self.samples])

    @property
    def path_loss_db(self) -> np.ndarray:
        return np.array([s[1] for s in self.samples])


@dataclass(frozen=True)
class ResidualSeries:
    """Fit-minus-measured series on the measurement grid.

    The sign convention makes constructive standing-wave interference show
    up as a positive residual: residual = fitted power law - measured PL.
    """

    points: tuple

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((float(d), float(v)) for d, v in self.points))

    @property
    def distances_m(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def residual_db(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


@dataclass(frozen=True)
class FitConfig:
    """Grid densities and tolerances for the refinement search.

    The defaults are the repo-wide constants; the CLI exposes overrides.
    |Gamma| is searched on [0, gamma_max] with ``gamma_steps`` points, phase
    on [0, 2*pi) with ``phase_steps`` points (also used by the initial phase
    estimate) and k on (0, pi/min-distance-step] with ``k_steps`` points.
    """

    gamma_max: float = 0.99
    gamma_steps: int = 50
    phase_steps: int = 64
    k_steps: int = 200
    rms_tol_db: float = 1e-6
    max_iterations: int = 500
    fallback_gamma_mag: float = 0.05
    fallback_gamma_phase_rad: float = 0.0
    step_floor: float = 1e-12


DEFAULT_FIT_CONFIG = FitConfig()


@dataclass(frozen=True)
class FitReport:
    """Fitted model plus diagnostics of the estimation run.

    ``rms_combined_db <= rms_sffl_db`` always holds: the refinement search
    space contains |Gamma| = 0, which reduces to the plain power law.
    ``extrema_found`` is the total number of residual maxima and minima
    (zero means the initial Gamma estimate fell back to its default).
    """

    model: ChannelModel
    rms_sffl_db: float
    rms_combined_db: float
    initial_estimate: StandingWaveParams
    refined: bool
    iterations: int
    extrema_found: int


def _rms(values: np.ndarray) -> float:
    values = np.asarray(values, dtype=float)
    return float(np.sqrt(np.mean(values * values)))


def fit_sffl_ols(m: MeasurementSet) -> SfflParams:
    """Least-squares fit of (alpha, beta) on the log-distance line.

    Minimizes sum(PL_i - alpha - 10*beta*log10(d_i/d0))^2 via the
    numerically stable lstsq route; sigma is the population (divisor N)
    standard deviation of the fit residuals.
    """
    d = m.distances_m
    y = m.path_loss_db
    if len(d) < 3 or np.unique(d).size < 2:
        raise DegenerateInputError("OLS fit needs at least 3 samples at 2 distinct distances")
    x = 10.0 * np.log10(d / m.d0_m)
    design = np.column_stack([np.ones_like(x), x])
    coef, _, _, _ = np.linalg.lstsq(design, y, rcond=None)
    alpha, beta = float(coef[0]), float(coef[1])
    resid = y - (alpha + beta * x)
    return SfflParams(alpha, beta, float(np.std(resid)), m.d0_m)


def residuals(m: MeasurementSet, p: SfflParams) -> ResidualSeries:
    """Fit-minus-measured residuals on the measurement grid."""
    if p.d0_m != m.d0_m:
        raise DegenerateInputError(f"reference distance mismatch: fit d0={p.d0_m}, data d0={m.d0_m}")
    res = path_loss_sffl(p, m.distances_m) - m.path_loss_db
    return ResidualSeries(tuple(zip(m.distances_m.tolist(), res.tolist())))


def detect_extrema(r: ResidualSeries):
    """Interior local extrema of the residual series by 3-point comparison.

    Endpoints are never extrema.  A plateau of equal values counts once, at
    its leftmost point.  Returns (maxima, minima), each a list of
    (distance_m, residual_db) tuples in increasing distance order.
    """
    pts = r.points
    if len(pts) < 3:
        raise DegenerateInputError(f"extrema detection needs at least 3 points, got {len(pts)}")
    v = [p[1] for p in pts]
    maxima, minima = [], []
    for i in range(1, len(pts) - 1):
        if v[i - 1] < v[i] and v[i] >= v[i + 1]:
            maxima.append(pts[i])
        elif v[i - 1] > v[i] and v[i] <= v[i + 1]:
            minima.append(pts[i])
    return maxima, minima


def estimate_k_from_period(extrema) -> float:
    """Wavenumber from the spacing of consecutive same-kind extrema.

    Consecutive maxima (or minima) of the standing-wave gain are one full
    oscillation period T apart, and the gain period in distance is pi/k, so
    k = pi / mean(spacings).
    """
    if len(extrema) < 2:
        raise InsufficientExtremaError(
            f"period estimation needs at least 2 extrema, got {len(extrema)}")
    d = np.array([e[0] for e in extrema])
    period = float(np.mean(np.diff(d)))
    return math.pi / period


def initial_gamma_estimate(r: ResidualSeries, k_rad_per_m: float, d0_m: float,
                           config: FitConfig = DEFAULT_FIT_CONFIG) -> ComplexReflection:
    """First-cut reflection coefficient from residual extrema.

    The largest maximum and smallest minimum of the residual series are read
    as Vmax/Vmin in dB, converted to linear amplitude (factor 20), and pushed
    through the SWR relation |Gamma| = (Vmax - Vmin) / (Vmax + Vmin).  The
    phase is then picked by a grid search over [0, 2*pi) minimizing the RMS
    mismatch between the residuals and the standing-wave gain at the given
    (|Gamma|, k).

    Falls back to the documented default (|Gamma| = 0.05, phase 0) instead of
    raising when no maximum or no minimum exists; fit_channel flags that case
    through FitReport.extrema_found == 0.
    """
    maxima, minima = detect_extrema(r)
    if not maxima or not minima:
        return ComplexReflection(config.fallback_gamma_mag, config.fallback_gamma_phase_rad)
    vmax_db = max(v for _, v in maxima)
    vmin_db = min(v for _, v in minima)
    try:
        mag = gamma_mag_from_extrema(10.0 ** (vmax_db / 20.0), 10.0 ** (vmin_db / 20.0))
    except InvalidExtremaError:
        return ComplexReflection(config.fallback_gamma_mag, config.fallback_gamma_phase_rad)
    if mag >= 1.0:  # unreachable for finite dB extrema, guards float edge cases
        mag = config.fallback_gamma_mag

    theta = 2.0 * k_rad_per_m * (r.distances_m - d0_m)
    phases = np.arange(config.phase_steps) * (TWO_PI / config.phase_steps)
    msq = 1.0 + mag * mag + 2.0 * mag * np.cos(theta[None, :] + phases[:, None])
    gain = 10.0 * np.log10(msq)
    cost = np.sqrt(np.mean((r.residual_db[None, :] - gain) ** 2, axis=1))
    return ComplexReflection(mag, float(phases[int(np.argmin(cost))]))


def _gain_rms_objective(target: np.ndarray, dd: np.ndarray):
    """RMS error of the combined model as a function of (|Gamma|, phase, k).

    ``target`` is measured minus power-law prediction, so the combined-model
    error is target + gain and the objective is rms(target + gain).
    """

    def obj(g: float, phase: float, k: float) -> float:
        msq = 1.0 + g * g + 2.0 * g * np.cos(2.0 * k * dd + phase)
        return _rms(target + 10.0 * np.log10(msq))

    return obj


def refine_fit(m: MeasurementSet, p: SfflParams, init: StandingWaveParams,
               config: FitConfig = DEFAULT_FIT_CONFIG) -> FitReport:
    """Fine-tune (|Gamma|, phase, k) by coarse grid plus coordinate descent.

    Minimizes the RMS of (measured - combined model) with (alpha, beta) held
    fixed at ``p``.  Search space: |Gamma| in [0, gamma_max], phase in
    [0, 2*pi), k in (0, pi/min-step] (the alias limit of the distance grid).
    The coarse grid is reduced with first-occurrence argmin so RMS ties
    resolve toward smaller |Gamma|, then smaller k; descent sweeps the three
    coordinates with step halving until a full sweep improves the RMS by
    less than ``rms_tol_db`` (with steps at the halving floor) or the sweep
    cap is reached.

    Never raises: if nothing beats the RMS at ``init``, returns ``init``
    unchanged with refined=False.
    """
    if p.d0_m != m.d0_m:
        raise DegenerateInputError(f"reference distance mismatch: fit d0={p.d0_m}, data d0={m.d0_m}")
    d = m.distances_m
    dd = d - m.d0_m
    target = m.path_loss_db - path_loss_sffl(p, d)
    rms_sffl = _rms(target)
    obj = _gain_rms_objective(target, dd)

    k_max = math.pi / float(np.min(np.diff(d)))
    gammas = np.linspace(0.0, config.gamma_max, config.gamma_steps)
    phases = np.arange(config.phase_steps) * (TWO_PI / config.phase_steps)
    ks = np.linspace(k_max / config.k_steps, k_max, config.k_steps)

    # Full RMS cube with axes ordered (gamma, k, phase): flat argmin's
    # first-occurrence rule then implements the documented tie-break.
    cube = np.empty((len(gammas), len(ks), len(phases)))
    g_col = gammas[:, None, None]
    for ik, k in enumerate(ks):
        cosm = np.cos(2.0 * k * dd[None, :] + phases[:, None])           # (phase, n)
        gain = 10.0 * np.log10(1.0 + g_col * g_col + 2.0 * g_col * cosm[None, :, :])
        err = target[None, None, :] + gain                               # (gamma, phase, n)
        cube[:, ik, :] = np.sqrt(np.mean(err * err, axis=-1))
    ig, ik, ip = np.unravel_index(int(np.argmin(cube)), cube.shape)

    rms_init = obj(init.gamma.magnitude, init.gamma.phase_rad, init.k_rad_per_m)
    cur = [float(gammas[ig]), float(phases[ip]), float(ks[ik])]
    best = float(cube[ig, ik, ip])
    if rms_init < best:
        cur = [init.gamma.magnitude, init.gamma.phase_rad, init.k_rad_per_m]
        best = rms_init

    lo_hi = (
        (0.0, config.gamma_max),
        (0.0, TWO_PI * (1.0 - 1e-15)),
        (min(config.step_floor, k_max), k_max),
    )
    steps = [
        config.gamma_max / (config.gamma_steps - 1),
        TWO_PI / config.phase_steps,
        k_max / config.k_steps,
    ]

    iterations = 0
    while iterations < config.max_iterations:
        iterations += 1
        before = best
        for axis in range(3):
            x = cur[axis]
            lo, hi = lo_hi[axis]
            candidates = []
            for c in (x - steps[axis], x + steps[axis]):
                c = min(max(c, lo), hi)
                if c != x:
                    trial = list(cur)
                    trial[axis] = c
                    candidates.append((obj(*trial), c))
            if not candidates:
                continue
            candidates.sort(key=lambda t: (t[0], t[1]))
            val, c = candidates[0]
            # Strict improvement always moves; an exact RMS tie moves only
            # toward smaller |Gamma| or smaller k.
            if val < best or (val == best and axis != 1 and c < x):
                best = val
                cur[axis] = c
        if before - best < config.rms_tol_db:
            if max(steps) <= config.step_floor:
                break
            steps = [s / 2.0 for s in steps]

    refined = best < rms_init
    if refined:
        standing = StandingWaveParams(ComplexReflection(cur[0], cur[1]), cur[2])
        rms_combined = best
    else:
        standing = init
        rms_combined = rms_init
    return FitReport(
        model=ChannelModel(m.frequency, p, standing),
        rms_sffl_db=rms_sffl,
        rms_combined_db=rms_combined,
        initial_estimate=init,
        refined=refined,
        iterations=iterations,
        extrema_found=0,
    )


def fit_channel(m: MeasurementSet, config: FitConfig = DEFAULT_FIT_CONFIG) -> FitReport:
    """End-to-end fit: OLS line, residual analysis, then refinement.

    k is seeded from the spacing of residual maxima (minima when maxima are
    scarce); with fewer than two of either, the seed defaults to the middle
    of the k search range, pi/(2*min-step), and the refinement grid finds k
    on its own.  Deterministic for a given MeasurementSet.
    """
    p = fit_sffl_ols(m)
    r = residuals(m, p)
    maxima, minima = detect_extrema(r)
    if len(maxima) >= 2:
        k0 = estimate_k_from_period(maxima)
    elif len(minima) >= 2:
        k0 = estimate_k_from_period(minima)
    else:
        k0 = math.pi / (2.0 * float(np.min(np.diff(m.distances_m))))
    init = StandingWaveParams(initial_gamma_estimate(r, k0, m.d0_m, config), k0)
    report = refine_fit(m, p, init, config)
    return dataclasses.replace(report, extrema_found=len(maxima) + len(minima))
