"""Command-line interface: simulate, fit, predict, export-standing-wave.

Exit codes are stable for scripting: 0 success, 1 usage or flag-validation
error, 2 data error (unreadable/malformed files, degenerate measurement
sets, band mismatches).  All output files and stdout payloads use the fixed
9-significant-digit float formatting from :mod:`swchan.formats`, so equal
inputs give byte-identical outputs.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys

import numpy as np

from ._version import __version__
from .errors import SwchanError
from .fitting import DEFAULT_FIT_CONFIG, fit_channel
from .formats import (
    Report,
    band_average_rows,
    format_float,
    measurement_set_from_rows,
    parse_report,
    read_campaign_csv,
    single_frequency,
    write_campaign_csv,
    write_report,
)
from .model import (
    ANTENNA_PRESETS,
    AntennaSpec,
    ChannelModel,
    ComplexReflection,
    Frequency,
    SfflParams,
    StandingWaveParams,
    combined_path_loss,
    path_loss_sffl,
    predicted_received_power,
    standing_wave_gain_db,
    standing_wave_magnitude_sq,
)
from .synth import DEFAULT_GRID, SynthConfig, generate_measurements, grid_distances


class _UsageError(Exception):
    """Flag-level problem discovered after argparse; maps to exit code 1."""


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags by default; the documented contract
    # reserves 2 for data errors, so usage problems exit 1 instead.
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _parse_gamma(text: str) -> ComplexReflection:
    """Parse 'mag' or 'mag:phase_deg' into a reflection coefficient."""
    parts = text.split(":")
    if len(parts) not in (1, 2):
        raise _UsageError(f"--gamma expects MAG or MAG:PHASE_DEG, got {text!r}")
    try:
        mag = float(parts[0])
        phase_deg = float(parts[1]) if len(parts) == 2 else 0.0
    except ValueError:
        raise _UsageError(f"--gamma expects numeric MAG[:PHASE_DEG], got {text!r}") from None
    try:
        return ComplexReflection(mag, math.radians(phase_deg))
    except ValueError as exc:
        raise _UsageError(str(exc)) from None


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"--grid expects START:STOP:STEP, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise _UsageError(f"--grid expects numeric START:STOP:STEP, got {text!r}") from None


def _resolve_antenna(name_or_path: str) -> AntennaSpec:
    """Preset name (WR-2.2/WR-4.3/WR-6.5) or a JSON file with the same keys."""
    if name_or_path in ANTENNA_PRESETS:
        return ANTENNA_PRESETS[name_or_path]
    import json

    with open(name_or_path, encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        return AntennaSpec(**data)
    except (TypeError, ValueError) as exc:
        raise SwchanError(f"invalid antenna spec {name_or_path!r}: {exc}") from None


def _emit(text: str, output: str | None) -> None:
    if output is None or output == "-":
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _csv_text(header, rows) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_float(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _add_output_flag(sub) -> None:
    sub.add_argument("-o", "--output", default=None, help="output file (default: stdout)")


def _build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="swchan",
                     description="Standing-wave terahertz LoS channel model toolkit")
    parser.add_argument("--version", action="version", version=f"swchan {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[], help="generate a synthetic measurement campaign CSV")
    p.add_argument("--frequency-ghz", type=float, default=140.0)
    p.add_argument("--alpha", type=float, default=70.0, help="floating intercept at d0, dB")
    p.add_argument("--beta", type=float, default=2.0, help="path-loss exponent")
    p.add_argument("--gamma", default="0:0", help="reflection coefficient MAG[:PHASE_DEG]")
    p.add_argument("--k", type=float, default=10.0 * math.pi, help="effective wavenumber, rad/m")
    p.add_argument("--sigma", type=float, default=0.0, help="shadow-fading std dev, dB")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (required when --sigma > 0)")
    p.add_argument("--grid", default=None, help="distance sweep START:STOP:STEP in meters "
                                                f"(default {DEFAULT_GRID[0]}:{DEFAULT_GRID[1]}:{DEFAULT_GRID[2]})")
    p.add_argument("--d0", type=float, default=0.10, help="reference distance, m")
    _add_output_flag(p)
    p.set_defaults(run=_cmd_simulate)

    p = sub.add_parser("fit", help="fit the channel model to a campaign CSV")
    p.add_argument("input", help="campaign CSV path, or - for stdin")
    p.add_argument("--d0", type=float, default=0.10, help="reference distance, m")
    p.add_argument("--tx-power-dbm", type=float, default=None,
                   help="transmit power (received-power campaigns)")
    p.add_argument("--tx-antenna", default=None, help="preset name or antenna spec JSON")
    p.add_argument("--rx-antenna", default=None, help="preset name or antenna spec JSON")
    p.add_argument("--band-average", type=float, default=None, metavar="CENTER_GHZ",
                   help="collapse a swept-frequency trace to one mean-dB value per distance "
                        "and stamp CENTER_GHZ")
    p.add_argument("--curves", default=None, metavar="PREFIX",
                   help="also write PREFIX_model.csv (dense fitted curves) and "
                        "PREFIX_residuals.csv (per-sample residuals)")
    p.add_argument("--curve-points", type=int, default=1000, help="dense-grid size for --curves")
    p.add_argument("--gamma-steps", type=int, default=DEFAULT_FIT_CONFIG.gamma_steps)
    p.add_argument("--phase-steps", type=int, default=DEFAULT_FIT_CONFIG.phase_steps)
    p.add_argument("--k-steps", type=int, default=DEFAULT_FIT_CONFIG.k_steps)
    p.add_argument("--max-iter", type=int, default=DEFAULT_FIT_CONFIG.max_iterations)
    p.add_argument("--rms-tol", type=float, default=DEFAULT_FIT_CONFIG.rms_tol_db)
    _add_output_flag(p)
    p.set_defaults(run=_cmd_fit)

    p = sub.add_parser("predict", help="tabulate path loss and received power from a report")
    p.add_argument("report", help="fit report JSON path")
    p.add_argument("--distances", default=None, help="comma-separated distances in meters")
    p.add_argument("--grid", default=None, help="distance sweep START:STOP:STEP in meters")
    p.add_argument("--tx-antenna", required=True, help="preset name or antenna spec JSON")
    p.add_argument("--rx-antenna", required=True, help="preset name or antenna spec JSON")
    p.add_argument("--tx-power-dbm", type=float, default=5.0)
    _add_output_flag(p)
    p.set_defaults(run=_cmd_predict)

    p = sub.add_parser("export-standing-wave",
                       help="plot-ready standing-wave curves for one or more reflection coefficients")
    p.add_argument("--gamma", action="append", required=True,
                   help="reflection coefficient MAG[:PHASE_DEG]; repeatable")
    p.add_argument("--k", type=float, default=2.0 * math.pi, help="wavenumber, rad/m")
    p.add_argument("--grid", default="0:1:0.0005",
                   help="distance sweep START:STOP:STEP in meters; START is the phase reference d0")
    _add_output_flag(p)
    p.set_defaults(run=_cmd_export)

    return parser


def _cmd_simulate(args) -> int:
    if args.sigma > 0 and args.seed is None:
        raise _UsageError("--seed is required when --sigma > 0 (reproducibility contract)")
    gamma = _parse_gamma(args.gamma)
    grid = _parse_grid(args.grid) if args.grid else DEFAULT_GRID
    try:
        model = ChannelModel(
            Frequency(args.frequency_ghz),
            SfflParams(args.alpha, args.beta, max(args.sigma, 0.0), args.d0),
            StandingWaveParams(gamma, args.k),
        )
        config = SynthConfig(model, grid, args.sigma, args.seed if args.seed is not None else 0)
    except ValueError as exc:
        raise _UsageError(str(exc)) from None

    measurements = generate_measurements(config)
    rows = [(args.frequency_ghz, d, pl) for d, pl in measurements.samples]
    _emit(write_campaign_csv(rows), args.output)
    return 0


def _read_input_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _cmd_fit(args) -> int:
    if args.d0 <= 0:
        raise _UsageError(f"--d0 must be positive, got {args.d0}")
    config = dataclasses.replace(
        DEFAULT_FIT_CONFIG,
        gamma_steps=args.gamma_steps,
        phase_steps=args.phase_steps,
        k_steps=args.k_steps,
        max_iterations=args.max_iter,
        rms_tol_db=args.rms_tol,
    )

    convention, rows = read_campaign_csv(_read_input_text(args.input))
    if args.band_average is not None:
        rows = band_average_rows(rows, args.band_average)
    if convention == "received_power":
        if args.tx_power_dbm is None or args.tx_antenna is None or args.rx_antenna is None:
            raise _UsageError("received-power campaigns need --tx-power-dbm, --tx-antenna and --rx-antenna")
        tx = _resolve_antenna(args.tx_antenna)
        rx = _resolve_antenna(args.rx_antenna)
        freq = Frequency(single_frequency(rows))
        for ant in (tx, rx):
            if not ant.covers(freq):
                raise SwchanError(
                    f"antenna {ant.band_name} ({ant.band_low_ghz}-{ant.band_high_ghz} GHz) "
                    f"does not cover {freq.center_ghz} GHz")
        offset = args.tx_power_dbm + tx.gain_dbi + rx.gain_dbi
        rows = [(f, d, offset - prx) for f, d, prx in rows]

    measurements = measurement_set_from_rows(rows, args.d0)
    fit = fit_channel(measurements, config)
    _emit(write_report(Report.from_fit(fit)), args.output)

    if args.curves:
        d = measurements.distances_m
        dense = np.linspace(d[0], d[-1], args.curve_points)
        sffl = path_loss_sffl(fit.model.sffl, dense)
        gain = standing_wave_gain_db(fit.model.standing, dense, fit.model.sffl.d0_m)
        _emit(_csv_text(("distance_m", "path_loss_sffl_db", "standing_wave_gain_db",
                         "path_loss_combined_db"),
                        zip(dense, sffl, gain, sffl - gain)),
              f"{args.curves}_model.csv")
        res = path_loss_sffl(fit.model.sffl, d) - measurements.path_loss_db
        _emit(_csv_text(("distance_m", "residual_db"), zip(d, res)),
              f"{args.curves}_residuals.csv")
    return 0


def _cmd_predict(args) -> int:
    if args.distances is None and args.grid is None:
        raise _UsageError("predict needs --distances or --grid")
    if args.distances is not None:
        try:
            distances = np.array([float(v) for v in args.distances.split(",")])
        except ValueError:
            raise _UsageError(f"--distances expects comma-separated numbers, got {args.distances!r}") from None
    else:
        distances = grid_distances(*_parse_grid(args.grid))

    with open(args.report, encoding="utf-8") as fh:
        report = parse_report(fh.read())
    model = report.to_channel_model()
    tx = _resolve_antenna(args.tx_antenna)
    rx = _resolve_antenna(args.rx_antenna)
    pl = combined_path_loss(model, distances)
    prx = predicted_received_power(model, args.tx_power_dbm, tx, rx, distances)
    _emit(_csv_text(("distance_m", "path_loss_db", "received_power_dbm"),
                    zip(distances, pl, prx)), args.output)
    return 0


def _cmd_export(args) -> int:
    gammas = [_parse_gamma(g) for g in args.gamma]
    if args.k <= 0:
        raise _UsageError(f"--k must be positive, got {args.k}")
    start, stop, step = _parse_grid(args.grid)
    distances = grid_distances(start, stop, step)
    rows = []
    for gamma in gammas:
        standing = StandingWaveParams(gamma, args.k)
        msq = standing_wave_magnitude_sq(standing, distances, start)
        gain = standing_wave_gain_db(standing, distances, start)
        for d, m, g in zip(distances, msq, gain):
            rows.append((gamma.magnitude, gamma.phase_rad, d, math.sqrt(m), m, g))
    _emit(_csv_text(("gamma_mag", "gamma_phase_rad", "distance_m", "v_net_magnitude",
                     "magnitude_sq", "gain_db"), rows), args.output)
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.run(args)
    except _UsageError as exc:
        print(f"swchan: error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"swchan: error: cannot read {exc.filename!r}: file not found", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"swchan: error: {exc}", file=sys.stderr)
        return 2
    except SwchanError as exc:
        print(f"swchan: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
