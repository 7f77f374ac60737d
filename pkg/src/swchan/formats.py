"""Campaign CSV and fit-report file formats.

Campaign files are plain CSV with a mandatory header naming the value
convention, either

    frequency_ghz,distance_m,path_loss_db
    frequency_ghz,distance_m,received_power_dbm

Reports are UTF-8 JSON documents with a fixed key order.  Every float the
tool writes uses 9 significant digits ('%.9g', '.' decimal separator, no
locale), so identical inputs produce byte-identical files; report values are
quantized to that precision when the Report object is built, which makes
parse(write(r)) == r exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, fields

from ._version import __version__
from .errors import FileFormatError
from .fitting import FitReport, MeasurementSet
from .model import ChannelModel, ComplexReflection, Frequency, SfflParams, StandingWaveParams

PATH_LOSS_COLUMNS = ("frequency_ghz", "distance_m", "path_loss_db")
RECEIVED_POWER_COLUMNS = ("frequency_ghz", "distance_m", "received_power_dbm")


def format_float(x: float) -> str:
    """Canonical float formatting for everything the tool writes."""
    return format(float(x), ".9g")


def quantize(x: float) -> float:
    """Round to the 9-significant-digit lattice used by the file formats."""
    return float(format_float(x))


def write_campaign_csv(rows, convention: str = "path_loss") -> str:
    """Serialize (frequency_ghz, distance_m, value) rows to campaign CSV text."""
    header = {
        "path_loss": PATH_LOSS_COLUMNS,
        "received_power": RECEIVED_POWER_COLUMNS,
    }[convention]
    lines = [",".join(header)]
    for freq, dist, value in rows:
        lines.append(",".join(format_float(v) for v in (freq, dist, value)))
    return "\n".join(lines) + "\n"


def read_campaign_csv(text: str):
    """Parse campaign CSV text into (convention, rows).

    rows are (frequency_ghz, distance_m, value) floats in file order.
    Raises FileFormatError with the 1-based line number for malformed rows.
    """
    lines = text.splitlines()
    if not lines:
        raise FileFormatError("empty campaign file (missing header)")
    header = tuple(col.strip() for col in lines[0].split(","))
    if header == PATH_LOSS_COLUMNS:
        convention = "path_loss"
    elif header == RECEIVED_POWER_COLUMNS:
        convention = "received_power"
    else:
        raise FileFormatError(
            f"unrecognized header {lines[0]!r}; expected "
            f"{','.join(PATH_LOSS_COLUMNS)!r} or {','.join(RECEIVED_POWER_COLUMNS)!r}", line=1)
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 3:
            raise FileFormatError(f"expected 3 comma-separated fields, got {len(parts)}", line=lineno)
        try:
            rows.append(tuple(float(p) for p in parts))
        except ValueError:
            raise FileFormatError(f"non-numeric field in row {line!r}", line=lineno) from None
    if not rows:
        raise FileFormatError("campaign file contains a header but no data rows")
    return convention, rows


def single_frequency(rows) -> float:
    """The one frequency of a campaign; error listing all found otherwise."""
    freqs = sorted({row[0] for row in rows})
    if len(freqs) != 1:
        raise FileFormatError(
            "fit expects exactly one frequency per file, found "
            + ", ".join(format_float(f) + " GHz" for f in freqs))
    return freqs[0]


def band_average_rows(rows, center_ghz: float):
    """Collapse a swept-frequency trace to one value per distance.

    Averages the dB values across all frequency rows sharing a distance
    (arithmetic mean of dB magnitudes) and stamps the given center
    frequency.  This is the documented reduction convention of this tool for
    VNA-style sweep exports.
    """
    by_distance: dict = {}
    order = []
    for _, dist, value in rows:
        if dist not in by_distance:
            by_distance[dist] = []
            order.append(dist)
        by_distance[dist].append(value)
    return [(center_ghz, dist, sum(by_distance[dist]) / len(by_distance[dist])) for dist in order]


def measurement_set_from_rows(rows, d0_m: float) -> MeasurementSet:
    """Build a MeasurementSet from path-loss rows (sorted by distance)."""
    freq = single_frequency(rows)
    ordered = sorted((dist, value) for _, dist, value in rows)
    return MeasurementSet(Frequency(freq), tuple(ordered), d0_m)


@dataclass(frozen=True)
class Report:
    """Flat, file-backed view of a FitReport; the tool's exchange record.

    Float fields live on the 9-significant-digit lattice of the file format
    (quantized at construction), so writing and re-reading a Report is the
    identity.
    """

    frequency_ghz: float
    alpha_db: float
    beta: float
    sigma_db: float
    d0_m: float
    gamma_mag: float
    gamma_phase_rad: float
    k_rad_per_m: float
    rms_sffl_db: float
    rms_combined_db: float
    extrema_found: int
    refined: bool
    tool_version: str = __version__

    def __post_init__(self):
        for f in fields(self):
            if f.type == "float":
                object.__setattr__(self, f.name, quantize(getattr(self, f.name)))
        object.__setattr__(self, "extrema_found", int(self.extrema_found))
        object.__setattr__(self, "refined", bool(self.refined))

    @classmethod
    def from_fit(cls, fit: FitReport) -> "Report":
        m = fit.model
        return cls(
            frequency_ghz=m.frequency.center_ghz,
            alpha_db=m.sffl.alpha_db,
            beta=m.sffl.beta,
            sigma_db=m.sffl.sigma_db,
            d0_m=m.sffl.d0_m,
            gamma_mag=m.standing.gamma.magnitude,
            gamma_phase_rad=m.standing.gamma.phase_rad,
            k_rad_per_m=m.standing.k_rad_per_m,
            rms_sffl_db=fit.rms_sffl_db,
            rms_combined_db=fit.rms_combined_db,
            extrema_found=fit.extrema_found,
            refined=fit.refined,
        )

    def to_channel_model(self) -> ChannelModel:
        return ChannelModel(
            Frequency(self.frequency_ghz),
            SfflParams(self.alpha_db, self.beta, self.sigma_db, self.d0_m),
            StandingWaveParams(ComplexReflection(self.gamma_mag, self.gamma_phase_rad),
                               self.k_rad_per_m),
        )


def write_report(r: Report) -> str:
    """Serialize a Report to its canonical JSON text (fixed key order)."""
    parts = []
    for f in fields(r):
        value = getattr(r, f.name)
        if isinstance(value, bool):
            rendered = "true" if value else "false"
        elif isinstance(value, int):
            rendered = str(value)
        elif isinstance(value, float):
            rendered = format_float(value)
        else:
            rendered = json.dumps(value)
        parts.append(f'  "{f.name}": {rendered}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def parse_report(text: str) -> Report:
    """Parse report JSON text back into a Report; schema is strict."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"report is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise FileFormatError("report must be a JSON object")
    expected = {f.name for f in fields(Report)}
    missing = expected - data.keys()
    unknown = data.keys() - expected
    if missing or unknown:
        raise FileFormatError(
            f"report schema mismatch: missing {sorted(missing)}, unknown {sorted(unknown)}")
    try:
        return Report(**data)
    except (TypeError, ValueError) as exc:
        raise FileFormatError(f"invalid report values: {exc}") from None
