"""Hourly traffic profiles for the two deployment-area kinds.

A raw measurement log (per-cell hourly volumes) collapses to one mean
24-hour shape. The residential profile is that shape rescaled so its
peak sits at a fixed fraction of the per-station capacity; the
industrial profile is the same curve circularly shifted so activity
concentrates in working hours instead of the evening.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import DataError, SchemaError
from .geometry import AreaKind
from .spatial import DEFAULT_MAX_CAPACITY_MBPS

HOURS = 24
DEFAULT_PEAK_FRACTION = 0.95
DEFAULT_SHIFT_HOURS = 14

#: Relative 24-hour load shape (fraction of the daily peak), evening-peaked
#: like a residential neighborhood: minimum before dawn, steady climb
#: through the day, maximum at 23:00. Used when no measurement log is given.
SYNTHETIC_RELATIVE_SHAPE = (
    0.74, 0.55, 0.42, 0.34, 0.30, 0.32, 0.38, 0.46,
    0.55, 0.62, 0.67, 0.71, 0.74, 0.76, 0.77, 0.78,
    0.785, 0.81, 0.84, 0.88, 0.92, 0.96, 0.99, 1.00,
)


@dataclass(frozen=True)
class TrafficRecord:
    """One cell-hour measurement from the input log."""

    cell_id: str
    timestamp: datetime
    volume_mbps: float

    def __post_init__(self):
        if self.volume_mbps < 0:
            raise ValueError(f"volume must be >= 0, got {self.volume_mbps}")


@dataclass(frozen=True)
class HourlyProfile:
    """A 24-value traffic curve in Mbps, indexed by hour of day."""

    kind: AreaKind
    mbps: tuple[float, ...]

    def __post_init__(self):
        if len(self.mbps) != HOURS:
            raise ValueError(f"profile needs {HOURS} hourly values, got {len(self.mbps)}")
        if any(v < 0 for v in self.mbps):
            raise ValueError("profile values must be >= 0")

    @property
    def peak_mbps(self) -> float:
        return max(self.mbps)

    @property
    def peak_hour(self) -> int:
        return int(np.argmax(self.mbps))

    def as_array(self) -> np.ndarray:
        return np.asarray(self.mbps, dtype=float)


def build_hourly_profile(records: Sequence[TrafficRecord]) -> np.ndarray:
    """Mean volume per hour of day across all cells and days.

    Every hour 0..23 must be observed at least once; a gap means the log
    cannot define a full daily curve, which is an error rather than a
    silent zero.
    """
    if not records:
        raise DataError("traffic log is empty")
    sums = np.zeros(HOURS)
    counts = np.zeros(HOURS, dtype=int)
    for r in records:
        h = r.timestamp.hour
        sums[h] += r.volume_mbps
        counts[h] += 1
    missing = np.flatnonzero(counts == 0)
    if missing.size:
        raise DataError(f"traffic log has no entries for hours {missing.tolist()}")
    return sums / counts


def scale_to_peak(profile: np.ndarray, peak_mbps: float) -> np.ndarray:
    """Rescale so the maximum equals ``peak_mbps`` exactly."""
    profile = np.asarray(profile, dtype=float)
    top = profile.max()
    if top <= 0:
        raise DataError("cannot scale an all-zero profile")
    if peak_mbps <= 0:
        raise ValueError(f"target peak must be positive, got {peak_mbps}")
    return profile * (peak_mbps / top)


def circular_shift(profile: np.ndarray, hours: int) -> np.ndarray:
    """Rotate the daily curve forward by ``hours``: out[h] = in[(h - hours) mod 24]."""
    return np.roll(np.asarray(profile, dtype=float), hours)


def synthetic_raw_profile(peak_mbps: float = 1000.0) -> np.ndarray:
    """A plausible evening-peaked raw curve for runs without a measurement log."""
    return np.asarray(SYNTHETIC_RELATIVE_SHAPE) * peak_mbps


def profiles_for_layout(
    raw_profile: np.ndarray,
    max_capacity_mbps: float = DEFAULT_MAX_CAPACITY_MBPS,
    peak_fraction: float = DEFAULT_PEAK_FRACTION,
    shift_hours: int = DEFAULT_SHIFT_HOURS,
) -> dict[AreaKind, HourlyProfile]:
    """Derive both per-kind profiles from one raw daily curve.

    The residential curve is the raw shape scaled to
    ``peak_fraction * max_capacity_mbps``; the industrial curve is the
    scaled residential curve shifted by ``shift_hours`` so its busy
    stretch lands in the working day.
    """
    if not 0.0 < peak_fraction <= 1.0:
        raise ValueError(f"peak fraction must be in (0, 1], got {peak_fraction}")
    scaled = scale_to_peak(raw_profile, peak_fraction * max_capacity_mbps)
    shifted = circular_shift(scaled, shift_hours)
    return {
        AreaKind.RESIDENTIAL: HourlyProfile(AreaKind.RESIDENTIAL, tuple(float(v) for v in scaled)),
        AreaKind.INDUSTRIAL: HourlyProfile(AreaKind.INDUSTRIAL, tuple(float(v) for v in shifted)),
    }


TRAFFIC_CSV_COLUMNS = ("cell_id", "timestamp", "volume_mbps")


def read_traffic_csv(path: str | Path) -> list[TrafficRecord]:
    """Parse a per-cell hourly volume log with ISO 8601 timestamps."""
    out = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != TRAFFIC_CSV_COLUMNS:
            raise SchemaError(f"expected columns {TRAFFIC_CSV_COLUMNS}", path=str(path))
        for i, row in enumerate(reader, start=1):
            try:
                ts = datetime.fromisoformat(row["timestamp"])
                out.append(TrafficRecord(row["cell_id"], ts, float(row["volume_mbps"])))
            except (KeyError, ValueError) as exc:
                raise SchemaError(str(exc), row=i, path=str(path)) from exc
    if not out:
        raise SchemaError("traffic log has no data rows", path=str(path))
    return out


PROFILE_CSV_COLUMNS = ("kind", "hour", "mbps")


def write_profiles_csv(
    profiles: Mapping[AreaKind, HourlyProfile], path: str | Path
) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(PROFILE_CSV_COLUMNS)
        for kind in (AreaKind.INDUSTRIAL, AreaKind.RESIDENTIAL):
            profile = profiles[kind]
            for h, v in enumerate(profile.mbps):
                w.writerow([kind.value, h, repr(v)])


def read_profiles_csv(path: str | Path) -> dict[AreaKind, HourlyProfile]:
    values: dict[AreaKind, dict[int, float]] = {k: {} for k in AreaKind}
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != PROFILE_CSV_COLUMNS:
            raise SchemaError(f"expected columns {PROFILE_CSV_COLUMNS}", path=str(path))
        for i, row in enumerate(reader, start=1):
            try:
                values[AreaKind(row["kind"])][int(row["hour"])] = float(row["mbps"])
            except (KeyError, ValueError) as exc:
                raise SchemaError(str(exc), row=i, path=str(path)) from exc
    out = {}
    for kind, by_hour in values.items():
        if sorted(by_hour) != list(range(HOURS)):
            raise SchemaError(f"profile for {kind.value} does not cover hours 0..23",
                              path=str(path))
        out[kind] = HourlyProfile(kind, tuple(by_hour[h] for h in range(HOURS)))
    return out
