"""Base-station placement: Poisson point processes inside deployment areas.

Station counts follow a Poisson law whose mean is either given directly
per area kind (387 industrial / 61 residential by default) or derived
from a per-km² intensity times the area surface. Given the count,
positions are independent and uniform over the square, which together
make the point pattern a conditioned Poisson point process.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import SchemaError
from .geometry import AreaKind, AreaSpec

DEFAULT_BANDWIDTH_MHZ = 400.0
DEFAULT_MAX_CAPACITY_MBPS = 2660.0


@dataclass(frozen=True)
class BaseStation:
    """One 5G small cell with its spectrum and top-speed budget."""

    id: int
    position: tuple[float, float]
    area_id: str
    bandwidth_mhz: float = DEFAULT_BANDWIDTH_MHZ
    max_capacity_mbps: float = DEFAULT_MAX_CAPACITY_MBPS

    def __post_init__(self):
        if self.bandwidth_mhz <= 0 or self.max_capacity_mbps <= 0:
            raise ValueError("bandwidth and capacity must be positive")


@dataclass(frozen=True)
class PppConfig:
    """Poisson point process parameters for both area kinds.

    ``mode`` selects how the mean count of an area is obtained:
    ``"mean"`` (default) uses the calibrated per-area means directly,
    ``"intensity"`` multiplies the per-km² intensity by the area surface.
    """

    mean_count_industrial: float = 387.0
    mean_count_residential: float = 61.0
    intensity_industrial: float = 53.4
    intensity_residential: float = 8.347
    mode: str = "mean"

    def __post_init__(self):
        if self.mode not in ("mean", "intensity"):
            raise ValueError(f"mode must be 'mean' or 'intensity', got {self.mode!r}")
        for v in (self.mean_count_industrial, self.mean_count_residential,
                  self.intensity_industrial, self.intensity_residential):
            if v <= 0:
                raise ValueError("PPP means and intensities must be positive")

    def mean_for(self, area: AreaSpec) -> float:
        if self.mode == "intensity":
            lam = (self.intensity_industrial if area.kind is AreaKind.INDUSTRIAL
                   else self.intensity_residential)
            return lam * area.area_km2
        return (self.mean_count_industrial if area.kind is AreaKind.INDUSTRIAL
                else self.mean_count_residential)


def sample_bs_count(mean: float, rng: np.random.Generator) -> int:
    """Exact Poisson draw of the number of stations in one area."""
    if mean <= 0:
        raise ValueError(f"Poisson mean must be positive, got {mean}")
    return int(rng.poisson(mean))


def place_stations(
    area: AreaSpec,
    count: int,
    rng: np.random.Generator,
    start_id: int = 0,
    bandwidth_mhz: float = DEFAULT_BANDWIDTH_MHZ,
    max_capacity_mbps: float = DEFAULT_MAX_CAPACITY_MBPS,
) -> list[BaseStation]:
    """Scatter ``count`` stations uniformly over ``area``.

    Ids run from ``start_id`` so stations of a multi-area deployment can
    share one id space. Positions are drawn as an (n, 2) block in one
    call, which keeps the draw order independent of ``count`` chunking.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    xs = rng.uniform(area.x_min, area.x_max, size=count)
    ys = rng.uniform(area.y_min, area.y_max, size=count)
    return [BaseStation(start_id + i, (float(xs[i]), float(ys[i])), area.id,
                        bandwidth_mhz, max_capacity_mbps)
            for i in range(count)]


def sample_area_stations(
    area: AreaSpec,
    ppp: PppConfig,
    rng: np.random.Generator,
    start_id: int = 0,
    bandwidth_mhz: float = DEFAULT_BANDWIDTH_MHZ,
    max_capacity_mbps: float = DEFAULT_MAX_CAPACITY_MBPS,
) -> list[BaseStation]:
    """Poisson count then uniform placement, one area."""
    count = sample_bs_count(ppp.mean_for(area), rng)
    return place_stations(area, count, rng, start_id, bandwidth_mhz, max_capacity_mbps)


def nearest_stations(
    stations: Sequence[BaseStation], point: tuple[float, float], k: int
) -> list[BaseStation]:
    """The ``k`` stations closest to ``point``, nearest first.

    Ties in distance break toward the lower station id so results do not
    depend on input order. Returns fewer than ``k`` when the pool is
    smaller.
    """
    if k <= 0:
        return []
    if not stations:
        return []
    xs = np.array([s.position[0] for s in stations])
    ys = np.array([s.position[1] for s in stations])
    ids = np.array([s.id for s in stations])
    d2 = (xs - point[0]) ** 2 + (ys - point[1]) ** 2
    order = np.lexsort((ids, d2))
    return [stations[int(i)] for i in order[:min(k, len(stations))]]


class StationIndex:
    """Array-backed view of one area's stations for repeated nearest queries.

    Precomputing the coordinate arrays once per area amortizes the cost
    over the many per-event queries of a simulation run.
    """

    def __init__(self, stations: Sequence[BaseStation]):
        self.stations = list(stations)
        self._xs = np.array([s.position[0] for s in self.stations])
        self._ys = np.array([s.position[1] for s in self.stations])
        self._ids = np.array([s.id for s in self.stations])

    def __len__(self) -> int:
        return len(self.stations)

    def nearest(self, point: tuple[float, float], k: int) -> list[BaseStation]:
        if k <= 0 or not self.stations:
            return []
        d2 = (self._xs - point[0]) ** 2 + (self._ys - point[1]) ** 2
        k = min(k, len(self.stations))
        order = np.lexsort((self._ids, d2))
        return [self.stations[int(i)] for i in order[:k]]


def stations_by_area(stations: Iterable[BaseStation]) -> dict[str, list[BaseStation]]:
    out: dict[str, list[BaseStation]] = {}
    for s in stations:
        out.setdefault(s.area_id, []).append(s)
    return out


STATIONS_CSV_COLUMNS = ("bs_id", "area_id", "x_km", "y_km",
                        "bandwidth_mhz", "max_capacity_mbps")


def write_stations_csv(stations: Iterable[BaseStation], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(STATIONS_CSV_COLUMNS)
        for s in stations:
            w.writerow([s.id, s.area_id, repr(s.position[0]), repr(s.position[1]),
                        repr(s.bandwidth_mhz), repr(s.max_capacity_mbps)])


def read_stations_csv(path: str | Path) -> list[BaseStation]:
    out = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != STATIONS_CSV_COLUMNS:
            raise SchemaError(f"expected columns {STATIONS_CSV_COLUMNS}", path=str(path))
        for i, row in enumerate(reader, start=1):
            try:
                out.append(BaseStation(
                    int(row["bs_id"]), (float(row["x_km"]), float(row["y_km"])),
                    row["area_id"], float(row["bandwidth_mhz"]),
                    float(row["max_capacity_mbps"])))
            except (KeyError, ValueError) as exc:
                raise SchemaError(str(exc), row=i, path=str(path)) from exc
    return out
