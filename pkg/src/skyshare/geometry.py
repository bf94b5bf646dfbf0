"""City geometry: deployment areas, overlap constraints, coverage queries.

The city is a square of 100 km² by default. Deployment areas are
axis-aligned squares of 8 km²: one dense industrial area (IA) switched on
in year 1 and one residential area (RA) added in each following year.
RAs never overlap each other; the IA may overlap each RA by at most a
configurable fraction of its own surface (10% by default).
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
import numpy as np

from .errors import PlacementError, SchemaError

#: Side of an 8 km² square deployment area.
AREA_SIDE_KM = math.sqrt(8.0)

DEFAULT_MAX_OVERLAP = 0.10
DEFAULT_MAX_ATTEMPTS = 100_000


class AreaKind(str, Enum):
    INDUSTRIAL = "industrial"
    RESIDENTIAL = "residential"


@dataclass(frozen=True)
class CityExtent:
    """The square city region [0, side_km]²."""

    side_km: float = 10.0

    def __post_init__(self):
        if self.side_km <= 0:
            raise ValueError(f"city side must be positive, got {self.side_km}")

    @property
    def area_km2(self) -> float:
        return self.side_km * self.side_km

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.side_km and 0.0 <= y <= self.side_km


@dataclass(frozen=True)
class AreaSpec:
    """One square deployment area, identified by its center."""

    id: str
    kind: AreaKind
    center: tuple[float, float]
    side_km: float = AREA_SIDE_KM
    deployment_year: int = 1

    def __post_init__(self):
        if self.side_km <= 0:
            raise ValueError(f"area side must be positive, got {self.side_km}")
        if self.deployment_year < 1:
            raise ValueError(f"deployment year must be >= 1, got {self.deployment_year}")

    @property
    def x_min(self) -> float:
        return self.center[0] - self.side_km / 2.0

    @property
    def x_max(self) -> float:
        return self.center[0] + self.side_km / 2.0

    @property
    def y_min(self) -> float:
        return self.center[1] - self.side_km / 2.0

    @property
    def y_max(self) -> float:
        return self.center[1] + self.side_km / 2.0

    @property
    def area_km2(self) -> float:
        return self.side_km * self.side_km

    def contains(self, x: float, y: float) -> bool:
        return self.x_min <= x <= self.x_max and self.y_min <= y <= self.y_max


def overlap_fraction(a: AreaSpec, b: AreaSpec) -> float:
    """Intersection area of ``a`` and ``b`` as a fraction of ``area(a)``.

    The numerator is symmetric; the normalization is not when the two
    squares have different sides. Always in [0, 1].
    """
    ox = min(a.x_max, b.x_max) - max(a.x_min, b.x_min)
    oy = min(a.y_max, b.y_max) - max(a.y_min, b.y_min)
    if ox <= 0.0 or oy <= 0.0:
        return 0.0
    return min(1.0, (ox * oy) / a.area_km2)


@dataclass(frozen=True)
class CityLayout:
    """An immutable, validated set of deployment areas inside a city.

    Areas are stored in deployment order (IA first). Validation enforces:
    exactly one industrial area deployed in year 1, distinct residential
    deployment years starting at 2, every area inside the extent, zero
    RA-RA overlap, and IA-RA overlap at most ``max_overlap_fraction`` of
    the IA surface.
    """

    extent: CityExtent
    areas: tuple[AreaSpec, ...]
    max_overlap_fraction: float = DEFAULT_MAX_OVERLAP

    def __post_init__(self):
        areas = tuple(sorted(self.areas, key=lambda a: (a.deployment_year, a.id)))
        object.__setattr__(self, "areas", areas)
        self._validate()

    def _validate(self) -> None:
        industrial = [a for a in self.areas if a.kind is AreaKind.INDUSTRIAL]
        residential = [a for a in self.areas if a.kind is AreaKind.RESIDENTIAL]
        if len(industrial) != 1:
            raise ValueError(f"layout needs exactly one industrial area, got {len(industrial)}")
        ia = industrial[0]
        if ia.deployment_year != 1:
            raise ValueError("the industrial area must be deployed in year 1")
        ra_years = [a.deployment_year for a in residential]
        if len(set(ra_years)) != len(ra_years) or any(y < 2 for y in ra_years):
            raise ValueError("residential areas need distinct deployment years starting at 2")
        for a in self.areas:
            if not (0.0 <= a.x_min and a.x_max <= self.extent.side_km
                    and 0.0 <= a.y_min and a.y_max <= self.extent.side_km):
                raise ValueError(f"area {a.id} is not fully inside the city extent")
        for i, a in enumerate(residential):
            for b in residential[i + 1:]:
                if overlap_fraction(a, b) > 0.0:
                    raise ValueError(f"residential areas {a.id} and {b.id} overlap")
        for b in residential:
            if overlap_fraction(ia, b) > self.max_overlap_fraction:
                raise ValueError(
                    f"IA overlap with {b.id} exceeds the {self.max_overlap_fraction:.0%} cap")

    @property
    def industrial(self) -> AreaSpec:
        return self.areas[0]

    @property
    def residential(self) -> tuple[AreaSpec, ...]:
        return self.areas[1:]

    def deployed(self, year: int) -> tuple[AreaSpec, ...]:
        """Areas switched on by ``year``, in deployment order."""
        return tuple(a for a in self.areas if a.deployment_year <= year)


def place_areas(
    extent: CityExtent,
    n_residential: int,
    rng: np.random.Generator,
    max_overlap: float = DEFAULT_MAX_OVERLAP,
    area_side_km: float = AREA_SIDE_KM,
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> CityLayout:
    """Draw a constraint-satisfying layout by joint rejection sampling.

    Each attempt draws all area centers uniformly over the admissible
    band (squares fully inside the extent) and is accepted only if every
    pairwise constraint holds, so accepted layouts follow the uniform
    distribution conditioned on the constraints. Raises
    :class:`PlacementError` after ``max_attempts`` rejected attempts,
    which signals an infeasible constraint set.
    """
    if n_residential < 0:
        raise ValueError("n_residential must be >= 0")
    if not 0.0 <= max_overlap <= 1.0:
        raise ValueError("max_overlap must be in [0, 1]")
    half = area_side_km / 2.0
    lo, hi = half, extent.side_km - half
    if lo > hi:
        raise PlacementError(
            f"area side {area_side_km:.4f} km does not fit inside a "
            f"{extent.side_km:.4f} km city")

    n_areas = 1 + n_residential
    max_pair_overlap = max_overlap * area_side_km * area_side_km

    def batch_ok(centers: np.ndarray) -> np.ndarray:
        # centers: (batch, n_areas, 2); index 0 is the IA.
        ok = np.ones(centers.shape[0], dtype=bool)
        for i in range(n_areas):
            for j in range(i + 1, n_areas):
                dx = np.abs(centers[:, i, 0] - centers[:, j, 0])
                dy = np.abs(centers[:, i, 1] - centers[:, j, 1])
                ox = np.maximum(0.0, area_side_km - dx)
                oy = np.maximum(0.0, area_side_km - dy)
                inter = ox * oy
                if i == 0:
                    ok &= inter <= max_pair_overlap
                else:
                    ok &= inter <= 0.0
        return ok

    attempts_left = max_attempts
    batch_size = 1024
    while attempts_left > 0:
        n = min(batch_size, attempts_left)
        centers = rng.uniform(lo, hi, size=(n, n_areas, 2))
        ok = batch_ok(centers)
        hit = np.flatnonzero(ok)
        if hit.size:
            chosen = centers[hit[0]]
            areas = [AreaSpec("IA", AreaKind.INDUSTRIAL,
                              (float(chosen[0, 0]), float(chosen[0, 1])),
                              area_side_km, deployment_year=1)]
            for k in range(n_residential):
                areas.append(AreaSpec(f"RA{k + 1}", AreaKind.RESIDENTIAL,
                                      (float(chosen[k + 1, 0]), float(chosen[k + 1, 1])),
                                      area_side_km, deployment_year=k + 2))
            return CityLayout(extent, tuple(areas), max_overlap_fraction=max_overlap)
        attempts_left -= n
    raise PlacementError(
        f"no constraint-satisfying layout found in {max_attempts} attempts "
        f"({n_areas} areas of side {area_side_km:.4f} km in a "
        f"{extent.side_km:.4f} km city, max overlap {max_overlap:.0%})")


def locate(layout: CityLayout, point: tuple[float, float], year: int) -> AreaSpec | None:
    """Covering area of ``point`` among areas deployed by ``year``, or None.

    Points in the IA∩RA overlap resolve to the IA: areas are scanned in
    deployment order and the IA is always first. Pure function of its
    inputs.
    """
    x, y = point
    for area in layout.areas:
        if area.deployment_year <= year and area.contains(x, y):
            return area
    return None


def coverage_fraction(
    layout: CityLayout, year: int, n_samples: int, rng: np.random.Generator
) -> float:
    """Monte Carlo estimate of the covered fraction of the city at ``year``."""
    pts = rng.uniform(0.0, layout.extent.side_km, size=(n_samples, 2))
    covered = np.zeros(n_samples, dtype=bool)
    for area in layout.deployed(year):
        covered |= ((pts[:, 0] >= area.x_min) & (pts[:, 0] <= area.x_max)
                    & (pts[:, 1] >= area.y_min) & (pts[:, 1] <= area.y_max))
    return float(covered.mean())


LAYOUT_CSV_COLUMNS = ("area_id", "kind", "center_x_km", "center_y_km",
                      "side_km", "deployment_year")


def write_layout_csv(layout: CityLayout, path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(LAYOUT_CSV_COLUMNS)
        for a in layout.areas:
            w.writerow([a.id, a.kind.value, repr(a.center[0]), repr(a.center[1]),
                        repr(a.side_km), a.deployment_year])


def read_layout_csv(
    path: str | Path,
    extent: CityExtent = CityExtent(),
    max_overlap: float = DEFAULT_MAX_OVERLAP,
) -> CityLayout:
    """Rebuild a layout from its CSV dump; the extent is not stored in the file."""
    areas = []
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != LAYOUT_CSV_COLUMNS:
            raise SchemaError(f"expected columns {LAYOUT_CSV_COLUMNS}", path=str(path))
        for i, row in enumerate(reader, start=1):
            try:
                areas.append(AreaSpec(
                    row["area_id"], AreaKind(row["kind"]),
                    (float(row["center_x_km"]), float(row["center_y_km"])),
                    float(row["side_km"]), int(row["deployment_year"])))
            except (KeyError, ValueError) as exc:
                raise SchemaError(str(exc), row=i, path=str(path)) from exc
    return CityLayout(extent, tuple(areas), max_overlap_fraction=max_overlap)
