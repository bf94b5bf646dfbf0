"""Commercial-traffic impact of lending spectrum to an emergency event.

While an incident is attended, nearby base stations hand a fixed
spectrum fraction to the responders. A station only suffers when its
scheduled traffic exceeds what the remaining spectrum can carry, so the
lost volume is the profile's excess above a capacity threshold,
integrated over the attendance window (Mbps·h). Longer incidents get a
higher severity class and borrow from more stations: class k claims the
k nearest ones.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import NoStationsError
from .events import EmergencyEvent, EmpiricalDistribution
from .geometry import AreaKind, CityLayout, locate
from .spatial import BaseStation, StationIndex
from .traffic import HOURS, HourlyProfile

DEFAULT_EMERGENCY_FRACTION = 0.25
DEFAULT_IMPACT_THRESHOLD = 0.75
DEFAULT_SEVERITY_CLASSES = 4
DEFAULT_MAX_DURATION_MIN = 1140.0

MINUTES_PER_DAY = 1440.0


@dataclass(frozen=True)
class SharedAccessPolicy:
    """How much spectrum events borrow and how widely they reach.

    ``impact_threshold`` is the loaded fraction of a station's top speed
    above which borrowing starts to cost traffic; with a quarter of the
    spectrum lent out it equals the remaining capacity fraction, 0.75.
    Durations up to ``max_duration_min`` split evenly into
    ``severity_classes`` classes, and a class-k event claims the k
    nearest stations.
    """

    emergency_fraction: float = DEFAULT_EMERGENCY_FRACTION
    impact_threshold: float = DEFAULT_IMPACT_THRESHOLD
    severity_classes: int = DEFAULT_SEVERITY_CLASSES
    max_duration_min: float = DEFAULT_MAX_DURATION_MIN

    def __post_init__(self):
        if not 0.0 < self.emergency_fraction < 1.0:
            raise ValueError("emergency fraction must be in (0, 1)")
        if not 0.0 < self.impact_threshold < 1.0:
            raise ValueError("impact threshold must be in (0, 1)")
        if self.severity_classes < 1:
            raise ValueError("need at least one severity class")
        if self.max_duration_min <= 0:
            raise ValueError("max duration must be positive")

    @property
    def class_width_min(self) -> float:
        return self.max_duration_min / self.severity_classes

    def class_boundaries(self) -> tuple[float, ...]:
        """Upper duration bound of each class, ending at ``max_duration_min``."""
        return tuple(self.class_width_min * (k + 1) for k in range(self.severity_classes))

    def threshold_mbps(self, max_capacity_mbps: float) -> float:
        return self.impact_threshold * max_capacity_mbps


def severity_class(duration_min: float, policy: SharedAccessPolicy = SharedAccessPolicy()) -> int:
    """Class of a duration: 1-based index of its bin, clamped at the top.

    Bin k covers ((k-1)·w, k·w] with w = max_duration / n_classes, so a
    duration sitting exactly on a boundary belongs to the lower class.
    Durations beyond the calibrated maximum fall in the top class.
    """
    if duration_min <= 0:
        raise ValueError("duration must be positive")
    k = math.ceil(duration_min / policy.class_width_min)
    return min(policy.severity_classes, max(1, k))


def severity_probabilities(
    duration: EmpiricalDistribution, policy: SharedAccessPolicy = SharedAccessPolicy()
) -> np.ndarray:
    """Probability of each severity class under a duration law."""
    probs = np.zeros(policy.severity_classes)
    for d, p in zip(duration.support, duration.pmf):
        probs[severity_class(float(d), policy) - 1] += p
    return probs


def expected_affected_cells(
    duration: EmpiricalDistribution, policy: SharedAccessPolicy = SharedAccessPolicy()
) -> float:
    """Mean number of stations an event claims: sum of k * P(class k)."""
    probs = severity_probabilities(duration, policy)
    return float(np.dot(np.arange(1, policy.severity_classes + 1), probs))


def _window_slots(start_min: float, duration_min: float):
    """Wall-clock hour slots overlapped by [start, start + duration).

    Yields (hour_of_day, fraction_of_hour) pairs; fractions sum to the
    duration in hours. Windows may cross midnight or span several days,
    in which case the daily profile repeats.
    """
    end_min = start_min + duration_min
    first = int(start_min // 60.0)
    last = int(math.ceil(end_min / 60.0))
    for h in range(first, last):
        lo = max(start_min, 60.0 * h)
        hi = min(end_min, 60.0 * (h + 1))
        if hi > lo:
            yield h % HOURS, (hi - lo) / 60.0


def cell_impact(
    profile: HourlyProfile | np.ndarray,
    start_min: float,
    duration_min: float,
    threshold_mbps: float,
) -> float:
    """Traffic volume one station loses over an event window, in Mbps·h.

    Each overlapped hour slot contributes its overlap fraction times the
    profile's excess over the threshold; hours at or below the threshold
    contribute nothing.
    """
    values = profile.mbps if isinstance(profile, HourlyProfile) else profile
    total = 0.0
    for h, w in _window_slots(start_min, duration_min):
        excess = values[h] - threshold_mbps
        if excess > 0.0:
            total += w * excess
    return total


def cell_impact_by_hour(
    profile: HourlyProfile | np.ndarray,
    start_min: float,
    duration_min: float,
    threshold_mbps: float,
) -> np.ndarray:
    """Per-hour-of-day split of :func:`cell_impact`; sums to the total."""
    values = profile.mbps if isinstance(profile, HourlyProfile) else profile
    out = np.zeros(HOURS)
    for h, w in _window_slots(start_min, duration_min):
        excess = values[h] - threshold_mbps
        if excess > 0.0:
            out[h] += w * excess
    return out


def system_impact(
    total_cell_impact_mbps_h: float, n_stations: int, max_capacity_mbps: float
) -> float:
    """Lost volume as a fraction of an area's daily carrying capacity."""
    if n_stations <= 0:
        raise NoStationsError("system impact is undefined for an area with no stations")
    return total_cell_impact_mbps_h / (n_stations * max_capacity_mbps * 24.0)


@dataclass
class ImpactRecord:
    """Outcome of one simulated event.

    Uncovered events (outside every deployed area) keep their severity
    but carry zero impact. ``cell_impact_mbps_h`` is per affected
    station; all of an event's stations share one area profile, so they
    lose the same volume.
    """

    event: EmergencyEvent
    year: int
    covered: bool
    area_id: str | None
    severity: int
    affected_cell_ids: tuple[int, ...]
    cell_impact_mbps_h: float
    system_impact_fraction: float
    hour_breakdown: np.ndarray

    @property
    def n_cells(self) -> int:
        return len(self.affected_cell_ids)

    @property
    def total_cell_impact_mbps_h(self) -> float:
        return self.n_cells * self.cell_impact_mbps_h


def assess_event(
    event: EmergencyEvent,
    layout: CityLayout,
    stations: Mapping[str, StationIndex] | Sequence[BaseStation],
    profiles: Mapping[AreaKind, HourlyProfile],
    year: int,
    policy: SharedAccessPolicy = SharedAccessPolicy(),
) -> ImpactRecord:
    """Judge one event against the deployment state of ``year``.

    ``stations`` is either a prebuilt per-area index mapping (the fast
    path used by simulation runs) or a flat station sequence.
    """
    severity = severity_class(event.duration_min, policy)
    area = locate(layout, event.location, year)
    if area is None:
        return ImpactRecord(event, year, False, None, severity, (),
                            0.0, 0.0, np.zeros(HOURS))
    if isinstance(stations, Mapping):
        index = stations[area.id]
    else:
        index = StationIndex([s for s in stations if s.area_id == area.id])
    if len(index) == 0:
        raise NoStationsError(f"area {area.id} has no stations in year {year}")
    cells = index.nearest(event.location, severity)
    capacity = cells[0].max_capacity_mbps
    profile = profiles[area.kind]
    threshold = policy.threshold_mbps(capacity)
    breakdown = cell_impact_by_hour(profile, event.start_min, event.duration_min, threshold)
    per_cell = float(breakdown.sum())
    fraction = system_impact(len(cells) * per_cell, len(index), capacity)
    return ImpactRecord(event, year, True, area.id, severity,
                        tuple(c.id for c in cells), per_cell, fraction,
                        len(cells) * breakdown)
