"""Simulation driver: deterministic streams, day loop, year summaries.

One run fixes a city layout and its base stations, then walks every
(year, day) pair, drawing that day's incidents and scoring each against
the deployment state of the year. All randomness derives from a master
seed through keyed substreams, so any day can be recomputed in
isolation and the worker count never changes the result: day tasks are
data-independent and their records are merged in task order.
"""

from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import repeat
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigError
from .events import (
    EventDistributions,
    EventLogConfig,
    build_distributions,
    clean_event_log,
    read_event_log_csv,
    sample_day,
    synthetic_event_distributions,
)
from .geometry import (
    AREA_SIDE_KM,
    AreaKind,
    CityExtent,
    CityLayout,
    DEFAULT_MAX_OVERLAP,
    place_areas,
)
from .impact import ImpactRecord, SharedAccessPolicy, assess_event
from .spatial import (
    BaseStation,
    DEFAULT_BANDWIDTH_MHZ,
    DEFAULT_MAX_CAPACITY_MBPS,
    PppConfig,
    StationIndex,
    sample_area_stations,
)
from .traffic import (
    DEFAULT_PEAK_FRACTION,
    DEFAULT_SHIFT_HOURS,
    HOURS,
    HourlyProfile,
    build_hourly_profile,
    profiles_for_layout,
    read_traffic_csv,
    synthetic_raw_profile,
)

# Substream tags: every random quantity hangs off the master seed under
# its own key, so streams never alias across purposes or days.
STREAM_LAYOUT = 0
STREAM_STATIONS = 1
STREAM_DAY = 2

_CHUNK_DAYS = 32


def substream(master_seed: int, *key: int) -> np.random.Generator:
    """Generator for one keyed substream of the master seed."""
    ss = np.random.SeedSequence(master_seed, spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


@dataclass(frozen=True)
class SimulationConfig:
    """Everything a run needs besides the input files' contents."""

    master_seed: int
    years: tuple[int, ...] = (1, 2, 3, 4, 5)
    n_days: int = 365
    n_residential: int = 4
    city_side_km: float = 10.0
    area_side_km: float = AREA_SIDE_KM
    max_overlap: float = DEFAULT_MAX_OVERLAP
    ppp: PppConfig = PppConfig()
    policy: SharedAccessPolicy = SharedAccessPolicy()
    bandwidth_mhz: float = DEFAULT_BANDWIDTH_MHZ
    max_capacity_mbps: float = DEFAULT_MAX_CAPACITY_MBPS
    peak_fraction: float = DEFAULT_PEAK_FRACTION
    shift_hours: int = DEFAULT_SHIFT_HOURS
    traffic_csv: str | None = None
    events_csv: str | None = None
    event_log: EventLogConfig = EventLogConfig()
    workers: int = 1

    def __post_init__(self):
        if self.master_seed < 0:
            raise ConfigError("master_seed must be >= 0")
        years = tuple(int(y) for y in self.years)
        if not years or any(y < 1 for y in years) or list(years) != sorted(set(years)):
            raise ConfigError("years must be distinct, ascending and >= 1")
        object.__setattr__(self, "years", years)
        if self.n_days < 1:
            raise ConfigError("n_days must be >= 1")
        if self.n_residential < 0:
            raise ConfigError("n_residential must be >= 0")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")


@dataclass(frozen=True)
class _RunContext:
    """The per-run state a worker process needs to score its day chunk."""

    master_seed: int
    layout: CityLayout
    stations: tuple[BaseStation, ...]
    profiles: Mapping[AreaKind, HourlyProfile]
    distributions: EventDistributions
    policy: SharedAccessPolicy
    city_side_km: float


def simulate_day(ctx: _RunContext, year: int, day: int,
                 indexes: Mapping[str, StationIndex] | None = None) -> list[ImpactRecord]:
    """Draw and score one day's incidents; reproducible in isolation."""
    if indexes is None:
        indexes = _area_indexes(ctx)
    rng = substream(ctx.master_seed, STREAM_DAY, year, day)
    events = sample_day(ctx.distributions, rng, day, ctx.city_side_km)
    return [assess_event(e, ctx.layout, indexes, ctx.profiles, year, ctx.policy)
            for e in events]


def _area_indexes(ctx: _RunContext) -> dict[str, StationIndex]:
    by_area: dict[str, list[BaseStation]] = {a.id: [] for a in ctx.layout.areas}
    for s in ctx.stations:
        by_area[s.area_id].append(s)
    return {aid: StationIndex(lst) for aid, lst in by_area.items()}


def _run_chunk(ctx: _RunContext, tasks: Sequence[tuple[int, int]]) -> list[ImpactRecord]:
    indexes = _area_indexes(ctx)
    out: list[ImpactRecord] = []
    for year, day in tasks:
        out.extend(simulate_day(ctx, year, day, indexes))
    return out


@dataclass(frozen=True)
class AreaYearStats:
    area_id: str
    kind: AreaKind
    n_events: int
    mean_cell_impact_mbps_h: float
    mean_system_impact_fraction: float
    total_system_impact_fraction: float


@dataclass(eq=False)
class YearSummary:
    """Aggregates of one simulated year."""

    year: int
    n_days: int
    daily_total_fraction: np.ndarray
    covered_events: int
    uncovered_events: int
    area_stats: dict[str, AreaYearStats]

    @property
    def mean_daily_total_fraction(self) -> float:
        return float(self.daily_total_fraction.mean())


def summarize(records: Sequence[ImpactRecord], layout: CityLayout,
              year: int, n_days: int) -> YearSummary:
    daily = np.zeros(n_days)
    covered = uncovered = 0
    kinds = {a.id: a.kind for a in layout.areas}
    per_area: dict[str, list[ImpactRecord]] = {}
    for r in records:
        if r.year != year:
            continue
        if not r.covered:
            uncovered += 1
            continue
        covered += 1
        daily[r.event.day - 1] += r.system_impact_fraction
        per_area.setdefault(r.area_id, []).append(r)
    stats = {}
    for aid, rs in sorted(per_area.items()):
        sys_fracs = [r.system_impact_fraction for r in rs]
        stats[aid] = AreaYearStats(
            aid, kinds[aid], len(rs),
            float(np.mean([r.cell_impact_mbps_h for r in rs])),
            float(np.mean(sys_fracs)), float(np.sum(sys_fracs)))
    return YearSummary(year, n_days, daily, covered, uncovered, stats)


def mean_impact_by_kind(
    records: Sequence[ImpactRecord], layout: CityLayout
) -> dict[AreaKind, float]:
    """Mean per-event system impact of covered events, pooled by area kind."""
    kinds = {a.id: a.kind for a in layout.areas}
    pools: dict[AreaKind, list[float]] = {k: [] for k in AreaKind}
    for r in records:
        if r.covered:
            pools[kinds[r.area_id]].append(r.system_impact_fraction)
    return {k: (float(np.mean(v)) if v else 0.0) for k, v in pools.items()}


def hourly_totals(
    records: Sequence[ImpactRecord], layout: CityLayout
) -> dict[tuple[int, AreaKind], np.ndarray]:
    """Total lost volume per (year, area kind, hour of day), in Mbps·h."""
    kinds = {a.id: a.kind for a in layout.areas}
    out: dict[tuple[int, AreaKind], np.ndarray] = {}
    for r in records:
        if not r.covered:
            continue
        key = (r.year, kinds[r.area_id])
        if key not in out:
            out[key] = np.zeros(HOURS)
        out[key] += r.hour_breakdown
    return out


@dataclass(eq=False)
class SimulationResult:
    config: SimulationConfig
    layout: CityLayout
    stations: list[BaseStation]
    profiles: dict[AreaKind, HourlyProfile]
    distributions: EventDistributions
    records: list[ImpactRecord]
    summaries: dict[int, YearSummary]


def run(
    config: SimulationConfig,
    raw_profile: np.ndarray | None = None,
    distributions: EventDistributions | None = None,
) -> SimulationResult:
    """Execute one full simulation.

    ``raw_profile`` and ``distributions`` override the file inputs when
    given; otherwise the configured CSVs are loaded, falling back to the
    calibrated synthetic stand-ins when no files are configured.
    """
    extent = CityExtent(config.city_side_km)
    layout = place_areas(extent, config.n_residential,
                         substream(config.master_seed, STREAM_LAYOUT),
                         config.max_overlap, config.area_side_km)
    stations: list[BaseStation] = []
    for i, area in enumerate(layout.areas):
        rng = substream(config.master_seed, STREAM_STATIONS, i)
        stations.extend(sample_area_stations(
            area, config.ppp, rng, start_id=len(stations),
            bandwidth_mhz=config.bandwidth_mhz,
            max_capacity_mbps=config.max_capacity_mbps))

    if raw_profile is None:
        if config.traffic_csv:
            raw_profile = build_hourly_profile(read_traffic_csv(config.traffic_csv))
        else:
            raw_profile = synthetic_raw_profile()
    profiles = profiles_for_layout(raw_profile, config.max_capacity_mbps,
                                   config.peak_fraction, config.shift_hours)

    if distributions is None:
        if config.events_csv:
            entries, _ = clean_event_log(read_event_log_csv(config.events_csv),
                                         config.event_log)
            distributions = build_distributions(entries, config.event_log)
        else:
            distributions = synthetic_event_distributions()

    ctx = _RunContext(config.master_seed, layout, tuple(stations), profiles,
                      distributions, config.policy, config.city_side_km)
    tasks = [(y, d) for y in config.years for d in range(1, config.n_days + 1)]
    if config.workers <= 1 or len(tasks) <= _CHUNK_DAYS:
        records = _run_chunk(ctx, tasks)
    else:
        chunks = [tasks[i:i + _CHUNK_DAYS] for i in range(0, len(tasks), _CHUNK_DAYS)]
        records = []
        with ProcessPoolExecutor(max_workers=config.workers) as ex:
            for part in ex.map(_run_chunk, repeat(ctx), chunks):
                records.extend(part)

    summaries = {y: summarize(records, layout, y, config.n_days) for y in config.years}
    return SimulationResult(config, layout, stations, profiles, distributions,
                            records, summaries)


# ---------------------------------------------------------------------------
# Result exports

PER_EVENT_CSV_COLUMNS = ("day", "event_id", "year", "area_id", "covered",
                         "class", "n_cells", "cell_impact_mbps_h",
                         "system_impact_fraction")


def write_per_event_csv(records: Iterable[ImpactRecord], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(PER_EVENT_CSV_COLUMNS)
        for r in records:
            w.writerow([r.event.day, r.event.index, r.year,
                        r.area_id if r.area_id is not None else "",
                        "true" if r.covered else "false", r.severity, r.n_cells,
                        repr(r.cell_impact_mbps_h), repr(r.system_impact_fraction)])


PER_DAY_CSV_COLUMNS = ("year", "day", "total_system_impact_fraction")


def write_per_day_csv(summaries: Mapping[int, YearSummary], path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(PER_DAY_CSV_COLUMNS)
        for year in sorted(summaries):
            for day, total in enumerate(summaries[year].daily_total_fraction, start=1):
                w.writerow([year, day, repr(float(total))])


PER_HOUR_CSV_COLUMNS = ("year", "kind", "hour", "impact_mbps_h")


def write_per_hour_csv(
    totals: Mapping[tuple[int, AreaKind], np.ndarray], path: str | Path
) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(PER_HOUR_CSV_COLUMNS)
        for year, kind in sorted(totals, key=lambda k: (k[0], k[1].value)):
            arr = totals[(year, kind)]
            for h in range(HOURS):
                w.writerow([year, kind.value, h, repr(float(arr[h]))])


YEAR_SUMMARY_CSV_COLUMNS = ("year", "area_id", "kind", "n_events",
                            "mean_cell_impact_mbps_h",
                            "mean_system_impact_fraction",
                            "total_system_impact_fraction")


def write_year_summary_csv(summary: YearSummary, path: str | Path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(YEAR_SUMMARY_CSV_COLUMNS)
        for aid in sorted(summary.area_stats):
            s = summary.area_stats[aid]
            w.writerow([summary.year, s.area_id, s.kind.value, s.n_events,
                        repr(s.mean_cell_impact_mbps_h),
                        repr(s.mean_system_impact_fraction),
                        repr(s.total_system_impact_fraction)])
