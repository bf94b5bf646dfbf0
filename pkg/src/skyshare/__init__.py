"""Monte Carlo study of on-demand spectrum sharing in a 5G rollout.

Emergency services borrow a slice of commercial 5G spectrum near an
incident for as long as it is attended. This package simulates a city's
phased small-cell deployment, its daily traffic rhythms, and a stream
of incidents, and quantifies how much commercial traffic the sharing
policy displaces, per station, per event, and per day.
"""

from .errors import (
    ConfigError,
    DataError,
    NoStationsError,
    PlacementError,
    SchemaError,
    SkyshareError,
)
from .geometry import (
    AREA_SIDE_KM,
    AreaKind,
    AreaSpec,
    CityExtent,
    CityLayout,
    coverage_fraction,
    locate,
    overlap_fraction,
    place_areas,
    read_layout_csv,
    write_layout_csv,
)
from .spatial import (
    BaseStation,
    PppConfig,
    StationIndex,
    nearest_stations,
    place_stations,
    read_stations_csv,
    sample_area_stations,
    sample_bs_count,
    stations_by_area,
    write_stations_csv,
)
from .traffic import (
    HourlyProfile,
    TrafficRecord,
    build_hourly_profile,
    circular_shift,
    profiles_for_layout,
    read_traffic_csv,
    scale_to_peak,
    synthetic_raw_profile,
    write_profiles_csv,
)
from .events import (
    CleanupReport,
    EmergencyEvent,
    EmpiricalDistribution,
    EventDistributions,
    EventLogConfig,
    EventLogEntry,
    HourHistogram,
    build_distributions,
    clean_event_log,
    event_duration,
    read_event_log_csv,
    sample_day,
    sample_from,
    sample_hours,
    synthetic_event_distributions,
    synthetic_event_log,
    write_event_log_csv,
)
from .impact import (
    ImpactRecord,
    SharedAccessPolicy,
    assess_event,
    cell_impact,
    cell_impact_by_hour,
    expected_affected_cells,
    severity_class,
    severity_probabilities,
    system_impact,
)
from .engine import (
    SimulationConfig,
    SimulationResult,
    YearSummary,
    hourly_totals,
    mean_impact_by_kind,
    run,
    simulate_day,
    substream,
    summarize,
)

__version__ = "0.1.0"
