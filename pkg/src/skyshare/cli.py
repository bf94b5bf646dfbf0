"""Command-line front end.

Four subcommands cover the workflow: ``ingest`` turns raw measurement
logs into cleaned empirical inputs, ``run`` executes a simulation and
writes its result tables plus a digest manifest, ``export-figures``
renders plot-ready data files from a run directory, and ``validate``
recomputes a run from its manifest and compares output digests.

Exit codes: 0 success, 2 configuration problem, 3 unreadable or
malformed data, 4 validation mismatch, 5 runtime failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import tempfile
from dataclasses import replace
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

from .errors import ConfigError, DataError, SchemaError, SkyshareError
from .events import (
    EventLogConfig,
    build_distributions,
    clean_event_log,
    read_event_log_csv,
    write_distribution_csv,
)
from .engine import (
    SimulationConfig,
    SimulationResult,
    hourly_totals,
    run as run_simulation,
    write_per_day_csv,
    write_per_event_csv,
    write_per_hour_csv,
    write_year_summary_csv,
)
from .geometry import write_layout_csv
from .impact import SharedAccessPolicy
from .spatial import DEFAULT_MAX_CAPACITY_MBPS, PppConfig, write_stations_csv
from .traffic import (
    DEFAULT_PEAK_FRACTION,
    DEFAULT_SHIFT_HOURS,
    build_hourly_profile,
    profiles_for_layout,
    read_traffic_csv,
    write_profiles_csv,
)

MANIFEST_NAME = "manifest.json"


# ---------------------------------------------------------------------------
# Config files: flat "key = value" lines, '#' comments, paths relative to
# the file's own directory.


def parse_years(s: str) -> tuple[int, ...]:
    """Year selections like ``1-5`` or ``1,3,5`` (or a mix)."""
    years: list[int] = []
    for part in s.split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part:
            lo, hi = part.split("-", 1)
            years.extend(range(int(lo), int(hi) + 1))
        else:
            years.append(int(part))
    return tuple(years)


def _parse_str_list(s: str) -> tuple[str, ...]:
    return tuple(x.strip() for x in s.split(",") if x.strip())


def _parse_month_days(s: str) -> tuple[tuple[int, int], ...]:
    out = []
    for part in _parse_str_list(s):
        m, d = part.split("-", 1)
        out.append((int(m), int(d)))
    return tuple(out)


_CONFIG_PARSERS: dict[str, Callable[[str], object]] = {
    "master_seed": int,
    "years": parse_years,
    "n_days": int,
    "n_residential": int,
    "city_side_km": float,
    "area_side_km": float,
    "max_overlap": float,
    "mean_count_industrial": float,
    "mean_count_residential": float,
    "intensity_industrial": float,
    "intensity_residential": float,
    "ppp_mode": str,
    "emergency_fraction": float,
    "impact_threshold": float,
    "severity_classes": int,
    "max_duration_min": float,
    "bandwidth_mhz": float,
    "max_capacity_mbps": float,
    "peak_fraction": float,
    "shift_hours": int,
    "traffic_csv": str,
    "events_csv": str,
    "major_types": _parse_str_list,
    "excluded_dates": _parse_month_days,
    "min_pumps": int,
    "grouping": str,
    "workers": int,
}

_PATH_KEYS = ("traffic_csv", "events_csv")


def read_config_file(path: str | Path) -> dict[str, object]:
    """Parse a config file into typed values, rejecting unknown keys."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_PARSERS:
            raise ConfigError(f"{path}:{lineno}: unknown config key {key!r}")
        if key in values:
            raise ConfigError(f"{path}:{lineno}: duplicate config key {key!r}")
        try:
            values[key] = _CONFIG_PARSERS[key](value)
        except (ValueError, TypeError) as exc:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    for key in _PATH_KEYS:
        if key in values:
            values[key] = str((path.parent / str(values[key])).resolve())
    return values


_PPP_KEYS = {"mean_count_industrial": "mean_count_industrial",
             "mean_count_residential": "mean_count_residential",
             "intensity_industrial": "intensity_industrial",
             "intensity_residential": "intensity_residential",
             "ppp_mode": "mode"}
_POLICY_KEYS = {"emergency_fraction": "emergency_fraction",
                "impact_threshold": "impact_threshold",
                "severity_classes": "severity_classes",
                "max_duration_min": "max_duration_min"}
_EVENT_LOG_KEYS = {"major_types": "major_types", "excluded_dates": "excluded_dates",
                   "min_pumps": "min_pumps", "grouping": "grouping"}


def _pop_group(values: dict, names: Mapping[str, str]) -> dict:
    return {field: values.pop(key) for key, field in names.items() if key in values}


def build_simulation_config(values: Mapping[str, object]) -> SimulationConfig:
    """Assemble a validated :class:`SimulationConfig` from flat values."""
    values = dict(values)
    if "master_seed" not in values:
        raise ConfigError("master_seed is required (config key or --seed)")
    try:
        ppp = PppConfig(**_pop_group(values, _PPP_KEYS))
        policy = SharedAccessPolicy(**_pop_group(values, _POLICY_KEYS))
        log = EventLogConfig(**_pop_group(values, _EVENT_LOG_KEYS))
        return SimulationConfig(ppp=ppp, policy=policy, event_log=log, **values)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc


def config_to_dict(c: SimulationConfig) -> dict:
    """JSON-ready snapshot that round-trips through :func:`config_from_dict`."""
    return {
        "master_seed": c.master_seed,
        "years": list(c.years),
        "n_days": c.n_days,
        "n_residential": c.n_residential,
        "city_side_km": c.city_side_km,
        "area_side_km": c.area_side_km,
        "max_overlap": c.max_overlap,
        "ppp": {
            "mean_count_industrial": c.ppp.mean_count_industrial,
            "mean_count_residential": c.ppp.mean_count_residential,
            "intensity_industrial": c.ppp.intensity_industrial,
            "intensity_residential": c.ppp.intensity_residential,
            "mode": c.ppp.mode,
        },
        "policy": {
            "emergency_fraction": c.policy.emergency_fraction,
            "impact_threshold": c.policy.impact_threshold,
            "severity_classes": c.policy.severity_classes,
            "max_duration_min": c.policy.max_duration_min,
        },
        "bandwidth_mhz": c.bandwidth_mhz,
        "max_capacity_mbps": c.max_capacity_mbps,
        "peak_fraction": c.peak_fraction,
        "shift_hours": c.shift_hours,
        "traffic_csv": c.traffic_csv,
        "events_csv": c.events_csv,
        "event_log": {
            "major_types": list(c.event_log.major_types),
            "excluded_dates": [list(d) for d in c.event_log.excluded_dates],
            "min_pumps": c.event_log.min_pumps,
            "grouping": c.event_log.grouping,
        },
        # workers is an execution parameter with no effect on the outputs,
        # so it stays out of the snapshot and run manifests stay
        # byte-identical across worker counts.
    }


def config_from_dict(d: Mapping) -> SimulationConfig:
    try:
        return SimulationConfig(
            master_seed=d["master_seed"], years=tuple(d["years"]),
            n_days=d["n_days"], n_residential=d["n_residential"],
            city_side_km=d["city_side_km"], area_side_km=d["area_side_km"],
            max_overlap=d["max_overlap"],
            ppp=PppConfig(**d["ppp"]),
            policy=SharedAccessPolicy(**d["policy"]),
            bandwidth_mhz=d["bandwidth_mhz"], max_capacity_mbps=d["max_capacity_mbps"],
            peak_fraction=d["peak_fraction"], shift_hours=d["shift_hours"],
            traffic_csv=d["traffic_csv"], events_csv=d["events_csv"],
            event_log=EventLogConfig(
                major_types=tuple(d["event_log"]["major_types"]),
                excluded_dates=tuple(tuple(x) for x in d["event_log"]["excluded_dates"]),
                min_pumps=d["event_log"]["min_pumps"],
                grouping=d["event_log"]["grouping"]),
            workers=int(d.get("workers", 1)))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad config snapshot: {exc}") from exc


# ---------------------------------------------------------------------------
# Manifests


def sha256_of(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for block in iter(lambda: f.read(1 << 16), b""):
            h.update(block)
    return h.hexdigest()


def write_manifest(out_dir: Path, command: str, config: dict,
                   inputs: Iterable[Path], outputs: Iterable[Path]) -> None:
    manifest = {
        "command": command,
        "config": config,
        "inputs": {str(p): sha256_of(p) for p in inputs},
        "outputs": {p.name: sha256_of(p) for p in outputs},
    }
    with open(out_dir / MANIFEST_NAME, "w") as f:
        json.dump(manifest, f, indent=2, sort_keys=True)
        f.write("\n")


def read_manifest(run_dir: Path) -> dict:
    path = run_dir / MANIFEST_NAME
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed manifest: {exc}", path=str(path)) from exc


# ---------------------------------------------------------------------------
# Subcommands


def _load_values(args) -> dict[str, object]:
    values = read_config_file(args.config) if args.config else {}
    if getattr(args, "seed", None) is not None:
        values["master_seed"] = args.seed
    if getattr(args, "workers", None) is not None:
        values["workers"] = args.workers
    if getattr(args, "days", None) is not None:
        values["n_days"] = args.days
    if getattr(args, "years", None) is not None:
        values["years"] = parse_years(args.years)
    return values


def _write_run_outputs(result: SimulationResult, out_dir: Path) -> list[Path]:
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []

    def emit(name: str, writer: Callable[[Path], None]) -> None:
        p = out_dir / name
        writer(p)
        paths.append(p)

    emit("layout.csv", lambda p: write_layout_csv(result.layout, p))
    emit("stations.csv", lambda p: write_stations_csv(result.stations, p))
    emit("profiles.csv", lambda p: write_profiles_csv(result.profiles, p))
    dists = result.distributions
    emit("daily_count_cdf.csv", lambda p: write_distribution_csv(dists.daily_count, p))
    emit("hour_histogram.csv",
         lambda p: write_distribution_csv(dists.start_hour.to_distribution(), p))
    emit("duration_cdf.csv", lambda p: write_distribution_csv(dists.duration, p))
    emit("per_event.csv", lambda p: write_per_event_csv(result.records, p))
    emit("per_day.csv", lambda p: write_per_day_csv(result.summaries, p))
    emit("per_hour.csv",
         lambda p: write_per_hour_csv(hourly_totals(result.records, result.layout), p))
    for year in sorted(result.summaries):
        emit(f"year_summary_{year}.csv",
             lambda p, y=year: write_year_summary_csv(result.summaries[y], p))
    return paths


def cmd_run(args) -> int:
    config = build_simulation_config(_load_values(args))
    result = run_simulation(config)
    out_dir = Path(args.out)
    outputs = _write_run_outputs(result, out_dir)
    inputs = [Path(p) for p in (config.traffic_csv, config.events_csv) if p]
    write_manifest(out_dir, "run", config_to_dict(config), inputs, outputs)
    total = sum(s.covered_events + s.uncovered_events for s in result.summaries.values())
    print(f"simulated {len(config.years)} year(s) x {config.n_days} day(s), "
          f"{total} events, outputs in {out_dir}")
    return 0


def cmd_ingest(args) -> int:
    values = _load_values(args)
    traffic_csv = args.traffic or values.get("traffic_csv")
    events_csv = args.events or values.get("events_csv")
    if not traffic_csv and not events_csv:
        raise ConfigError("nothing to ingest: give --traffic and/or --events "
                          "(or set traffic_csv / events_csv in the config)")
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: list[Path] = []
    inputs: list[Path] = []
    report = {}

    if traffic_csv:
        inputs.append(Path(traffic_csv))
        records = read_traffic_csv(traffic_csv)
        raw = build_hourly_profile(records)
        capacity = float(values.get("max_capacity_mbps", DEFAULT_MAX_CAPACITY_MBPS))
        peak = float(values.get("peak_fraction", DEFAULT_PEAK_FRACTION))
        shift = int(values.get("shift_hours", DEFAULT_SHIFT_HOURS))
        profiles = profiles_for_layout(raw, capacity, peak, shift)
        p = out_dir / "profiles.csv"
        write_profiles_csv(profiles, p)
        outputs.append(p)
        report["traffic_rows"] = len(records)

    if events_csv:
        inputs.append(Path(events_csv))
        log_config = EventLogConfig(**_pop_group(dict(values), _EVENT_LOG_KEYS))
        entries = read_event_log_csv(events_csv)
        kept, cleanup = clean_event_log(entries, log_config)
        dists = build_distributions(kept, log_config)
        for name, dist in (("daily_count_cdf.csv", dists.daily_count),
                           ("hour_histogram.csv", dists.start_hour.to_distribution()),
                           ("duration_cdf.csv", dists.duration)):
            p = out_dir / name
            write_distribution_csv(dist, p)
            outputs.append(p)
        report["cleanup"] = {
            "total_rows": cleanup.total_rows, "kept_rows": cleanup.kept_rows,
            "dropped_type": cleanup.dropped_type, "dropped_date": cleanup.dropped_date,
            "dropped_pumps": cleanup.dropped_pumps,
            "dropped_duration": cleanup.dropped_duration,
        }

    p = out_dir / "ingest_report.json"
    with open(p, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
    outputs.append(p)
    write_manifest(out_dir, "ingest", {k: str(v) for k, v in values.items()},
                   inputs, outputs)
    print(f"ingested {len(inputs)} file(s), outputs in {out_dir}")
    return 0


def _read_csv_rows(path: Path) -> list[dict[str, str]]:
    import csv
    try:
        with open(path, newline="") as f:
            return list(csv.DictReader(f))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def _write_xy_blocks(path: Path, header: str,
                     blocks: Sequence[tuple[str, Sequence[tuple[float, float]]]]) -> None:
    """Gnuplot-style data file: '#' comments, blocks split by blank lines."""
    with open(path, "w") as f:
        f.write(f"# {header}\n")
        for i, (label, pairs) in enumerate(blocks):
            if i:
                f.write("\n\n")
            f.write(f"# {label}\n")
            for x, y in pairs:
                f.write(f"{x!r} {y!r}\n")


def _ecdf(values: Sequence[float]) -> list[tuple[float, float]]:
    xs = sorted(values)
    n = len(xs)
    return [(x, (i + 1) / n) for i, x in enumerate(xs)]


def cmd_export_figures(args) -> int:
    run_dir = Path(args.run)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    profiles = _read_csv_rows(run_dir / "profiles.csv")
    by_kind: dict[str, dict[int, float]] = {}
    for row in profiles:
        by_kind.setdefault(row["kind"], {})[int(row["hour"])] = float(row["mbps"])
    with open(out_dir / "fig3_profiles.dat", "w") as f:
        f.write("# hour industrial_mbps residential_mbps\n")
        for h in range(24):
            f.write(f"{h} {by_kind['industrial'][h]!r} {by_kind['residential'][h]!r}\n")

    for fig, name, ylab in (("fig4_daily_count_cdf", "daily_count_cdf.csv", "cdf"),
                            ("fig6_duration_cdf", "duration_cdf.csv", "cdf")):
        rows = _read_csv_rows(run_dir / name)
        pairs = [(float(r["support"]), float(r["cdf"])) for r in rows]
        _write_xy_blocks(out_dir / f"{fig}.dat", f"support {ylab}", [(name, pairs)])

    rows = _read_csv_rows(run_dir / "hour_histogram.csv")
    cdf = [(float(r["support"]), float(r["cdf"])) for r in rows]
    pmf, prev = [], 0.0
    for s, c in cdf:
        pmf.append((s, c - prev))
        prev = c
    _write_xy_blocks(out_dir / "fig5_hour_histogram.dat", "hour probability",
                     [("hour_histogram.csv", pmf)])

    layout_rows = _read_csv_rows(run_dir / "layout.csv")
    kind_of = {r["area_id"]: r["kind"] for r in layout_rows}
    events = _read_csv_rows(run_dir / "per_event.csv")
    for fig, kind in (("fig7_industrial_impact_cdf", "industrial"),
                      ("fig8_residential_impact_cdf", "residential")):
        pool = [r for r in events
                if r["covered"] == "true" and kind_of.get(r["area_id"]) == kind]
        cell = [float(r["cell_impact_mbps_h"]) for r in pool]
        system = [float(r["system_impact_fraction"]) for r in pool]
        blocks = [("cell_impact_mbps_h", _ecdf(cell) if cell else []),
                  ("system_impact_fraction", _ecdf(system) if system else [])]
        _write_xy_blocks(out_dir / f"{fig}.dat", f"{kind} per-event impact ecdf", blocks)

    per_day = _read_csv_rows(run_dir / "per_day.csv")
    by_year: dict[int, list[float]] = {}
    for r in per_day:
        by_year.setdefault(int(r["year"]), []).append(
            float(r["total_system_impact_fraction"]))
    blocks = [(f"year {y}", _ecdf(vals)) for y, vals in sorted(by_year.items())]
    _write_xy_blocks(out_dir / "fig9_daily_totals_cdf.dat",
                     "daily total system impact ecdf", blocks)

    n = len(list(out_dir.glob("fig*.dat")))
    print(f"wrote {n} figure data file(s) to {out_dir}")
    return 0


def cmd_validate(args) -> int:
    run_dir = Path(args.run)
    manifest = read_manifest(run_dir)
    if manifest.get("command") != "run":
        raise DataError(f"{run_dir} does not hold a run manifest")
    config = config_from_dict(manifest["config"])
    if args.workers is not None:
        config = replace(config, workers=args.workers)
    stored = manifest["outputs"]
    with tempfile.TemporaryDirectory(prefix="skyshare-validate-") as tmp:
        result = run_simulation(config)
        fresh_paths = _write_run_outputs(result, Path(tmp))
        fresh = {p.name: sha256_of(p) for p in fresh_paths}
    mismatches = []
    for name in sorted(set(stored) | set(fresh)):
        a, b = stored.get(name), fresh.get(name)
        status = "ok" if a == b else "MISMATCH"
        if a != b:
            mismatches.append(name)
        print(f"{status:8s} {name}")
    if mismatches:
        print(f"validation failed: {len(mismatches)} file(s) differ")
        return 4
    print(f"validation ok: {len(stored)} file(s) reproduced")
    return 0


# ---------------------------------------------------------------------------
# Entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="skyshare",
        description="Simulate the commercial-traffic cost of lending 5G "
                    "spectrum to emergency responders.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="execute a simulation and write result tables")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--seed", type=int, help="master seed (overrides the config)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.add_argument("--days", type=int, help="days per simulated year")
    p.add_argument("--years", help="years to simulate, e.g. 1-5 or 1,3")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("ingest", help="clean raw logs into empirical inputs")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--traffic", help="per-cell hourly traffic CSV")
    p.add_argument("--events", help="incident log CSV")
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("export-figures", help="write plot-ready data files for a run")
    p.add_argument("--run", required=True, help="run output directory")
    p.add_argument("--out", required=True, help="figure data directory")
    p.set_defaults(func=cmd_export_figures)

    p = sub.add_parser("validate", help="recompute a run and compare output digests")
    p.add_argument("--run", required=True, help="run output directory with a manifest")
    p.add_argument("--workers", type=int, help="parallel worker processes")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SchemaError, DataError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except SkyshareError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
