import numpy as np
import pytest

from skyshare import (
    AreaKind,
    ConfigError,
    EmpiricalDistribution,
    EventDistributions,
    HourHistogram,
    SimulationConfig,
    hourly_totals,
    mean_impact_by_kind,
    run,
    simulate_day,
    substream,
    summarize,
)
from skyshare.engine import (
    _RunContext,
    write_per_day_csv,
    write_per_event_csv,
    write_per_hour_csv,
    write_year_summary_csv,
)

SMALL = SimulationConfig(master_seed=99, years=(1, 2, 3), n_days=6, n_residential=2)


@pytest.fixture(scope="module")
def small_result():
    return run(SMALL)


class TestSubstream:
    def test_same_key_same_stream(self):
        a = substream(42, 2, 1, 5).random(8)
        b = substream(42, 2, 1, 5).random(8)
        np.testing.assert_array_equal(a, b)

    def test_different_keys_differ(self):
        a = substream(42, 2, 1, 5).random(8)
        b = substream(42, 2, 1, 6).random(8)
        c = substream(42, 2, 2, 5).random(8)
        assert not np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_different_seeds_differ(self):
        a = substream(42, 0).random(8)
        b = substream(43, 0).random(8)
        assert not np.array_equal(a, b)


class TestConfigValidation:
    def test_rejects_bad_years(self):
        with pytest.raises(ConfigError):
            SimulationConfig(master_seed=1, years=())
        with pytest.raises(ConfigError):
            SimulationConfig(master_seed=1, years=(2, 1))
        with pytest.raises(ConfigError):
            SimulationConfig(master_seed=1, years=(0, 1))
        with pytest.raises(ConfigError):
            SimulationConfig(master_seed=1, years=(1, 1, 2))

    def test_rejects_bad_counts(self):
        with pytest.raises(ConfigError):
            SimulationConfig(master_seed=1, n_days=0)
        with pytest.raises(ConfigError):
            SimulationConfig(master_seed=1, workers=0)
        with pytest.raises(ConfigError):
            SimulationConfig(master_seed=-1)


class TestRun:
    def test_layout_matches_the_rollout_plan(self, small_result):
        layout = small_result.layout
        assert layout.industrial.deployment_year == 1
        assert [a.deployment_year for a in layout.residential] == [2, 3]

    def test_stations_cover_every_area(self, small_result):
        areas = {s.area_id for s in small_result.stations}
        assert areas == {a.id for a in small_result.layout.areas}
        ids = [s.id for s in small_result.stations]
        assert ids == list(range(len(ids)))

    def test_records_follow_task_order(self, small_result):
        keys = [(r.year, r.event.day, r.event.index) for r in small_result.records]
        assert keys == sorted(keys)

    def test_only_deployed_areas_are_hit(self, small_result):
        for r in small_result.records:
            if r.covered:
                area = next(a for a in small_result.layout.areas if a.id == r.area_id)
                assert area.deployment_year <= r.year

    def test_rerun_is_identical(self, small_result):
        again = run(SMALL)
        assert len(again.records) == len(small_result.records)
        for a, b in zip(again.records, small_result.records):
            assert a.event == b.event
            assert a.affected_cell_ids == b.affected_cell_ids
            assert a.system_impact_fraction == b.system_impact_fraction

    def test_worker_count_does_not_change_records(self):
        config = SimulationConfig(master_seed=77, years=(1, 2), n_days=40,
                                  n_residential=1, workers=1)
        serial = run(config)
        parallel = run(SimulationConfig(master_seed=77, years=(1, 2), n_days=40,
                                        n_residential=1, workers=3))
        assert len(serial.records) == len(parallel.records)
        for a, b in zip(serial.records, parallel.records):
            assert a.event == b.event
            assert a.area_id == b.area_id
            assert a.system_impact_fraction == b.system_impact_fraction

    def test_simulate_day_reproduces_run_slices(self, small_result):
        ctx = _RunContext(SMALL.master_seed, small_result.layout,
                          tuple(small_result.stations), small_result.profiles,
                          small_result.distributions, SMALL.policy,
                          SMALL.city_side_km)
        for year, day in ((1, 1), (2, 3), (3, 6)):
            alone = simulate_day(ctx, year, day)
            from_run = [r for r in small_result.records
                        if r.year == year and r.event.day == day]
            assert len(alone) == len(from_run)
            for a, b in zip(alone, from_run):
                assert a.event == b.event
                assert a.system_impact_fraction == b.system_impact_fraction

    def test_zero_rate_distributions_give_empty_runs(self):
        silent = EventDistributions(
            daily_count=EmpiricalDistribution(np.array([0.0]), np.array([1.0])),
            start_hour=HourHistogram(np.full(24, 1.0 / 24.0)),
            duration=EmpiricalDistribution(np.array([60.0]), np.array([1.0])))
        result = run(SMALL, distributions=silent)
        assert result.records == []
        for s in result.summaries.values():
            assert s.covered_events == 0
            assert s.daily_total_fraction.sum() == 0.0


class TestSummaries:
    def test_event_counts_reconcile(self, small_result):
        for year, s in small_result.summaries.items():
            in_year = [r for r in small_result.records if r.year == year]
            assert s.covered_events + s.uncovered_events == len(in_year)
            assert s.covered_events == sum(1 for r in in_year if r.covered)

    def test_daily_totals_match_record_sums(self, small_result):
        for year, s in small_result.summaries.items():
            want = np.zeros(SMALL.n_days)
            for r in small_result.records:
                if r.year == year and r.covered:
                    want[r.event.day - 1] += r.system_impact_fraction
            np.testing.assert_allclose(s.daily_total_fraction, want, rtol=1e-12)

    def test_area_stats_match_records(self, small_result):
        s = small_result.summaries[3]
        for aid, stats in s.area_stats.items():
            rs = [r for r in small_result.records
                  if r.year == 3 and r.covered and r.area_id == aid]
            assert stats.n_events == len(rs)
            assert stats.mean_system_impact_fraction == pytest.approx(
                float(np.mean([r.system_impact_fraction for r in rs])), rel=1e-12)

    def test_summarize_is_a_pure_function_of_records(self, small_result):
        s = summarize(small_result.records, small_result.layout, 2, SMALL.n_days)
        assert s.covered_events == small_result.summaries[2].covered_events
        np.testing.assert_array_equal(
            s.daily_total_fraction, small_result.summaries[2].daily_total_fraction)

    def test_mean_impact_by_kind_pools_covered_records(self, small_result):
        means = mean_impact_by_kind(small_result.records, small_result.layout)
        kinds = {a.id: a.kind for a in small_result.layout.areas}
        for kind in AreaKind:
            vals = [r.system_impact_fraction for r in small_result.records
                    if r.covered and kinds[r.area_id] is kind]
            if vals:
                assert means[kind] == pytest.approx(float(np.mean(vals)), rel=1e-12)

    def test_hourly_totals_conserve_volume(self, small_result):
        totals = hourly_totals(small_result.records, small_result.layout)
        got = sum(float(arr.sum()) for arr in totals.values())
        want = sum(r.total_cell_impact_mbps_h for r in small_result.records if r.covered)
        assert got == pytest.approx(want, rel=1e-9)


class TestResultCsv:
    def test_per_event_row_count(self, small_result, tmp_path):
        path = tmp_path / "per_event.csv"
        write_per_event_csv(small_result.records, path)
        lines = path.read_text().splitlines()
        assert len(lines) == len(small_result.records) + 1
        assert lines[0] == ("day,event_id,year,area_id,covered,class,n_cells,"
                            "cell_impact_mbps_h,system_impact_fraction")

    def test_per_day_matches_summaries(self, small_result, tmp_path):
        import csv
        path = tmp_path / "per_day.csv"
        write_per_day_csv(small_result.summaries, path)
        with open(path, newline="") as f:
            rows = list(csv.DictReader(f))
        assert len(rows) == len(SMALL.years) * SMALL.n_days
        for row in rows[:10]:
            year, day = int(row["year"]), int(row["day"])
            want = small_result.summaries[year].daily_total_fraction[day - 1]
            assert float(row["total_system_impact_fraction"]) == pytest.approx(
                float(want), rel=1e-12)

    def test_per_hour_and_year_summaries_write(self, small_result, tmp_path):
        write_per_hour_csv(hourly_totals(small_result.records, small_result.layout),
                           tmp_path / "per_hour.csv")
        write_year_summary_csv(small_result.summaries[2], tmp_path / "ys.csv")
        assert (tmp_path / "per_hour.csv").stat().st_size > 0
        assert (tmp_path / "ys.csv").read_text().count("\n") >= 2
