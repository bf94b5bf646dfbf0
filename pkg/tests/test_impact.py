import numpy as np
import pytest

from skyshare import (
    AreaKind,
    AreaSpec,
    CityExtent,
    CityLayout,
    EmergencyEvent,
    EmpiricalDistribution,
    NoStationsError,
    SharedAccessPolicy,
    StationIndex,
    assess_event,
    cell_impact,
    cell_impact_by_hour,
    expected_affected_cells,
    place_stations,
    severity_class,
    severity_probabilities,
    system_impact,
)
from skyshare.traffic import HourlyProfile

POLICY = SharedAccessPolicy()


def brute_force_impact(profile, start_min, duration_min, threshold):
    """Minute-by-minute reference: exact for integer-minute windows."""
    total = 0.0
    for m in range(int(start_min), int(start_min + duration_min)):
        excess = profile[(m // 60) % 24] - threshold
        if excess > 0.0:
            total += excess / 60.0
    return total


class TestSeverityClass:
    def test_boundaries_split_the_maximum_evenly(self):
        assert POLICY.class_boundaries() == (285.0, 570.0, 855.0, 1140.0)

    def test_boundary_durations_stay_in_the_lower_class(self):
        assert severity_class(285.0) == 1
        assert severity_class(570.0) == 2
        assert severity_class(855.0) == 3
        assert severity_class(1140.0) == 4

    def test_values_just_past_a_boundary_move_up(self):
        assert severity_class(285.1) == 2
        assert severity_class(570.1) == 3
        assert severity_class(855.1) == 4

    def test_extremes(self):
        assert severity_class(0.1) == 1
        assert severity_class(5000.0) == 4
        with pytest.raises(ValueError):
            severity_class(0.0)

    def test_respects_custom_policies(self):
        policy = SharedAccessPolicy(severity_classes=2, max_duration_min=100.0)
        assert severity_class(50.0, policy) == 1
        assert severity_class(50.1, policy) == 2
        assert severity_class(99.0, policy) == 2


class TestSeverityProbabilities:
    def uniform_law(self):
        # One point per class, all binary-exact quarters: the class
        # probabilities and the expected cell count come out exact.
        return EmpiricalDistribution(np.array([142.5, 427.5, 712.5, 997.5]),
                                     np.array([0.25, 0.5, 0.75, 1.0]))

    def test_uniform_duration_gives_equal_classes(self):
        probs = severity_probabilities(self.uniform_law())
        np.testing.assert_array_equal(probs, [0.25, 0.25, 0.25, 0.25])

    def test_expected_cells_is_exact(self):
        assert expected_affected_cells(self.uniform_law()) == 2.5

    def test_skewed_law(self):
        dist = EmpiricalDistribution(np.array([10.0, 300.0]), np.array([0.9, 1.0]))
        probs = severity_probabilities(dist)
        np.testing.assert_allclose(probs, [0.9, 0.1, 0.0, 0.0], rtol=1e-12)


class TestCellImpact:
    def test_hand_case_with_midnight_wrap(self):
        profile = np.full(24, 10.0)
        profile[[22, 23, 0]] = 2400.0
        # 23:30 for 90 minutes: half an hour of hour 23, all of hour 0,
        # both 405 Mbps over the 1995 threshold.
        got = cell_impact(profile, 23 * 60 + 30.0, 90.0, 1995.0)
        assert got == pytest.approx(607.5, rel=1e-12)

    def test_hand_case_fractional_window(self):
        profile = np.zeros(24)
        profile[10] = 2100.0
        got = cell_impact(profile, 10 * 60 + 15.0, 30.0, 1995.0)
        assert got == pytest.approx(52.5, rel=1e-12)

    def test_matches_minute_resolution_brute_force(self):
        rng = np.random.default_rng(21)
        threshold = 0.75 * 2660.0
        for _ in range(300):
            profile = rng.uniform(0.0, 2660.0, 24)
            start = float(rng.integers(0, 1440))
            duration = float(rng.integers(1, 3000))
            got = cell_impact(profile, start, duration, threshold)
            want = brute_force_impact(profile, start, duration, threshold)
            assert got == pytest.approx(want, rel=1e-9, abs=1e-12)

    def test_sub_threshold_profile_is_exactly_zero(self):
        rng = np.random.default_rng(22)
        for _ in range(50):
            profile = rng.uniform(0.0, 1995.0, 24)
            start = float(rng.uniform(0.0, 1440.0))
            duration = float(rng.uniform(1.0, 3000.0))
            assert cell_impact(profile, start, duration, 1995.0) == 0.0

    def test_multi_day_event_repeats_the_profile(self):
        profile = np.full(24, 2100.0)
        # 48 hours of constant 105 Mbps excess.
        got = cell_impact(profile, 300.0, 2880.0, 1995.0)
        assert got == pytest.approx(48 * 105.0, rel=1e-12)

    def test_hour_breakdown_sums_to_the_total(self):
        rng = np.random.default_rng(23)
        for _ in range(50):
            profile = rng.uniform(0.0, 2660.0, 24)
            start = float(rng.uniform(0.0, 1440.0))
            duration = float(rng.uniform(1.0, 4000.0))
            breakdown = cell_impact_by_hour(profile, start, duration, 1995.0)
            total = cell_impact(profile, start, duration, 1995.0)
            assert breakdown.sum() == pytest.approx(total, rel=1e-12, abs=1e-12)
            assert breakdown.shape == (24,)

    def test_accepts_profile_objects(self):
        values = tuple([2100.0] * 24)
        profile = HourlyProfile(AreaKind.RESIDENTIAL, values)
        assert cell_impact(profile, 0.0, 60.0, 1995.0) == pytest.approx(105.0)


class TestSystemImpact:
    def test_hand_case(self):
        # Two cells losing 665 Mbps.h each in a 387-station area.
        got = system_impact(1330.0, 387, 2660.0)
        assert got == pytest.approx(5.383290267011197e-05, rel=1e-12)

    def test_zero_stations_is_an_error(self):
        with pytest.raises(NoStationsError):
            system_impact(100.0, 0, 2660.0)


def two_area_layout():
    return CityLayout(CityExtent(10.0), (
        AreaSpec("IA", AreaKind.INDUSTRIAL, (2.0, 2.0)),
        AreaSpec("RA1", AreaKind.RESIDENTIAL, (7.0, 7.0), deployment_year=2)))


def flat_profiles(ia_mbps, ra_mbps):
    return {AreaKind.INDUSTRIAL: HourlyProfile(AreaKind.INDUSTRIAL,
                                               (float(ia_mbps),) * 24),
            AreaKind.RESIDENTIAL: HourlyProfile(AreaKind.RESIDENTIAL,
                                                (float(ra_mbps),) * 24)}


def event(x, y, duration=100.0, start=600.0, day=1, index=0):
    return EmergencyEvent(day, index, start, duration, (x, y))


class TestAssessEvent:
    def make_indexes(self, layout, n_ia=20, n_ra=10):
        rng = np.random.default_rng(24)
        ia = place_stations(layout.areas[0], n_ia, rng)
        ra = place_stations(layout.areas[1], n_ra, rng, start_id=n_ia)
        return {"IA": StationIndex(ia), "RA1": StationIndex(ra)}, ia, ra

    def test_uncovered_event_scores_zero(self):
        layout = two_area_layout()
        indexes, _, _ = self.make_indexes(layout)
        record = assess_event(event(9.9, 0.1), layout, indexes,
                              flat_profiles(2400, 2400), 5)
        assert not record.covered
        assert record.area_id is None
        assert record.n_cells == 0
        assert record.cell_impact_mbps_h == 0.0
        assert record.system_impact_fraction == 0.0
        assert record.severity == 1

    def test_area_not_yet_deployed_means_uncovered(self):
        layout = two_area_layout()
        indexes, _, _ = self.make_indexes(layout)
        record = assess_event(event(7.0, 7.0), layout, indexes,
                              flat_profiles(2400, 2400), 1)
        assert not record.covered

    def test_covered_event_claims_k_nearest(self):
        layout = two_area_layout()
        indexes, ia_stations, _ = self.make_indexes(layout)
        e = event(2.0, 2.0, duration=600.0)  # class 3
        record = assess_event(e, layout, indexes, flat_profiles(2400, 2400), 1)
        assert record.covered and record.area_id == "IA"
        assert record.severity == 3
        want = sorted(ia_stations,
                      key=lambda s: ((s.position[0] - 2.0) ** 2
                                     + (s.position[1] - 2.0) ** 2, s.id))[:3]
        assert record.affected_cell_ids == tuple(s.id for s in want)

    def test_impact_arithmetic_is_consistent(self):
        layout = two_area_layout()
        indexes, _, _ = self.make_indexes(layout)
        e = event(2.0, 2.0, duration=120.0, start=60.0)
        record = assess_event(e, layout, indexes, flat_profiles(2400, 0), 1)
        # Constant 405 Mbps excess for two hours, one cell (class 1).
        assert record.cell_impact_mbps_h == pytest.approx(810.0, rel=1e-12)
        want_fraction = 810.0 / (20 * 2660.0 * 24.0)
        assert record.system_impact_fraction == pytest.approx(want_fraction, rel=1e-12)
        assert record.hour_breakdown.sum() == pytest.approx(
            record.total_cell_impact_mbps_h, rel=1e-12)

    def test_severity_clamps_to_available_stations(self):
        layout = two_area_layout()
        rng = np.random.default_rng(25)
        indexes = {"IA": StationIndex(place_stations(layout.areas[0], 2, rng)),
                   "RA1": StationIndex([])}
        e = event(2.0, 2.0, duration=1100.0)  # class 4, only 2 stations
        record = assess_event(e, layout, indexes, flat_profiles(2400, 2400), 1)
        assert record.severity == 4
        assert record.n_cells == 2

    def test_empty_area_is_an_error(self):
        layout = two_area_layout()
        indexes = {"IA": StationIndex([]), "RA1": StationIndex([])}
        with pytest.raises(NoStationsError):
            assess_event(event(2.0, 2.0), layout, indexes,
                         flat_profiles(2400, 2400), 1)

    def test_accepts_flat_station_sequences(self):
        layout = two_area_layout()
        indexes, ia_stations, ra_stations = self.make_indexes(layout)
        e = event(2.0, 2.0)
        via_index = assess_event(e, layout, indexes, flat_profiles(2400, 2400), 1)
        via_list = assess_event(e, layout, ia_stations + ra_stations,
                                flat_profiles(2400, 2400), 1)
        assert via_index.affected_cell_ids == via_list.affected_cell_ids
        assert via_index.cell_impact_mbps_h == via_list.cell_impact_mbps_h


class TestPolicyValidation:
    def test_rejects_out_of_range_parameters(self):
        with pytest.raises(ValueError):
            SharedAccessPolicy(emergency_fraction=0.0)
        with pytest.raises(ValueError):
            SharedAccessPolicy(impact_threshold=1.0)
        with pytest.raises(ValueError):
            SharedAccessPolicy(severity_classes=0)
        with pytest.raises(ValueError):
            SharedAccessPolicy(max_duration_min=-1.0)

    def test_threshold_in_mbps(self):
        assert POLICY.threshold_mbps(2660.0) == pytest.approx(1995.0, rel=1e-12)
