ACCEPTANCE_CRITERIA = {
    "test_criterion_1_station_count_law":
        "criterion 1: Poisson count moments and spatial uniformity",
    "test_criterion_2_layout_and_coverage":
        "criterion 2: layout overlap invariants and year-1 coverage",
    "test_criterion_3_traffic_profiles":
        "criterion 3: profile peak scaling and industrial shift",
    "test_criterion_4_cell_impact_brute_force":
        "criterion 4: cell impact vs minute-resolution brute force",
    "test_criterion_5_severity_classes":
        "criterion 5: severity class law and expected cell count",
    "test_criterion_6_study_scale_run":
        "criterion 6: study-scale run ordering, growth and runtime",
    "test_criterion_7_worker_determinism":
        "criterion 7: byte-identical outputs across worker counts",
    "test_criterion_8_cleanup_accounting":
        "criterion 8: cleanup report vs constructed ground truth",
}


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """One PASS/FAIL line per acceptance criterion at the end of a run."""
    outcomes = {}
    for status in ("passed", "failed", "error"):
        for report in terminalreporter.stats.get(status, []):
            name = report.nodeid.split("::")[-1]
            if name in ACCEPTANCE_CRITERIA:
                outcome = "PASS" if status == "passed" else "FAIL"
                outcomes[name] = max(outcomes.get(name, "PASS"), outcome,
                                     key=lambda s: s == "FAIL")
    if not outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for name, label in ACCEPTANCE_CRITERIA.items():
        if name in outcomes:
            terminalreporter.write_line(f"{outcomes[name]}  {label}")
