"""Incident log cleanup and the three empirical laws.

Generates a noisy synthetic incident log, runs it through the cleanup
filters, reduces the result to daily-count, start-hour and duration
laws, and plots them against the calibrated stand-ins.
"""

from datetime import date
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from skyshare import (
    build_distributions,
    clean_event_log,
    expected_affected_cells,
    severity_probabilities,
    synthetic_event_distributions,
    synthetic_event_log,
)

rng = np.random.default_rng(11)
log = synthetic_event_log(date(2023, 1, 1), 365, rng)
kept, report = clean_event_log(log)

print(f"raw rows        {report.total_rows}")
print(f"kept            {report.kept_rows}")
print(f"dropped: type {report.dropped_type}, date {report.dropped_date}, "
      f"pumps {report.dropped_pumps}, duration {report.dropped_duration}")

empirical = build_distributions(kept)
reference = synthetic_event_distributions()
print(f"\nevents per day: mean {empirical.daily_count.mean():.1f} "
      f"(reference {reference.daily_count.mean():.1f})")
print(f"attendance:     mean {empirical.duration.mean():.0f} min, "
      f"longest {empirical.duration.support[-1]:.0f} min")

# Longer incidents claim more stations; the class probabilities follow
# straight from the duration law.
probs = severity_probabilities(empirical.duration)
print("severity classes:", np.array2string(probs, precision=3))
print(f"expected stations per event: {expected_affected_cells(empirical.duration):.2f}")

fig, axes = plt.subplots(1, 3, figsize=(13, 3.8))
axes[0].step(empirical.daily_count.support, empirical.daily_count.cdf,
             where="post", label="from log")
axes[0].step(reference.daily_count.support, reference.daily_count.cdf,
             where="post", linestyle="--", label="reference")
axes[0].set_title("events per day (CDF)")
axes[0].legend()

axes[1].bar(np.arange(24), empirical.start_hour.probabilities, width=0.9)
axes[1].set_title("start hour")
axes[1].set_xlabel("hour of day")

axes[2].step(empirical.duration.support, empirical.duration.cdf, where="post")
axes[2].set_xscale("log")
axes[2].set_title("attendance duration (CDF, min)")

out = Path(__file__).with_suffix(".png")
fig.savefig(out, dpi=150, bbox_inches="tight")
print(f"wrote {out}")
