"""Daily traffic profiles and the impact threshold.

Builds both per-kind hourly curves from the synthetic raw shape, marks
the capacity threshold above which spectrum lending displaces traffic,
and lists each kind's exposed hours.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from skyshare import AreaKind, SharedAccessPolicy, profiles_for_layout, synthetic_raw_profile

policy = SharedAccessPolicy()
capacity = 2660.0
profiles = profiles_for_layout(synthetic_raw_profile(), max_capacity_mbps=capacity)
threshold = policy.threshold_mbps(capacity)

ra = profiles[AreaKind.RESIDENTIAL]
ia = profiles[AreaKind.INDUSTRIAL]
print(f"residential peak {ra.peak_mbps:7.1f} Mbps at {ra.peak_hour:02d}:00")
print(f"industrial  peak {ia.peak_mbps:7.1f} Mbps at {ia.peak_hour:02d}:00")
print(f"threshold {threshold:.0f} Mbps "
      f"({policy.impact_threshold:.0%} of {capacity:.0f})")

# Only hours above the threshold can lose traffic while spectrum is lent.
for profile in (ia, ra):
    exposed = [h for h in range(24) if profile.mbps[h] > threshold]
    print(f"{profile.kind.value:12s} exposed hours: {exposed}")

hours = np.arange(24)
fig, ax = plt.subplots(figsize=(8, 4.5))
ax.step(hours, ra.mbps, where="post", label="residential", color="#4c72b0")
ax.step(hours, ia.mbps, where="post", label="industrial", color="#c44e52")
ax.axhline(threshold, linestyle="--", color="gray",
           label=f"threshold ({threshold:.0f} Mbps)")
ax.set_xlabel("hour of day")
ax.set_ylabel("Mbps per station")
ax.set_xticks(range(0, 25, 4))
ax.legend()
ax.set_title("Hourly profiles: the industrial curve is shifted into working hours")

out = Path(__file__).with_suffix(".png")
fig.savefig(out, dpi=150, bbox_inches="tight")
print(f"wrote {out}")
