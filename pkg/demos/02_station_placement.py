"""Base-station placement: Poisson counts, uniform positions.

Samples the industrial and one residential deployment, checks the count
law empirically, and scatters the stations over the layout.
"""

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from skyshare import (
    AreaKind,
    CityExtent,
    PppConfig,
    place_areas,
    sample_area_stations,
    sample_bs_count,
)

rng = np.random.default_rng(7)
layout = place_areas(CityExtent(10.0), n_residential=4, rng=rng)
ppp = PppConfig()

# Empirical check of the count law: mean and variance of a Poisson
# variable coincide.
for area in (layout.industrial, layout.residential[0]):
    mean = ppp.mean_for(area)
    draws = np.array([sample_bs_count(mean, rng) for _ in range(20_000)])
    print(f"{area.id}: target mean {mean:6.1f}  "
          f"sample mean {draws.mean():6.1f}  sample var {draws.var(ddof=1):6.1f}")

stations = []
for i, area in enumerate(layout.areas):
    stations.extend(sample_area_stations(area, ppp, np.random.default_rng(100 + i),
                                         start_id=len(stations)))
print(f"\n{len(stations)} stations deployed, "
      f"{sum(s.area_id == 'IA' for s in stations)} of them industrial")

fig, ax = plt.subplots(figsize=(6, 6))
for a in layout.areas:
    ax.add_patch(plt.Rectangle((a.x_min, a.y_min), a.side_km, a.side_km,
                               facecolor="none", edgecolor="gray"))
colors = {AreaKind.INDUSTRIAL: "#c44e52", AreaKind.RESIDENTIAL: "#4c72b0"}
kind_of = {a.id: a.kind for a in layout.areas}
for kind in AreaKind:
    pts = np.array([s.position for s in stations if kind_of[s.area_id] is kind])
    ax.scatter(pts[:, 0], pts[:, 1], s=3, color=colors[kind], label=kind.value)
ax.set_xlim(0, 10)
ax.set_ylim(0, 10)
ax.set_aspect("equal")
ax.legend(loc="upper right")
ax.set_title("One sampled deployment (dense industrial, sparse residential)")

out = Path(__file__).with_suffix(".png")
fig.savefig(out, dpi=150, bbox_inches="tight")
print(f"wrote {out}")
