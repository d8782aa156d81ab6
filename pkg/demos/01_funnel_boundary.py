"""
Non-monotonic funnel boundaries
===============================

Four exponential phases per channel, joined by cubic bridges that widen the
funnel while the reference turns.  Channels 1..3 are multiples of channel 0.
"""
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from rvfunnel import load_scenario, bundled_scenario_path

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

sc = load_scenario(bundled_scenario_path())
sched = sc.schedules[0]

# the trigger windows sit at the arc entries of the reference
for seg in sched.segments:
    kind = type(seg).__name__
    if kind == "CubicBridge":
        print(f"bridge  [{seg.tj:7.3f}, {seg.tj_bar:7.3f})  min width {seg.minimum()[0]:8.3f}")
    else:
        print(f"phase   t0={seg.t_start:7.3f}  rho0={seg.rho0:6.1f}  rho_inf={seg.rho_inf:5.1f}  l={seg.rate}")

t = np.linspace(0.0, sc.horizon, 4000)
fig, ax = plt.subplots(figsize=(7, 3.5))
for i, s in enumerate(sc.schedules):
    ax.semilogy(t, [s.width(x)[0] for x in t], label=f"channel {i}")
for tj in sched.junctions():
    ax.axvline(tj, color="0.8", lw=0.6)
ax.set_xlabel("t (s)")
ax.set_ylabel("funnel width")
ax.legend(fontsize=8)
fig.tight_layout()
fig.savefig(out / "boundaries.svg")

# C1 at the junctions: left and right limits agree
for tk in sched.junctions():
    k = sched.locate(tk)
    l, r = sched.segments[k - 1].value(tk), sched.segments[k].value(tk)
    print(f"t={tk:7.3f}  value jump {abs(l[0] - r[0]):.1e}  slope jump {abs(l[1] - r[1]):.1e}")
