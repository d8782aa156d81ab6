"""
Closed loop on the bundled scenario
===================================

Run the controller against the reentry yaw model with the sinusoidal
disturbances.  The run stops at the first funnel violation; the record up
to that point is kept and plotted.
"""
from pathlib import Path

import numpy as np

from rvfunnel import FunnelViolation, feasibility_report, load_scenario, bundled_scenario_path, simulate
from rvfunnel.csvio import write_trajectory
from rvfunnel.plots import plot_record

out = Path(__file__).with_name("out") / "closed_loop"
sc = load_scenario(bundled_scenario_path())

print(feasibility_report(sc).summary())

try:
    rec = simulate(sc)
    print(f"completed {rec.t[-1]:.2f} s")
except FunnelViolation as exc:
    rec = exc.record
    print(exc)

w = np.abs(rec.block("w"))
print("max phi|e| per channel:", np.round(w.max(axis=0), 4))
print("max |u_sat|:", np.abs(rec["u_sat"]).max())
write_trajectory(rec, out / "trajectory.csv")
plot_record(rec, out, sc.saturation)
print("wrote", out)
