"""
Why the errors leave their funnels
==================================

The recursive errors e_i = y_i - z^(i) + k_{i-1} w_{i-1} assume each state
drives the previous one with a positive unit gain.  In the yaw model the
first link is dz/dt = -V sin(psi_V), so pushing e1 towards zero sets
psi_V ~ dz_ref - k0 w0 and the altitude error is driven *outward*.
"""
import numpy as np

from rvfunnel import FunnelViolation, load_scenario, bundled_scenario_path, simulate

sc = load_scenario(bundled_scenario_path())
try:
    rec = simulate(sc)
except FunnelViolation as exc:
    rec = exc.record

V = sc.vehicle.V
e0 = rec["e0"]
de0 = -V * np.sin(rec["y1"]) + rec["d0"] - rec["dzref"]
# fraction of samples where the altitude error grows in magnitude
growing = np.sign(e0) * de0 > 0
print(f"|e0| growing in {growing.mean():.0%} of {len(e0)} samples")
for k in range(0, len(rec), 50):
    print(f"t={rec.t[k]:5.2f}  e0={e0[k]:9.3f}  de0/dt={de0[k]:9.3f}  "
          f"w=({', '.join(f'{x:+.3f}' for x in rec.block('w')[k])})")

# with V -> -V the first link would have the assumed sign; the second link
# (dpsi_V/dt = -c1 - c2 beta, c2 ~ 5e-4) is still reversed and nearly absent
c = sc.constants
print(f"c1={c.c1:.3e} c2={c.c2:.3e} c3={c.c3:.3e} c4={c.c4:.3e} c5={c.c5:.3e}")
