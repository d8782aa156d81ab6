"""
Dubins reference and its smooth altitude profile
================================================

Straights through the waypoint pairs, circular fillets at their
intersections, flown at constant speed.  The raw altitude has curvature
jumps, so it is smoothed once with a quintic B-spline kernel to supply the
four derivatives the controller needs.
"""
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from rvfunnel import load_scenario, bundled_scenario_path

out = Path(__file__).with_name("out")
out.mkdir(exist_ok=True)

path = load_scenario(bundled_scenario_path()).path
for seg in path.segments:
    extra = f"R={seg.radius:9.0f} m" if seg.kind == "arc" else ""
    print(f"{seg.kind:8s} {seg.start_time:7.3f} -> {seg.end_time:7.3f} s  {seg.length:9.2f} m  {extra}")
print(f"total {path.length:.1f} m, {path.duration:.3f} s, kernel spacing {path.kernel_spacing:.3f} s")

t = np.linspace(0.0, path.duration + 2.0, 6000)
samples = np.array([path.sample(x) for x in t])
raw = path.raw(t)
inside = t < path.segments[-1].start_time
print("max |smooth - raw| before the last straight:", np.abs(samples[inside, 0] - raw[inside]).max())
print("max |smooth - raw| overall (terminal hold kink):", np.abs(samples[:, 0] - raw).max())

fig, axes = plt.subplots(3, 1, figsize=(7, 6), sharex=True)
axes[0].plot(t, raw, "k--", lw=0.8, label="raw")
axes[0].plot(t, samples[:, 0], lw=1.0, label="smoothed")
axes[0].set_ylabel("z (m)")
axes[0].legend(fontsize=8)
axes[1].plot(t, samples[:, 1])
axes[1].set_ylabel("dz/dt")
axes[2].plot(t, samples[:, 2])
axes[2].set_ylabel("d2z/dt2")
axes[2].set_xlabel("t (s)")
fig.tight_layout()
fig.savefig(out / "reference.svg")
