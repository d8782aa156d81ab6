"""Static SVG figures of a closed-loop run, drawn from trajectory CSV content only."""
from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .csvio import read_trajectory  # noqa: E402
from .sim import TrajectoryRecord  # noqa: E402

plt.rcParams["svg.hashsalt"] = "rvfunnel"

PLOT_FILES = ("e0.svg", "e1.svg", "e2.svg", "e3.svg", "u.svg", "states.svg", "altitude.svg")
_ERROR_LABELS = ("tracking error $e_0$ (m)", "$e_1$", "$e_2$", "$e_3$")


def _save(fig, path: Path) -> Path:
    fig.tight_layout()
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path


def plot_record(rec: TrajectoryRecord, out_dir, saturation: float = 40.0) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    t = rec.t
    written = []
    for i in range(4):
        fig, ax = plt.subplots(figsize=(6, 3.2))
        rho = rec[f"rho{i}"]
        ax.fill_between(t, -rho, rho, color="0.9", label=r"funnel $\pm\bar\rho$")
        ax.plot(t, rho, "k--", lw=0.8)
        ax.plot(t, -rho, "k--", lw=0.8)
        ax.plot(t, rec[f"e{i}"], "C0", lw=1.2, label=f"$e_{i}$")
        ax.set_xlabel("t (s)")
        ax.set_ylabel(_ERROR_LABELS[i])
        ax.legend(loc="upper right", fontsize=8)
        written.append(_save(fig, out / f"e{i}.svg"))

    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.plot(t, rec["u_raw"], "C1", lw=0.8, alpha=0.7, label="unsaturated")
    ax.plot(t, rec["u_sat"], "C0", lw=1.2, label=r"applied $\delta_y$")
    for s in (saturation, -saturation):
        ax.axhline(s, color="r", ls=":", lw=0.8)
    ax.set_xlabel("t (s)")
    ax.set_ylabel("rudder command")
    ax.legend(loc="upper right", fontsize=8)
    written.append(_save(fig, out / "u.svg"))

    fig, axes = plt.subplots(2, 2, figsize=(7, 5), sharex=True)
    panels = [("y1", r"$\psi_V$ (rad)"), ("y2", r"$\beta$ (rad)"),
              ("psi", r"$\psi$ (rad)"), ("y3", r"$\omega_y$ (rad/s)")]
    for ax, (col, label) in zip(axes.flat, panels):
        ax.plot(t, rec[col], lw=1.0)
        ax.set_ylabel(label)
    for ax in axes[1]:
        ax.set_xlabel("t (s)")
    written.append(_save(fig, out / "states.svg"))

    fig, ax = plt.subplots(figsize=(6, 3.2))
    ax.plot(t, rec["zref"], "k--", lw=1.0, label=r"$z_{h,ref}$")
    ax.plot(t, rec["y0"], "C0", lw=1.2, label=r"$z_h$")
    ax.set_xlabel("t (s)")
    ax.set_ylabel("altitude (m)")
    ax.legend(loc="upper right", fontsize=8)
    written.append(_save(fig, out / "altitude.svg"))
    return written


def plot_csv(csv_path, out_dir, saturation: float = 40.0) -> list[Path]:
    return plot_record(read_trajectory(csv_path), out_dir, saturation)
