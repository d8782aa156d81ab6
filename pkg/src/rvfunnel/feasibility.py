"""Preconditions of the containment guarantee.

Two checks: strict initial funnel membership of every error, and the
trade-off bound between reference rate, disturbance and funnel widths

    |phi0'| / (V phi0**2) + 1/phi1 + D0/V + (1 + V)/V |z_ref'| <= mu < 1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .boundary import FunnelSchedule, eval_phi
from .reference import ReferencePath


@dataclass(frozen=True)
class ChannelCheck:
    channel: int
    value: float     # phi_i(0) |e_i(0)|, nan if an earlier channel already failed
    ok: bool


@dataclass
class FeasibilityReport:
    times: np.ndarray
    margin: np.ndarray          # left-hand side of the trade-off bound on the grid
    mu: float
    t_mu: float
    initial: Optional[list] = None

    @property
    def satisfied(self) -> bool:
        return self.mu < 1.0

    @property
    def initial_ok(self) -> Optional[bool]:
        if self.initial is None:
            return None
        return all(c.ok for c in self.initial)

    def summary(self) -> str:
        lines = []
        if self.initial is not None:
            for c in self.initial:
                state = "ok" if c.ok else "FAIL"
                lines.append(f"initial channel {c.channel}: phi*|e| = {c.value:.6g}  {state}")
        verdict = "satisfied" if self.satisfied else "NOT satisfied"
        lines.append(f"trade-off bound: mu = {self.mu:.6g} at t = {self.t_mu:.4f} s  "
                     f"({verdict}, needs mu < 1)")
        return "\n".join(lines)


def check_initial(state0: Sequence[float], path: ReferencePath,
                  schedules: Sequence[FunnelSchedule]) -> list[ChannelCheck]:
    """Strict membership ``phi_i(0) |e_i(0)| < 1`` along the error chain."""
    ref = path.sample(0.0)
    out = []
    carry = 0.0
    broken = False
    for i in range(4):
        if broken:
            out.append(ChannelCheck(i, math.nan, False))
            continue
        phi, _ = eval_phi(schedules[i], 0.0)
        e = state0[i] - ref[i] + carry
        w = phi * e
        ok = abs(w) < 1.0
        out.append(ChannelCheck(i, abs(w), ok))
        if ok:
            carry = w / (1.0 - w * w)
        else:
            broken = True
    return out


def condition15_lhs(sched0: FunnelSchedule, sched1: FunnelSchedule, path: ReferencePath,
                    V: float, D0: float, t: float) -> float:
    phi0, phi0_dot = eval_phi(sched0, t)
    phi1, _ = eval_phi(sched1, t)
    dz = path.sample(t)[1]
    return abs(phi0_dot) / (V * phi0 * phi0) + 1.0 / phi1 + D0 / V + (1.0 + V) / V * abs(dz)


def check_condition15(sched0: FunnelSchedule, sched1: FunnelSchedule, path: ReferencePath,
                      V: float, D0: float, grid: float = 1e-2,
                      horizon: Optional[float] = None) -> FeasibilityReport:
    """Evaluate the bound on a uniform grid; ``mu`` is its maximum.

    The default horizon is the path duration plus five time constants of the
    slowest final funnel phase, after which every term is constant or
    monotonically decaying.
    """
    if not grid > 0:
        raise ValueError("grid > 0 required")
    if horizon is None:
        slowest = min(sched0.segments[-1].rate, sched1.segments[-1].rate)
        horizon = path.duration + 5.0 / slowest
    n = int(math.ceil(horizon / grid))
    times = grid * np.arange(n + 1)
    lhs = np.array([condition15_lhs(sched0, sched1, path, V, D0, t) for t in times])
    k = int(np.argmax(lhs))
    return FeasibilityReport(times, lhs, float(lhs[k]), float(times[k]))


def feasibility_report(sc, grid: float = 1e-2) -> FeasibilityReport:
    """Both checks for a Scenario."""
    rep = check_condition15(sc.schedules[0], sc.schedules[1], sc.path, sc.vehicle.V,
                            sc.disturbance.bounds[0], grid=grid)
    rep.initial = check_initial(sc.initial, sc.path, sc.schedules)
    return rep
