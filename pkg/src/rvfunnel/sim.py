"""Closed-loop simulation: plant + funnel controller + disturbances + reference."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .controller import FunnelViolation, compute_errors, saturate
from .integrate import StepFailure, dopri5
from .plant import (DEG_PER_RAD, DerivedConstants, DisturbanceSpec, PlantState,
                    VehicleParams, derive_constants, eval_disturbance, plant_rhs)
from .reference import ReferencePath

_EVENT_TOL = 1e-7

COLUMNS = (
    ["t", "y0", "y1", "y2", "y3", "psi"]
    + [f"e{i}" for i in range(4)] + [f"w{i}" for i in range(4)]
    + [f"k{i}" for i in range(4)] + [f"rho{i}" for i in range(4)]
    + ["u_raw", "u_sat"] + [f"d{i}" for i in range(4)]
    + ["zref", "dzref", "d2zref", "d3zref"]
)


@dataclass(frozen=True, eq=False)
class Scenario:
    vehicle: VehicleParams
    disturbance: DisturbanceSpec
    path: ReferencePath
    schedules: tuple
    initial: PlantState
    horizon: float
    rtol: float = 1e-6
    atol: float = 1e-8
    max_step: float = 0.1
    min_step: float = 1e-9
    output_step: float = 0.01
    saturation: float = 40.0
    guard: float = 1e-6
    input_unit: str = "deg"
    deg_per_rad: float = DEG_PER_RAD
    include_chord_in_c4c5: bool = False
    name: str = "scenario"
    output_dir: Optional[str] = None
    plots: bool = True

    def __post_init__(self):
        if len(self.schedules) != 4:
            raise ValueError("a scenario needs four funnel schedules")
        if not self.horizon > 0:
            raise ValueError("horizon > 0 required")
        for key in ("rtol", "atol", "max_step", "min_step", "output_step", "saturation"):
            if not getattr(self, key) > 0:
                raise ValueError(f"{key} > 0 required")
        if not 0 <= self.guard < 1:
            raise ValueError("guard must lie in [0, 1)")
        if self.input_unit not in ("deg", "rad"):
            raise ValueError(f"input_unit must be 'deg' or 'rad', got {self.input_unit!r}")

    @property
    def constants(self) -> DerivedConstants:
        return derive_constants(self.vehicle, self.include_chord_in_c4c5)


@dataclass
class TrajectoryRecord:
    data: np.ndarray
    columns: tuple = tuple(COLUMNS)
    violation: Optional[FunnelViolation] = None

    def __len__(self):
        return self.data.shape[0]

    def __getitem__(self, name: str) -> np.ndarray:
        return self.data[:, self.columns.index(name)]

    @property
    def t(self) -> np.ndarray:
        return self["t"]

    def block(self, prefix: str) -> np.ndarray:
        return np.column_stack([self[f"{prefix}{i}"] for i in range(4)])

    @property
    def states(self) -> np.ndarray:
        return self.block("y")


class ClosedLoop:
    """Vector field and signal evaluation for one scenario.

    Inside `rhs` the normalized errors are clipped to ``1 - guard`` so the
    gains stay finite on trial stages; leaving the funnel is detected
    separately on accepted steps.
    """

    def __init__(self, sc: Scenario):
        self.sc = sc
        self.c = sc.constants
        self.p = sc.vehicle
        self.path = sc.path
        self.schedules = sc.schedules
        self.dist = sc.disturbance
        self.u_scale = 1.0 / sc.deg_per_rad if sc.input_unit == "deg" else 1.0
        self.limit = sc.saturation
        self.w_cap = 1.0 - sc.guard if sc.guard > 0 else 1.0 - 1e-15
        self.nfev = 0

    def control(self, t: float, y) -> tuple[float, float]:
        ref = self.path.sample(t)
        carry = 0.0
        cap = self.w_cap
        for i in range(4):
            rho = self.schedules[i].width(t)[0]
            w = (y[i] - ref[i] + carry) / rho
            if w > cap:
                w = cap
            elif w < -cap:
                w = -cap
            carry = w / (1.0 - w * w)
        # k3 * e3 = k3 * w3 * rho3
        u_raw = -carry * rho
        return u_raw, saturate(u_raw, self.limit)

    def rhs(self, t: float, y) -> np.ndarray:
        self.nfev += 1
        _, u_sat = self.control(t, y)
        d = eval_disturbance(self.dist, t)
        return np.array(plant_rhs(y, u_sat * self.u_scale, d, self.p, self.c))

    def normalized(self, t: float, y) -> list[float]:
        """``phi_i |e_i|`` in channel order, stopping after the first channel outside."""
        ref = self.path.sample(t)
        out = []
        carry = 0.0
        for i in range(4):
            rho = self.schedules[i].width(t)[0]
            w = (y[i] - ref[i] + carry) / rho
            out.append(abs(w))
            if abs(w) >= 1.0:
                break
            carry = w / (1.0 - w * w)
        return out

    def row(self, t: float, y) -> list[float]:
        ref = self.path.sample(t)
        out = compute_errors(y, ref, self.schedules, t)
        u_raw = -out.k[3] * out.e[3]
        u_sat = saturate(u_raw, self.limit)
        rho = [1.0 / ph for ph in out.phi]
        d = eval_disturbance(self.dist, t)
        return ([t, y[0], y[1], y[2], y[3], y[2] + y[1]] + list(out.e) + list(out.w)
                + list(out.k) + rho + [u_raw, u_sat] + list(d) + list(ref[:4]))


def detect_violation(t0: float, t1: float,
                     normalized_at: Callable[[float], Sequence[float]],
                     guard: float = 1e-6, tol: float = 1e-7,
                     probes: int = 4) -> Optional[tuple[float, int]]:
    """First time in ``(t0, t1]`` where some ``phi_i |e_i| >= 1 - guard``.

    `normalized_at(t)` returns the per-channel normalized magnitudes (it may
    stop at the first channel outside).  The step is probed at `probes`
    evenly spaced points; the first flagged probe is bracketed and bisected
    to `tol`.  Returns ``(time, channel)`` or None.
    """
    threshold = 1.0 - guard

    def flagged(t):
        vals = normalized_at(t)
        for i, v in enumerate(vals):
            if v >= threshold:
                return i
        return None

    lo = t0
    hi = None
    for k in range(1, probes + 1):
        tk = t0 + (t1 - t0) * k / probes
        if flagged(tk) is not None:
            hi = tk
            break
        lo = tk
    if hi is None:
        return None
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if flagged(mid) is not None:
            hi = mid
        else:
            lo = mid
    return hi, flagged(hi)


def _output_times(t0: float, t1: float, dt: float, first_index: int) -> tuple[list, int]:
    out = []
    k = first_index
    while True:
        tk = k * dt
        if tk > t1 + 1e-12:
            break
        if tk > t0 or k == 0:
            out.append(min(tk, t1))
        k += 1
    return out, k


def simulate(sc: Scenario, horizon: Optional[float] = None) -> TrajectoryRecord:
    """Integrate the closed loop up to the horizon.

    Raises FunnelViolation (with the partial record attached as ``.record``)
    when an error reaches ``1 - guard`` of its funnel, and StepFailure when
    the adaptive step underflows.
    """
    loop = ClosedLoop(sc)
    t_end = sc.horizon if horizon is None else horizon
    y0 = np.array(sc.initial, dtype=float)
    rows: list[list[float]] = []

    vals = loop.normalized(0.0, y0)
    for i, v in enumerate(vals):
        if v >= 1.0 - sc.guard:
            exc = _violation(loop, 0.0, y0, i)
            exc.record = TrajectoryRecord(np.empty((0, len(COLUMNS))), violation=exc)
            raise exc

    next_index = 0
    try:
        for step in dopri5(loop.rhs, 0.0, y0, t_end, rtol=sc.rtol, atol=sc.atol,
                           max_step=sc.max_step, min_step=sc.min_step):
            hit = detect_violation(step.t0, step.t1, lambda t: loop.normalized(t, step(t)),
                                   guard=sc.guard, tol=_EVENT_TOL)
            stop = hit[0] if hit else step.t1
            times, next_index = _output_times(step.t0, stop, sc.output_step, next_index)
            for tk in times:
                if hit and tk >= stop:
                    break
                rows.append(loop.row(tk, step(tk)))
            if hit:
                t_ev, channel = hit
                y_ev = step(t_ev)
                exc = _violation(loop, t_ev, y_ev, channel)
                # last recorded row: the event itself, or the inside end of the bracket
                for t_last in (t_ev, t_ev - _EVENT_TOL):
                    if rows and t_last <= rows[-1][0]:
                        break
                    try:
                        rows.append(loop.row(t_last, step(t_last)))
                        break
                    except FunnelViolation:
                        continue
                exc.record = TrajectoryRecord(np.array(rows).reshape(-1, len(COLUMNS)),
                                              violation=exc)
                raise exc
    except StepFailure as exc:
        exc.record = TrajectoryRecord(np.array(rows).reshape(-1, len(COLUMNS)))
        raise
    return TrajectoryRecord(np.array(rows).reshape(-1, len(COLUMNS)))


def _violation(loop: ClosedLoop, t: float, y, channel: int) -> FunnelViolation:
    ref = loop.path.sample(t)
    carry = 0.0
    e = math.nan
    rho = math.nan
    for i in range(channel + 1):
        rho = loop.schedules[i].width(t)[0]
        e = y[i] - ref[i] + carry
        w = e / rho
        carry = w / (1.0 - w * w) if abs(w) < 1.0 else math.inf
    return FunnelViolation(channel, t, e, rho)
