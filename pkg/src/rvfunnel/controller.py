"""Recursive funnel errors and the saturated funnel control law."""
from __future__ import annotations

import math
from typing import NamedTuple, Optional, Sequence

from .boundary import FunnelSchedule, eval_phi


class FunnelViolation(RuntimeError):
    """An error left its funnel: ``phi_i(t) * |e_i| >= 1`` (up to the guard band)."""

    def __init__(self, channel: int, time: float, error: float, width: float,
                 record=None):
        self.channel = channel
        self.time = time
        self.error = error
        self.width = width
        self.record = record
        super().__init__(
            f"funnel violation on channel {channel} at t={time:.9f} s: "
            f"|e|={abs(error):.6g} >= width {width:.6g}")


class ControllerOutput(NamedTuple):
    e: tuple
    w: tuple
    k: tuple
    phi: tuple
    u_raw: Optional[float] = None
    u_sat: Optional[float] = None


def gain(w: float) -> float:
    return 1.0 / (1.0 - w * w)


def compute_errors(state: Sequence[float], ref: Sequence[float],
                   schedules: Sequence[FunnelSchedule], t: float,
                   guard: float = 0.0) -> ControllerOutput:
    """Errors e0..e3, normalized errors and gains, evaluated in index order.

    ``e0 = y0 - z_ref`` and ``e_i = y_i - z_ref^(i) + k_{i-1} w_{i-1}``.
    Raises FunnelViolation for the first channel with
    ``phi_i |e_i| >= 1 - guard``.
    """
    e, w, k, phi = [], [], [], []
    carry = 0.0
    for i in range(4):
        ph, _ = eval_phi(schedules[i], t)
        ei = state[i] - ref[i] + carry
        wi = ph * ei
        if abs(wi) >= 1.0 - guard:
            raise FunnelViolation(i, t, ei, 1.0 / ph)
        ki = 1.0 / (1.0 - wi * wi)
        e.append(ei)
        w.append(wi)
        k.append(ki)
        phi.append(ph)
        carry = ki * wi
    return ControllerOutput(tuple(e), tuple(w), tuple(k), tuple(phi))


def control_law(e3: float, phi3: float) -> float:
    """``u = -e3 / (1 - phi3**2 e3**2)``."""
    w = phi3 * e3
    if abs(w) >= 1.0:
        raise FunnelViolation(3, math.nan, e3, 1.0 / phi3)
    return -e3 / (1.0 - w * w)


def saturate(u: float, limit: float = 40.0) -> float:
    if u > limit:
        return limit
    if u < -limit:
        return -limit
    return u
