"""Time-triggered, non-monotonic funnel boundaries.

A boundary is a chain of exponentially shrinking phases

    rho(t) = (rho0 - rho_inf) * exp(-rate * (t - t_start)) + rho_inf

joined by cubic bridges over the trigger windows ``[tj, tj_bar)``.  Each
phase runs on its own clock starting at the end of the preceding bridge, and
the bridge cubic is chosen so value and slope are continuous at both ends.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, replace
from typing import Sequence, Union

import numpy as np

MIN_BRIDGE_DURATION = 1e-6
_POSITIVITY_SAMPLES = 256


class BoundaryError(ValueError):
    """Raised when a funnel boundary cannot be built as requested."""


@dataclass(frozen=True)
class ExponentialSegment:
    rho0: float
    rho_inf: float
    rate: float
    t_start: float = 0.0

    def __post_init__(self):
        if not self.rho0 > 0:
            raise BoundaryError(f"rho0 > 0 required, got {self.rho0}")
        if not self.rho_inf > 0:
            raise BoundaryError(f"rho_inf > 0 required, got {self.rho_inf}")
        if not self.rate > 0:
            raise BoundaryError(f"rate > 0 required, got {self.rate}")
        if self.rho0 < self.rho_inf:
            raise BoundaryError(
                f"rho0 >= rho_inf required, got rho0={self.rho0}, rho_inf={self.rho_inf}")

    @property
    def start(self) -> float:
        return self.t_start

    def value(self, t: float) -> tuple[float, float]:
        ex = math.exp(-self.rate * (t - self.t_start))
        span = self.rho0 - self.rho_inf
        return span * ex + self.rho_inf, -self.rate * span * ex

    def scaled(self, factor: float) -> "ExponentialSegment":
        return replace(self, rho0=self.rho0 * factor, rho_inf=self.rho_inf * factor)


@dataclass(frozen=True)
class CubicBridge:
    """``a*s**3 + b*s**2 + c*s + d`` with ``s = t - tj`` on ``[tj, tj_bar)``."""

    a: float
    b: float
    c: float
    d: float
    tj: float
    tj_bar: float

    @property
    def start(self) -> float:
        return self.tj

    def value(self, t: float) -> tuple[float, float]:
        s = t - self.tj
        rho = ((self.a * s + self.b) * s + self.c) * s + self.d
        rho_dot = (3.0 * self.a * s + 2.0 * self.b) * s + self.c
        return rho, rho_dot

    def scaled(self, factor: float) -> "CubicBridge":
        return replace(self, a=self.a * factor, b=self.b * factor,
                       c=self.c * factor, d=self.d * factor)

    def minimum(self) -> tuple[float, float]:
        """Smallest value on the closed window and the time it is attained."""
        h = self.tj_bar - self.tj
        cands = [0.0, h]
        # interior extrema of the cubic
        for r in np.roots([3.0 * self.a, 2.0 * self.b, self.c]):
            if abs(r.imag) < 1e-12 and 0.0 < r.real < h:
                cands.append(float(r.real))
        cands.extend(np.linspace(0.0, h, _POSITIVITY_SAMPLES).tolist())
        vals = [self.value(self.tj + s)[0] for s in cands]
        k = int(np.argmin(vals))
        return vals[k], self.tj + cands[k]


Segment = Union[ExponentialSegment, CubicBridge]


def hermite_bridge(tj: float, tj_bar: float, v_left: float, s_left: float,
                   v_right: float, s_right: float,
                   min_duration: float = MIN_BRIDGE_DURATION) -> CubicBridge:
    """Cubic matching value and slope at both ends of ``[tj, tj_bar]``.

    Raises BoundaryError for windows shorter than `min_duration` or when the
    cubic is not strictly positive on the window.
    """
    h = tj_bar - tj
    if not h >= min_duration:
        raise BoundaryError(
            f"bridge window [{tj}, {tj_bar}] shorter than minimum {min_duration} s")
    if not (v_left > 0 and v_right > 0):
        raise BoundaryError(f"bridge end values must be positive, got {v_left}, {v_right}")
    dv = v_right - v_left
    b = (3.0 * dv - h * (2.0 * s_left + s_right)) / h**2
    a = (h * (s_left + s_right) - 2.0 * dv) / h**3
    bridge = CubicBridge(a=a, b=b, c=s_left, d=v_left, tj=tj, tj_bar=tj_bar)
    lowest, where = bridge.minimum()
    if not lowest > 0:
        raise BoundaryError(
            f"bridge on [{tj}, {tj_bar}] is non-positive ({lowest:.6g}) at t={where:.9g}")
    return bridge


@dataclass(frozen=True)
class FunnelSchedule:
    segments: tuple
    channel: int = 0
    trigger_count: int = 0

    def __post_init__(self):
        starts = tuple(seg.start for seg in self.segments)
        if not starts or starts[0] != 0.0:
            raise BoundaryError("schedule must start at t = 0")
        if any(b <= a for a, b in zip(starts, starts[1:])):
            raise BoundaryError("schedule segments must be in strictly increasing order")
        object.__setattr__(self, "_starts", starts)

    def locate(self, t: float) -> int:
        """Index of the segment whose half-open interval contains `t`."""
        return max(bisect_right(self._starts, t) - 1, 0)

    def width(self, t: float) -> tuple[float, float]:
        return self.segments[self.locate(t)].value(t)

    def junctions(self) -> tuple:
        return self._starts[1:]

    @property
    def final_width(self) -> float:
        return self.segments[-1].rho_inf

    def scaled(self, factor: float, channel: int | None = None) -> "FunnelSchedule":
        if not factor > 0:
            raise BoundaryError(f"scale factor must be positive, got {factor}")
        return FunnelSchedule(tuple(seg.scaled(factor) for seg in self.segments),
                              self.channel if channel is None else channel,
                              self.trigger_count)


def build_schedule(phases: Sequence[ExponentialSegment],
                   triggers: Sequence[tuple[float, float]],
                   channel: int = 0,
                   min_duration: float = MIN_BRIDGE_DURATION) -> FunnelSchedule:
    """Stitch ``len(triggers) + 1`` exponential phases with Hermite bridges.

    The ``t_start`` of each given phase is overwritten: phase 0 starts at 0,
    phase j at the end of trigger window j.
    """
    if len(phases) != len(triggers) + 1:
        raise BoundaryError(
            f"need one more phase than trigger windows, got {len(phases)} phases "
            f"and {len(triggers)} windows")
    prev_end = 0.0
    for k, (tj, tj_bar) in enumerate(triggers):
        if not tj_bar > tj:
            raise BoundaryError(f"trigger window {k} is empty: ({tj}, {tj_bar})")
        if tj <= prev_end:
            raise BoundaryError(
                f"trigger window {k} ({tj}, {tj_bar}) overlaps or precedes the previous one")
        prev_end = tj_bar

    segments: list[Segment] = [replace(phases[0], t_start=0.0)]
    for (tj, tj_bar), phase in zip(triggers, phases[1:]):
        left = segments[-1]
        right = replace(phase, t_start=tj_bar)
        v_left, s_left = left.value(tj)
        v_right, s_right = right.value(tj_bar)
        segments.append(hermite_bridge(tj, tj_bar, v_left, s_left, v_right, s_right,
                                       min_duration=min_duration))
        segments.append(right)
    return FunnelSchedule(tuple(segments), channel, len(triggers))


def eval_width(schedule: FunnelSchedule, t: float) -> tuple[float, float]:
    """Boundary width and its time derivative."""
    return schedule.width(t)


def eval_phi(schedule: FunnelSchedule, t: float) -> tuple[float, float]:
    """Reciprocal width and its time derivative."""
    rho, rho_dot = schedule.width(t)
    return 1.0 / rho, -rho_dot / (rho * rho)


def contains(schedule: FunnelSchedule, t: float, e: float) -> bool:
    phi, _ = eval_phi(schedule, t)
    return phi * abs(e) < 1.0
