"""Dubins-style planning path and the smooth altitude reference built on it.

The path in the (downrange x, lateral z) plane is made of straight lines
joined by circular fillets, flown at constant speed.  The resulting altitude
profile z(t) is only C1 in time (curvature jumps at every line/arc junction),
so the reference handed to the controller is a C4 version of it: z(t) is
convolved with a quintic B-spline kernel whose width is set by the smoothing
tolerance, sampled on a uniform grid and interpolated by a quintic spline.
Straight stretches further than the kernel half-width from any junction are
left exactly linear by the convolution.
"""
from __future__ import annotations

import math
from bisect import bisect_right
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.interpolate import BSpline, PPoly, make_interp_spline

_GAUSS_X, _GAUSS_W = np.polynomial.legendre.leggauss(12)


class PathError(ValueError):
    """Raised for waypoint sets that cannot be turned into a path."""


@dataclass(frozen=True)
class Waypoint:
    x: float
    z: float
    label: str = ""


@dataclass(frozen=True)
class PathSegment:
    kind: str                      # "straight" or "arc"
    length: float
    start_time: float
    end_time: float
    start: tuple                   # (x, z)
    end: tuple
    heading_in: float              # rad, measured from +x towards +z
    heading_out: float
    center: Optional[tuple] = None
    radius: Optional[float] = None
    sweep: float = 0.0             # signed central angle, rad

    @property
    def duration(self) -> float:
        return self.end_time - self.start_time

    @property
    def central_angle(self) -> float:
        return abs(self.sweep)

    def heading(self, t):
        if self.kind == "straight":
            return np.full_like(np.asarray(t, dtype=float), self.heading_in)
        s = (np.asarray(t, dtype=float) - self.start_time) / self.duration
        return self.heading_in + self.sweep * s

    def lateral(self, t):
        """Raw z along this segment (also valid as an extrapolation)."""
        t = np.asarray(t, dtype=float)
        if self.kind == "straight":
            speed = self.length / self.duration
            return self.start[1] + speed * math.sin(self.heading_in) * (t - self.start_time)
        sign = math.copysign(1.0, self.sweep)
        return self.center[1] - sign * self.radius * np.cos(self.heading(t))


@dataclass(frozen=True, eq=False)
class ReferencePath:
    segments: tuple
    speed: float
    smoothing_grid: float
    smoothing_tol: float
    kernel_spacing: float
    profile: PPoly = field(repr=False)

    def __post_init__(self):
        x = self.profile.x
        c = self.profile.c
        object.__setattr__(self, "_breaks", x[:-1].tolist())
        object.__setattr__(self, "_t_last", float(x[-1]))
        object.__setattr__(self, "_coef", [tuple(col) for col in c.T.tolist()])

    @property
    def duration(self) -> float:
        return self.segments[-1].end_time

    @property
    def length(self) -> float:
        return sum(seg.length for seg in self.segments)

    @property
    def final_altitude(self) -> float:
        return self.segments[-1].end[1]

    @property
    def arcs(self) -> list:
        return [seg for seg in self.segments if seg.kind == "arc"]

    def raw(self, t):
        """Unsmoothed altitude: straight extension before 0, hold after the end."""
        return _raw_profile(self.segments, t)

    def sample(self, t: float) -> tuple[float, float, float, float, float]:
        if t >= self._t_last:
            return self.final_altitude, 0.0, 0.0, 0.0, 0.0
        i = bisect_right(self._breaks, t) - 1
        if i < 0:
            i = 0
        c0, c1, c2, c3, c4, c5 = self._coef[i]
        s = t - self._breaks[i]
        z = ((((c0 * s + c1) * s + c2) * s + c3) * s + c4) * s + c5
        dz = (((5.0 * c0 * s + 4.0 * c1) * s + 3.0 * c2) * s + 2.0 * c3) * s + c4
        d2z = ((20.0 * c0 * s + 12.0 * c1) * s + 6.0 * c2) * s + 2.0 * c3
        d3z = (60.0 * c0 * s + 24.0 * c1) * s + 6.0 * c2
        d4z = 120.0 * c0 * s + 24.0 * c1
        return z, dz, d2z, d3z, d4z


def _raw_profile(segments, t):
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    starts = np.array([seg.start_time for seg in segments])
    idx = np.clip(np.searchsorted(starts, t, side="right") - 1, 0, len(segments) - 1)
    for k, seg in enumerate(segments):
        mask = idx == k
        if np.any(mask):
            out[mask] = seg.lateral(t[mask])
    end = segments[-1]
    out[t >= end.end_time] = end.end[1]
    return out


def _unit(heading: float) -> np.ndarray:
    return np.array([math.cos(heading), math.sin(heading)])


def _intersect(p, d1, q, d2) -> np.ndarray:
    """Intersection of lines p + s*d1 and q + r*d2."""
    mat = np.column_stack([d1, -d2])
    if abs(np.linalg.det(mat)) < 1e-14:
        raise PathError("adjacent straights are parallel; no fillet possible")
    s, _ = np.linalg.solve(mat, q - p)
    return p + s * d1


def _straight(p, q, heading, t0, speed) -> PathSegment:
    length = float(np.hypot(*(q - p)))
    return PathSegment("straight", length, t0, t0 + length / speed,
                       tuple(p.tolist()), tuple(q.tolist()), heading, heading)


def build_dubins(waypoints: Sequence[Waypoint], speed: float,
                 radii: Optional[Sequence[Optional[float]]] = None,
                 smoothing_grid: float = 0.05, smoothing_tol: float = 0.5,
                 hold_pad: float = 2.0) -> ReferencePath:
    """Straight lines through waypoint pairs joined by tangent circular arcs.

    Waypoints are read as ``start, (entry, exit)*, end``: every interior pair
    marks one turn.  The straights run through (start, entry1), (exit1,
    entry2), ... (exit_m, end) and the arc of turn j is the fillet between
    straight j and j+1.  With ``radii[j] = None`` the fillet begins exactly at
    the entry waypoint; otherwise its tangent points follow from the radius.
    """
    if len(waypoints) < 2:
        raise PathError("at least two waypoints are required")
    if not speed > 0:
        raise PathError(f"speed must be positive, got {speed}")
    xs = [w.x for w in waypoints]
    if any(b <= a for a, b in zip(xs, xs[1:])):
        raise PathError("waypoints must have strictly increasing x")
    if len(waypoints) % 2:
        raise PathError("interior waypoints must come in (entry, exit) pairs")
    pts = [np.array([w.x, w.z], dtype=float) for w in waypoints]
    n_turns = (len(pts) - 2) // 2
    if radii is None:
        radii = [None] * n_turns
    if len(radii) != n_turns:
        raise PathError(f"expected {n_turns} radii, got {len(radii)}")

    # straights through (pts[2j], pts[2j+1])
    lines = []
    for j in range(n_turns + 1):
        p, q = pts[2 * j], pts[2 * j + 1]
        lines.append((p, math.atan2(q[1] - p[1], q[0] - p[0])))

    segments: list[PathSegment] = []
    cursor, t = pts[0], 0.0
    for j in range(n_turns):
        (p_in, h_in), (p_out, h_out) = lines[j], lines[j + 1]
        sweep = math.atan2(math.sin(h_out - h_in), math.cos(h_out - h_in))
        if abs(sweep) < 1e-12:
            raise PathError(f"turn {j}: straights are collinear, no arc needed or possible")
        d_in, d_out = _unit(h_in), _unit(h_out)
        apex = _intersect(p_in, d_in, p_out, d_out)
        if radii[j] is None:
            tangent = float(np.hypot(*(apex - pts[2 * j + 1])))
            radius = tangent / math.tan(abs(sweep) / 2.0)
        else:
            radius = float(radii[j])
            if not radius > 0:
                raise PathError(f"turn {j}: radius must be positive, got {radius}")
            tangent = radius * math.tan(abs(sweep) / 2.0)
        t_in = apex - tangent * d_in
        t_out = apex + tangent * d_out
        if np.dot(t_in - cursor, d_in) <= 0:
            raise PathError(f"turn {j}: radius {radius:.6g} m too large to fit between straights")
        seg = _straight(cursor, t_in, h_in, t, speed)
        segments.append(seg)
        t = seg.end_time
        sign = math.copysign(1.0, sweep)
        center = t_in + sign * radius * np.array([-math.sin(h_in), math.cos(h_in)])
        arc_len = radius * abs(sweep)
        segments.append(PathSegment("arc", arc_len, t, t + arc_len / speed,
                                    tuple(t_in.tolist()), tuple(t_out.tolist()),
                                    h_in, h_in + sweep, tuple(center.tolist()),
                                    radius, sweep))
        t = segments[-1].end_time
        cursor = t_out
    h_last = lines[-1][1]
    if np.dot(pts[-1] - cursor, _unit(h_last)) <= 0:
        raise PathError("last turn radius too large to fit before the end point")
    segments.append(_straight(cursor, pts[-1], h_last, t, speed))

    arcs = [s for s in segments if s.kind == "arc"]
    accel = max((speed**2 / s.radius for s in arcs), default=0.0)
    kernel_spacing = _kernel_spacing(accel, smoothing_tol, smoothing_grid)
    profile = _smooth_profile(segments, kernel_spacing, smoothing_grid, hold_pad)
    return ReferencePath(tuple(segments), float(speed), smoothing_grid, smoothing_tol,
                         kernel_spacing, profile)


def _kernel_spacing(accel: float, tol: float, grid: float) -> float:
    # |smoothed - raw| <= accel * var / 2, var = spacing**2 / 2 for the quintic B-spline
    if accel > 0:
        spacing = math.sqrt(0.8 * 4.0 * tol / accel)
    else:
        spacing = 1.0
    return min(max(spacing, 2.0 * grid), 1.0)


def _smooth_profile(segments, spacing: float, grid: float, hold_pad: float) -> PPoly:
    kernel = BSpline.basis_element(spacing * np.arange(-3, 4), extrapolate=False)
    end = segments[-1].end_time
    t_first = -1.0 - 3.0 * spacing
    n = int(math.ceil((end + 3.0 * spacing + hold_pad - t_first) / grid))
    grid_t = t_first + grid * np.arange(n + 1)
    breaks = np.array([s.start_time for s in segments[1:]] + [end])

    values = np.empty_like(grid_t)
    for k, tk in enumerate(grid_t):
        # integrate K(tk - u) z(u) over u, split at kernel knots and path junctions
        cuts = tk + spacing * np.arange(-3, 4)
        inner = breaks[(breaks > cuts[0]) & (breaks < cuts[-1])]
        cuts = np.unique(np.concatenate([cuts, inner]))
        lo, hi = cuts[:-1, None], cuts[1:, None]
        u = 0.5 * (hi - lo) * _GAUSS_X + 0.5 * (hi + lo)
        w = 0.5 * (hi - lo) * _GAUSS_W
        kv = np.nan_to_num(kernel(tk - u)) / spacing
        values[k] = np.sum(w * kv * _raw_profile(segments, u.ravel()).reshape(u.shape))
    spline = make_interp_spline(grid_t, values, k=5)
    return PPoly.from_spline(spline)


def sample_ref(path: ReferencePath, t: float) -> tuple[float, float, float, float, float]:
    """Reference altitude and its first four time derivatives."""
    if t < 0:
        raise ValueError(f"reference undefined for negative time t={t}")
    return path.sample(t)


def trigger_schedule(path: ReferencePath, window: float,
                     lead: float = 0.0) -> list[tuple[float, float]]:
    """One funnel-widening window per arc, opened `lead` seconds before entry."""
    if not window > 0:
        raise ValueError(f"window must be positive, got {window}")
    out = []
    for arc in path.arcs:
        tj = max(arc.start_time - lead, 0.0)
        out.append((tj, tj + min(window, arc.duration)))
    for (a0, a1), (b0, b1) in zip(out, out[1:]):
        if b0 <= a1:
            raise ValueError(f"trigger windows ({a0}, {a1}) and ({b0}, {b1}) overlap")
    return out
