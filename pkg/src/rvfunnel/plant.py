"""Yaw-channel reentry vehicle model.

States in transformed coordinates:
    y0 = z_h (lateral altitude, m), y1 = psi_V (deflection angle, rad),
    y2 = beta = psi - psi_V (sideslip, rad), y3 = omega_y (yaw rate, rad/s).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

DEG_PER_RAD = 57.3   # degrees per radian for disturbances and rudder angles


@dataclass(frozen=True)
class VehicleParams:
    m: float = 1200.0
    V: float = 1475.35
    Jy: float = 8110.0
    qbar: float = 3711.93329
    S: float = 1.3
    l: float = 1.7
    alpha: float = 5.0 / DEG_PER_RAD
    cz_alpha: float = 0.0
    cz_beta: float = 0.1852
    cz0: float = -0.018714
    cm_alpha: float = -0.1
    cm_beta: float = 2.1335
    cm_delta: float = 5.1588
    cm0: float = 0.18979

    def __post_init__(self):
        for name in ("m", "V", "Jy", "qbar", "S", "l"):
            if not getattr(self, name) > 0:
                raise ValueError(f"vehicle parameter {name} must be positive")


class DerivedConstants(NamedTuple):
    c1: float
    c2: float
    c3: float
    c4: float
    c5: float


def derive_constants(p: VehicleParams, include_chord_in_c4c5: bool = False) -> DerivedConstants:
    """Lumped coefficients of the transformed model.

    By default c4 and c5 use ``qbar*S`` without the chord, matching the standard
    lumped constants; ``include_chord_in_c4c5`` makes them consistent with the moment
    ``M_y = qbar*S*l*(...)``.
    """
    force = p.qbar * p.S / (p.m * p.V)
    moment = p.qbar * p.S / p.Jy
    c1 = force * (p.cz_alpha * p.alpha + p.cz0)
    c2 = force * p.cz_beta
    c3 = moment * p.l * (p.cm_alpha * p.alpha + p.cm0)
    arm = p.l if include_chord_in_c4c5 else 1.0
    c4 = moment * arm * p.cm_beta
    c5 = moment * arm * p.cm_delta
    if c5 == 0:
        raise ValueError("control effectiveness c5 is zero; the plant is uncontrollable")
    return DerivedConstants(c1, c2, c3, c4, c5)


class PlantState(NamedTuple):
    y0: float
    y1: float
    y2: float
    y3: float

    @property
    def z_h(self):
        return self.y0

    @property
    def psi_v(self):
        return self.y1

    @property
    def beta(self):
        return self.y2

    @property
    def omega_y(self):
        return self.y3

    @property
    def psi(self):
        return self.y2 + self.y1

    @classmethod
    def from_raw(cls, z_h: float, psi_v: float, psi: float, omega_y: float) -> "PlantState":
        return cls(z_h, psi_v, psi - psi_v, omega_y)


def plant_rhs(s, u: float, d, p: VehicleParams, c: DerivedConstants) -> tuple:
    """Time derivative of (y0, y1, y2, y3) for rudder angle `u` in radians."""
    y0, y1, y2, y3 = s
    d0, d1, d2, d3 = d
    return (-p.V * math.sin(y1) + d0,
            -c.c1 - c.c2 * y2 + d1,
            y3 + c.c1 + c.c2 * y2 + d2 - d1,
            c.c3 + c.c4 * y2 + c.c5 * u + d3)


def raw_rhs(z_h: float, psi_v: float, psi: float, omega_y: float, delta_y: float, d,
            p: VehicleParams, include_chord_in_c4c5: bool = False) -> tuple:
    """Derivatives of (z_h, psi_V, psi, omega_y) from the force/moment form.

    With ``include_chord_in_c4c5=False`` the chord multiplies only the alpha
    and zero-lift moment terms, matching the default lumped constants.
    """
    d0, d1, d2, d3 = d
    beta = psi - psi_v
    Z = p.qbar * p.S * (p.cz_alpha * p.alpha + p.cz_beta * beta + p.cz0)
    if include_chord_in_c4c5:
        My = p.qbar * p.S * p.l * (p.cm_alpha * p.alpha + p.cm_beta * beta
                                   + p.cm_delta * delta_y + p.cm0)
    else:
        My = p.qbar * p.S * (p.l * (p.cm_alpha * p.alpha + p.cm0)
                             + p.cm_beta * beta + p.cm_delta * delta_y)
    return (-p.V * math.sin(psi_v) + d0,
            -Z / (p.m * p.V) + d1,
            omega_y + d2,
            My / p.Jy + d3)


@dataclass(frozen=True)
class DisturbanceSpec:
    """Sinusoidal disturbances ``scale * A_i * sin(omega_i * t)``."""

    amplitudes: tuple = (5.0, 0.2, 2.0, 10.0)
    omegas: tuple = (math.pi / 4,) * 4
    scale: float = 1.0 / DEG_PER_RAD

    def __post_init__(self):
        if len(self.amplitudes) != 4 or len(self.omegas) != 4:
            raise ValueError("disturbance needs four amplitudes and four frequencies")

    @property
    def bounds(self) -> tuple:
        return tuple(self.scale * abs(a) for a in self.amplitudes)

    @classmethod
    def none(cls) -> "DisturbanceSpec":
        return cls(amplitudes=(0.0, 0.0, 0.0, 0.0))


def eval_disturbance(spec: DisturbanceSpec, t: float) -> tuple:
    sc = spec.scale
    a, w = spec.amplitudes, spec.omegas
    return (sc * a[0] * math.sin(w[0] * t), sc * a[1] * math.sin(w[1] * t),
            sc * a[2] * math.sin(w[2] * t), sc * a[3] * math.sin(w[3] * t))
