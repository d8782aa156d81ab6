"""Scenario files: TOML documents describing one closed-loop run.

Sections: [vehicle], [disturbance], [reference], [funnel], [initial], [sim]
and the optional [output].  Unknown sections or keys are rejected.  Angles
may be given in radians or, with a ``_deg`` suffix, in degrees converted
with ``sim.deg_per_rad``.
"""
from __future__ import annotations

import math
import sys
from dataclasses import fields
from importlib import resources
from pathlib import Path
from typing import Any, Optional

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .boundary import BoundaryError, ExponentialSegment, build_schedule
from .plant import DEG_PER_RAD, DisturbanceSpec, PlantState, VehicleParams
from .reference import PathError, Waypoint, build_dubins, trigger_schedule
from .sim import Scenario

_ANGLE_KEYS = {"alpha"}
_VEHICLE_KEYS = {f.name for f in fields(VehicleParams)} - {"V"}
_SECTIONS = {
    "vehicle": _VEHICLE_KEYS | {k + "_deg" for k in _ANGLE_KEYS},
    "disturbance": {"amplitudes", "omegas", "scale"},
    "reference": {"waypoints", "radii", "speed", "mach", "speed_of_sound", "altitude",
                  "smoothing_grid", "smoothing_tol"},
    "funnel": {"triggers", "window", "lead", "channel0", "channel1", "channel2",
               "channel3", "scale"},
    "initial": {"z_h", "psi_V", "psi_V_deg", "psi", "psi_deg", "beta", "beta_deg",
                "omega_y", "omega_y_deg"},
    "sim": {"horizon", "tail", "rtol", "atol", "max_step", "min_step", "output_step",
            "saturation", "input_unit", "deg_per_rad", "guard", "include_chord_in_c4c5"},
    "output": {"dir", "plots"},
}
_REQUIRED = ("vehicle", "disturbance", "reference", "funnel", "initial", "sim")


class ScenarioError(ValueError):
    """Malformed or invalid scenario file."""


def speed_of_sound(altitude: float) -> float:
    """ISA speed of sound (m/s) up to 32 km geometric altitude."""
    if altitude <= 11000.0:
        temp = 288.15 - 0.0065 * altitude
    elif altitude <= 20000.0:
        temp = 216.65
    elif altitude <= 32000.0:
        temp = 216.65 + 0.001 * (altitude - 20000.0)
    else:
        raise ScenarioError(f"altitude {altitude} m outside the supported ISA range")
    return math.sqrt(1.4 * 287.05287 * temp)


def bundled_scenario_path() -> Path:
    return Path(str(resources.files("rvfunnel") / "data" / "reentry.scenario"))


def load_scenario(path) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"{path}: cannot read scenario ({exc})") from exc
    return loads(text, name=path.stem, source=str(path))


def loads(text: str, name: str = "scenario", source: str = "<string>") -> Scenario:
    if not text.strip():
        raise ScenarioError(f"{source}: parse error: empty scenario file")
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise ScenarioError(f"{source}: parse error: {exc}") from exc
    try:
        return _build(doc, name)
    except ScenarioError as exc:
        raise ScenarioError(f"{source}: {exc}") from exc
    except (BoundaryError, PathError, ValueError) as exc:
        raise ScenarioError(f"{source}: invalid scenario: {exc}") from exc


def _check_keys(doc: dict) -> None:
    for section in doc:
        if section not in _SECTIONS:
            raise ScenarioError(f"unknown section [{section}]")
        if not isinstance(doc[section], dict):
            raise ScenarioError(f"[{section}] must be a table")
        for key in doc[section]:
            if key not in _SECTIONS[section]:
                raise ScenarioError(f"unknown key '{key}' in [{section}]")
    for section in _REQUIRED:
        if section not in doc:
            raise ScenarioError(f"missing required section [{section}]")


def _num(sec: dict, key: str, where: str, default: Any = None) -> float:
    if key not in sec:
        if default is None:
            raise ScenarioError(f"missing key '{key}' in [{where}]")
        return default
    val = sec[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ScenarioError(f"[{where}] {key} must be a number, got {val!r}")
    return float(val)


def _angle(sec: dict, key: str, where: str, dpr: float, default=None) -> Optional[float]:
    if key in sec and key + "_deg" in sec:
        raise ScenarioError(f"[{where}] give either {key} or {key}_deg, not both")
    if key + "_deg" in sec:
        return _num(sec, key + "_deg", where) / dpr
    if key in sec:
        return _num(sec, key, where)
    return default


def _build(doc: dict, name: str) -> Scenario:
    _check_keys(doc)
    simsec = doc["sim"]
    dpr = _num(simsec, "deg_per_rad", "sim", DEG_PER_RAD)

    # reference and speed
    ref = doc["reference"]
    if "speed" in ref:
        if "mach" in ref:
            raise ScenarioError("[reference] give either speed or mach, not both")
        speed = _num(ref, "speed", "reference")
    elif "mach" in ref:
        mach = _num(ref, "mach", "reference")
        if "speed_of_sound" in ref:
            a = _num(ref, "speed_of_sound", "reference")
        elif "altitude" in ref:
            a = speed_of_sound(_num(ref, "altitude", "reference"))
        else:
            raise ScenarioError("[reference] mach needs speed_of_sound or altitude")
        speed = mach * a
    else:
        raise ScenarioError("[reference] needs speed, or mach with speed_of_sound/altitude")
    if not speed > 0:
        raise ScenarioError("[reference] speed must be positive (V > 0)")
    raw_wps = ref.get("waypoints")
    if not isinstance(raw_wps, list) or len(raw_wps) < 2:
        raise ScenarioError("[reference] waypoints must list at least two [x, z, label] entries")
    waypoints = []
    for k, item in enumerate(raw_wps):
        if not isinstance(item, list) or len(item) not in (2, 3):
            raise ScenarioError(f"[reference] waypoint {k} must be [x, z] or [x, z, label]")
        label = str(item[2]) if len(item) == 3 else str(k)
        waypoints.append(Waypoint(float(item[0]), float(item[1]), label))
    radii = ref.get("radii")
    if radii is not None:
        radii = [None if r == "auto" else float(r) for r in radii]
    path = build_dubins(waypoints, speed, radii=radii,
                        smoothing_grid=_num(ref, "smoothing_grid", "reference", 0.05),
                        smoothing_tol=_num(ref, "smoothing_tol", "reference", 0.5))

    # vehicle
    veh = doc["vehicle"]
    kwargs = {}
    for key in _VEHICLE_KEYS:
        if key in _ANGLE_KEYS:
            val = _angle(veh, key, "vehicle", dpr)
            if val is not None:
                kwargs[key] = val
        elif key in veh:
            kwargs[key] = _num(veh, key, "vehicle")
    vehicle = VehicleParams(V=speed, **kwargs)

    # disturbances
    dsec = doc["disturbance"]
    dkw = {}
    for key in ("amplitudes", "omegas"):
        if key in dsec:
            vals = dsec[key]
            if not isinstance(vals, list) or len(vals) != 4:
                raise ScenarioError(f"[disturbance] {key} must list four numbers")
            dkw[key] = tuple(float(v) for v in vals)
    if "scale" in dsec:
        dkw["scale"] = _num(dsec, "scale", "disturbance")
    disturbance = DisturbanceSpec(**dkw)

    # funnels
    fsec = doc["funnel"]
    trig = fsec.get("triggers", "auto")
    if trig == "auto":
        window = _num(fsec, "window", "funnel")
        triggers = trigger_schedule(path, window, lead=_num(fsec, "lead", "funnel", 0.0))
    elif isinstance(trig, list):
        triggers = [(float(a), float(b)) for a, b in trig]
    else:
        raise ScenarioError("[funnel] triggers must be \"auto\" or a list of [tj, tj_bar]")
    base = build_schedule(_phases(fsec, "channel0"), triggers, channel=0)
    schedules = [base]
    scale = fsec.get("scale")
    for i in (1, 2, 3):
        key = f"channel{i}"
        if key in fsec:
            schedules.append(build_schedule(_phases(fsec, key), triggers, channel=i))
        elif scale is not None:
            if not isinstance(scale, list) or len(scale) != 3:
                raise ScenarioError("[funnel] scale must list three multipliers for channels 1..3")
            schedules.append(base.scaled(float(scale[i - 1]), channel=i))
        else:
            raise ScenarioError(f"[funnel] channel {i} needs '{key}' phases or a 'scale' entry")

    # initial state
    isec = doc["initial"]
    z_h = _num(isec, "z_h", "initial")
    psi_v = _angle(isec, "psi_V", "initial", dpr)
    psi = _angle(isec, "psi", "initial", dpr)
    beta = _angle(isec, "beta", "initial", dpr)
    omega = _angle(isec, "omega_y", "initial", dpr)
    if psi_v is None or omega is None:
        raise ScenarioError("[initial] needs psi_V and omega_y")
    if psi is None and beta is None:
        raise ScenarioError("[initial] needs psi or beta")
    if psi is not None and beta is not None and abs((psi - psi_v) - beta) > 1e-9:
        raise ScenarioError("[initial] inconsistent angles: beta must equal psi - psi_V")
    if beta is None:
        beta = psi - psi_v
    initial = PlantState(z_h, psi_v, beta, omega)

    horizon = simsec.get("horizon", "auto")
    if horizon == "auto":
        horizon = path.duration + _num(simsec, "tail", "sim", 5.0)
    else:
        horizon = _num(simsec, "horizon", "sim")
    skw = {key: _num(simsec, key, "sim") for key in
           ("rtol", "atol", "max_step", "min_step", "output_step", "saturation", "guard")
           if key in simsec}
    if "input_unit" in simsec:
        skw["input_unit"] = str(simsec["input_unit"])
    if "include_chord_in_c4c5" in simsec:
        skw["include_chord_in_c4c5"] = bool(simsec["include_chord_in_c4c5"])
    out = doc.get("output", {})
    return Scenario(vehicle=vehicle, disturbance=disturbance, path=path,
                    schedules=tuple(schedules), initial=initial, horizon=horizon,
                    deg_per_rad=dpr, name=name, output_dir=out.get("dir"),
                    plots=bool(out.get("plots", True)), **skw)


def _phases(fsec: dict, key: str) -> list[ExponentialSegment]:
    items = fsec.get(key)
    if not isinstance(items, list) or not items:
        raise ScenarioError(f"[funnel] {key} must list at least one phase")
    phases = []
    for j, ph in enumerate(items):
        if not isinstance(ph, dict) or set(ph) - {"rho0", "rho_inf", "rate"}:
            raise ScenarioError(f"[funnel] {key} phase {j} must be {{rho0, rho_inf, rate}}")
        try:
            rho0, rho_inf, rate = (float(ph[k]) for k in ("rho0", "rho_inf", "rate"))
        except KeyError as exc:
            raise ScenarioError(f"[funnel] {key} phase {j} is missing {exc}") from exc
        if not rho_inf > 0:
            raise ScenarioError(f"[funnel] {key} phase {j}: rho_inf > 0 required (ρ∞ > 0)")
        if not rho0 > 0:
            raise ScenarioError(f"[funnel] {key} phase {j}: rho0 > 0 required (ρ0 > 0)")
        if not rate > 0:
            raise ScenarioError(f"[funnel] {key} phase {j}: rate > 0 required (l > 0)")
        phases.append(ExponentialSegment(rho0, rho_inf, rate))
    return phases
