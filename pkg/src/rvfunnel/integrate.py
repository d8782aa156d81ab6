"""Explicit Runge-Kutta integrators: adaptive Dormand-Prince 5(4) and classical RK4.

The adaptive scheme follows the usual ode45 recipe (FSAL, local
extrapolation, RMS error norm, 4th order continuous extension).
"""
from __future__ import annotations

import math
from typing import Callable, Iterator, NamedTuple

import numpy as np

# Butcher tableau
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_B = np.array(_A[6] + [0.0])
# 5th minus embedded 4th order weights
_E = np.array([-71 / 57600, 0.0, 71 / 16695, -71 / 1920, 17253 / 339200, -22 / 525, 1 / 40])
# continuous extension: y(t0 + x h) = y0 + h * K.T @ _P @ [x, x^2, x^3, x^4]
_P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 10.0


class StepFailure(RuntimeError):
    """The adaptive step size fell below the allowed minimum."""


class Step(NamedTuple):
    t0: float
    y0: np.ndarray
    t1: float
    y1: np.ndarray
    q: np.ndarray   # dense output coefficients, shape (n, 4)

    def __call__(self, t: float) -> np.ndarray:
        if t == self.t1:
            return self.y1
        h = self.t1 - self.t0
        x = (t - self.t0) / h
        return self.y0 + h * (self.q @ np.array([x, x * x, x ** 3, x ** 4]))


def _initial_step(fun, t0, y0, f0, rtol, atol, max_step):
    scale = atol + np.abs(y0) * rtol
    d0 = np.sqrt(np.mean((y0 / scale) ** 2))
    d1 = np.sqrt(np.mean((f0 / scale) ** 2))
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = fun(t0 + h0, y0 + h0 * f0)
    d2 = np.sqrt(np.mean(((f1 - f0) / scale) ** 2)) / h0
    if d1 <= 1e-15 and d2 <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1 / 5)
    return min(100 * h0, h1, max_step)


def dopri5(fun: Callable[[float, np.ndarray], np.ndarray], t0: float, y0,
           t_end: float, rtol: float = 1e-6, atol: float = 1e-8,
           max_step: float = math.inf, min_step: float = 1e-9,
           first_step: float | None = None) -> Iterator[Step]:
    """Yield every accepted step from `t0` to `t_end`.

    `fun(t, y)` must return an array of the same shape as `y`.
    """
    y = np.asarray(y0, dtype=float).copy()
    t = float(t0)
    f = np.asarray(fun(t, y), dtype=float)
    h = first_step if first_step else _initial_step(fun, t, y, f, rtol, atol, max_step)
    K = np.empty((7, y.size))
    while t < t_end:
        h = min(h, max_step, t_end - t)
        rejected = False
        while True:
            if h < min_step:
                raise StepFailure(f"step size {h:.3e} below minimum {min_step:.1e} at t={t:.9f}")
            K[0] = f
            for s in range(1, 7):
                dy = K[:s].T @ _A[s]
                K[s] = fun(t + _C[s] * h, y + h * dy)
            y_new = y + h * (K[:6].T @ _B[:6])
            # K[6] was evaluated at y_new (FSAL)
            scale = atol + np.maximum(np.abs(y), np.abs(y_new)) * rtol
            err = np.sqrt(np.mean((h * (K.T @ _E) / scale) ** 2))
            if err <= 1.0:
                if err == 0.0:
                    factor = _MAX_FACTOR
                else:
                    factor = min(_MAX_FACTOR, _SAFETY * err ** -0.2)
                if rejected:
                    factor = min(1.0, factor)
                break
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            rejected = True
        t_new = t + h if t_end - (t + h) > 1e-12 * max(1.0, abs(t_end)) else t_end
        step = Step(t, y, t_new, y_new, K.T @ _P)
        t, y, f = t_new, y_new, K[6].copy()
        h *= factor
        yield step


def rk4(fun: Callable[[float, np.ndarray], np.ndarray], t0: float, y0,
        t_end: float, dt: float) -> tuple[np.ndarray, np.ndarray]:
    """Classical fixed-step RK4; returns the time grid and the states on it."""
    n = int(round((t_end - t0) / dt))
    if not math.isclose(t0 + n * dt, t_end, rel_tol=0, abs_tol=1e-9 * max(1.0, abs(t_end))):
        raise ValueError("t_end - t0 must be an integer multiple of dt")
    ts = t0 + dt * np.arange(n + 1)
    ys = np.empty((n + 1, len(y0)))
    y = np.asarray(y0, dtype=float)
    ys[0] = y
    for i in range(n):
        t = ts[i]
        k1 = fun(t, y)
        k2 = fun(t + dt / 2, y + dt / 2 * k1)
        k3 = fun(t + dt / 2, y + dt / 2 * k2)
        k4 = fun(t + dt, y + dt * k3)
        y = y + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        ys[i + 1] = y
    return ts, ys
