import math

import numpy as np
import pytest

from rvfunnel.integrate import StepFailure, dopri5, rk4


def decay(t, y):
    return -y


def oscillator(t, y):
    return np.array([y[1], -y[0]])


def test_dopri5_exponential():
    steps = list(dopri5(decay, 0.0, np.array([1.0]), 5.0, rtol=1e-10, atol=1e-12))
    assert steps[-1].t1 == 5.0
    assert steps[-1].y1[0] == pytest.approx(math.exp(-5.0), rel=1e-8)


def test_dense_output_accuracy():
    steps = list(dopri5(oscillator, 0.0, np.array([0.0, 1.0]), 10.0, rtol=1e-9, atol=1e-12))
    for st in steps:
        tm = 0.5 * (st.t0 + st.t1)
        np.testing.assert_allclose(st(tm), [math.sin(tm), math.cos(tm)], atol=1e-7)
        np.testing.assert_array_equal(st(st.t1), st.y1)


def test_steps_contiguous():
    steps = list(dopri5(oscillator, 0.0, np.array([1.0, 0.0]), 3.0, max_step=0.1))
    assert steps[0].t0 == 0.0
    assert all(a.t1 == b.t0 for a, b in zip(steps, steps[1:]))
    assert all(s.t1 - s.t0 <= 0.1 + 1e-15 for s in steps)


def test_rk4_fourth_order():
    errs = []
    for dt in (0.1, 0.05):
        _, ys = rk4(oscillator, 0.0, np.array([0.0, 1.0]), 2.0, dt)
        errs.append(abs(ys[-1][0] - math.sin(2.0)))
    assert 12 < errs[0] / errs[1] < 20


def test_step_underflow():
    with pytest.raises(StepFailure):
        list(dopri5(lambda t, y: np.array([1.0 / (1.0 - t)]), 0.0, np.array([0.0]), 2.0,
                    min_step=1e-3))
