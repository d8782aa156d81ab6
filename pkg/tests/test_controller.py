import pytest
from hypothesis import given
from hypothesis import strategies as st

from rvfunnel.boundary import ExponentialSegment, build_schedule
from rvfunnel.controller import (FunnelViolation, compute_errors, control_law, gain,
                                 saturate)

const = build_schedule([ExponentialSegment(10.0, 10.0, 1.0)], [])
SCHEDS = (const,) * 4


def test_zero_error_base_case():
    ref = (100.0, -3.0, 0.5, 0.01, 0.0)
    y = (100.0, 0.2, 0.1, 0.05)
    out = compute_errors(y, ref, SCHEDS, 0.0)
    assert out.e[0] == 0.0 and out.w[0] == 0.0 and out.k[0] == 1.0
    assert out.e[1] == pytest.approx(0.2 - (-3.0))


def test_chain_order():
    ref = (0.0, 0.0, 0.0, 0.0, 0.0)
    out = compute_errors((5.0, 0.0, 0.0, 0.0), ref, SCHEDS, 0.0)
    w0 = 0.5
    assert out.w[0] == w0
    assert out.k[0] == pytest.approx(1 / (1 - w0**2))
    assert out.e[1] == pytest.approx(out.k[0] * w0)
    assert out.e[2] == pytest.approx(out.k[1] * out.w[1])


def test_gain_values():
    assert gain(0.0) == 1.0
    assert gain(0.5 ** 0.5) == pytest.approx(2.0, rel=1e-15)
    assert gain(0.9995) > 1e3


@given(a=st.floats(0, 0.999), b=st.floats(0, 0.999))
def test_gain_monotone(a, b):
    if a < b:
        assert gain(a) <= gain(b)
        if b * b - a * a > 1e-12:
            assert gain(a) < gain(b)
    assert gain(a) >= 1.0


def test_control_law_values():
    assert control_law(0.0, 0.1) == 0.0
    assert control_law(0.5, 1.0) == pytest.approx(-2.0 / 3.0, rel=1e-15)


@given(e=st.floats(-9.99, 9.99))
def test_control_opposes_error(e):
    u = control_law(e, 0.1)
    assert u * e <= 0.0
    assert abs(u) >= abs(e)


def test_control_law_outside_raises():
    with pytest.raises(FunnelViolation) as info:
        control_law(11.0, 0.1)
    assert info.value.channel == 3


def test_violation_reports_first_channel():
    ref = (0.0,) * 5
    with pytest.raises(FunnelViolation) as info:
        compute_errors((0.0, 10.0, 100.0, 0.0), ref, SCHEDS, 2.0)
    assert (info.value.channel, info.value.time, info.value.width) == (1, 2.0, 10.0)


def test_saturation_examples():
    assert saturate(10.0) == 10.0
    assert saturate(-55.0) == -40.0
    assert saturate(40.0) == 40.0
    assert saturate(1e9) == 40.0


@given(u=st.floats(-1e6, 1e6), limit=st.floats(0.1, 100))
def test_saturation_bounded_and_idempotent(u, limit):
    s = saturate(u, limit)
    assert abs(s) <= limit
    assert saturate(s, limit) == s
    if abs(u) <= limit:
        assert s == u
