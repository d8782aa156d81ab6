import math
from dataclasses import replace

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rvfunnel.plant import (DisturbanceSpec, PlantState, VehicleParams, derive_constants,
                            eval_disturbance, plant_rhs, raw_rhs)

P = VehicleParams()


def test_c1_by_hand():
    # cz_alpha = 0 leaves only the zero-lift term
    expected = 3711.93329 * 1.3 * (-0.018714) / (1200.0 * 1475.35)
    assert derive_constants(P).c1 == pytest.approx(expected, rel=1e-14)


def test_constants_by_hand():
    c = derive_constants(P)
    qs = 3711.93329 * 1.3
    a = 5.0 / 57.3
    assert c.c2 == pytest.approx(qs * 0.1852 / (1200 * 1475.35), rel=1e-14)
    assert c.c3 == pytest.approx(qs * 1.7 * (-0.1 * a + 0.18979) / 8110.0, rel=1e-14)
    assert c.c4 == pytest.approx(qs * 2.1335 / 8110.0, rel=1e-14)
    assert c.c5 == pytest.approx(qs * 5.1588 / 8110.0, rel=1e-14)
    cl = derive_constants(P, include_chord_in_c4c5=True)
    assert cl.c4 == pytest.approx(1.7 * c.c4, rel=1e-14)
    assert cl.c5 == pytest.approx(1.7 * c.c5, rel=1e-14)


def test_linear_in_dynamic_pressure():
    c = derive_constants(P)
    c2 = derive_constants(replace(P, qbar=2 * P.qbar))
    for a, b in zip(c, c2):
        assert b == pytest.approx(2 * a, rel=1e-14)


def test_zero_control_effectiveness_rejected():
    with pytest.raises(ValueError, match="uncontrollable"):
        derive_constants(replace(P, cm_delta=0.0))


def test_invalid_vehicle():
    with pytest.raises(ValueError):
        VehicleParams(m=0.0)


def test_rhs_at_origin():
    c = derive_constants(P)
    assert plant_rhs((0, 0, 0, 0), 0.0, (0, 0, 0, 0), P, c) == (0.0, -c.c1, c.c1, c.c3)


def test_level_flight_keeps_altitude():
    c = derive_constants(P)
    assert plant_rhs((123.0, 0.0, 0.3, -0.2), 0.1, (0, 0.01, 0.02, 0.03), P, c)[0] == 0.0


def test_state_aliases():
    s = PlantState.from_raw(400.0, 2 / 57.3, 4 / 57.3, 0.035)
    assert s.beta == pytest.approx(2 / 57.3)
    assert s.psi == pytest.approx(4 / 57.3)
    assert (s.z_h, s.psi_v, s.omega_y) == (400.0, 2 / 57.3, 0.035)


angle = st.floats(-0.5, 0.5)


@settings(max_examples=300, deadline=None)
@given(z=st.floats(-1e3, 1e3), psi_v=angle, psi=angle, w=angle, u=angle,
       d=st.tuples(*[st.floats(-0.2, 0.2)] * 4), chord=st.booleans())
def test_raw_and_transformed_forms_agree(z, psi_v, psi, w, u, d, chord):
    c = derive_constants(P, chord)
    raw = raw_rhs(z, psi_v, psi, w, u, d, P, chord)
    # beta' = psi' - psi_V'
    mapped = (raw[0], raw[1], raw[2] - raw[1], raw[3])
    tr = plant_rhs((z, psi_v, psi - psi_v, w), u, d, P, c)
    np.testing.assert_allclose(tr, mapped, rtol=1e-12, atol=1e-12 * max(1.0, P.V))


def test_disturbance_values():
    spec = DisturbanceSpec()
    assert eval_disturbance(spec, 0.0) == (0.0, 0.0, 0.0, 0.0)
    d = eval_disturbance(spec, 2.0)
    assert d[0] == pytest.approx(5 / 57.3, rel=1e-15)
    assert d[3] == pytest.approx(10 / 57.3, rel=1e-15)
    assert spec.bounds == pytest.approx((5 / 57.3, 0.2 / 57.3, 2 / 57.3, 10 / 57.3))
    assert eval_disturbance(DisturbanceSpec.none(), 2.0) == (0.0, 0.0, 0.0, 0.0)


@settings(max_examples=50, deadline=None)
@given(t=st.floats(0, 100))
def test_disturbance_period(t):
    a = eval_disturbance(DisturbanceSpec(), t)
    b = eval_disturbance(DisturbanceSpec(), t + 8.0)
    assert np.allclose(a, b, atol=1e-12)
    assert all(abs(x) <= bd * (1 + 1e-15) for x, bd in zip(a, DisturbanceSpec().bounds))


def test_speed_default():
    assert P.V == pytest.approx(5 * 295.07)
    assert P.alpha == pytest.approx(math.radians(5.0), rel=1e-3)
