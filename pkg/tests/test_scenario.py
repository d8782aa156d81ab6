import math

import pytest

from conftest import edit_scenario
from rvfunnel.scenario import ScenarioError, load_scenario, loads, speed_of_sound


def test_reentry_values(reentry):
    assert reentry.vehicle.V == pytest.approx(1475.35, rel=1e-12)
    assert reentry.vehicle.m == 1200.0
    assert reentry.vehicle.alpha == pytest.approx(5 / 57.3)
    assert reentry.initial.y0 == 400.0
    assert reentry.initial.psi == pytest.approx(4 / 57.3)
    assert reentry.initial.beta == pytest.approx(2 / 57.3)
    assert reentry.initial.omega_y == 0.035
    assert reentry.saturation == 40.0
    assert reentry.horizon == pytest.approx(reentry.path.duration + 5.0)
    assert [s.trigger_count for s in reentry.schedules] == [3] * 4


def test_channel_multipliers(reentry):
    base = reentry.schedules[0]
    for sched, f in zip(reentry.schedules[1:], (1.8, 2.0, 6.0)):
        for t in (0.0, 9.0, 30.0):
            assert sched.width(t)[0] == pytest.approx(f * base.width(t)[0], rel=1e-14)


def test_empty_file(tmp_path):
    f = tmp_path / "empty.scenario"
    f.write_text("")
    with pytest.raises(ScenarioError, match="parse error"):
        load_scenario(f)


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario(tmp_path / "nope.scenario")


def test_syntax_error_has_line():
    with pytest.raises(ScenarioError, match="line"):
        loads("[vehicle]\nm = = 3\n")


def test_zero_rho_inf(reentry_text):
    text = reentry_text.replace("rho_inf = 2.0", "rho_inf = 0.0", 1)
    assert text != reentry_text
    with pytest.raises(ScenarioError, match="ρ∞ > 0"):
        loads(text)


def test_unknown_key(reentry_text):
    with pytest.raises(ScenarioError, match="unknown key 'mass'"):
        loads(edit_scenario(reentry_text, "vehicle", mass=3))


def test_unknown_section(reentry_text):
    with pytest.raises(ScenarioError, match="unknown section"):
        loads(reentry_text + "\n[extra]\nx = 1\n")


def test_missing_section(reentry_text):
    head, _, tail = reentry_text.partition("[initial]")
    tail = tail[tail.index("["):]
    with pytest.raises(ScenarioError, match=r"missing required section \[initial\]"):
        loads(head + tail)


def test_non_numeric_value(reentry_text):
    with pytest.raises(ScenarioError, match="must be a number"):
        loads(edit_scenario(reentry_text, "vehicle", m='"heavy"'))


def test_speed_override(reentry_text):
    text = reentry_text.replace("mach = 5.0\n", "").replace("speed_of_sound = 295.07", "speed = 1000.0")
    assert loads(text).vehicle.V == 1000.0


def test_mach_with_altitude():
    assert speed_of_sound(20000.0) == pytest.approx(295.07, abs=0.01)


def test_inconsistent_angles(reentry_text):
    with pytest.raises(ScenarioError, match="inconsistent"):
        loads(edit_scenario(reentry_text, "initial", beta_deg=7.0))


def test_explicit_triggers(reentry_text):
    sc = loads(edit_scenario(reentry_text, "funnel", triggers="[[8.0, 10.0], [16.0, 18.0], [21.0, 23.0]]"))
    assert sc.schedules[0].junctions() == (8.0, 10.0, 16.0, 18.0, 21.0, 23.0)


def test_radians_and_degrees_agree(reentry_text):
    a = loads(reentry_text)
    b = loads(edit_scenario(reentry_text.replace("psi_V_deg = 2.0", ""), "initial",
                            psi_V=repr(2.0 / 57.3)))
    assert math.isclose(a.initial.y1, b.initial.y1, rel_tol=1e-15)


def test_invalid_sim_settings(reentry_text):
    with pytest.raises(ScenarioError):
        loads(edit_scenario(reentry_text, "sim", rtol=-1.0))
    with pytest.raises(ScenarioError):
        loads(edit_scenario(reentry_text, "sim", input_unit='"grad"'))
