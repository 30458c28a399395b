import math

import numpy as np
import pytest

from fuzzpole.plant import (
    DisturbanceEvent,
    PlantError,
    PlantParams,
    PlantState,
    POLE_PRESETS,
    apply_event,
    derivatives,
    pole_params,
    set_tilt,
    step,
    tap,
)

# Frozen from an independent high-precision evaluation (mpmath, 30 digits) of
# the governing equations at theta = 0.1 rad, everything else zero, pole-1
# frictionless parameters.
THETA_DDOT_ORACLE = 1.5737853048016258
X_DDOT_ORACLE = -0.07117831516049841

P1 = pole_params(1).frictionless()


def test_equilibrium_is_exact():
    assert derivatives(PlantState(), 0.0, P1) == (0.0, 0.0)
    assert derivatives(PlantState(), 0.0, pole_params(1)) == (0.0, 0.0)


def test_derivatives_match_independent_oracle():
    th_dd, x_dd = derivatives(PlantState(theta=0.1), 0.0, P1)
    assert th_dd == pytest.approx(THETA_DDOT_ORACLE, rel=1e-6)
    assert x_dd == pytest.approx(X_DDOT_ORACLE, rel=1e-6)


def test_odd_symmetry_frictionless():
    rng = np.random.default_rng(11)
    for _ in range(300):
        s = PlantState(
            theta=float(rng.uniform(-0.6, 0.6)),
            theta_dot=float(rng.uniform(-2, 2)),
            x=float(rng.uniform(-1, 1)),
            x_dot=float(rng.uniform(-1, 1)),
        )
        f = float(rng.uniform(-10, 10))
        mirrored = PlantState(-s.theta, -s.theta_dot, s.x, -s.x_dot)
        a = derivatives(s, f, P1)
        b = derivatives(mirrored, -f, P1)
        assert b[0] == pytest.approx(-a[0], abs=1e-12)
        assert b[1] == pytest.approx(-a[1], abs=1e-12)


def test_force_saturation():
    p = pole_params(1)
    s = PlantState(theta=0.05, x_dot=0.3)
    assert derivatives(s, 25.0, p) == derivatives(s, p.f_max, p)
    assert derivatives(s, -99.0, p) == derivatives(s, -p.f_max, p)


def test_friction_signs():
    p = pole_params(1)
    gliding = PlantState(x_dot=1.0)
    still = PlantState()
    # cart friction opposes motion: x_ddot is lower when moving forward
    assert derivatives(gliding, 0.0, p)[1] < derivatives(still, 0.0, p)[1]
    # sgn(0) = 0 keeps rest an equilibrium even with friction
    assert derivatives(still, 0.0, p) == (0.0, 0.0)


def test_tilt_enters_as_cart_bias():
    p = P1
    tilted = PlantState(tilt=math.radians(7.0))
    th_dd, x_dd = derivatives(tilted, 0.0, p)
    # the x equation carries exactly -g sin(tilt) plus the pole reaction
    bias = -p.g * math.sin(tilted.tilt)
    assert x_dd == pytest.approx(bias - p.m * p.l * th_dd / (p.m_c + p.m), rel=1e-12)
    # and the slope tips the pole uphill (positive theta)
    assert th_dd > 0.0
    # untilting restores the equilibrium exactly
    assert derivatives(apply_event(tilted, set_tilt(0.0, 0.0)), 0.0, p) == (0.0, 0.0)


def test_non_finite_input_rejected():
    with pytest.raises(PlantError):
        derivatives(PlantState(theta=math.nan), 0.0, P1)
    with pytest.raises(PlantError):
        derivatives(PlantState(), math.inf, P1)


def test_param_validation():
    with pytest.raises(PlantError):
        PlantParams(m=-1.0)
    with pytest.raises(PlantError):
        PlantParams(mu_c=-0.1)
    with pytest.raises(PlantError):
        pole_params("pole-99")


def test_presets_match_published_pole_table():
    assert POLE_PRESETS["pole-1"] == (1.0, 0.1)
    assert POLE_PRESETS["pole-7"] == (1.0, 2.0)
    assert len(POLE_PRESETS) == 7
    p3 = pole_params(3)
    assert p3.m == 0.05 and p3.l == 0.5
    p2 = pole_params("pole-2")
    assert p2.m == 0.05 and p2.l == 0.25


def test_step_fixed_point_at_equilibrium():
    s = PlantState()
    assert step(s, 0.0, 0.005, P1) == s


def test_step_advances_velocity_first_order():
    s = PlantState(theta=0.1)
    out = step(s, 0.0, 0.005, P1)
    assert out.theta == 0.1  # old theta_dot was zero
    assert out.theta_dot == pytest.approx(THETA_DDOT_ORACLE * 0.005, rel=1e-6)
    assert out.x == 0.0
    assert out.x_dot == pytest.approx(X_DDOT_ORACLE * 0.005, rel=1e-6)
    assert out.tilt == s.tilt


def _integrate(theta0, dt, t_end, method="euler"):
    s = PlantState(theta=theta0)
    for _ in range(int(round(t_end / dt))):
        s = step(s, 0.0, dt, P1, method=method)
    return s


def test_euler_first_order_convergence():
    """Richardson-style check against a fine-step reference: the error of the
    Euler trajectory shrinks linearly with dt."""
    reference = _integrate(0.05, 1e-4, 0.5)
    errors = []
    for dt in (0.01, 0.005, 0.0025):
        got = _integrate(0.05, dt, 0.5)
        errors.append(abs(got.theta - reference.theta))
    assert errors[0] > errors[1] > errors[2]
    ratio1 = errors[0] / errors[1]
    ratio2 = errors[1] / errors[2]
    assert 1.6 < ratio1 < 2.4
    assert 1.6 < ratio2 < 2.4


def test_rk4_beats_euler():
    reference = _integrate(0.05, 1e-5, 0.3, method="rk4")
    euler = _integrate(0.05, 0.005, 0.3, method="euler")
    rk4 = _integrate(0.05, 0.005, 0.3, method="rk4")
    assert abs(rk4.theta - reference.theta) < 1e-3 * abs(euler.theta - reference.theta)


def _total_energy(s: PlantState, p: PlantParams) -> float:
    # uniform rod about its center: I = m (2l)^2 / 12
    translational = 0.5 * (p.m_c + p.m) * s.x_dot**2
    coupling = p.m * p.l * s.x_dot * s.theta_dot * math.cos(s.theta)
    rotational = (2.0 / 3.0) * p.m * p.l**2 * s.theta_dot**2
    potential = p.m * p.g * p.l * math.cos(s.theta)
    return translational + coupling + rotational + potential


def test_energy_drift_shrinks_linearly_with_dt():
    """Unforced frictionless dynamics conserve energy; explicit Euler's drift
    over 1 s is bounded and roughly halves when dt halves."""
    drifts = []
    for dt in (0.005, 0.0025, 0.00125):
        s = PlantState(theta=0.3, theta_dot=0.2, x_dot=0.1)
        e0 = _total_energy(s, P1)
        for _ in range(int(round(1.0 / dt))):
            s = step(s, 0.0, dt, P1)
        drifts.append(abs(_total_energy(s, P1) - e0))
    assert drifts[0] < 0.05  # bounded at the benchmark step
    assert 1.6 < drifts[0] / drifts[1] < 2.4
    assert 1.6 < drifts[1] / drifts[2] < 2.4


def test_tap_event():
    s = apply_event(PlantState(), tap(15.0, 0.35))
    assert s == PlantState(theta_dot=0.35)


def test_set_tilt_event():
    e = set_tilt(20.0, math.radians(7.0))
    assert e.value == pytest.approx(0.1222, abs=1e-4)
    s = apply_event(PlantState(), e)
    assert s.tilt == e.value
    assert apply_event(s, set_tilt(45.0, 0.0)).tilt == 0.0


def test_event_validation():
    with pytest.raises(PlantError):
        DisturbanceEvent(-1.0, "tap", 0.1)
    with pytest.raises(PlantError):
        DisturbanceEvent(1.0, "shove", 0.1)


def test_step_validation():
    with pytest.raises(PlantError):
        step(PlantState(), 0.0, 0.0, P1)
    with pytest.raises(PlantError):
        step(PlantState(), 0.0, 0.005, P1, method="verlet")
