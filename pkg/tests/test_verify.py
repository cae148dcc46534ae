"""Numerical verification: shooting, Floquet analysis, branches, reduced flows."""
from __future__ import annotations

import math

import numpy as np
import pytest

from hybridhopf import (
    ShootingSeed,
    averaged_drift_check,
    builtin,
    build_standard_frame,
    continue_branch,
    find_periodic_orbit,
    floquet_stability,
    integrate,
    jet,
    predict_orbit,
    simulate_truncated,
)
from hybridhopf import eco
from hybridhopf.errors import InvalidBounds, LeftDomain, NoConvergence
from hybridhopf.verify import compare_with_full_model

INTERIOR_PERIOD = 2.0 * math.pi / math.sqrt(0.3)


# ---------------------------------------------------------------------------
# integration basics
# ---------------------------------------------------------------------------


def test_pure_rotation_returns_to_start(rotation_model):
    x0 = np.array([1.0, 0.0, 0.0])
    traj = integrate(rotation_model, 0.0, x0, (0.0, 2.0 * math.pi), rtol=1e-12)
    assert np.allclose(traj.states[-1], x0, atol=1e-9)


def test_equilibrium_line_is_stationary(interior, interior_model):
    start = eco.coexistence_line(interior, [0.2])[0]
    traj = integrate(interior_model, 0.0, start, (0.0, 100.0), rtol=1e-11)
    assert np.max(np.abs(traj.states - start)) < 1e-8


def test_lyapunov_value_monotone_along_flow(interior, interior_model):
    start = np.array([0.2, 0.3, 0.35])
    traj = integrate(interior_model, 0.0, start, (0.0, 200.0), rtol=1e-11, n_samples=400)
    values = np.array([eco.lyapunov_value(interior, X) for X in traj.states])
    assert np.all(np.diff(values) <= 1e-9)
    rates = np.array([eco.lyapunov_rate(interior, X) for X in traj.states])
    assert np.all(rates <= 1e-15)


# ---------------------------------------------------------------------------
# single shooting on planted orbits
# ---------------------------------------------------------------------------


def test_planted_circle_orbit_synthetic(synthetic_pipeline):
    # on z = 0 the radial velocity vanishes identically, so the first-order
    # circle is an exact periodic solution of the full polynomial field
    pipe = synthetic_pipeline(-1, 1, 1, 1, 2.0)
    mu = -0.01
    r0 = 0.1
    seed = ShootingSeed(anchor=np.array([0.105, 0.0, 0.004]), period=3.3, scale=r0)
    orbit = find_periodic_orbit(pipe.model, mu, seed)
    assert orbit.period == pytest.approx(math.pi, abs=1e-8)
    assert math.hypot(orbit.anchor[0], orbit.anchor[1]) == pytest.approx(r0, abs=1e-9)
    assert abs(orbit.anchor[2]) < 1e-9
    assert orbit.residual < 1e-11
    verdict = floquet_stability(orbit)
    assert verdict.stable  # sigma = -bcd = -1 < 0
    assert verdict.unstable_count == 0


def test_planted_circle_orbit_toy_cylindrical():
    planted = {
        "omega": 1.3,
        "beta2": -0.7,
        "beta5": 0.9,
        "gamma5": 1.1,
        "gamma7": -0.4,
        "beta3": 0.0,
        "beta6": 0.0,
        "eps": 1.0,
    }
    model = builtin("toy_cylindrical", planted)
    mu = -0.005
    r0 = math.sqrt(-mu * planted["gamma5"] / planted["beta5"])
    seed = ShootingSeed(
        anchor=np.array([r0 * 1.04, 0.0, -0.002]),
        period=2.0 * math.pi / planted["omega"] * 1.05,
        scale=r0,
    )
    orbit = find_periodic_orbit(model, mu, seed)
    assert orbit.period == pytest.approx(2.0 * math.pi / planted["omega"], abs=1e-8)
    assert math.hypot(orbit.anchor[0], orbit.anchor[1]) == pytest.approx(r0, abs=1e-8)


def test_hyperbolic_orbit_has_one_escaping_multiplier(synthetic_pipeline):
    pipe = synthetic_pipeline(1, 1, 1, 1)
    orbit = find_periodic_orbit(
        pipe.model,
        -0.01,
        ShootingSeed(anchor=np.array([0.102, 0.0, 0.003]), period=6.4, scale=0.1),
    )
    verdict = floquet_stability(orbit)
    assert not verdict.stable
    assert verdict.unstable_count == 1
    assert verdict.trivial_defect < 1e-6  # flow multiplier recognized and excluded
    assert verdict.nontrivial_moduli[0] > 1.0 > verdict.nontrivial_moduli[1]


def test_interior_orbit_verification(interior_pipeline):
    prediction = predict_orbit(interior_pipeline.coeffs, 0.005, frame=interior_pipeline.frame)
    orbit = find_periodic_orbit(
        interior_pipeline.model, 0.005, prediction, guard=eco.interior_guard()
    )
    assert orbit.period == pytest.approx(INTERIOR_PERIOD, rel=0.02)
    assert orbit.residual < 1e-9
    # amplitude agrees with the first-order radius to the asymptotic accuracy
    radii = [
        math.hypot(*interior_pipeline.frame.to_frame(X, 0.005)[:2]) for X in orbit.states
    ]
    assert max(radii) == pytest.approx(prediction.r0, rel=0.15)
    verdict = floquet_stability(orbit)
    assert verdict.stable
    assert verdict.trivial_defect < 1e-3
    assert orbit.liouville_defect < 1e-6


def test_wrong_side_shooting_fails(interior_pipeline):
    guess = predict_orbit(interior_pipeline.coeffs, 0.005, frame=interior_pipeline.frame)
    with pytest.raises(NoConvergence):
        find_periodic_orbit(
            interior_pipeline.model,
            -0.005,
            ShootingSeed(anchor=guess.anchor, period=guess.period, scale=guess.amplitude_scale),
            guard=eco.interior_guard(),
        )


def test_seed_tuple_forms(synthetic_pipeline):
    pipe = synthetic_pipeline(-1, 1, 1, 1, 2.0)
    for seed in (
        (np.array([0.105, 0.0, 0.004]), 3.3),
        (np.array([0.105, 0.0, 0.004]), 3.3, 0.1),
    ):
        orbit = find_periodic_orbit(pipe.model, -0.01, seed)
        assert orbit.period == pytest.approx(math.pi, abs=1e-8)


# ---------------------------------------------------------------------------
# branch continuation
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "grid",
    [[], [0.0, 0.001], [0.001, -0.002], [0.002, 0.001]],
)
def test_continuation_rejects_bad_grids(interior_pipeline, grid):
    with pytest.raises(InvalidBounds):
        continue_branch(
            interior_pipeline.model,
            grid,
            coeffs=interior_pipeline.coeffs,
            frame=interior_pipeline.frame,
        )


def test_continuation_reports_lost_branch(interior_pipeline):
    branch = continue_branch(
        interior_pipeline.model,
        [0.005],
        coeffs=interior_pipeline.coeffs,
        frame=interior_pipeline.frame,
        guard=lambda X: False,
    )
    assert branch.points == ()
    assert branch.lost_at == 0.005
    assert not branch.complete()
    assert branch.fit is None


def test_continuation_monotone_amplitudes(interior_pipeline):
    branch = continue_branch(
        interior_pipeline.model,
        [0.002, 0.005, 0.008],
        coeffs=interior_pipeline.coeffs,
        frame=interior_pipeline.frame,
    )
    assert branch.complete()
    mus = [pt.mu for pt in branch.points]
    assert mus == sorted(mus)
    amps = [pt.amplitude for pt in branch.points]
    assert all(a > 0 for a in amps)
    assert all(b > a for a, b in zip(amps, amps[1:]))
    assert branch.points[1].orbit.period == pytest.approx(11.455279540078301, rel=1e-9)


def test_simulate_seeding_matches_prediction_seeding(interior_pipeline, interior_hopf):
    predicted = continue_branch(
        interior_pipeline.model,
        [0.002],
        coeffs=interior_pipeline.coeffs,
        frame=interior_pipeline.frame,
    )
    settled = continue_branch(
        interior_pipeline.model,
        [0.002],
        frame=interior_pipeline.frame,
        seed_strategy="simulate",
        seed_state=interior_hopf + np.array([0.01, 0.01, 0.0]),
        guard=eco.interior_guard(),
    )
    assert predicted.complete() and settled.complete()
    assert settled.points[0].amplitude == pytest.approx(
        predicted.points[0].amplitude, abs=1e-5
    )
    assert settled.points[0].orbit.period == pytest.approx(
        predicted.points[0].orbit.period, abs=1e-6
    )


# ---------------------------------------------------------------------------
# averaged transverse drift
# ---------------------------------------------------------------------------


def test_drift_sign_on_circle_at_zero_mu(interior_pipeline):
    report = averaged_drift_check(interior_pipeline.model, interior_pipeline.frame, 0.0, 0.05)
    assert report.sign_match
    assert report.predicted == pytest.approx(
        interior_pipeline.coeffs.beta5 * 0.05**2, rel=1e-12
    )
    assert report.relative_error < 0.25


def test_drift_on_former_line_matches_first_order(interior_pipeline):
    report = averaged_drift_check(interior_pipeline.model, interior_pipeline.frame, 0.001, 0.0)
    assert report.sign_match
    assert report.predicted == pytest.approx(
        0.001 * interior_pipeline.coeffs.gamma5, rel=1e-12
    )
    assert report.relative_error < 0.05


def test_drift_vanishes_for_linear_field(rotation_model):
    frame = build_standard_frame(jet(rotation_model, np.zeros(3), 0.0))
    report = averaged_drift_check(rotation_model, frame, 0.002, 0.1)
    assert report.predicted == 0.0
    assert abs(report.measured) < 1e-12
    assert report.sign_match


# ---------------------------------------------------------------------------
# truncated reduced dynamics
# ---------------------------------------------------------------------------


def test_truncated_equilibrium_is_stationary_at_first_order(closed_chart):
    run = simulate_truncated(closed_chart.coeffs, 0.1, 0.25, (0.74, 0.0), t_final=5.0)
    assert run.r0 == pytest.approx(math.sqrt(0.25 * 0.225 / 0.1), rel=1e-12)
    assert run.equilibrium_residual is not None
    assert run.equilibrium_residual < 1e-12


def test_truncated_exits_validity_wedge(synthetic_pipeline):
    coeffs = synthetic_pipeline(-1, 1, 1, 1).coeffs
    # start near the wedge boundary |z| < r with strong inward mu-drift
    with pytest.raises(LeftDomain):
        simulate_truncated(coeffs, 0.3, -3.0, (0.2, 0.15), t_final=80.0)


def test_truncated_comparison_small_deviation(synthetic_pipeline):
    pipe = synthetic_pipeline(-1, 1, 1, 1, 2.0)
    run = simulate_truncated(pipe.coeffs, 0.1, -0.25, (0.55, 0.0), t_final=100.0)
    report = compare_with_full_model(pipe.model, pipe.frame, run)
    assert report.tau_covered == pytest.approx(100.0, rel=0.01)
    assert report.deviation < 0.2  # O(epsilon) over a 1/epsilon horizon
