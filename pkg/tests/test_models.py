"""Model catalog, jet tables, and finite-difference differentiation."""
from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hybridhopf import builtin, evaluate, finite_difference_jet, from_config, jet, polynomial_model
from hybridhopf.errors import (
    InvalidParams,
    MissingJetEntry,
    NonFinite,
    SymmetryDefect,
    UnknownModel,
)
from hybridhopf.models import STATE_DIM, state_multi_indices


# ---------------------------------------------------------------------------
# multi-index bookkeeping
# ---------------------------------------------------------------------------


def test_state_multi_indices_enumerates_full_third_order_jet():
    idx = list(state_multi_indices())
    assert len(idx) == 19  # C(3+3, 3) - 1 derivative multi-indices, orders 1..3
    assert len(set(idx)) == 19
    orders = [sum(i) for i in idx]
    assert orders == sorted(orders)  # graded order
    assert all(1 <= sum(i) <= 3 for i in idx)


# ---------------------------------------------------------------------------
# evaluate
# ---------------------------------------------------------------------------


def test_synthetic_origin_is_equilibrium():
    model = builtin("synthetic_nf", {"a": 1, "b": 1, "c": 1, "d": 1, "omega": 1})
    assert np.allclose(evaluate(model, np.zeros(3), 0.0), 0.0, atol=1e-15)


def test_predator_prey_hopf_point_is_equilibrium(interior_model):
    F = evaluate(interior_model, np.array([0.125, 0.405, 0.3]), 0.0)
    assert np.allclose(F, 0.0, atol=1e-15)


def test_predator_prey_prey_only_equilibrium(interior_model):
    F = evaluate(interior_model, np.array([0.0, 0.0, 1.0]), 0.0)
    assert np.allclose(F, 0.0, atol=1e-15)


def test_evaluate_rejects_nonfinite_state(interior_model):
    with pytest.raises(NonFinite):
        evaluate(interior_model, np.array([np.nan, 0.1, 0.1]), 0.0)


@settings(max_examples=60, deadline=None)
@given(
    x1=st.floats(0.01, 2.0),
    x2=st.floats(0.01, 2.0),
    s=st.floats(0.01, 2.0),
    mu=st.floats(-0.05, 0.05),
)
def test_evaluate_finite_on_admissible_box(x1, x2, s, mu):
    model = builtin(
        "predator_prey",
        {"delta1": 1.0, "delta2": 1.0, "lam": 0.3, "alpha1": 0.2, "alpha2": 0.6},
    )
    F = evaluate(model, np.array([x1, x2, s]), mu)
    assert np.all(np.isfinite(F))
    # deterministic
    assert np.array_equal(F, evaluate(model, np.array([x1, x2, s]), mu))


# ---------------------------------------------------------------------------
# jet tables
# ---------------------------------------------------------------------------


def test_jet_zero_order_matches_evaluate(interior_model):
    X = np.array([0.2, 0.3, 0.4])
    table = jet(interior_model, X, 0.01)
    assert np.allclose(table.state(0, 0, 0), evaluate(interior_model, X, 0.01), atol=1e-14)


def test_jet_missing_entry_raises(interior_model):
    table = jet(interior_model, np.array([0.2, 0.3, 0.4]), 0.0)
    with pytest.raises(MissingJetEntry):
        table.state(4, 0, 0)


def test_synthetic_jet_hand_values():
    model = builtin("synthetic_nf", {"a": 2, "b": 3, "c": 5, "d": 7, "omega": 1})
    table = jet(model, np.zeros(3), 0.0)
    div_z = table.state(1, 0, 1)[0] + table.state(0, 1, 1)[1]
    assert div_z == pytest.approx(2 * 2, abs=1e-6)  # d/dz of planar divergence
    laplacian = table.state(2, 0, 0)[2] + table.state(0, 2, 0)[2]
    assert laplacian == pytest.approx(4 * 3, abs=1e-6)
    assert table.mu_deriv(0, 0, 0)[2] == pytest.approx(5, abs=1e-6)
    assert table.mu_deriv(0, 0, 1)[2] == pytest.approx(7, abs=1e-6)


def test_classical_hopf_planar_laplacian_zero():
    model = builtin("classical_hopf", {"sign": 1})
    table = jet(model, np.zeros(3), 0.0)
    laplacian = table.state(2, 0, 0)[2] + table.state(0, 2, 0)[2]
    assert laplacian == pytest.approx(0.0, abs=1e-12)


def test_linear_field_higher_orders_vanish(rotation_model):
    table = jet(rotation_model, np.zeros(3), 0.0)
    for index in state_multi_indices():
        if sum(index) >= 2:
            assert np.allclose(table.state(*index), 0.0, atol=1e-12), index


def test_predator_prey_exact_jet_matches_finite_differences(interior_model):
    X_H = np.array([0.125, 0.405, 0.3])
    exact = jet(interior_model, X_H, 0.0)
    approx = finite_difference_jet(interior_model, X_H, 0.0)
    for index in state_multi_indices():
        want = exact.state(*index)
        got = approx.state(*index)
        scale = max(1.0, float(np.max(np.abs(want))))
        assert np.allclose(got, want, atol=1e-6 * scale), index
    for index in [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]:
        want = exact.mu_deriv(*index)
        got = approx.mu_deriv(*index)
        assert np.allclose(got, want, atol=1e-6), index


def test_polynomial_exact_jet_matches_finite_differences():
    model = polynomial_model(
        {
            "y1": [[-1.5, 0, 1, 0, 0], [0.7, 1, 0, 1, 0], [0.2, 0, 0, 0, 1]],
            "y2": [[1.5, 1, 0, 0, 0], [-0.3, 0, 1, 1, 0], [0.1, 3, 0, 0, 0]],
            "z": [[0.9, 2, 0, 0, 0], [0.9, 0, 2, 0, 0], [0.4, 0, 0, 0, 1], [0.6, 0, 0, 1, 1]],
        },
        name="mixed_cubic",
    )
    X = np.array([0.11, -0.07, 0.05])
    exact = jet(model, X, 0.02)
    approx = finite_difference_jet(model, X, 0.02)
    for index in state_multi_indices():
        want = exact.state(*index)
        scale = max(1.0, float(np.max(np.abs(want))))
        assert np.allclose(approx.state(*index), want, atol=1e-6 * scale), index


def test_finite_difference_symmetry_defect_small_for_smooth_field(interior_model):
    table = finite_difference_jet(interior_model, np.array([0.125, 0.405, 0.3]), 0.0)
    assert table.symmetry_defect < 1e-6


def test_finite_difference_flags_broken_mixed_partials():
    from hybridhopf.models import ModelDefinition

    def rhs(X, mu):
        y1, y2, z = X
        return np.array([-y2, y1, abs(y1) * abs(y2)])

    model = ModelDefinition(name="kinked", rhs=rhs)
    with pytest.raises(SymmetryDefect):
        finite_difference_jet(model, np.zeros(3), 0.0)


@settings(max_examples=40, deadline=None)
@given(
    x1=st.floats(0.05, 1.5),
    x2=st.floats(0.05, 1.5),
    s=st.floats(0.05, 1.5),
)
def test_exact_jacobian_matches_directional_differences(x1, x2, s):
    model = builtin(
        "predator_prey",
        {"delta1": 1.0, "delta2": 1.0, "lam": 0.3, "alpha1": 0.2, "alpha2": 0.6},
    )
    X = np.array([x1, x2, s])
    J = model.jacobian(X, 0.0)
    h = 1e-6
    for k in range(STATE_DIM):
        e = np.zeros(STATE_DIM)
        e[k] = h
        column = (evaluate(model, X + e, 0.0) - evaluate(model, X - e, 0.0)) / (2 * h)
        assert np.allclose(J[:, k], column, atol=1e-6, rtol=1e-6)


# ---------------------------------------------------------------------------
# catalog and configuration
# ---------------------------------------------------------------------------


def test_builtin_catalog_names():
    from hybridhopf.models import available_builtins

    names = available_builtins()
    for name in ("predator_prey", "synthetic_nf", "toy_cylindrical", "classical_hopf"):
        assert name in names


def test_builtin_unknown_name():
    with pytest.raises(UnknownModel):
        builtin("lorenz", {})


@pytest.mark.parametrize(
    "params",
    [
        {"delta1": -1.0, "delta2": 1.0, "lam": 0.3, "alpha1": 0.2, "alpha2": 0.6},
        {"delta1": 1.0, "delta2": 1.0, "lam": 1.3, "alpha1": 0.2, "alpha2": 0.6},
        {"delta1": 1.0, "delta2": 1.0, "lam": 0.3, "alpha1": -0.2, "alpha2": 0.6},
    ],
)
def test_predator_prey_rejects_bad_parameters(params):
    with pytest.raises(InvalidParams):
        builtin("predator_prey", params)


def test_from_config_requires_exactly_one_source():
    with pytest.raises(InvalidParams):
        from_config({})
    with pytest.raises(InvalidParams):
        from_config(
            {
                "builtin": "synthetic_nf",
                "polynomial": {"y1": [], "y2": [], "z": []},
            }
        )


def test_from_config_rejects_unknown_keys():
    with pytest.raises(InvalidParams):
        from_config({"builtin": "synthetic_nf", "params": {}, "extra": 1})


def test_from_config_finite_difference_mode_drops_exact_jets(interior):
    config = {
        "builtin": "predator_prey",
        "params": interior.to_dict(),
        "jets": "finite_difference",
    }
    model = from_config(config)
    assert model.exact_jet is None
    table = jet(model, np.array([0.125, 0.405, 0.3]), 0.0)
    assert table.step_report is not None  # finite differences actually ran
    exact_model = from_config({"builtin": "predator_prey", "params": interior.to_dict()})
    exact = jet(exact_model, np.array([0.125, 0.405, 0.3]), 0.0)
    for index in [(1, 0, 0), (0, 0, 1), (2, 0, 0), (1, 1, 0), (0, 2, 1)]:
        want = exact.state(*index)
        scale = max(1.0, float(np.max(np.abs(want))))
        assert np.allclose(table.state(*index), want, atol=1e-6 * scale), index


def test_polynomial_model_validates_rows():
    with pytest.raises(InvalidParams):
        polynomial_model({"y1": [[1.0, 0, 0]], "y2": [], "z": []}, name="bad_row")
    with pytest.raises(InvalidParams):
        polynomial_model({"y1": [], "weird": [], "z": []}, name="bad_key")
