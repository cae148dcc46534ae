"""Shared fixtures: the interior ecosystem sample and synthetic pipelines."""
from __future__ import annotations

import dataclasses

import numpy as np
import pytest

from hybridhopf import (
    CylindricalCoefficients,
    StandardFrame,
    build_standard_frame,
    compute_coefficients,
    jet,
    standard_jet,
)
from hybridhopf import eco
from hybridhopf.eco import EcoParams
from hybridhopf.models import ModelDefinition


@dataclasses.dataclass(frozen=True)
class Pipeline:
    """A model with everything derived at its Hopf point."""

    model: ModelDefinition
    point: np.ndarray
    frame: StandardFrame
    coeffs: CylindricalCoefficients


def build_pipeline(model: ModelDefinition, point) -> Pipeline:
    raw = jet(model, np.asarray(point, dtype=float), 0.0)
    frame = build_standard_frame(raw)
    coeffs = compute_coefficients(standard_jet(raw, frame))
    return Pipeline(model=model, point=np.asarray(point, dtype=float), frame=frame, coeffs=coeffs)


@pytest.fixture(scope="session")
def interior() -> EcoParams:
    return EcoParams(delta1=1.0, delta2=1.0, lam=0.3, alpha1=0.2, alpha2=0.6)


@pytest.fixture(scope="session")
def interior_model(interior):
    return eco.model(interior)


@pytest.fixture(scope="session")
def interior_hopf(interior) -> np.ndarray:
    return eco.hopf_point(interior)


@pytest.fixture(scope="session")
def interior_pipeline(interior_model, interior_hopf) -> Pipeline:
    """Interior sample with the generic (unit-vector) frame."""
    return build_pipeline(interior_model, interior_hopf)


@pytest.fixture(scope="session")
def closed_chart(interior, interior_model, interior_hopf) -> Pipeline:
    """Interior sample in the chart where the closed-form coefficients hold."""
    frame = eco.closed_form_frame(interior)
    raw = jet(interior_model, interior_hopf, 0.0)
    coeffs = compute_coefficients(standard_jet(raw, frame))
    return Pipeline(model=interior_model, point=interior_hopf, frame=frame, coeffs=coeffs)


@pytest.fixture(scope="session")
def synthetic_pipeline():
    """Factory: planted normal-form model (a, b, c, d, omega) at the origin."""
    from hybridhopf import builtin

    def factory(a: float, b: float, c: float, d: float, omega: float = 1.0) -> Pipeline:
        model = builtin(
            "synthetic_nf", {"a": a, "b": b, "c": c, "d": d, "omega": omega}
        )
        return build_pipeline(model, np.zeros(3))

    return factory


@pytest.fixture(scope="session")
def rotation_model():
    """Pure planar rotation with a trivial third axis: all coefficients zero."""
    from hybridhopf import polynomial_model

    return polynomial_model(
        {"y1": [[-1.0, 0, 1, 0, 0]], "y2": [[1.0, 1, 0, 0, 0]], "z": []},
        name="pure_rotation",
    )
