"""Reduced cylindrical-coordinate coefficients from a standard-frame jet.

After averaging, the dynamics near the destroyed equilibrium line are
governed in scaled cylindrical coordinates (r, z) by a planar system whose
coefficients are explicit combinations of second and third partial
derivatives of the frame-coordinate field.  This module evaluates those
combinations.  ``beta`` coefficients are parameter-free; ``gamma``
coefficients carry the first-order parameter dependence, several of them as
first/second-harmonic functions of the rotation phase.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .errors import NotHopf
from .models import JetTable

#: tolerance for recognizing the rotation-block pattern in a standard jet
_PATTERN_TOL = 1e-6


@dataclasses.dataclass(frozen=True)
class HarmonicScalar:
    """Finite Fourier sum c0 + cos1*cos(phi) + sin1*sin(phi) + cos2*cos(2 phi) + sin2*sin(2 phi)."""

    c0: float = 0.0
    cos1: float = 0.0
    sin1: float = 0.0
    cos2: float = 0.0
    sin2: float = 0.0

    def __call__(self, phi: float) -> float:
        return (
            self.c0
            + self.cos1 * math.cos(phi)
            + self.sin1 * math.sin(phi)
            + self.cos2 * math.cos(2.0 * phi)
            + self.sin2 * math.sin(2.0 * phi)
        )

    @property
    def mean(self) -> float:
        """Average over one rotation; only the constant term survives."""
        return self.c0

    def to_document(self) -> dict:
        return dataclasses.asdict(self)


@dataclasses.dataclass(frozen=True)
class CylindricalCoefficients:
    """Coefficients of the reduced (r, z) dynamics.

    First-order structure: dr ~ beta2 r z, dz ~ mu gamma5 + beta5 r^2.
    Second-order terms involve beta1, beta3, beta4, beta6, gamma7 and the
    phase-dependent gamma1, gamma2, gamma3, gamma4, gamma6.
    """

    omega: float
    beta1: float
    beta2: float
    beta3: float
    beta4: float
    beta5: float
    beta6: float
    gamma1: HarmonicScalar
    gamma2: HarmonicScalar
    gamma3: HarmonicScalar
    gamma4: HarmonicScalar
    gamma5: float
    gamma6: HarmonicScalar
    gamma7: float

    def to_document(self) -> dict:
        doc = {}
        for field in dataclasses.fields(self):
            value = getattr(self, field.name)
            doc[field.name] = (
                value.to_document() if isinstance(value, HarmonicScalar) else value
            )
        return doc


def _check_pattern(jet: JetTable) -> float:
    """Validate the Jacobian block pattern of a standard jet; return omega."""
    J = jet.jacobian()
    omega = J[1, 0]
    if not omega > 0:
        raise NotHopf(f"standard jet must have positive rotation rate, got {omega!r}")
    pattern = np.array([[0.0, -omega, 0.0], [omega, 0.0, 0.0], [0.0, 0.0, 0.0]])
    defect = float(np.max(np.abs(J - pattern)))
    if defect > _PATTERN_TOL * max(1.0, omega):
        raise NotHopf(
            f"jet Jacobian deviates from the rotation pattern by {defect:.2e}; "
            "transform with a standard frame first"
        )
    return float(omega)


def compute_coefficients(jet: JetTable) -> CylindricalCoefficients:
    """Evaluate all reduced coefficients from a standard-frame jet at mu = 0."""
    omega = _check_pattern(jet)
    D = jet.state
    M = jet.mu_deriv

    beta1 = (D(1, 0, 1, 1) - D(0, 1, 1, 0)) / (2.0 * omega)
    beta2 = 0.5 * (D(1, 0, 1, 0) + D(0, 1, 1, 1))
    beta4 = 0.25 * (D(1, 0, 2, 0) + D(0, 1, 2, 1))
    beta5 = 0.25 * (D(2, 0, 0, 2) + D(0, 2, 0, 2))

    lap_y_f1 = D(2, 0, 0, 0) + D(0, 2, 0, 0)
    lap_y_f2 = D(2, 0, 0, 1) + D(0, 2, 0, 1)
    beta3 = (
        (D(3, 0, 0, 0) + D(1, 2, 0, 0) + D(2, 1, 0, 1) + D(0, 3, 0, 1)) / 16.0
        + (D(1, 1, 0, 0) * lap_y_f1 - D(1, 1, 0, 1) * lap_y_f2) / (16.0 * omega)
        + (D(0, 2, 0, 0) * D(0, 2, 0, 1) - D(2, 0, 0, 0) * D(2, 0, 0, 1))
        / (16.0 * omega)
        + (D(0, 1, 1, 1) - D(1, 0, 1, 0)) * D(1, 1, 0, 2) / (16.0 * omega)
        + (D(0, 1, 1, 0) + D(1, 0, 1, 1))
        * (D(2, 0, 0, 2) - D(0, 2, 0, 2))
        / (32.0 * omega)
    )
    beta6 = (
        0.25 * (D(2, 0, 1, 2) + D(0, 2, 1, 2))
        + (D(0, 1, 1, 2) * lap_y_f1 - D(1, 0, 1, 2) * lap_y_f2) / (4.0 * omega)
        + (D(1, 0, 1, 0) - D(0, 1, 1, 1)) * D(1, 1, 0, 2) / (4.0 * omega)
        + (D(0, 1, 1, 0) + D(1, 0, 1, 1))
        * (D(0, 2, 0, 2) - D(2, 0, 0, 2))
        / (8.0 * omega)
    )

    gamma5 = M(0, 0, 0, 2)
    gamma7 = M(0, 0, 1, 2)

    # mixed rotation/drift couplings shared by the harmonic formulas
    c_pp = D(1, 0, 1, 0)  # d_y1 d_z f^y1
    c_mm = D(0, 1, 1, 1)  # d_y2 d_z f^y2
    c_pm = D(1, 0, 1, 1)  # d_y1 d_z f^y2
    c_mp = D(0, 1, 1, 0)  # d_y2 d_z f^y1
    half = gamma5 / (2.0 * omega)

    gamma1 = _quadratic_harmonics(
        sin_sq=-M(0, 1, 0, 0),
        sin_cos=(M(0, 1, 0, 1) - M(1, 0, 0, 0)) - half * (c_mp + c_pm),
        cos_sq=M(1, 0, 0, 1) - half * (c_pp - c_mm),
        const=-half * (math.pi * c_mp - math.pi * c_pm - 0.5 * c_pp + 0.5 * c_mm),
    )
    gamma2 = HarmonicScalar(sin1=-M(0, 0, 1, 0), cos1=M(0, 0, 1, 1))
    gamma3 = _quadratic_harmonics(
        sin_sq=M(0, 1, 0, 1),
        sin_cos=(M(0, 1, 0, 0) + M(1, 0, 0, 1)) - half * (c_pp - c_mm),
        cos_sq=M(1, 0, 0, 0) + half * (c_mp + c_pm),
        const=half * (math.pi * c_pp + math.pi * c_mm - 0.5 * c_mp - 0.5 * c_pm),
    )
    gamma4 = HarmonicScalar(sin1=M(0, 0, 1, 1), cos1=M(0, 0, 1, 0))
    gamma6 = HarmonicScalar(
        sin1=M(0, 1, 0, 2) - (gamma5 / omega) * D(1, 0, 1, 2),
        cos1=M(1, 0, 0, 2) + (gamma5 / omega) * D(0, 1, 1, 2),
    )

    return CylindricalCoefficients(
        omega=omega,
        beta1=beta1,
        beta2=beta2,
        beta3=beta3,
        beta4=beta4,
        beta5=beta5,
        beta6=beta6,
        gamma1=gamma1,
        gamma2=gamma2,
        gamma3=gamma3,
        gamma4=gamma4,
        gamma5=gamma5,
        gamma6=gamma6,
        gamma7=gamma7,
    )


def _quadratic_harmonics(
    sin_sq: float, sin_cos: float, cos_sq: float, const: float
) -> HarmonicScalar:
    """Fold A sin^2 + B sin cos + C cos^2 + const into second harmonics."""
    return HarmonicScalar(
        c0=0.5 * sin_sq + 0.5 * cos_sq + const,
        cos2=0.5 * cos_sq - 0.5 * sin_sq,
        sin2=0.5 * sin_cos,
    )
