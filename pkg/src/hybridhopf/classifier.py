"""Classification of the bifurcation from the reduced coefficients.

The destroyed equilibrium line gives rise to a periodic-orbit branch on one
side of mu = 0.  Its character is decided by sign data:

* xi = sign(beta2 * beta5) separates the hyperbolic case (xi = +1, the
  reduced equilibrium is a saddle and the orbit inherits a two-dimensional
  unstable manifold) from the elliptic case (xi = -1).
* In the elliptic case the first-order terms are neutral and the verdict
  comes from the focus quantity
  sigma = 2 beta3 gamma5^2 - beta5 gamma5 gamma7 + beta6 gamma5^2:
  negative means an asymptotically stable orbit, positive an unstable one
  with a three-dimensional unstable manifold.
* The branch lives where r0^2 = -mu gamma5 / beta5 is positive, i.e. for
  mu of sign -sign(beta5 gamma5); amplitude grows like sqrt(|mu|) while the
  period approaches 2 pi / omega.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from .coefficients import CylindricalCoefficients
from .errors import AssumptionViolation, Degenerate, WrongDirection
from .frame import StandardFrame

TYPE_HYPERBOLIC = "H"
TYPE_ELLIPTIC_STABLE = "ES"
TYPE_ELLIPTIC_UNSTABLE = "EU"

#: coefficients smaller than this cannot carry a sign decision
SIGN_THRESHOLD = 1e-6
#: relative threshold below which the focus quantity counts as zero
DEGENERACY_RTOL = 1e-9


def focus_quantity(coeffs: CylindricalCoefficients) -> float:
    """sigma = 2 beta3 gamma5^2 - beta5 gamma5 gamma7 + beta6 gamma5^2."""
    g5 = coeffs.gamma5
    return (
        2.0 * coeffs.beta3 * g5 * g5
        - coeffs.beta5 * g5 * coeffs.gamma7
        + coeffs.beta6 * g5 * g5
    )


@dataclasses.dataclass(frozen=True)
class Classification:
    """Outcome of the sign analysis.

    ``direction`` is the sign of mu on which the orbit branch exists.
    ``mu_validity_hint`` estimates where the asymptotics stop being
    trustworthy: |mu| ~ 0.1 |beta5 / gamma5| keeps the predicted radius an
    order of magnitude inside the unit frame box.
    """

    label: str
    xi: int
    sigma: float
    direction: int
    orbit_stable: bool
    unstable_dimension: int
    omega: float
    mu_validity_hint: float

    def to_document(self) -> dict:
        return dataclasses.asdict(self)


def classify(coeffs: CylindricalCoefficients) -> Classification:
    """Decide the bifurcation type carried by the reduced coefficients."""
    b2, b5, g5 = coeffs.beta2, coeffs.beta5, coeffs.gamma5
    small = [
        name
        for name, val in (("beta2", b2), ("beta5", b5), ("gamma5", g5))
        if abs(val) <= SIGN_THRESHOLD
    ]
    if small:
        raise AssumptionViolation(
            f"cannot classify: {', '.join(small)} within {SIGN_THRESHOLD:g} of zero"
        )

    xi = 1 if b2 * b5 > 0 else -1
    direction = -1 if b5 * g5 > 0 else 1
    sigma = focus_quantity(coeffs)
    hint = 0.1 * abs(b5 / g5)

    if xi > 0:
        return Classification(
            label=TYPE_HYPERBOLIC,
            xi=xi,
            sigma=sigma,
            direction=direction,
            orbit_stable=False,
            unstable_dimension=2,
            omega=coeffs.omega,
            mu_validity_hint=hint,
        )

    g5sq = g5 * g5
    scale = max(
        abs(2.0 * coeffs.beta3 * g5sq),
        abs(coeffs.beta5 * g5 * coeffs.gamma7),
        abs(coeffs.beta6 * g5sq),
        1e-300,
    )
    # the sign of sigma is only meaningful if at least one of its three
    # constituents stands clear of the round-off left in the reduction;
    # measure them against the coefficients that are guaranteed nonzero
    resolution = SIGN_THRESHOLD * max(abs(b2), abs(b5), abs(g5), coeffs.omega)
    resolved = max(abs(coeffs.beta3), abs(coeffs.beta6), abs(coeffs.gamma7)) > resolution
    if not resolved or abs(sigma) <= DEGENERACY_RTOL * scale:
        raise Degenerate(
            f"focus quantity {sigma:.3e} is indistinguishable from zero "
            f"(largest term {scale:.3e}, coefficient resolution {resolution:.3e}); "
            "stability undecidable at this order"
        )
    stable = sigma < 0
    return Classification(
        label=TYPE_ELLIPTIC_STABLE if stable else TYPE_ELLIPTIC_UNSTABLE,
        xi=xi,
        sigma=sigma,
        direction=direction,
        orbit_stable=stable,
        unstable_dimension=0 if stable else 3,
        omega=coeffs.omega,
        mu_validity_hint=hint,
    )


@dataclasses.dataclass(frozen=True)
class PredictedOrbit:
    """Leading-order periodic orbit for one parameter value.

    ``r0`` is the radius in frame coordinates; ``states`` samples the
    predicted loop in original coordinates when a frame is supplied.
    ``amplitude_scale`` converts r0 into an original-coordinate size and is
    the natural trust-region radius for shooting.
    """

    mu: float
    r0: float
    period: float
    anchor: np.ndarray | None
    states: np.ndarray | None
    amplitude_scale: float

def predict_orbit(
    coeffs: CylindricalCoefficients,
    mu: float,
    frame: StandardFrame | None = None,
    n_states: int = 64,
) -> PredictedOrbit:
    """Leading-order orbit prediction at one parameter value.

    Raises `WrongDirection` when mu is on the side without a branch; the
    caller should consult `classify` for the valid sign.
    """
    b5, g5 = coeffs.beta5, coeffs.gamma5
    if abs(b5) <= SIGN_THRESHOLD or abs(g5) <= SIGN_THRESHOLD:
        raise AssumptionViolation("cannot predict an orbit with beta5 or gamma5 ~ 0")
    r0_sq = -mu * g5 / b5
    if r0_sq <= 0.0:
        good = "mu > 0" if -math.copysign(1.0, b5 * g5) > 0 else "mu < 0"
        raise WrongDirection(
            f"no orbit predicted at mu = {mu:g}; the branch lives on {good}"
        )
    r0 = math.sqrt(r0_sq)
    period = 2.0 * math.pi / coeffs.omega

    anchor = states = None
    scale = r0
    if frame is not None:
        planar = frame.basis[:, :2]
        scale = r0 * float(np.linalg.norm(planar, 2))
        phis = np.linspace(0.0, 2.0 * math.pi, n_states, endpoint=False)
        states = np.array(
            [
                frame.from_frame((r0 * math.cos(p), r0 * math.sin(p), 0.0), mu)
                for p in phis
            ]
        )
        anchor = states[0]
    return PredictedOrbit(
        mu=mu,
        r0=r0,
        period=period,
        anchor=anchor,
        states=states,
        amplitude_scale=scale,
    )


def reduced_equilibrium(
    coeffs: CylindricalCoefficients, mu: float
) -> tuple[float, float]:
    """First-order reduced equilibrium (r0, z0 = 0) in frame coordinates."""
    r0_sq = -mu * coeffs.gamma5 / coeffs.beta5
    if r0_sq <= 0:
        raise WrongDirection(f"no reduced equilibrium at mu = {mu:g}")
    return math.sqrt(r0_sq), 0.0


def saddle_exponents(
    coeffs: CylindricalCoefficients, mu: float
) -> tuple[complex, complex]:
    """Eigenvalues of the first-order reduced system at its equilibrium.

    The linearization at (r0, 0) is [[0, beta2 r0], [2 beta5 r0, 0]] with
    eigenvalues +-sqrt(2 beta2 beta5) r0: real for the hyperbolic type,
    imaginary for the elliptic one.
    """
    r0, _ = reduced_equilibrium(coeffs, mu)
    product = 2.0 * coeffs.beta2 * coeffs.beta5
    root = complex(math.sqrt(product)) if product >= 0 else 1j * math.sqrt(-product)
    return root * r0, -root * r0


def direction_label(direction: int) -> str:
    return "mu > 0" if direction > 0 else "mu < 0"
