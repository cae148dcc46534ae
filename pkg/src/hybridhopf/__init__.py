"""Detection, classification, and verification of periodic orbits that are
born when a parameter perturbation destroys a line of equilibria at a point
with eigenvalues {0, +-i omega}.

Workflow: define a model (`models`), locate the distinguished point and build
the standard frame (`frame`), evaluate the reduced coefficients
(`coefficients`), classify the bifurcation (`classifier`), and verify the
predicted orbits against the full flow (`verify`).  The `eco` module carries
the two-predator/one-prey application with closed-form reference values.
"""

__version__ = "0.1.0"

from .classifier import Classification, PredictedOrbit, classify, predict_orbit
from .coefficients import CylindricalCoefficients, HarmonicScalar, compute_coefficients
from .eco import EcoParams
from .frame import (
    AssumptionReport,
    StandardFrame,
    build_standard_frame,
    check_assumptions,
    locate_hopf_point,
    standard_jet,
)
from .models import (
    JetTable,
    ModelDefinition,
    builtin,
    evaluate,
    finite_difference_jet,
    from_config,
    jet,
    polynomial_model,
)
from .verify import (
    Branch,
    PeriodicOrbit,
    ShootingSeed,
    StabilityVerdict,
    averaged_drift_check,
    compare_with_full_model,
    continue_branch,
    find_periodic_orbit,
    floquet_stability,
    integrate,
    simulate_truncated,
)

__all__ = [
    "__version__",
    "AssumptionReport",
    "Branch",
    "Classification",
    "CylindricalCoefficients",
    "EcoParams",
    "HarmonicScalar",
    "JetTable",
    "ModelDefinition",
    "PeriodicOrbit",
    "PredictedOrbit",
    "ShootingSeed",
    "StabilityVerdict",
    "StandardFrame",
    "averaged_drift_check",
    "build_standard_frame",
    "builtin",
    "check_assumptions",
    "classify",
    "compare_with_full_model",
    "compute_coefficients",
    "continue_branch",
    "evaluate",
    "find_periodic_orbit",
    "finite_difference_jet",
    "floquet_stability",
    "from_config",
    "integrate",
    "jet",
    "locate_hopf_point",
    "polynomial_model",
    "predict_orbit",
    "simulate_truncated",
    "standard_jet",
]
