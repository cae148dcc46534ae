"""Exception types shared across the package."""


class HybridHopfError(Exception):
    """Base class for all package-specific errors."""


class NonFinite(HybridHopfError):
    """A vector-field evaluation produced NaN or infinity."""


class UnknownModel(HybridHopfError):
    """Requested builtin model name is not in the catalog."""


class InvalidParams(HybridHopfError):
    """Model parameters are incomplete or out of range."""


class SymmetryDefect(HybridHopfError):
    """Finite-difference mixed partials disagree between evaluation routes."""


class MissingJetEntry(HybridHopfError):
    """A derivative required by a coefficient formula is absent from the jet."""


class NoConvergence(HybridHopfError):
    """An iterative solve did not reach its tolerance.

    For periodic-orbit shooting this is reported, not fatal: failure to
    converge from a seed is evidence of orbit absence near that seed.
    """


class NotHopf(HybridHopfError):
    """The located equilibrium does not carry the {0, +-i*omega} spectrum."""


class DefectiveSpectrum(HybridHopfError):
    """Eigenvalues at the candidate point are not simple."""


class AssumptionViolation(HybridHopfError):
    """A quantity the classification relies on is within tolerance of zero."""


class Degenerate(HybridHopfError):
    """The focus quantity vanishes to tolerance; no stability verdict exists."""


class WrongDirection(HybridHopfError):
    """Requested parameter sign has no predicted orbit branch."""


class StepFailure(HybridHopfError):
    """Adaptive integrator step size underflowed."""


class SingularShooting(HybridHopfError):
    """The shooting Jacobian is rank-deficient."""


class LeftDomain(HybridHopfError):
    """A truncated-form trajectory exited its validity region."""


class NotAdmissible(HybridHopfError):
    """Parameters are outside the admissible region."""


class DegenerateAlphas(HybridHopfError):
    """Half-saturation constants coincide; the interior Hopf formula is singular."""


class NoCoexistencePossible(HybridHopfError):
    """A break-even concentration is at or above the prey carrying capacity."""


class InvalidBounds(HybridHopfError):
    """An interval argument is empty or out of range."""
