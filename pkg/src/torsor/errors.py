"""Exception types shared across the package."""


class TorsorError(Exception):
    """Base class for all package-specific errors."""


class DifferentiationFailure(TorsorError):
    """A finite-difference stencil would leave the field's domain."""


class DegenerateTangent(TorsorError):
    """Curve tangent vector too short to define a direction."""


class SingularMetric(TorsorError):
    """Surface first fundamental form is numerically singular."""


class EmptySection(TorsorError):
    """Cross-section quadrature rule has no nodes."""


class NonpositiveMass(TorsorError):
    """Pointwise state or density with m <= 0."""


class NonMonotoneError(TorsorError):
    """Convergence study errors fail to decrease under refinement."""


class ScenarioError(TorsorError):
    """Malformed scenario configuration; message names the offending key."""
