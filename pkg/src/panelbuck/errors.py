"""Exception hierarchy for panelbuck."""


class PanelBuckError(Exception):
    """Base class for all panelbuck errors."""


class GeometryError(PanelBuckError):
    """Degenerate or inconsistent panel geometry."""


class PartitionError(PanelBuckError):
    """Sections do not form an exact partition of the mesh elements."""


class InvalidDesignError(PanelBuckError):
    """Design vector is non-finite, mis-sized, or violates its bounds."""


class SingularSystemError(PanelBuckError):
    """Global stiffness could not be factorized (insufficient constraints)."""


class EmptySystemError(SingularSystemError):
    """Boundary conditions eliminated every degree of freedom."""


class NoBucklingModeError(PanelBuckError):
    """No positive buckling eigenvalue exists for the given load."""


class EigenSolverError(PanelBuckError):
    """The eigenvalue iteration failed to converge to the requested accuracy."""


class DegenerateModeError(PanelBuckError):
    """Rayleigh quotient denominator vanished for the supplied vector."""


class StepTooLargeError(PanelBuckError):
    """Thickness perturbation would drive a section thickness to zero or below."""


class EmptyMoveSetError(PanelBuckError):
    """No section is eligible to move in the requested direction."""


class InfeasibleProblemError(PanelBuckError):
    """The buckling constraint cannot be met anywhere in the design box."""


class ParseError(PanelBuckError):
    """Model description file is malformed or semantically invalid."""
