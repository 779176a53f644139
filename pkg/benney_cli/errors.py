class BenneyError(Exception):
    """Base class for every error raised by benney-cli."""

    exit_code = 1


class ParameterDomainError(BenneyError, ValueError):
    """Parameters fall outside the domain where the requested object exists."""

    exit_code = 1


class NumericalError(BenneyError):
    """A numerical computation failed or could not reach its tolerance."""

    exit_code = 2


class ResolutionError(NumericalError):
    """A residual diagnostic exceeds its tolerance at the chosen grid size."""


class SolvabilityError(NumericalError):
    """The right-hand side of a singular solve has a component in the kernel."""


class EigensolverError(NumericalError):
    """LAPACK did not converge."""


class DegeneracyError(NumericalError):
    """<L^-1 phi, phi> vanishes numerically, so the generalized kernel degenerates."""


class InconclusiveError(NumericalError):
    """The zero cluster is not separated from the rest of the spectrum."""
