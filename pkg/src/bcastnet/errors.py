"""Exception and warning types shared across the package."""


class BcastNetError(Exception):
    """Base class for every error raised by this package."""


class DomainError(BcastNetError, ValueError):
    """Argument lies outside the mathematical domain of a kernel function."""


class ParameterError(BcastNetError, ValueError):
    """Scenario parameters violate their invariants."""


class RegimeError(BcastNetError, ValueError):
    """Operation invoked with parameters inconsistent with the requested regime."""


class NoBracketError(BcastNetError, RuntimeError):
    """A root search failed to bracket a sign change."""


class BranchPointError(BcastNetError, RuntimeError):
    """Lambert-W argument fell below the real branch point -1/e."""


class InfeasibleError(BcastNetError, RuntimeError):
    """No transmitter density satisfies the requested outage constraint."""


class InadmissiblePerturbationError(BcastNetError, ValueError):
    """Profile perturbation breaks admissibility at the requested step size."""


class TruncationWarning(UserWarning):
    """Simulation disk radius fails the interference truncation budget."""
