"""Exception and warning types shared across the package."""


class DegenerateBundleError(ValueError):
    """Raised when gamma = delta = 0, so eigenvectors (and the QFI) are undefined."""


class DomainError(ValueError):
    """Raised when an evaluation point (or a finite-difference stencil) leaves the model domain."""


class DeterministicOutcomeError(ArithmeticError):
    """The measurement outcome has probability 0 or 1; Fisher information is undefined there."""


class ZeroInformationError(ValueError):
    """Raised by expansions that need a nonzero QFI or nonzero derivatives."""


class NonIdentifiableError(ValueError):
    """The outcome probability is not strictly monotone in lambda on the search interval."""


class ConfigError(ValueError):
    """Malformed model configuration or scan request."""


class ModelValidationWarning(UserWarning):
    pass


class OutOfRangeWarning(UserWarning):
    """Empirical frequency lies outside the range of q(lambda); the estimate was clipped."""


class DegeneratePosteriorWarning(UserWarning):
    pass
