"""Exception types shared across the package."""


class BranchlabError(Exception):
    """Base class for all branchlab errors."""


class DomainError(BranchlabError):
    """An outcome label, event, or operand falls outside the relevant partition."""


class SingularMapError(BranchlabError):
    """A state map produced a zero-norm image that cannot be renormalized."""


class HereticNotApplicable(BranchlabError):
    """The transformed-state rule was invoked on an extremal measurement."""


class SupportViolation(BranchlabError):
    """A transformed state weights a different set of outcomes than the original."""


class InvalidCredence(BranchlabError):
    """A credence vector contains a negative entry."""


class ImpossibleEvidence(BranchlabError):
    """Every hypothesis under consideration assigns the evidence likelihood zero."""


class ConfigError(BranchlabError):
    """A scenario document or CLI invocation failed validation."""
