"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class OutOfRangeError(DomainError):
    """A query exceeds the range covered by a precomputed table."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a non-integrable singularity."""


class ResolutionError(DomainError):
    """A table is too coarse to support the requested refinement."""


class InfeasibleError(DomainError):
    """No admissible parameter choice can satisfy the requested inequality."""


class ResourceError(RuntimeError):
    """A computation would exceed a configured cap; the message names the cap needed."""


class NumericError(RuntimeError):
    """A numerical routine failed to reach the requested tolerance."""
