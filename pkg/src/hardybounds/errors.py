"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`HardyError`,
so callers (and the CLI) can catch one type and map it to an exit code.
"""


class HardyError(Exception):
    """Base class for all package errors."""


class InvalidParameters(HardyError, ValueError):
    pass


class InvalidDomain(InvalidParameters):
    pass


class PointOutsideDomain(HardyError, ValueError):
    pass


class PointInsideDomain(HardyError, ValueError):
    pass


class UnboundedDomainNoRegion(HardyError, ValueError):
    pass


class OutOfRange(HardyError, ValueError):
    pass


class PreconditionViolated(HardyError, ValueError):
    """A bound hypothesis fails; ``lhs``/``rhs`` carry both sides."""

    def __init__(self, message, lhs=None, rhs=None):
        super().__init__(message)
        self.lhs = lhs
        self.rhs = rhs


class NoApplicableBound(HardyError):
    pass


class DomainViolation(HardyError, ValueError):
    pass


class ZeroArgument(HardyError, ValueError):
    pass


class BranchCutHit(HardyError, ValueError):
    pass


class DegenerateDerivative(HardyError, ValueError):
    pass


class MeshFailure(HardyError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class QuadraturePointOutsideDomain(HardyError):
    pass


class SupportNotContained(HardyError):
    pass


class NoConvergence(HardyError):
    def __init__(self, message, iterations=None, residual=None):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class SpecParseError(HardyError, ValueError):
    pass
