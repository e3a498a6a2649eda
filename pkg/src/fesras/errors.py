"""Exception types shared across the toolchain."""


class FesrasError(Exception):
    """Base class for all toolchain errors."""


class MalformedStoryError(FesrasError):
    """Raised when a user story is missing its role or feature marker."""


class MissingReasonError(MalformedStoryError):
    """Raised in strict mode when a story has no "so that" clause."""


class EmptyPropertySetError(FesrasError):
    """Raised when a keyword would be mapped to no security property."""


class WeakenedCanonicalEntryError(FesrasError):
    """Raised when an update would remove a property from a built-in keyword."""


class MismatchedStoryIdError(FesrasError):
    """Raised when specifications or link results reference a different story."""


class KeyMismatchError(FesrasError):
    """Raised when a submission covers a story absent from the answer key."""


class EmptySampleError(FesrasError):
    """Raised when a statistical sample contains no values."""


class DegenerateSampleError(FesrasError):
    """Raised when an effect size is requested for a sample with n < 2."""


class ZeroPooledVarianceError(FesrasError):
    """Raised when the pooled standard deviation of two samples is zero."""


class InvalidStateError(FesrasError):
    """Raised on a session operation that is illegal in the current state."""


class ValidationFailedError(FesrasError):
    """Raised when a submitted report fails validation.

    Carries the validation findings so callers can surface them.
    """

    def __init__(self, findings):
        self.findings = list(findings)
        super().__init__(f"report failed validation with {len(self.findings)} finding(s)")
