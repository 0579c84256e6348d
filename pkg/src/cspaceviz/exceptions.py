"""Exception types shared across the package.

Input problems derive from :class:`InputError` (itself a ``ValueError``) so
callers that only care about "bad arguments" can catch ``ValueError``.
"""


class CSpaceVizError(Exception):
    """Base class for all package errors."""


class InputError(CSpaceVizError, ValueError):
    """Rejected input: wrong shape, out-of-range angle, bad fraction..."""

    code = "invalid_input"


class ConfigurationError(InputError):
    """A render or experiment configuration that cannot be honoured."""

    code = "invalid_configuration"


class LengthMismatchError(InputError):
    code = "length_mismatch"


class TooFewSamplesError(InputError):
    code = "too_few_samples"


class ZeroVarianceError(InputError):
    code = "zero_variance"


class ExperimentError(CSpaceVizError):
    """An experiment step failed (e.g. no colliding state could be found)."""

    code = "experiment_failed"


class SamplingBudgetExceeded(ExperimentError):
    code = "rejection_budget_exceeded"
