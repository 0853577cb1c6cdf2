"""Exception hierarchy shared by the toolkit."""


class AnnealingError(Exception):
    """Base class for every error raised by the toolkit."""


class ConfigurationError(AnnealingError, ValueError):
    """A parameter lies outside the range its owning module accepts."""


class EvaluationError(AnnealingError, ArithmeticError):
    """An objective returned a non-finite energy."""


class CampaignError(AnnealingError):
    """A campaign failed after its status was persisted."""


class ReportError(AnnealingError):
    """Nothing to report, or a manifest could not be read."""
