"""
Module for custom exception classes.
"""


class BasePumpMonitorError(Exception):
    """
    Base exception for pump monitor errors.
    """

    # Exit code the command line interface returns if this exception is raised
    exit_code: int = 1

    # Generic detail of the exception (That is printed to the user)
    response_detail: str = "Something went wrong"

    detail: str

    def __init__(self, detail: str):
        """
        Initialise the exception.

        :param detail: Specific detail of the exception (just like Exception would take - this will be logged
                       together with the generic `response_detail`).
        """
        super().__init__(detail)

        self.detail = detail


class UsageError(BasePumpMonitorError):
    """
    An operation was called in a way that violates its contract.
    """

    exit_code = 2
    response_detail = "Invalid usage"


class ConfigError(UsageError):
    """
    The provided configuration or command line flags are invalid.
    """

    response_detail = "Invalid configuration"


class MissingFileError(UsageError):
    """
    An input file does not exist.
    """

    response_detail = "File not found"


class StructuralError(BasePumpMonitorError):
    """
    Shapes or channel counts of tensors or models do not match.
    """

    response_detail = "Shape mismatch"


class NumericError(BasePumpMonitorError):
    """
    A non-finite value was encountered in an input, a gradient or a loss.
    """

    response_detail = "Non-finite value encountered"


class DatasetParseError(BasePumpMonitorError):
    """
    A dataset file line could not be parsed.
    """

    response_detail = "Malformed dataset file"


class DatasetSchemaError(BasePumpMonitorError):
    """
    A dataset file line was parsed but does not follow the sample schema.
    """

    response_detail = "Dataset file does not follow the sample schema"


class ModelFileError(BasePumpMonitorError):
    """
    A model or profile file could not be read.
    """

    response_detail = "Malformed model file"


class UndefinedMetricError(BasePumpMonitorError):
    """
    A metric is undefined for the given predictions and labels.
    """

    response_detail = "Metric is undefined"


class FoldError(BasePumpMonitorError):
    """
    A cross-validation fold failed.
    """

    response_detail = "Cross-validation fold failed"
