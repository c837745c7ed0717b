"""
Exception definitions for motif-exposure package
"""


EXIT_VALIDATION = 2
EXIT_POSITIVITY = 3
EXIT_INTERNAL = 4


class MotifExposureException(Exception):
    """
    Base class for all exceptions raised by the toolkit.
    """

    def __init__(self,
                 message: str = None,
                 exit_code: int = EXIT_INTERNAL,
                 ):
        super().__init__(message)

        self.message = message
        self.exit_code = exit_code


class ConfigurationParsingException(MotifExposureException):
    """
    Exception raised when there is an error parsing the configuration.
    """
    def __init__(self,
                 message: str = 'Error parsing configuration.',
                 exit_code: int = EXIT_VALIDATION,
                 ):
        super().__init__(message, exit_code)


class GraphParsingException(MotifExposureException):
    """
    Exception raised when an edge list or attribute table cannot be parsed.
    """
    def __init__(self,
                 message: str = 'Error parsing graph input.',
                 exit_code: int = EXIT_VALIDATION,
                 ):
        super().__init__(message, exit_code)


class InputValidationException(MotifExposureException):
    """
    Exception raised when input files do not align with each other.
    """
    def __init__(self,
                 message: str = 'Input files do not align.',
                 exit_code: int = EXIT_VALIDATION,
                 ):
        super().__init__(message, exit_code)


class ArgumentException(MotifExposureException, ValueError):
    """
    Exception raised when an operation receives an argument outside its domain.
    """
    def __init__(self,
                 message: str = 'Invalid argument.',
                 exit_code: int = EXIT_VALIDATION,
                 ):
        super().__init__(message, exit_code)


class NodeIndexException(MotifExposureException, IndexError):
    """
    Exception raised when a node index is outside the graph.
    """
    def __init__(self,
                 message: str = 'Node index out of range.',
                 exit_code: int = EXIT_VALIDATION,
                 ):
        super().__init__(message, exit_code)


class SchemaException(MotifExposureException):
    """
    Exception raised when a motif schema is invalid for the requested use.
    """
    def __init__(self,
                 message: str = 'Invalid motif schema.',
                 exit_code: int = EXIT_VALIDATION,
                 ):
        super().__init__(message, exit_code)


class ArtifactNotFoundException(MotifExposureException):
    """
    Exception raised when an expected run artifact is missing.
    """
    def __init__(self,
                 message: str = 'Artifact not found.',
                 exit_code: int = EXIT_VALIDATION,
                 ):
        super().__init__(message, exit_code)


class EstimationException(MotifExposureException):
    """
    Exception raised when an estimator cannot be evaluated.
    """
    def __init__(self,
                 message: str = 'Estimation failed.',
                 exit_code: int = EXIT_INTERNAL,
                 ):
        super().__init__(message, exit_code)


class BootstrapException(EstimationException):
    """
    Exception raised when too many bootstrap resamples fail.
    """
    def __init__(self,
                 message: str = 'Too many bootstrap resamples failed.',
                 exit_code: int = EXIT_INTERNAL,
                 ):
        super().__init__(message, exit_code)


class FitException(MotifExposureException):
    """
    Exception raised when fitting a tree or a metric fails.
    """
    def __init__(self,
                 message: str = 'Model fitting failed.',
                 exit_code: int = EXIT_INTERNAL,
                 ):
        super().__init__(message, exit_code)


class InferenceException(MotifExposureException):
    """
    Exception raised when randomization inference cannot be carried out.
    """
    def __init__(self,
                 message: str = 'Randomization inference failed.',
                 exit_code: int = EXIT_INTERNAL,
                 ):
        super().__init__(message, exit_code)


class PartitionException(MotifExposureException):
    """
    Exception raised when graph partitioning breaks one of its guarantees.
    """
    def __init__(self,
                 message: str = 'Graph partitioning failed.',
                 exit_code: int = EXIT_INTERNAL,
                 ):
        super().__init__(message, exit_code)


class PositivityException(MotifExposureException):
    """
    Exception raised when exposure conditions fail the positivity requirement.
    """
    def __init__(self,
                 message: str = 'Positivity requirement not met.',
                 exit_code: int = EXIT_POSITIVITY,
                 ):
        super().__init__(message, exit_code)


class SelectionException(PositivityException):
    """
    Exception raised when no K in a sweep passes positivity.
    """
    def __init__(self,
                 message: str = 'No sweep row passes the positivity requirement.',
                 exit_code: int = EXIT_POSITIVITY,
                 ):
        super().__init__(message, exit_code)
