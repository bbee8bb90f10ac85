class BBMLabError(Exception):
    pass


class ParameterError(BBMLabError, ValueError):
    """A parameter lies outside the range an operation accepts."""


class ResolutionError(BBMLabError):
    pass


class UnknownFamilyError(BBMLabError, KeyError):
    pass


class ConsistencyError(BBMLabError):
    """Two computation paths that must agree did not."""


class SubcriticalRegimeError(BBMLabError):
    pass


class NonContractionError(BBMLabError):
    def __init__(self, message: str, iterations: int, residual: float):
        super().__init__(message)
        self.iterations = iterations
        self.residual = residual


class ForcingMismatchError(BBMLabError):
    pass


class GridMismatchError(BBMLabError):
    pass


class TreeLimitError(BBMLabError):
    pass


class TruncationError(BBMLabError):
    pass


class ParameterSearchError(BBMLabError):
    def __init__(self, message: str, binding: str):
        super().__init__(message)
        self.binding = binding


class InvalidExponentError(BBMLabError, ValueError):
    pass


class DegenerateGridError(BBMLabError):
    pass


class InsufficientSamplesError(BBMLabError):
    pass


class ConfigError(BBMLabError):
    def __init__(self, message: str, keys: list[str] | None = None):
        super().__init__(message)
        self.keys = keys or []
