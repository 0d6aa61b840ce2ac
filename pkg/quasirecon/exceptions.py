class QuasireconError(Exception):
    pass


class InvalidDimensionError(QuasireconError):
    pass


class InvalidParameterError(QuasireconError):
    pass


class InvalidStateError(QuasireconError):
    pass


class TruncationError(QuasireconError):
    pass


class NonHermitianError(QuasireconError):
    pass


class TraceDriftError(QuasireconError):
    pass


class NoCrossingError(QuasireconError):
    def __init__(self, message, horizon=None):
        super(NoCrossingError, self).__init__(message)
        self.horizon = horizon


class GridPointError(QuasireconError):
    def __init__(self, message, alpha=None, row=None, column=None):
        super(GridPointError, self).__init__(message)
        self.alpha = alpha
        self.row = row
        self.column = column


class ConfigError(QuasireconError):
    pass


class OutputError(QuasireconError):
    pass


class TruncationWarning(UserWarning):
    pass
