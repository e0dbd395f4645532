class JCThermoError(Exception):
    pass


class ConfigError(JCThermoError):

    def __init__(self, message, field=None, line=None, column=None):
        self.field = field
        self.line = line
        self.column = column
        location = []
        if field is not None:
            location.append('field %s' % field)
        if line is not None:
            location.append('line %s column %s' % (line, column))
        if location:
            message = '%s (%s)' % (message, ', '.join(location))
        super(ConfigError, self).__init__(message)


class SolverError(JCThermoError):
    pass


class ErgodicityError(SolverError):
    pass


class StabilityError(SolverError):
    pass


class TruncationError(SolverError):
    pass


class LevelError(JCThermoError, ValueError):
    pass


class TransitionError(JCThermoError, ValueError):
    pass


class TemperatureError(JCThermoError, ValueError):
    pass


class BlockIndexError(JCThermoError, IndexError):
    pass
