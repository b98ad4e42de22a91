"""
Exception hierarchy for PyRegMean.

Every error carries the process exit code the CLI uses for it:
2 for configuration problems, 3 for numeric failures.
"""


class RegularMeanError(Exception):
	exit_code = 1


class ConfigurationError(RegularMeanError, ValueError):
	exit_code = 2


class InvalidParameterError(ConfigurationError):
	pass


class DomainError(ConfigurationError):
	pass


class OutOfRangeError(DomainError):
	pass


class PreconditionError(ConfigurationError):
	pass


class OutputError(ConfigurationError):
	def __init__(self, path, reason):
		self.path = str(path)
		super().__init__("%s: %s" % (self.path, reason))


class NumericError(RegularMeanError, ArithmeticError):
	exit_code = 3


class ConvergenceError(NumericError):
	pass


class DivergenceError(NumericError):
	def __init__(self, message, order=None):
		self.order = order
		if order is not None:
			message = "%s (moment of order %s)" % (message, order)
		super().__init__(message)


class DegenerateError(NumericError):
	pass


class DegenerateSlopeError(NumericError):
	pass


class SingularDerivativeError(NumericError):
	pass


class OverflowFailure(NumericError):
	pass
