from math import inf, isfinite

import numpy as np

from backend.Errors import DomainError
from generics.Generator import Generator, Interval, POSITIVE_HALF_LINE, REAL_LINE, central_from_raw


def _positive(g, x):
	"""x as a float array; the open edge 0 and anything below it are outside the input range."""
	values = np.asarray(x, dtype=float)
	outside = np.ravel(values)[np.ravel(values) <= 0]
	if outside.size:
		raise DomainError("%s: value %r outside input range %s" % (g.spec(), float(outside[0]), g.domain))
	return values


class Identity(Generator):
	_raw_power = 1.0

	def forward(self, x):
		return np.asarray(x, dtype=float) * 1.0

	def inverse(self, y):
		return np.asarray(y, dtype=float) * 1.0

	def derivative(self, x):
		return np.ones_like(np.asarray(x, dtype=float))

	@classmethod
	def specName(cls):
		return "identity"

	@staticmethod
	def displayName():
		return "Arithmetic"

	@staticmethod
	def displayDescription():
		return "g(x) = x on the real line. Gives the arithmetic mean and E(X)."


class Log(Generator):
	domain = POSITIVE_HALF_LINE
	image = REAL_LINE
	test_box = Interval(0.1, 10.0)
	_upper_growth = 0.0
	_lower_growth = 0.0
	_stable_variant = "log"

	def forward(self, x):
		return np.log(_positive(self, x))

	def inverse(self, y):
		return np.exp(y)

	def derivative(self, x):
		return 1.0 / _positive(self, x)

	def closed_form_expectation(self, dist):
		moments = dist.log_moments()
		return None if moments is None else moments[0]

	def closed_form_moments(self, dist, order=4):
		moments = dist.log_moments()
		if moments is None:
			return None
		return tuple(m if k < order else np.nan for k, m in enumerate(moments))

	@classmethod
	def specName(cls):
		return "log"

	@staticmethod
	def displayName():
		return "Geometric"

	@staticmethod
	def displayDescription():
		return "g(x) = log x for x > 0. Gives the geometric mean and exp{E(log X)}."


class Reciprocal(Generator):
	domain = POSITIVE_HALF_LINE
	image = POSITIVE_HALF_LINE
	monotone_direction = "decreasing"
	test_box = Interval(0.1, 10.0)
	_upper_growth = 0.0
	_lower_growth = 1.0
	_raw_power = -1.0

	def forward(self, x):
		return 1.0 / _positive(self, x)

	def inverse(self, y):
		return 1.0 / np.asarray(y, dtype=float)

	def derivative(self, x):
		return -1.0 / np.square(_positive(self, x))

	@classmethod
	def specName(cls):
		return "reciprocal"

	@staticmethod
	def displayName():
		return "Harmonic"

	@staticmethod
	def displayDescription():
		return "g(x) = 1/x for x > 0 (decreasing). Gives the harmonic mean and 1/E(1/X)."


class Power(Generator):
	domain = POSITIVE_HALF_LINE
	image = POSITIVE_HALF_LINE
	test_box = Interval(0.1, 10.0)
	_lower_growth = 0.0
	_stable_variant = "power"
	p = 1.0
	_variable_options = {
		"p": {"default": 1.0, "validator": lambda p: isfinite(p) and p > 0,
			"displayed_name": "Exponent p", "position": 0, "required": True},
	}

	def after_init(self, **options):
		self.p = float(self.p)
		self._raw_power = self.p
		self._upper_growth = self.p

	def forward(self, x):
		return np.power(_positive(self, x), self.p)

	def inverse(self, y):
		return np.power(np.asarray(y, dtype=float), 1.0 / self.p)

	def derivative(self, x):
		return self.p * np.power(_positive(self, x), self.p - 1.0)

	@classmethod
	def specName(cls):
		return "power"

	@staticmethod
	def displayName():
		return "Power"

	@staticmethod
	def displayDescription():
		return "g(x) = x^p for x > 0, p in (0, inf). Gives the power mean and {E(X^p)}^(1/p)."


class Exp(Generator):
	image = POSITIVE_HALF_LINE
	_upper_growth = inf
	_stable_variant = "exp"

	def forward(self, x):
		return np.exp(x)

	def inverse(self, y):
		return np.log(y)

	def derivative(self, x):
		return np.exp(x)

	def closed_form_expectation(self, dist):
		return dist.mgf(1.0)

	def closed_form_moments(self, dist, order=4):
		raw = [dist.mgf(float(k)) for k in range(1, order + 1)]
		if any(r is None for r in raw):
			return None
		return central_from_raw(raw)

	@classmethod
	def specName(cls):
		return "exp"

	@staticmethod
	def displayName():
		return "Exponential"

	@staticmethod
	def displayDescription():
		return "g(x) = exp(x) on the real line. Gives log{mean of exp(x_i)} and log E{exp(X)}."
