from abc import ABC, abstractmethod
from math import inf

import numpy as np

from backend.Errors import DomainError, InvalidParameterError
from generics.Generator import Interval, REAL_LINE
from util.Logs import get_logger


class DistributionModel(ABC):
	"""
	A scenario distribution F of X: seeded sampling, density, CDF, quantile
	and closed-form moments.

	pdf/cdf/quantile default to the scipy frozen law returned by `frozen()`.
	raw_moment(k) accepts any real k and returns +inf when E(X^k) diverges.
	"""
	_variable_options = dict()
	_global_parameters = dict()

	support: Interval = REAL_LINE
	# E|X|^k is finite for k < tail_index (upper tail)
	tail_index = inf
	# E X^(-k) is finite for k < lower_index (mass near 0, positive laws only)
	lower_index = inf

	def __init__(self, **options):
		for variable in self._variable_options:
			setattr(self, variable, self._variable_options[variable]["default"])
		for name, value in options.items():
			self.validate_parameter(name, value)
			setattr(self, name, value)
		self._logger = get_logger(self.__class__.__name__)
		self.after_init(**options)

	def after_init(self, **options):
		pass

	def validate_parameter(self, param_name: str, param_value):
		if param_name not in self._variable_options:
			raise InvalidParameterError("Unknown parameter %r for distribution %s" % (param_name, self.specName()))
		validator = self._variable_options[param_name].get("validator")
		if validator is not None and not validator(param_value):
			raise InvalidParameterError("Parameter %s=%r out of range for distribution %s"
				% (param_name, param_value, self.specName()))

	def parameters(self):
		return {p: getattr(self, p) for p in self._variable_options}

	@abstractmethod
	def sample(self, n: int, rng: np.random.Generator):
		'''n i.i.d. draws from the given stream.'''
		pass

	def frozen(self):
		'''The matching scipy.stats frozen distribution.'''
		raise NotImplementedError

	def _scipy(self):
		if getattr(self, "_frozen_law", None) is None:
			self._frozen_law = self.frozen()
		return self._frozen_law

	def pdf(self, x):
		return self._scipy().pdf(x)

	def cdf(self, x):
		return self._scipy().cdf(x)

	def _check_levels(self, u):
		u = np.asarray(u, dtype=float)
		if np.any(~((u > 0) & (u < 1))):
			raise DomainError("%s: quantile levels must lie in (0, 1)" % self.spec())
		return u

	def quantile(self, u):
		q = self._scipy().ppf(self._check_levels(u))
		return q if q.ndim else float(q)

	@abstractmethod
	def raw_moment(self, k):
		'''E(X^k) for real k; +inf when divergent.'''
		pass

	def mean(self):
		return self.raw_moment(1.0)

	def var(self):
		return self.raw_moment(2.0) - self.raw_moment(1.0) ** 2

	def mgf(self, t):
		'''E exp(tX) in closed form, +inf when divergent, None when unknown.'''
		return None

	def exp_moment_finite(self, t):
		return True

	def log_moments(self):
		'''(mean, variance, skewness, excess kurtosis) of log X, or None.'''
		return None

	def inside(self, domain: Interval):
		'''True when the whole support lies in domain.'''
		return domain.contains_interval(self.support)

	@classmethod
	def specName(cls):
		return None

	def spec(self):
		params = [getattr(self, p) for p in sorted(self._variable_options,
			key=lambda p: self._variable_options[p].get("position", 0))]
		return ":".join([str(self.specName())] + ["%g" % p for p in params])

	@staticmethod
	def displayName():
		pass

	@staticmethod
	def displayDescription():
		pass

	def __repr__(self):
		return "<DistributionModel %s>" % self.spec()
