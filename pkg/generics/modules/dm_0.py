from math import exp, inf, isfinite, log, sqrt

import numpy as np
from scipy import stats
from scipy.special import digamma, gammaln, polygamma

from backend.Errors import InvalidParameterError
from generics.Distribution import DistributionModel
from generics.Generator import Interval, POSITIVE_HALF_LINE


def _positive(v):
	return isfinite(v) and v > 0


class LogNormal(DistributionModel):
	"""X = exp(Z), Z ~ N(mu, sigma2). Parameterized by the log-variance, not the log-sd."""
	support = POSITIVE_HALF_LINE
	_variable_options = {
		"mu": {"default": 0.0, "validator": isfinite, "displayed_name": "mu", "position": 0, "required": True},
		"sigma2": {"default": 1.0, "validator": _positive, "displayed_name": "sigma^2", "position": 1, "required": True},
	}

	def after_init(self, **options):
		self.mu, self.sigma2 = float(self.mu), float(self.sigma2)
		self.sigma = sqrt(self.sigma2)

	def sample(self, n, rng):
		return np.exp(rng.normal(self.mu, self.sigma, int(n)))

	def frozen(self):
		return stats.lognorm(s=self.sigma, scale=exp(self.mu))

	def raw_moment(self, k):
		return float(np.exp(k * self.mu + 0.5 * k * k * self.sigma2))

	def mgf(self, t):
		if t == 0:
			return 1.0
		if t > 0:
			return inf
		return None

	def exp_moment_finite(self, t):
		return t <= 0

	def log_moments(self):
		return (self.mu, self.sigma2, 0.0, 0.0)

	@classmethod
	def specName(cls):
		return "lognormal"

	@staticmethod
	def displayName():
		return "LogNormal"

	@staticmethod
	def displayDescription():
		return "LogNormal(mu, sigma^2): log X is normal with mean mu and variance sigma^2."


class Gamma(DistributionModel):
	"""Gamma(shape a, rate b); mean a/b."""
	support = POSITIVE_HALF_LINE
	_variable_options = {
		"shape": {"default": 1.0, "validator": _positive, "displayed_name": "shape a", "position": 0, "required": True},
		"rate": {"default": 1.0, "validator": _positive, "displayed_name": "rate b", "position": 1, "required": True},
	}

	def after_init(self, **options):
		self.shape, self.rate = float(self.shape), float(self.rate)
		self.lower_index = self.shape

	def sample(self, n, rng):
		# numpy's gamma sampler is the Marsaglia-Tsang rejection scheme
		return rng.gamma(self.shape, 1.0 / self.rate, int(n))

	def frozen(self):
		return stats.gamma(self.shape, scale=1.0 / self.rate)

	def raw_moment(self, k):
		if self.shape + k <= 0:
			return inf
		return float(np.exp(gammaln(self.shape + k) - gammaln(self.shape) - k * log(self.rate)))

	def mgf(self, t):
		if t >= self.rate:
			return inf
		return (self.rate / (self.rate - t)) ** self.shape

	def exp_moment_finite(self, t):
		return t < self.rate

	def log_moments(self):
		a = self.shape
		trigamma = float(polygamma(1, a))
		return (
			float(digamma(a)) - log(self.rate),
			trigamma,
			float(polygamma(2, a)) / trigamma ** 1.5,
			float(polygamma(3, a)) / trigamma ** 2,
		)

	@classmethod
	def specName(cls):
		return "gamma"

	@staticmethod
	def displayName():
		return "Gamma"

	@staticmethod
	def displayDescription():
		return "Gamma(a, b) in the shape-rate convention: density b^a x^(a-1) e^(-bx) / Gamma(a)."


class Uniform(DistributionModel):
	_variable_options = {
		"a": {"default": 0.0, "validator": isfinite, "displayed_name": "lower end a", "position": 0, "required": True},
		"b": {"default": 1.0, "validator": isfinite, "displayed_name": "upper end b", "position": 1, "required": True},
	}

	def after_init(self, **options):
		self.a, self.b = float(self.a), float(self.b)
		if not self.a < self.b:
			raise InvalidParameterError("Uniform needs a < b, got a=%g, b=%g" % (self.a, self.b))
		self.support = Interval(self.a, self.b)
		if self.a > 0:
			self.lower_index = inf
		elif self.a == 0:
			self.lower_index = 1.0
		else:
			self.lower_index = 0.0

	def sample(self, n, rng):
		return self.a + (self.b - self.a) * rng.random(int(n))

	def frozen(self):
		return stats.uniform(loc=self.a, scale=self.b - self.a)

	def raw_moment(self, k):
		a, b = self.a, self.b
		if k == 0:
			return 1.0
		if k < 0 and a <= 0:
			# x^k is not integrable at 0 unless a = 0 and k > -1
			if a == 0 and k > -1:
				return b ** k / (k + 1)
			return inf
		if k == -1:
			return (log(b) - log(a)) / (b - a)
		if a < 0 and not float(k).is_integer():
			return None
		return (b ** (k + 1) - a ** (k + 1)) / ((k + 1) * (b - a))

	def mgf(self, t):
		if t == 0:
			return 1.0
		a, b = self.a, self.b
		# e^(ta) (e^(t(b-a)) - 1) / (t(b-a)), expm1 keeps small t accurate
		return float(np.exp(t * a) * np.expm1(t * (b - a)) / (t * (b - a)))

	@classmethod
	def specName(cls):
		return "uniform"

	@staticmethod
	def displayName():
		return "Uniform"

	@staticmethod
	def displayDescription():
		return "Uniform(a, b) on the closed interval [a, b]."


class Pareto(DistributionModel):
	"""
	Pareto(alpha, x_m) with survival (x_m/x)^alpha for x >= x_m.
	The scale is not part of the usual scenario notation; it defaults to 1.
	"""
	_variable_options = {
		"alpha": {"default": 1.0, "validator": _positive, "displayed_name": "tail index alpha", "position": 0, "required": True},
		"scale": {"default": 1.0, "validator": _positive, "displayed_name": "scale x_m", "position": 1},
	}

	def after_init(self, **options):
		self.alpha, self.scale = float(self.alpha), float(self.scale)
		self.tail_index = self.alpha
		self.support = Interval(self.scale, inf, False, True)

	def sample(self, n, rng):
		# inverse CDF; 1 - U lies in (0, 1]
		u = 1.0 - rng.random(int(n))
		return self.scale * u ** (-1.0 / self.alpha)

	def frozen(self):
		return stats.pareto(self.alpha, scale=self.scale)

	def raw_moment(self, k):
		if k >= self.alpha:
			return inf
		return self.alpha * self.scale ** k / (self.alpha - k)

	def mgf(self, t):
		if t == 0:
			return 1.0
		if t > 0:
			return inf
		return None

	def exp_moment_finite(self, t):
		return t <= 0

	def log_moments(self):
		# log(X / x_m) is exponential with rate alpha
		return (log(self.scale) + 1.0 / self.alpha, 1.0 / self.alpha ** 2, 2.0, 6.0)

	@classmethod
	def specName(cls):
		return "pareto"

	@staticmethod
	def displayName():
		return "Pareto"

	@staticmethod
	def displayDescription():
		return "Pareto(alpha, x_m): P(X > x) = (x_m/x)^alpha for x >= x_m; x_m defaults to 1."


class PointMass(DistributionModel):
	"""Degenerate law at c."""
	support = None
	_variable_options = {
		"c": {"default": 1.0, "validator": isfinite, "displayed_name": "location c", "position": 0, "required": True},
	}

	def after_init(self, **options):
		self.c = float(self.c)
		self.lower_index = inf if self.c != 0 else 0.0

	def sample(self, n, rng):
		return np.full(int(n), self.c)

	def pdf(self, x):
		raise NotImplementedError("A point mass has no density")

	def cdf(self, x):
		return np.where(np.asarray(x, dtype=float) >= self.c, 1.0, 0.0)

	def quantile(self, u):
		u = self._check_levels(u)
		q = np.full(u.shape, self.c)
		return q if q.ndim else float(q)

	def raw_moment(self, k):
		if self.c == 0 and k < 0:
			return inf
		if self.c < 0 and not float(k).is_integer():
			return None
		return self.c ** k

	def mean(self):
		return self.c

	def var(self):
		return 0.0

	def mgf(self, t):
		return float(np.exp(t * self.c))

	def log_moments(self):
		if self.c <= 0:
			return None
		return (log(self.c), 0.0, np.nan, np.nan)

	def inside(self, domain):
		return bool(domain.contains(self.c))

	@classmethod
	def specName(cls):
		return "point"

	@staticmethod
	def displayName():
		return "Point mass"

	@staticmethod
	def displayDescription():
		return "All probability at a single value c."

