"""
Kolmogorov expected values E_g(X) = g^{-1}(E g(X)), the asymptotic variance
of the universal central limit theorem and the Edgeworth expansion of the
standardized regular mean.

Moments of g(X) come from closed forms where the generator and the
distribution supply them, otherwise from adaptive quadrature of the
quantile-transformed integral over (0, 1), otherwise (on request) from a
seeded Monte Carlo sample.
"""
import warnings
from dataclasses import asdict, dataclass
from math import inf, isfinite, pi, sqrt

import numpy as np
from scipy import integrate, stats
from scipy.integrate import IntegrationWarning
from scipy.special import erfc

from Constants import (
	EDGEWORTH_THIRD_TERM, MONTE_CARLO_MOMENT_SAMPLES, QUAD_ACCEPT_REL, QUAD_EPSABS, QUAD_EPSREL, QUAD_LIMIT,
)
from backend.Errors import (
	ConfigurationError, ConvergenceError, DegenerateError, DivergenceError, DomainError,
	PreconditionError, SingularDerivativeError,
)
from generics.Distribution import DistributionModel
from generics.Generator import Generator
from util.Logs import get_logger

_logger = get_logger("Asymptotics")

METHODS = ("auto", "closed_form", "quadrature", "monte_carlo")
_SQRT2 = sqrt(2.0)
_INV_SQRT_2PI = 1.0 / sqrt(2.0 * pi)


@dataclass(frozen=True)
class GMoments:
	"""Mean, variance, skewness and excess kurtosis of g(X); nan marks an undefined or uncomputed entry."""
	mean_g: float
	var_g: float
	skew_g: float
	exkurt_g: float
	method: str

	@property
	def skew_defined(self):
		return isfinite(self.skew_g) and isfinite(self.exkurt_g)

	def to_dict(self):
		return {k: (None if isinstance(v, float) and not isfinite(v) else v) for k, v in asdict(self).items()}


@dataclass(frozen=True)
class AsymptoticSpec:
	eg: float
	gprime_at_eg: float
	asym_var: float
	mean_g: float
	var_g: float

	def to_dict(self):
		return asdict(self)


def _check_method(method):
	if method not in METHODS:
		raise ConfigurationError("Unknown moment method %r; choose from %s" % (method, ", ".join(METHODS)))


def _check_compatible(g: Generator, dist: DistributionModel):
	if not dist.inside(g.domain):
		raise DomainError("Support of %s is not inside the input range %s of %s" % (dist.spec(), g.domain, g.spec()))


def moment_is_finite(g: Generator, dist: DistributionModel, order):
	"""
	Tail check for E|g(X)|^order: compares the growth of |g| at the ends of
	the support with the tail indices of the distribution.
	Returns (finite, reason).
	"""
	upper = g._upper_growth
	if upper == inf:
		if not dist.exp_moment_finite(order):
			return False, "E exp(%gX) diverges under %s" % (order, dist.spec())
	elif upper > 0 and order * upper >= dist.tail_index:
		return False, "|g(x)|^%g grows like x^%g, tail index of %s is %g" % (order, order * upper, dist.spec(), dist.tail_index)
	lower = g._lower_growth
	if lower > 0 and order * lower >= dist.lower_index:
		return False, "|g(x)|^%g blows up like x^-%g near 0 under %s" % (order, order * lower, dist.spec())
	return True, None


def _require_finite(g, dist, order):
	finite, reason = moment_is_finite(g, dist, order)
	if not finite:
		raise DivergenceError("%s under %s: %s" % (g.spec(), dist.spec(), reason), order=order)


def _quantile_integral(func, dist, epsabs, label):
	"""Integral of func(Q(u)) over (0, 1), split at the median."""
	total = 0.0
	with warnings.catch_warnings():
		warnings.simplefilter("ignore", IntegrationWarning)
		for lo, hi in ((0.0, 0.5), (0.5, 1.0)):
			result = integrate.quad(lambda u: func(dist.quantile(u)), lo, hi,
				epsabs=epsabs, epsrel=QUAD_EPSREL, limit=QUAD_LIMIT, full_output=1)
			value, abserr = result[0], result[1]
			if not isfinite(value):
				raise ConvergenceError("Quadrature of %s is not finite on [%g, %g]" % (label, lo, hi))
			# a fourth element is the QUADPACK warning message
			if len(result) > 3:
				if not abserr <= max(epsabs, QUAD_ACCEPT_REL * abs(value)):
					raise ConvergenceError("Quadrature of %s did not converge on [%g, %g]: %s"
						% (label, lo, hi, result[3]))
				_logger.debug("%s on [%g, %g]: kept flagged result, error estimate %g", label, lo, hi, abserr)
			total += value
	return total


def _scales(g, dist):
	"""Location and spread of g(X) from its quartiles; sets the absolute quadrature tolerance."""
	q1, q2, q3 = [float(g.forward(dist.quantile(u))) for u in (0.25, 0.5, 0.75)]
	location = abs(q2) if q2 != 0 else 1.0
	spread = abs(q3 - q1)
	return location, (spread if spread > 0 else 1.0)


def _quadrature_moments(g, dist, order):
	label = "%s under %s" % (g.spec(), dist.spec())
	location, spread = _scales(g, dist)
	m1 = _quantile_integral(lambda x: float(g.forward(x)), dist, QUAD_EPSABS * location, label)
	central = [np.nan] * 5
	for k in range(2, order + 1):
		central[k] = _quantile_integral(lambda x, k=k: (float(g.forward(x)) - m1) ** k,
			dist, QUAD_EPSABS * spread ** k, label)
	return _from_central(m1, central, order, "quadrature")


def _from_central(m1, central, order, method):
	var = central[2] if order >= 2 else np.nan
	if order >= 2 and var <= 0:
		return GMoments(m1, 0.0, np.nan, np.nan, method)
	skew = central[3] / var ** 1.5 if order >= 3 else np.nan
	exkurt = central[4] / var ** 2 - 3.0 if order >= 4 else np.nan
	return GMoments(float(m1), float(var), float(skew), float(exkurt), method)


def _monte_carlo_moments(g, dist, order, seed):
	draws = g.forward(dist.sample(MONTE_CARLO_MOMENT_SAMPLES, np.random.default_rng(seed)))
	m1 = float(np.mean(draws))
	var = float(np.var(draws)) if order >= 2 else np.nan
	if order >= 2 and var == 0:
		return GMoments(m1, 0.0, np.nan, np.nan, "monte_carlo")
	skew = float(stats.skew(draws)) if order >= 3 else np.nan
	exkurt = float(stats.kurtosis(draws)) if order >= 4 else np.nan
	return GMoments(m1, var, skew, exkurt, "monte_carlo")


def expected_transform(g: Generator, dist: DistributionModel, method="auto", seed=0):
	"""E{g(X)}."""
	_check_method(method)
	_check_compatible(g, dist)
	_require_finite(g, dist, 1)
	if method in ("auto", "closed_form"):
		closed = g.closed_form_expectation(dist)
		if closed is not None:
			if not isfinite(closed):
				raise DivergenceError("E g(X) diverges for %s under %s" % (g.spec(), dist.spec()), order=1)
			return float(closed)
		if method == "closed_form":
			raise ConfigurationError("No closed form for E g(X) with %s under %s" % (g.spec(), dist.spec()))
	if method == "monte_carlo":
		return _monte_carlo_moments(g, dist, 1, seed).mean_g
	location, _ = _scales(g, dist)
	return _quantile_integral(lambda x: float(g.forward(x)), dist, QUAD_EPSABS * location,
		"%s under %s" % (g.spec(), dist.spec()))


def _inverse_of_mean(g, mean_g):
	if not g.image.contains(mean_g):
		raise DomainError("E g(X) = %g lies outside the image %s of %s" % (mean_g, g.image, g.spec()))
	return float(g.inverse(mean_g))


def kolmogorov_expectation(g: Generator, dist: DistributionModel, method="auto", seed=0):
	"""E_g(X) = g^{-1}(E g(X)), the population value of the regular mean."""
	return _inverse_of_mean(g, expected_transform(g, dist, method, seed))


def g_moments(g: Generator, dist: DistributionModel, method="auto", order=4, seed=0):
	"""
	Moments of g(X) up to `order` (2 to 4); entries above it are nan.
	Raises DivergenceError naming the first divergent order.
	"""
	_check_method(method)
	if order not in (2, 3, 4):
		raise PreconditionError("g_moments order must be 2, 3 or 4, got %r" % order)
	_check_compatible(g, dist)
	for k in range(1, order + 1):
		_require_finite(g, dist, k)

	if method in ("auto", "closed_form"):
		closed = g.closed_form_moments(dist, order)
		if closed is not None and isfinite(closed[0]) and isfinite(closed[1]):
			mean_g, var_g, skew, exkurt = closed
			if var_g == 0:
				skew, exkurt = np.nan, np.nan
			return GMoments(float(mean_g), float(var_g), float(skew), float(exkurt), "closed_form")
		if method == "closed_form":
			raise ConfigurationError("No closed-form moments for %s under %s" % (g.spec(), dist.spec()))
	if method == "monte_carlo":
		return _monte_carlo_moments(g, dist, order, seed)
	return _quadrature_moments(g, dist, order)


def asymptotic_variance(g: Generator, dist: DistributionModel, method="auto", moments: GMoments = None):
	"""var{g(X)} / g'(E_g(X))^2, with the pieces it is made of."""
	if moments is None:
		moments = g_moments(g, dist, method, order=2)
	eg = _inverse_of_mean(g, moments.mean_g)
	slope = float(g.derivative(eg))
	if slope == 0 or not isfinite(slope):
		raise SingularDerivativeError("%s: g'(E_g(X)) = %g at E_g(X) = %g" % (g.spec(), slope, eg))
	return AsymptoticSpec(eg, slope, moments.var_g / slope ** 2, moments.mean_g, moments.var_g)


def _check_n(n):
	if n < 1:
		raise PreconditionError("Sample size n must be at least 1, got %s" % n)


def _scalar_or_array(values):
	return float(values) if np.ndim(values) == 0 else values


def standardize(g: Generator, spec: AsymptoticSpec, m_value, n):
	"""sqrt(n) (M - E_g) / sqrt(asym_var); vectorized over m_value."""
	_check_n(n)
	if not spec.asym_var > 0:
		raise DegenerateError("%s: asymptotic variance is %g, cannot standardize" % (g.spec(), spec.asym_var))
	m_value = np.asarray(m_value, dtype=float)
	return _scalar_or_array(sqrt(n) * (m_value - spec.eg) / sqrt(spec.asym_var))


def scaled_error(spec: AsymptoticSpec, m_value, n):
	"""sqrt(n) (M - E_g), unstandardized."""
	_check_n(n)
	return _scalar_or_array(sqrt(n) * (np.asarray(m_value, dtype=float) - spec.eg))


def standardize_transformed(spec: AsymptoticSpec, transformed_mean, n):
	"""sqrt(n) ((1/n) sum g(X_i) - E g(X)) / sd{g(X)}, the statistic before g^{-1} is applied."""
	_check_n(n)
	if not spec.var_g > 0:
		raise DegenerateError("var{g(X)} is %g, cannot standardize" % spec.var_g)
	transformed_mean = np.asarray(transformed_mean, dtype=float)
	return _scalar_or_array(sqrt(n) * (transformed_mean - spec.mean_g) / sqrt(spec.var_g))


def normal_cdf(x):
	return 0.5 * erfc(-np.asarray(x, dtype=float) / _SQRT2)


def normal_pdf(x):
	x = np.asarray(x, dtype=float)
	return _INV_SQRT_2PI * np.exp(-0.5 * x * x)


def hermite(k, x):
	x = np.asarray(x, dtype=float)
	if k == 1:
		value = x * x - 1.0
	elif k == 2:
		value = x ** 3 - 3.0 * x
	elif k == 3:
		value = x ** 5 - 10.0 * x ** 3 + 15.0 * x
	else:
		raise PreconditionError("hermite is defined for k in {1, 2, 3}, got %r" % k)
	return _scalar_or_array(value)


def edgeworth_terms(x, n, mom: GMoments, third_term=EDGEWORTH_THIRD_TERM):
	"""
	The three correction terms subtracted from Phi(x):
	phi(x) gamma p1(x) / (6 sqrt n), phi(x) kappa p2(x) / (24 n) and
	phi(x) gamma^2 p3(x) / (72 n); third_term="kurtosis" puts kappa^2 on the last one.
	"""
	_check_n(n)
	if not mom.skew_defined:
		raise DegenerateError("Edgeworth terms need finite skewness and excess kurtosis, got %r, %r"
			% (mom.skew_g, mom.exkurt_g))
	if third_term not in ("skewness", "kurtosis"):
		raise ConfigurationError("third_term must be 'skewness' or 'kurtosis', got %r" % third_term)
	gamma, kappa = mom.skew_g, mom.exkurt_g
	third = gamma * gamma if third_term == "skewness" else kappa * kappa
	density = normal_pdf(x)
	c1 = density * gamma * np.asarray(hermite(1, x)) / (6.0 * sqrt(n))
	c2 = density * kappa * np.asarray(hermite(2, x)) / (24.0 * n)
	c3 = density * third * np.asarray(hermite(3, x)) / (72.0 * n)
	return tuple(_scalar_or_array(c) for c in (c1, c2, c3))


def edgeworth_cdf(x, n, mom: GMoments, third_term=EDGEWORTH_THIRD_TERM):
	"""Raw expansion; may leave [0, 1] in the tails."""
	c1, c2, c3 = edgeworth_terms(x, n, mom, third_term)
	return _scalar_or_array(normal_cdf(x) - (np.asarray(c1) + np.asarray(c2) + np.asarray(c3)))


def edgeworth_cdf_clamped(x, n, mom: GMoments, third_term=EDGEWORTH_THIRD_TERM):
	return _scalar_or_array(np.clip(edgeworth_cdf(x, n, mom, third_term), 0.0, 1.0))
