from abc import ABC, abstractmethod
from dataclasses import dataclass
from math import inf, isfinite

import numpy as np

from Constants import BISECTION_TOL, BISECTION_MAX_ITER, LIPSCHITZ_GRID, SLOPE_TOL
from backend.Errors import (
	ConvergenceError, DegenerateSlopeError, DomainError, InvalidParameterError,
	OutOfRangeError, PreconditionError,
)
from util.Logs import get_logger

_MACHINE_EPS = np.finfo(float).eps
_CBRT_EPS = np.cbrt(_MACHINE_EPS)


@dataclass(frozen=True)
class Interval:
	"""
	Real interval [lo, hi]; either end may be open.
	Used both for input ranges (possibly half-lines) and for compact
	evaluation domains.
	"""
	lo: float
	hi: float
	lo_open: bool = False
	hi_open: bool = False

	def __post_init__(self):
		if not self.lo < self.hi:
			raise InvalidParameterError("Interval needs lo < hi, got [%r, %r]" % (self.lo, self.hi))

	@classmethod
	def parse(cls, text: str):
		"""'1:2' -> [1, 2]"""
		try:
			lo, hi = [float(t) for t in text.split(":")]
		except ValueError:
			raise InvalidParameterError("Interval spec must look like 'lo:hi', got %r" % text)
		return cls(lo, hi)

	@property
	def width(self):
		return self.hi - self.lo

	def is_compact(self):
		return isfinite(self.lo) and isfinite(self.hi) and not self.lo_open and not self.hi_open

	def contains(self, x):
		x = np.asarray(x, dtype=float)
		above = x > self.lo if self.lo_open else x >= self.lo
		below = x < self.hi if self.hi_open else x <= self.hi
		return above & below

	def contains_interval(self, other):
		if other.lo < self.lo or (other.lo == self.lo and self.lo_open and not other.lo_open):
			return False
		if other.hi > self.hi or (other.hi == self.hi and self.hi_open and not other.hi_open):
			return False
		return True

	def grid(self, points: int):
		if not self.is_compact():
			raise PreconditionError("A grid needs a compact interval, got %s" % self)
		if points < 2:
			raise PreconditionError("A grid needs at least 2 points, got %s" % points)
		return np.linspace(self.lo, self.hi, int(points))

	def __str__(self):
		return "%s%g, %g%s" % ("(" if self.lo_open else "[", self.lo, self.hi, ")" if self.hi_open else "]")


REAL_LINE = Interval(-inf, inf, True, True)
POSITIVE_HALF_LINE = Interval(0.0, inf, True, True)


class Generator(ABC):
	"""
	A generator (activation) function g: continuous and strictly monotone on
	its input range, with an inverse and a derivative.
	Subclasses provide closed forms; anything missing falls back to
	bisection (inverse) and central differences (derivative).

	forward/inverse/derivative are vectorized and do not check domains, except
	that the built-ins on (0, inf) reject x <= 0; use check_domain on user data.
	"""
	_variable_options = dict()
	_global_parameters = dict()

	domain: Interval = REAL_LINE
	image: Interval = REAL_LINE
	monotone_direction = "increasing"
	# compact bracket for the numeric inverse; None when a closed form exists
	bracket = None
	# compact sub-box of the domain used by the axiom checks
	test_box = Interval(-5.0, 5.0)

	# tail behaviour of |g| used by the divergence check:
	# |g(x)| grows like x**_upper_growth as x -> inf (inf means exponential)
	# and like x**(-_lower_growth) as x -> 0+
	_upper_growth = 1.0
	_lower_growth = 0.0
	# g(x) = x**_raw_power, when it is one
	_raw_power = None
	# name of the overflow-safe mean in backend.RegularMean, if any
	_stable_variant = None
	# safe to ship to worker processes
	_multiprocessing_safe = True

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
		"""Raise InvalidParameterError for unknown names or rejected values."""
		if param_name not in self._variable_options:
			raise InvalidParameterError("Unknown parameter %r for generator %s" % (param_name, self.specName()))
		validator = self._variable_options[param_name].get("validator")
		if validator is not None and not validator(param_value):
			raise InvalidParameterError("Parameter %s=%r out of range for generator %s"
				% (param_name, param_value, self.specName()))

	def parameters(self):
		return {p: getattr(self, p) for p in self._variable_options}

	@abstractmethod
	def forward(self, x):
		'''g(x)'''
		pass

	def inverse(self, y):
		'''g^{-1}(y); bisection on the bracket unless overridden.'''
		if self.bracket is None:
			raise PreconditionError("%s has no closed-form inverse and no bracket" % self.spec())
		return invert(self, y, self.bracket)

	def derivative(self, x):
		'''g'(x); central differences unless overridden.'''
		return numeric_derivative(self, x)

	def __call__(self, x):
		return self.forward(x)

	def check_domain(self, x):
		values = np.asarray(x, dtype=float)
		inside = self.domain.contains(values)
		if not np.all(inside):
			offending = values[~inside] if values.ndim else values
			raise DomainError("%s: value %r outside input range %s"
				% (self.spec(), float(np.ravel(offending)[0]), self.domain))
		return values

	def check_image(self, y):
		values = np.asarray(y, dtype=float)
		if not np.all(self.image.contains(values)):
			raise DomainError("%s: value outside the image %s of the generator" % (self.spec(), self.image))
		return values

	def increasing(self):
		return self.monotone_direction == "increasing"

	def closed_form_expectation(self, dist):
		"""E{g(X)} in closed form, or None."""
		if self._raw_power is not None:
			return dist.raw_moment(self._raw_power)
		return None

	def closed_form_moments(self, dist, order=4):
		"""
		(mean, variance, skewness, excess kurtosis) of g(X) in closed form,
		entries above `order` set to nan; None when no closed form is known.
		"""
		if self._raw_power is None:
			return None
		raw = [dist.raw_moment(self._raw_power * k) for k in range(1, order + 1)]
		if any(r is None for r in raw):
			return None
		return central_from_raw(raw)

	@classmethod
	def specName(cls):
		'''Registry key used in spec strings; None keeps a class out of the CLI registry.'''
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
		return "<Generator %s, domain %s, %s>" % (self.spec(), self.domain, self.monotone_direction)


def central_from_raw(raw):
	"""Raw moments E g^k, k = 1..len(raw), to (mean, var, skew, excess kurtosis)."""
	raw = list(raw) + [np.nan] * (4 - len(raw))
	r1, r2, r3, r4 = raw
	var = r2 - r1 ** 2
	# below this the difference is cancellation noise
	if var <= 16 * _MACHINE_EPS * abs(r2):
		var = 0.0
	m3 = r3 - 3 * r1 * r2 + 2 * r1 ** 3
	m4 = r4 - 4 * r1 * r3 + 6 * r1 ** 2 * r2 - 3 * r1 ** 4
	if var == 0:
		return (r1, 0.0, np.nan, np.nan)
	return (r1, var, m3 / var ** 1.5, m4 / var ** 2 - 3.0)


def invert(g: Generator, y, bracket: Interval, tol=BISECTION_TOL, max_iter=BISECTION_MAX_ITER):
	"""
	Numeric g^{-1}(y) by bisection on a compact bracket; vectorized over y.
	Stops when |g(x) - y| <= tol or the bracket shrinks to machine resolution.
	"""
	if not bracket.is_compact():
		raise PreconditionError("Bisection needs a compact bracket, got %s" % bracket)
	target = np.asarray(y, dtype=float)
	g_lo, g_hi = float(g.forward(bracket.lo)), float(g.forward(bracket.hi))
	y_min, y_max = min(g_lo, g_hi), max(g_lo, g_hi)
	if np.any(np.isnan(target)) or np.any(target < y_min - tol) or np.any(target > y_max + tol):
		raise OutOfRangeError("%s: target outside [%g, %g], the image of %s"
			% (g.spec(), y_min, y_max, bracket))
	increasing = g_hi > g_lo

	lo = np.full(target.shape, bracket.lo)
	hi = np.full(target.shape, bracket.hi)
	for _ in range(int(max_iter)):
		mid = 0.5 * (lo + hi)
		residual = g.forward(mid) - target
		done = (np.abs(residual) <= tol) | ((hi - lo) <= 4 * _MACHINE_EPS * np.maximum(1.0, np.abs(mid)))
		if np.all(done):
			return mid if mid.ndim else float(mid)
		move_lo = (residual < 0) == increasing
		lo = np.where(~done & move_lo, mid, lo)
		hi = np.where(~done & ~move_lo, mid, hi)
	raise ConvergenceError("%s: bisection did not converge within %d iterations" % (g.spec(), max_iter))


def numeric_derivative(g: Generator, x):
	"""Central difference with step cbrt(eps)*max(1, |x|); one-sided at a domain edge."""
	x = np.asarray(x, dtype=float)
	h = _CBRT_EPS * np.maximum(1.0, np.abs(x))
	left_ok = g.domain.contains(x - h)
	right_ok = g.domain.contains(x + h)
	left = np.where(left_ok, x - h, x)
	right = np.where(right_ok, x + h, x)
	return (g.forward(right) - g.forward(left)) / (right - left)


def _check_evaluation_domain(g: Generator, B: Interval, grid_points: int):
	if not B.is_compact():
		raise PreconditionError("Evaluation domain must be compact, got %s" % B)
	if grid_points < 2:
		raise PreconditionError("grid_points must be at least 2, got %s" % grid_points)
	if not g.domain.contains_interval(B):
		raise DomainError("%s is not inside the input range %s of %s" % (B, g.domain, g.spec()))


def estimate_lipschitz(g: Generator, B: Interval, grid_points=LIPSCHITZ_GRID):
	"""Max of |g'| over a grid of B; a grid estimate, so a lower bound of the true sup."""
	_check_evaluation_domain(g, B, grid_points)
	return float(np.max(np.abs(g.derivative(B.grid(grid_points)))))


def min_slope(g: Generator, B: Interval, grid_points=LIPSCHITZ_GRID):
	"""Min of |g'| over a grid of B."""
	_check_evaluation_domain(g, B, grid_points)
	slope = float(np.min(np.abs(g.derivative(B.grid(grid_points)))))
	if slope <= SLOPE_TOL:
		raise DegenerateSlopeError("%s: minimum slope %g on %s violates strict monotonicity"
			% (g.spec(), slope, B))
	return slope


def is_strictly_monotone(g: Generator, B: Interval, grid_points=1001):
	values = np.diff(g.forward(B.grid(grid_points)))
	if g.increasing():
		return bool(np.all(values > 0))
	return bool(np.all(values < 0))
