from math import isfinite

import numpy as np

from backend.Errors import ConfigurationError
from generics.Generator import Generator, Interval, REAL_LINE, invert


def _mapped_image(image: Interval, scale, shift):
	lo, hi = scale * image.lo + shift, scale * image.hi + shift
	if scale > 0:
		return Interval(lo, hi, image.lo_open, image.hi_open)
	return Interval(hi, lo, image.hi_open, image.lo_open)


class AffineGenerator(Generator):
	"""
	a*g + b for a != 0. The regular mean, the Kolmogorov expected value and
	the asymptotic variance are all unchanged by this map; with a = -1 it
	turns a decreasing generator into an increasing one.
	"""
	scale = 1.0
	shift = 0.0
	_variable_options = {
		"scale": {"default": 1.0, "validator": lambda a: isfinite(a) and a != 0, "position": 0},
		"shift": {"default": 0.0, "validator": lambda b: isfinite(b), "position": 1},
	}

	def __init__(self, base: Generator, scale=1.0, shift=0.0):
		self.base = base
		super().__init__(scale=float(scale), shift=float(shift))

	def after_init(self, **options):
		base = self.base
		self.domain = base.domain
		self.image = _mapped_image(base.image, self.scale, self.shift)
		flip = self.scale < 0
		self.monotone_direction = {True: "decreasing", False: "increasing"}[base.increasing() != flip]
		self.test_box = base.test_box
		self.bracket = base.bracket
		self._upper_growth = base._upper_growth
		self._lower_growth = base._lower_growth
		self._multiprocessing_safe = base._multiprocessing_safe

	def forward(self, x):
		return self.scale * self.base.forward(x) + self.shift

	def inverse(self, y):
		return self.base.inverse((np.asarray(y, dtype=float) - self.shift) / self.scale)

	def derivative(self, x):
		return self.scale * self.base.derivative(x)

	def closed_form_expectation(self, dist):
		mean = self.base.closed_form_expectation(dist)
		return None if mean is None else self.scale * mean + self.shift

	def closed_form_moments(self, dist, order=4):
		moments = self.base.closed_form_moments(dist, order)
		if moments is None:
			return None
		mean, var, skew, exkurt = moments
		return (self.scale * mean + self.shift, self.scale ** 2 * var, np.sign(self.scale) * skew, exkurt)

	def spec(self):
		return "%g*(%s)%+g" % (self.scale, self.base.spec(), self.shift)

	@staticmethod
	def displayName():
		return "Affine transform"

	@staticmethod
	def displayDescription():
		return "a*g(x) + b for a nonzero a; leaves every regular-mean quantity unchanged."


def increasing_form(g: Generator):
	"""g itself when increasing, otherwise -g."""
	if g.increasing():
		return g
	return AffineGenerator(g, -1.0, 0.0)


class BlendGenerator(Generator):
	"""(1 - t)*g + t*h for two increasing generators, inverted numerically on a compact bracket."""
	t = 0.0
	_variable_options = {
		"t": {"default": 0.0, "validator": lambda t: 0.0 <= t <= 1.0, "position": 0},
	}

	def __init__(self, g: Generator, h: Generator, t: float, bracket: Interval):
		self.g, self.h = g, h
		self.bracket = bracket
		super().__init__(t=float(t))

	def after_init(self, **options):
		if not (self.g.increasing() and self.h.increasing()):
			raise ConfigurationError("Blending needs two increasing generators; use increasing_form first")
		if not self.bracket.is_compact():
			raise ConfigurationError("Blending needs a compact bracket, got %s" % self.bracket)
		for gen in (self.g, self.h):
			if not gen.domain.contains_interval(self.bracket):
				raise ConfigurationError("%s is outside the input range of %s" % (self.bracket, gen.spec()))
		self.domain = self.bracket
		self.test_box = self.bracket
		ends = self.forward(np.array([self.bracket.lo, self.bracket.hi]))
		self.image = Interval(float(ends[0]), float(ends[1]))
		self._multiprocessing_safe = self.g._multiprocessing_safe and self.h._multiprocessing_safe

	def forward(self, x):
		return (1.0 - self.t) * self.g.forward(x) + self.t * self.h.forward(x)

	def inverse(self, y):
		if self.t == 0:
			return self.g.inverse(y)
		if self.t == 1:
			return self.h.inverse(y)
		return invert(self, y, self.bracket)

	def derivative(self, x):
		return (1.0 - self.t) * self.g.derivative(x) + self.t * self.h.derivative(x)

	def spec(self):
		return "blend(%s, %s, t=%g)" % (self.g.spec(), self.h.spec(), self.t)

	@staticmethod
	def displayName():
		return "Blend"

	@staticmethod
	def displayDescription():
		return "Pointwise interpolation g + t(h - g) between two increasing generators."


class FunctionGenerator(Generator):
	"""
	Programmatic generator built from plain callables. Missing inverse or
	derivative fall back to bisection on `bracket` and central differences.
	The monotone direction is read off the bracket ends, or off two interior
	points of the test box (or domain) when there is no bracket; pass
	direction= to set it outright.
	Not shipped to worker processes, since the callables may be closures.
	"""
	_multiprocessing_safe = False

	def __init__(self, name, forward, domain: Interval = REAL_LINE, inverse=None, derivative=None,
			bracket: Interval = None, test_box: Interval = None, direction: str = None):
		self.name = name
		self._forward = forward
		self._inverse = inverse
		self._derivative = derivative
		self.domain = domain
		self.bracket = bracket
		self._test_box_option = test_box
		if inverse is None and bracket is None:
			raise ConfigurationError("Generator %r needs either an inverse or a bracket" % name)
		if direction not in (None, "increasing", "decreasing"):
			raise ConfigurationError("Generator %r: direction must be 'increasing' or 'decreasing', got %r"
				% (name, direction))
		self._direction_option = direction
		super().__init__()

	def after_init(self, **options):
		if self.bracket is not None:
			lo, hi = [float(v) for v in self._forward(np.array([self.bracket.lo, self.bracket.hi]))]
			if lo == hi:
				raise ConfigurationError("Generator %r is constant on its bracket" % self.name)
			self.monotone_direction = "increasing" if hi > lo else "decreasing"
			self.image = Interval(min(lo, hi), max(lo, hi))
			self.test_box = self.bracket
		elif self.domain.is_compact():
			self.test_box = self.domain
		if self._test_box_option is not None:
			self.test_box = self._test_box_option
		if self._direction_option is not None:
			self.monotone_direction = self._direction_option
		elif self.bracket is None:
			self.monotone_direction = self._sampled_direction() or self.monotone_direction

	def _sampled_direction(self):
		box = self.test_box if self.domain.contains_interval(self.test_box) else self.domain
		left, right = _interior_pair(box)
		lo, hi = [float(v) for v in self._forward(np.array([left, right]))]
		if not (isfinite(lo) and isfinite(hi)) or lo == hi:
			self._logger.warning("%s: g(%g) = %r and g(%g) = %r give no direction; keeping %s",
				self.name, left, lo, right, hi, self.monotone_direction)
			return None
		return "increasing" if hi > lo else "decreasing"

	def forward(self, x):
		return self._forward(np.asarray(x, dtype=float))

	def inverse(self, y):
		if self._inverse is None:
			return invert(self, y, self.bracket)
		return self._inverse(np.asarray(y, dtype=float))

	def derivative(self, x):
		if self._derivative is None:
			return super().derivative(x)
		return self._derivative(np.asarray(x, dtype=float))

	def spec(self):
		return str(self.name)

	@staticmethod
	def displayName():
		return "Function"

	@staticmethod
	def displayDescription():
		return "A generator assembled from Python callables."


def _interior_pair(interval: Interval):
	"""Two finite points strictly inside interval, in increasing order."""
	lo, hi = interval.lo, interval.hi
	if isfinite(lo) and isfinite(hi):
		return lo + 0.25 * (hi - lo), hi - 0.25 * (hi - lo)
	if isfinite(lo):
		return lo + 1.0, lo + 2.0
	if isfinite(hi):
		return hi - 2.0, hi - 1.0
	return 0.0, 1.0
