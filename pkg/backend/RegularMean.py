"""
Regular (quasi-arithmetic) means M_g(x) = g^{-1}((1/n) sum g(x_i)),
their overflow-safe variants and an executable check of the axioms
characterising them.
"""
from dataclasses import asdict, dataclass, field
from math import fsum, isfinite, log

import numpy as np
from scipy.special import logsumexp

from Constants import AXIOM_EPSILON_FRACTION, AXIOM_TOL
from backend.Errors import DomainError, OverflowFailure, PreconditionError
from generics.Generator import Generator
from util.Logs import get_logger

_logger = get_logger("RegularMean")
_MACHINE_EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Sample:
	"""Observations x_1..x_n, n >= 1, stored as a read-only float vector."""
	values: np.ndarray

	def __post_init__(self):
		values = np.array(self.values, dtype=float).ravel()
		if values.size == 0:
			raise PreconditionError("A sample needs at least one value")
		values.setflags(write=False)
		object.__setattr__(self, "values", values)

	@property
	def n(self):
		return int(self.values.size)

	def __len__(self):
		return self.n


def _values(x):
	if isinstance(x, Sample):
		return x.values
	return Sample(x).values


def _row_means(g: Generator, rows):
	"""Regular mean of each row; no domain checks. Each result is clipped to its row's range."""
	transformed = g.forward(rows)
	if not np.all(np.isfinite(transformed)):
		raise OverflowFailure("%s: g(x) is not finite; use stable_mean" % g.spec())
	n = rows.shape[1]
	averages = np.array([fsum(row) / n for row in transformed])
	if not np.all(np.isfinite(averages)):
		raise OverflowFailure("%s: sum of g(x) is not finite; use stable_mean" % g.spec())
	means = np.asarray(g.inverse(averages), dtype=float)
	return np.clip(means, rows.min(axis=1), rows.max(axis=1))


def mean(g: Generator, x):
	values = g.check_domain(_values(x))
	return float(_row_means(g, values[np.newaxis, :])[0])


def _geometric(values):
	return float(np.clip(np.exp(fsum(np.log(values)) / values.size), values.min(), values.max()))


def power_mean(p: float, x):
	"""
	{(1/n) sum x_i^p}^(1/p), evaluated in log-space around the mean log.

	With l_i = log x_i and d_i = l_i - mean(l), log M_p = mean(l) + log{mean(e^(p d_i))}/p.
	The inner mean goes through log1p/expm1 while |p d_i| <= 1 and through
	log-sum-exp past that. The geometric mean is returned once p d_i is below
	machine resolution.
	"""
	values = _values(x)
	if np.any(~(values > 0)):
		raise DomainError("power_mean needs positive values, got %r" % float(values[~(values > 0)][0]))
	n = values.size
	logs = np.log(values)
	centre = fsum(logs) / n
	spread = logs - centre
	widest = float(np.max(np.abs(spread)))
	if p == 0 or abs(p) * widest < _MACHINE_EPS:
		return _geometric(values)
	scaled = p * spread
	if abs(p) * widest <= 1.0:
		log_mean = centre + np.log1p(fsum(np.expm1(scaled)) / n) / p
	else:
		log_mean = centre + (logsumexp(scaled) - log(n)) / p
	return float(np.clip(np.exp(log_mean), values.min(), values.max()))


def exp_mean_stable(x):
	"""log{(1/n) sum exp(x_i)} with the largest x_i factored out."""
	values = _values(x)
	if not np.all(np.isfinite(values)):
		raise DomainError("exp_mean_stable needs finite values")
	result = logsumexp(values, b=np.full(values.size, 1.0 / values.size))
	return float(np.clip(result, values.min(), values.max()))


def stable_mean(g: Generator, x):
	'''Same value as mean(g, x), through the generator's overflow-safe form when it has one.'''
	values = g.check_domain(_values(x))
	variant = g._stable_variant
	if variant == "exp":
		return exp_mean_stable(values)
	if variant == "power":
		return power_mean(g.p, values)
	if variant == "log":
		return _geometric(values)
	return mean(g, values)


def superposition_mean(g: Generator, x):
	"""
	sum_{j=1}^{2n+1} l(sum_i lambda_i g(x_i)) with lambda_i = 1/n, every inner
	function equal to g and outer function l(y) = g^{-1}(y)/(2n+1).
	"""
	values = g.check_domain(_values(x))
	n = values.size
	inner = fsum(g.forward(values)) / n
	if not isfinite(inner):
		raise OverflowFailure("%s: sum of g(x) is not finite" % g.spec())
	outer = float(g.inverse(inner)) / (2 * n + 1)
	return fsum([outer] * (2 * n + 1))


@dataclass
class AxiomCheck:
	passed: bool = True
	worst_violation: float = 0.0

	def record(self, violation, allowed, strict=False):
		self.worst_violation = max(self.worst_violation, float(violation))
		if not (violation < allowed if strict else violation <= allowed):
			self.passed = False


@dataclass
class AxiomReport:
	generator: str
	n: int
	n0: int
	trials: int
	tolerance: float
	epsilon: float
	a1_monotone: AxiomCheck = field(default_factory=AxiomCheck)
	a2_symmetric: AxiomCheck = field(default_factory=AxiomCheck)
	a3_idempotent: AxiomCheck = field(default_factory=AxiomCheck)
	a4_replacement: AxiomCheck = field(default_factory=AxiomCheck)

	@property
	def all_passed(self):
		return all(c.passed for c in (self.a1_monotone, self.a2_symmetric, self.a3_idempotent, self.a4_replacement))

	def to_dict(self):
		report = asdict(self)
		report["all_passed"] = self.all_passed
		return report


def check_axioms(g: Generator, n: int, n0: int, trials: int = 1000, tol: float = AXIOM_TOL, rng_seed: int = 0):
	"""
	Random-sample check of the four axioms on g's test box.
	A1 is strict increase under a +epsilon step of one coordinate,
	epsilon = AXIOM_EPSILON_FRACTION * box width. A2 to A4 compare within
	tol * max(1, |M|).
	"""
	if not 1 <= n0 <= n:
		raise PreconditionError("check_axioms needs 1 <= n0 <= n, got n0=%s, n=%s" % (n0, n))
	if trials < 1:
		raise PreconditionError("check_axioms needs at least one trial, got %s" % trials)
	box = g.test_box
	if not (box.is_compact() and g.domain.contains_interval(box)):
		raise PreconditionError("%s: test box %s is not a compact part of %s" % (g.spec(), box, g.domain))
	epsilon = AXIOM_EPSILON_FRACTION * box.width
	rng = np.random.default_rng(rng_seed)
	report = AxiomReport(g.spec(), int(n), int(n0), int(trials), float(tol), float(epsilon))

	for _ in range(int(trials)):
		x = rng.uniform(box.lo, box.hi - epsilon, n)
		c = rng.uniform(box.lo, box.hi)
		head = float(_row_means(g, x[np.newaxis, :n0])[0])
		replaced = x.copy()
		replaced[:n0] = head
		rows = np.vstack([
			x,
			x + epsilon * np.eye(n),
			x[rng.permutation(n)],
			np.full(n, c),
			replaced,
		])
		means = _row_means(g, rows)
		base, bumped = means[0], means[1:n + 1]
		permuted, constant, after = means[n + 1], means[n + 2], means[n + 3]
		scale = max(1.0, abs(base))

		report.a1_monotone.record(np.max(base - bumped), 0.0, strict=True)
		report.a2_symmetric.record(abs(permuted - base), tol * scale)
		report.a3_idempotent.record(abs(constant - c), tol * max(1.0, abs(c)))
		report.a4_replacement.record(abs(after - base), tol * scale)

	if not report.all_passed:
		_logger.warning("%s: axiom check failed (n=%d, n0=%d): %s", g.spec(), n, n0, report.to_dict())
	return report
