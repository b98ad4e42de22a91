"""Average returns of a portfolio: wealth recursion, geometric average and the Markowitz approximation."""
from dataclasses import dataclass
from math import exp, fsum

import numpy as np

from backend.Errors import DomainError, InvalidParameterError, PreconditionError
from backend.RegularMean import stable_mean
from generics.modules.gn_0 import Log


@dataclass(frozen=True)
class ReturnSeries:
	"""Period returns r_1..r_n as fractions and the initial wealth w0."""
	returns: np.ndarray
	w0: float = 1.0

	def __post_init__(self):
		returns = np.array(self.returns, dtype=float).ravel()
		if returns.size == 0:
			raise PreconditionError("A return series needs at least one period")
		if not np.all(np.isfinite(returns)):
			raise DomainError("Returns must be finite")
		if np.any(1.0 + returns <= 0):
			bad = float(returns[1.0 + returns <= 0][0])
			raise DomainError("Gross return 1 + r must be positive, got r = %r" % bad)
		if not (np.isfinite(self.w0) and self.w0 > 0):
			raise InvalidParameterError("Initial wealth w0 must be positive, got %r" % self.w0)
		returns.setflags(write=False)
		object.__setattr__(self, "returns", returns)
		object.__setattr__(self, "w0", float(self.w0))

	@classmethod
	def from_percent(cls, returns, w0=1.0):
		return cls(np.asarray(returns, dtype=float) / 100.0, w0)

	@property
	def n(self):
		return int(self.returns.size)

	@property
	def gross(self):
		return 1.0 + self.returns


def wealth_path(series: ReturnSeries):
	"""w_n = w0 (1 + r_1) ... (1 + r_n), accumulated in log-space."""
	return series.w0 * exp(fsum(np.log(series.gross)))


def geometric_average_return(series: ReturnSeries):
	"""Gross geometric average {prod(1 + r_t)}^(1/n)."""
	return stable_mean(Log(), series.gross)


def markowitz_approximation(series: ReturnSeries, ddof: int = 0):
	"""exp{rbar - (rbar^2 + s^2)/2}; s^2 uses divisor n - ddof and is 0 for a single period."""
	if ddof not in (0, 1):
		raise InvalidParameterError("ddof must be 0 or 1, got %r" % ddof)
	returns = series.returns
	rbar = fsum(returns) / series.n
	s2 = float(np.var(returns, ddof=ddof)) if series.n > ddof else 0.0
	return exp(rbar - 0.5 * (rbar * rbar + s2))


def portfolio_summary(series: ReturnSeries, ddof: int = 0):
	geometric = geometric_average_return(series)
	markowitz = markowitz_approximation(series, ddof)
	return {
		"n": series.n,
		"w0": series.w0,
		"ddof": int(ddof),
		"wealth": wealth_path(series),
		"geometric_gross": geometric,
		"geometric_net": geometric - 1.0,
		"markowitz": markowitz,
		"gap": markowitz - geometric,
	}
