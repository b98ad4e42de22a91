"""
Monte Carlo harness for the universal central limit theorem: replicate
sampling, standardized statistics, KS distances and Edgeworth comparisons.

Every replicate draws from its own stream spawned from the master seed,
so results do not depend on how replicates are spread over processes.
"""
from dataclasses import dataclass, field
from functools import partial
from math import fsum
from multiprocessing import Pool
from time import perf_counter
from typing import Optional

import numpy as np
import pandas as pd
from scipy import stats

import Constants
from backend.Asymptotics import (
	AsymptoticSpec, GMoments, asymptotic_variance, edgeworth_cdf, g_moments, normal_cdf, normal_pdf,
	scaled_error, standardize, standardize_transformed,
)
from backend.Errors import DegenerateError, DivergenceError, DomainError, PreconditionError
from backend.RegularMean import stable_mean
from generics.Distribution import DistributionModel
from generics.Generator import Generator, Interval
from util.Logs import get_logger

_logger = get_logger("Simulation")


@dataclass(frozen=True)
class ScenarioConfig:
	dist: DistributionModel
	generator: Generator
	n: int
	replicates: int
	seed: int

	def __post_init__(self):
		if self.n < 2:
			raise PreconditionError("Scenario sample size n must be at least 2, got %s" % self.n)
		if self.replicates < 1:
			raise PreconditionError("Scenario needs at least one replicate, got %s" % self.replicates)

	def to_dict(self):
		return {
			"dist": self.dist.spec(),
			"generator": self.generator.spec(),
			"n": int(self.n),
			"replicates": int(self.replicates),
			"seed": int(self.seed),
		}


@dataclass
class SimulationReport:
	config: ScenarioConfig
	statistics: np.ndarray
	statistics_scaled: np.ndarray
	statistics_transformed: np.ndarray
	ks_vs_normal: float
	ks_transformed: float
	empirical_var: float
	variance_ratio: float
	asymptotic: AsymptoticSpec
	moments: GMoments
	edgeworth_sup_gap: Optional[float]
	statistics_skewness: Optional[float]
	runtime_ms: float
	metadata: dict = field(default_factory=dict)

	def to_dict(self, include_runtime=True):
		'''The report.json payload; per-replicate vectors are left out.'''
		report = {
			"config": self.config.to_dict(),
			"eg": self.asymptotic.eg,
			"asym_var": self.asymptotic.asym_var,
			"empirical_var": self.empirical_var,
			"ks": self.ks_vs_normal,
			"edgeworth_sup_gap": self.edgeworth_sup_gap,
			"ks_transformed": self.ks_transformed,
			"variance_ratio": self.variance_ratio,
			"statistics_skewness": self.statistics_skewness,
			"gprime_at_eg": self.asymptotic.gprime_at_eg,
			"moments": self.moments.to_dict(),
			"metadata": self.metadata,
		}
		if include_runtime:
			report["runtime_ms"] = self.runtime_ms
		return report


def _run_replicate(dist, g, n, seed_sequence):
	rng = np.random.default_rng(seed_sequence)
	x = dist.sample(n, rng)
	return stable_mean(g, x), fsum(g.forward(x)) / n


def _scenario_moments(g, dist):
	try:
		return g_moments(g, dist, order=4)
	except DivergenceError as e:
		if e.order is None or e.order <= 2:
			raise
		_logger.warning("%s under %s: moment of order %s diverges, Edgeworth comparison unavailable",
			g.spec(), dist.spec(), e.order)
		return g_moments(g, dist, order=2)


def metadata_for(cfg: ScenarioConfig):
	meta = {"version": Constants.version, "seed": int(cfg.seed), "config": cfg.to_dict()}
	if cfg.dist.specName() == "pareto":
		meta["note"] = Constants.PARETO_SCALE_NOTE
	return meta


def run_scenario(cfg: ScenarioConfig, threads: int = 1, third_term=Constants.EDGEWORTH_THIRD_TERM):
	"""
	Draw cfg.replicates samples of size cfg.n, take the regular mean of each and
	compare the standardized values with N(0, 1) and with the Edgeworth expansion.
	"""
	g, dist = cfg.generator, cfg.dist
	if not dist.inside(g.domain):
		raise DomainError("Support of %s is not inside the input range %s of %s" % (dist.spec(), g.domain, g.spec()))
	moments = _scenario_moments(g, dist)
	asym = asymptotic_variance(g, dist, moments=moments)
	if not asym.asym_var > 0:
		raise DegenerateError("%s under %s has zero asymptotic variance" % (g.spec(), dist.spec()))

	start = perf_counter()
	seeds = np.random.SeedSequence(cfg.seed).spawn(cfg.replicates)
	worker = partial(_run_replicate, dist, g, cfg.n)
	if threads > 1 and g._multiprocessing_safe:
		chunksize = max(1, cfg.replicates // (4 * threads))
		with Pool(threads) as pool:
			results = pool.map(worker, seeds, chunksize)
	else:
		if threads > 1:
			_logger.info("%s cannot be sent to worker processes; running serially", g.spec())
		results = [worker(s) for s in seeds]
	means = np.array([r[0] for r in results])
	transformed = np.array([r[1] for r in results])

	statistics = np.asarray(standardize(g, asym, means, cfg.n), dtype=float).reshape(-1)
	scaled = np.asarray(scaled_error(asym, means, cfg.n), dtype=float).reshape(-1)
	statistics_g = np.asarray(standardize_transformed(asym, transformed, cfg.n), dtype=float).reshape(-1)
	empirical_var = float(np.var(scaled))

	edgeworth_gap = None
	if moments.skew_defined:
		edgeworth_gap = ks_statistic(statistics, lambda x: edgeworth_cdf(x, cfg.n, moments, third_term))
	skewness = float(stats.skew(statistics)) if cfg.replicates >= 3 else None
	runtime_ms = (perf_counter() - start) * 1000.0

	report = SimulationReport(
		config=cfg,
		statistics=statistics,
		statistics_scaled=scaled,
		statistics_transformed=statistics_g,
		ks_vs_normal=ks_statistic(statistics, normal_cdf),
		ks_transformed=ks_statistic(statistics_g, normal_cdf),
		empirical_var=empirical_var,
		variance_ratio=empirical_var / asym.asym_var,
		asymptotic=asym,
		moments=moments,
		edgeworth_sup_gap=edgeworth_gap,
		statistics_skewness=skewness,
		runtime_ms=runtime_ms,
		metadata=metadata_for(cfg),
	)
	_logger.info("%s / %s, n=%d, %d replicates: ks=%.4f, variance ratio=%.4f (%.0f ms)",
		dist.spec(), g.spec(), cfg.n, cfg.replicates, report.ks_vs_normal, report.variance_ratio, runtime_ms)
	return report


def ks_statistic(values, reference_cdf):
	"""sup_i max(|i/N - F(v_(i))|, |(i-1)/N - F(v_(i))|) over the sorted values."""
	values = np.sort(np.asarray(values, dtype=float).reshape(-1))
	if values.size == 0:
		raise PreconditionError("ks_statistic needs at least one value")
	size = values.size
	reference = np.asarray(reference_cdf(values), dtype=float).reshape(-1)
	upper = np.arange(1, size + 1) / size
	lower = np.arange(0, size) / size
	return float(max(np.max(np.abs(upper - reference)), np.max(np.abs(lower - reference))))


@dataclass(frozen=True)
class EmpiricalCDF:
	"""Right-continuous step function through (v_(i), i/N)."""
	values: np.ndarray

	def __call__(self, x):
		result = np.searchsorted(self.values, np.asarray(x, dtype=float), side="right") / self.values.size
		return float(result) if np.ndim(result) == 0 else result

	def table(self):
		return pd.DataFrame({
			"value": self.values,
			"cdf": np.arange(1, self.values.size + 1) / self.values.size,
		})


def empirical_cdf(values):
	values = np.sort(np.asarray(values, dtype=float).reshape(-1))
	if values.size == 0:
		raise PreconditionError("empirical_cdf needs at least one value")
	return EmpiricalCDF(values)


@dataclass
class EdgeworthComparison:
	table: pd.DataFrame
	sup_gap_phi: float
	sup_gap_edgeworth: float

	@property
	def edgeworth_better(self):
		return self.sup_gap_edgeworth <= self.sup_gap_phi


def _statistics_of(report):
	if isinstance(report, SimulationReport):
		return report.statistics
	return np.asarray(report, dtype=float)


def compare_edgeworth(report, mom: GMoments, n: int, grid: Interval, steps: int,
		third_term=Constants.EDGEWORTH_THIRD_TERM):
	"""
	Empirical CDF of the standardized statistics against Phi and the
	Edgeworth CDF on `steps` points of `grid`. `report` may also be a bare
	vector of statistics.
	"""
	if steps < 2:
		raise PreconditionError("compare_edgeworth needs at least 2 grid steps, got %s" % steps)
	ecdf = empirical_cdf(_statistics_of(report))
	x = grid.grid(steps)
	empirical = ecdf(x)
	phi = normal_cdf(x)
	edgeworth = edgeworth_cdf(x, n, mom, third_term)
	table = pd.DataFrame({
		"x": x,
		"empirical_cdf": empirical,
		"phi_cdf": phi,
		"edgeworth_cdf": edgeworth,
		"gap_phi": np.abs(empirical - phi),
		"gap_edgeworth": np.abs(empirical - edgeworth),
	})
	comparison = EdgeworthComparison(table, float(table["gap_phi"].max()), float(table["gap_edgeworth"].max()))
	if abs(mom.skew_g) > 0 and not comparison.edgeworth_better:
		_logger.info("Edgeworth sup-gap %.4g exceeds the normal sup-gap %.4g at n=%d",
			comparison.sup_gap_edgeworth, comparison.sup_gap_phi, n)
	return comparison


def histogram(report: SimulationReport, bins: int = 50, statistic="standardized"):
	"""hist.csv rows: bin_lo, bin_hi, count, normal_density_at_mid of the limiting normal law."""
	if statistic == "standardized":
		values, sd = report.statistics, 1.0
	elif statistic == "scaled":
		values, sd = report.statistics_scaled, float(np.sqrt(report.asymptotic.asym_var))
	else:
		raise PreconditionError("statistic must be 'standardized' or 'scaled', got %r" % statistic)
	if bins < 1:
		raise PreconditionError("histogram needs at least one bin, got %s" % bins)
	counts, edges = np.histogram(values, bins=int(bins))
	mids = 0.5 * (edges[:-1] + edges[1:])
	return pd.DataFrame({
		"bin_lo": edges[:-1],
		"bin_hi": edges[1:],
		"count": counts.astype(int),
		"normal_density_at_mid": normal_pdf(mids / sd) / sd,
	})
