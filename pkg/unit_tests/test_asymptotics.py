import unittest
from sys import path as sys_path
from os import getcwd
sys_path.append(getcwd())

from math import exp, pi, sqrt

import numpy as np
from scipy import stats

from backend import API
from backend.Asymptotics import (
	GMoments, asymptotic_variance, edgeworth_cdf, edgeworth_cdf_clamped, edgeworth_terms,
	expected_transform, g_moments, hermite, kolmogorov_expectation, moment_is_finite, normal_cdf,
	normal_pdf, scaled_error, standardize, standardize_transformed,
)
from backend.Errors import (
	ConfigurationError, DegenerateError, DivergenceError, DomainError, PreconditionError,
)
from backend.Simulation import compare_edgeworth
from generics.Generator import Interval
from generics.modules.gn_composite import AffineGenerator
from util import generate_random as gr

GENERATORS = ("identity", "log", "reciprocal", "power:2", "exp")
SCENARIOS = ("lognormal:2:1", "gamma:100:1", "uniform:1:2", "pareto:10")


class kolmogorov_expectations(unittest.TestCase):

	def setUp(self):
		self.api = API.get_api()

	def test_examples(self):
		g = self.api.generator_from_spec
		d = self.api.distribution_from_spec
		self.assertAlmostEqual(kolmogorov_expectation(g("identity"), d("uniform:1:2")), 1.5, places=14)
		self.assertAlmostEqual(kolmogorov_expectation(g("log"), d("lognormal:2:1")), exp(2), places=12)
		self.assertAlmostEqual(kolmogorov_expectation(g("identity"), d("pareto:10")), 10 / 9, places=14)
		for spec in GENERATORS:
			self.assertAlmostEqual(kolmogorov_expectation(g(spec), d("point:2.5")), 2.5, places=12)
		self.assertAlmostEqual(kolmogorov_expectation(g("reciprocal"), d("gamma:100:1")), 99.0, places=10)

	def test_domain_mismatch(self):
		with self.assertRaises(DomainError):
			kolmogorov_expectation(self.api.make_builtin("log"), self.api.distribution_from_spec("uniform:-1:1"))

	def test_divergence(self):
		with self.assertRaises(DivergenceError) as caught:
			expected_transform(self.api.make_builtin("exp"), self.api.distribution_from_spec("lognormal:0:1"))
		self.assertEqual(caught.exception.order, 1)
		with self.assertRaises(DivergenceError):
			expected_transform(self.api.make_builtin("reciprocal"), self.api.distribution_from_spec("gamma:0.5:1"))
		with self.assertRaises(DomainError):
			expected_transform(self.api.make_builtin("reciprocal"), self.api.distribution_from_spec("uniform:0:1"))
		finite, reason = moment_is_finite(self.api.make_builtin("identity"), self.api.distribution_from_spec("pareto:3"), 3)
		self.assertFalse(finite)
		self.assertIn("pareto", reason)

	def test_unknown_method(self):
		with self.assertRaises(ConfigurationError):
			expected_transform(self.api.make_builtin("identity"), self.api.distribution_from_spec("uniform:1:2"), "trapezoid")

	def test_quadrature_agrees_with_closed_form(self):
		for dist_spec in SCENARIOS:
			dist = self.api.distribution_from_spec(dist_spec)
			for spec in GENERATORS:
				g = self.api.generator_from_spec(spec)
				if not (dist.inside(g.domain) and moment_is_finite(g, dist, 2)[0]):
					continue
				try:
					closed = g_moments(g, dist, "closed_form", order=2)
				except ConfigurationError:
					continue
				numeric = g_moments(g, dist, "quadrature", order=2)
				label = "%s under %s" % (spec, dist_spec)
				eg_closed = kolmogorov_expectation(g, dist, "closed_form")
				eg_numeric = kolmogorov_expectation(g, dist, "quadrature")
				self.assertAlmostEqual(eg_numeric, eg_closed, delta=1e-8 * abs(eg_closed), msg=label)
				var_closed = asymptotic_variance(g, dist, moments=closed).asym_var
				var_numeric = asymptotic_variance(g, dist, moments=numeric).asym_var
				self.assertAlmostEqual(var_numeric, var_closed, delta=1e-8 * var_closed, msg=label)

	def test_monte_carlo_path(self):
		g, dist = self.api.make_builtin("log"), self.api.distribution_from_spec("uniform:1:2")
		estimate = kolmogorov_expectation(g, dist, "monte_carlo", seed=3)
		# E log X for Uniform(1, 2) is 2 log 2 - 1
		self.assertAlmostEqual(estimate, exp(2 * np.log(2) - 1), delta=2e-3)


class moments(unittest.TestCase):

	def setUp(self):
		self.api = API.get_api()

	def test_examples(self):
		mom = g_moments(self.api.make_builtin("log"), self.api.distribution_from_spec("lognormal:2:1"))
		self.assertEqual((mom.mean_g, mom.var_g, mom.skew_g, mom.exkurt_g), (2.0, 1.0, 0.0, 0.0))
		for method in ("closed_form", "quadrature"):
			mom = g_moments(self.api.make_builtin("identity"), self.api.distribution_from_spec("uniform:1:2"), method)
			self.assertAlmostEqual(mom.mean_g, 1.5, places=10)
			self.assertAlmostEqual(mom.var_g, 1 / 12, places=10)
			self.assertAlmostEqual(mom.skew_g, 0.0, places=7)
			self.assertAlmostEqual(mom.exkurt_g, -1.2, places=7)
		mom = g_moments(self.api.make_builtin("identity"), self.api.distribution_from_spec("point:4"))
		self.assertEqual((mom.mean_g, mom.var_g), (4.0, 0.0))
		self.assertFalse(mom.skew_defined)

	def test_gamma_identity(self):
		mom = g_moments(self.api.make_builtin("identity"), self.api.distribution_from_spec("gamma:1:1"))
		self.assertAlmostEqual(mom.skew_g, 2.0, places=10)
		self.assertAlmostEqual(mom.exkurt_g, 6.0, places=9)

	def test_invariants(self):
		for dist_spec in SCENARIOS:
			dist = self.api.distribution_from_spec(dist_spec)
			for spec in ("identity", "log", "reciprocal"):
				mom = g_moments(self.api.generator_from_spec(spec), dist)
				self.assertGreaterEqual(mom.var_g, 0.0)
				self.assertGreaterEqual(mom.exkurt_g, -2.0)

	def test_divergent_order(self):
		with self.assertRaises(DivergenceError) as caught:
			g_moments(self.api.make_builtin("identity"), self.api.distribution_from_spec("pareto:3.5"))
		self.assertEqual(caught.exception.order, 4)
		mom = g_moments(self.api.make_builtin("identity"), self.api.distribution_from_spec("pareto:3.5"), order=3)
		self.assertTrue(np.isnan(mom.exkurt_g))
		with self.assertRaises(PreconditionError):
			g_moments(self.api.make_builtin("identity"), self.api.distribution_from_spec("uniform:1:2"), order=5)

	def test_to_dict(self):
		mom = g_moments(self.api.make_builtin("identity"), self.api.distribution_from_spec("point:4"))
		self.assertIsNone(mom.to_dict()["skew_g"])


class asymptotic_variances(unittest.TestCase):

	def setUp(self):
		self.api = API.get_api()

	def test_examples(self):
		identity = self.api.make_builtin("identity")
		for spec in SCENARIOS:
			dist = self.api.distribution_from_spec(spec)
			self.assertAlmostEqual(asymptotic_variance(identity, dist).asym_var, dist.var(), delta=1e-12 * dist.var())
		spec = asymptotic_variance(self.api.make_builtin("log"), self.api.distribution_from_spec("lognormal:2:1"))
		self.assertAlmostEqual(spec.asym_var, exp(4), places=10)
		self.assertAlmostEqual(spec.gprime_at_eg, exp(-2), places=14)
		spec = asymptotic_variance(identity, self.api.distribution_from_spec("uniform:1:2"))
		self.assertAlmostEqual(spec.asym_var, 1 / 12, places=14)

	def test_affine_invariance(self):
		for dist_spec in SCENARIOS:
			dist = self.api.distribution_from_spec(dist_spec)
			for spec in ("identity", "log", "reciprocal"):
				g = self.api.generator_from_spec(spec)
				base = asymptotic_variance(g, dist)
				for a, b in ((3.0, -1.0), (-2.0, 0.5)):
					moved = asymptotic_variance(AffineGenerator(g, a, b), dist)
					self.assertAlmostEqual(moved.eg, base.eg, delta=1e-9 * abs(base.eg))
					self.assertAlmostEqual(moved.asym_var, base.asym_var, delta=1e-9 * base.asym_var)


class standardization(unittest.TestCase):

	def setUp(self):
		api = API.get_api()
		self.g = api.make_builtin("identity")
		self.spec = asymptotic_variance(self.g, api.distribution_from_spec("uniform:1:2"))

	def test_examples(self):
		self.assertEqual(standardize(self.g, self.spec, self.spec.eg, 57), 0.0)
		self.assertAlmostEqual(standardize(self.g, self.spec, 1.6, 100), 10 * 0.1 / sqrt(1 / 12), places=10)
		with self.assertRaises(PreconditionError):
			standardize(self.g, self.spec, 1.6, 0)

	def test_vectorized(self):
		values = standardize(self.g, self.spec, np.array([1.5, 1.6]), 100)
		self.assertEqual(values.shape, (2,))
		self.assertAlmostEqual(scaled_error(self.spec, 1.6, 100), 1.0, places=12)
		self.assertAlmostEqual(standardize_transformed(self.spec, 1.6, 100), 10 * 0.1 / sqrt(1 / 12), places=10)

	def test_degenerate(self):
		api = API.get_api()
		spec = asymptotic_variance(self.g, api.distribution_from_spec("point:1"))
		with self.assertRaises(DegenerateError):
			standardize(self.g, spec, 1.0, 10)


class edgeworth(unittest.TestCase):

	def test_normal(self):
		x = np.linspace(-6, 6, 13)
		self.assertTrue(np.allclose(normal_cdf(x), stats.norm.cdf(x), rtol=1e-13, atol=1e-300))
		self.assertAlmostEqual(float(normal_pdf(0.0)), 1 / sqrt(2 * pi), places=15)
		# far tail keeps full relative accuracy
		self.assertAlmostEqual(float(normal_cdf(-30.0)) / stats.norm.sf(30.0), 1.0, places=12)

	def test_hermite(self):
		self.assertEqual(hermite(1, 0.0), -1.0)
		self.assertEqual(hermite(2, 0.0), 0.0)
		self.assertEqual(hermite(3, 0.0), 0.0)
		self.assertEqual(hermite(3, 2.0), -18.0)
		with self.assertRaises(PreconditionError):
			hermite(4, 1.0)

	def test_examples(self):
		x = np.linspace(-3, 3, 61)
		flat = GMoments(0.0, 1.0, 0.0, 0.0, "closed_form")
		self.assertTrue(np.array_equal(edgeworth_cdf(x, 10, flat), normal_cdf(x)))
		skewed = GMoments(0.0, 1.0, 0.6, 0.0, "closed_form")
		self.assertAlmostEqual(edgeworth_cdf(0.0, 100, skewed), 0.5 + 0.6 / (6 * 10 * sqrt(2 * pi)), places=14)
		self.assertAlmostEqual(edgeworth_cdf(0.0, 100, skewed), 0.50399, places=5)
		heavy = GMoments(0.0, 1.0, 2.0, 6.0, "closed_form")
		gaps = [np.max(np.abs(edgeworth_cdf(x, n, heavy) - normal_cdf(x))) for n in (10, 100, 1000, 10000)]
		self.assertEqual(sorted(gaps, reverse=True), gaps)

	def test_third_term_variants(self):
		mom = GMoments(0.0, 1.0, 1.0, 3.0, "closed_form")
		_, _, skew_term = edgeworth_terms(1.5, 20, mom)
		_, _, kurt_term = edgeworth_terms(1.5, 20, mom, third_term="kurtosis")
		self.assertAlmostEqual(kurt_term, 9.0 * skew_term, places=14)
		with self.assertRaises(ConfigurationError):
			edgeworth_terms(1.5, 20, mom, third_term="both")

	def test_clamped(self):
		mom = GMoments(0.0, 1.0, 5.0, 40.0, "closed_form")
		x = np.linspace(-4, 4, 81)
		clamped = edgeworth_cdf_clamped(x, 3, mom)
		self.assertTrue(np.all((clamped >= 0) & (clamped <= 1)))
		self.assertTrue(np.any((edgeworth_cdf(x, 3, mom) < 0) | (edgeworth_cdf(x, 3, mom) > 1)))

	def test_monotone_for_scenario_moments(self):
		# LogNormal(2, 1) with identity or reciprocal is too skewed for n = 100: the density dips below 0 near x = -2.5
		api = API.get_api()
		x = np.linspace(-3, 3, 601)
		for dist_spec in SCENARIOS:
			dist = api.distribution_from_spec(dist_spec)
			for spec in ("identity", "log", "reciprocal"):
				mom = g_moments(api.generator_from_spec(spec), dist)
				sizes = (1000,) if dist_spec.startswith("lognormal") and spec != "log" else (100, 1000)
				for n in sizes:
					steps = np.diff(edgeworth_cdf(x, n, mom))
					self.assertTrue(np.all(steps >= -1e-15), "%s under %s, n=%d" % (spec, dist_spec, n))

	def test_undefined_skewness(self):
		with self.assertRaises(DegenerateError):
			edgeworth_cdf(0.0, 10, GMoments(1.0, 0.0, np.nan, np.nan, "closed_form"))

	def test_lognormal_log_corrections_vanish(self):
		api = API.get_api()
		mom = g_moments(api.make_builtin("log"), api.distribution_from_spec("lognormal:2:6.25"))
		x = np.linspace(-3, 3, 61)
		for term in edgeworth_terms(x, 1000, mom):
			self.assertTrue(np.all(term == 0))
		self.assertTrue(np.array_equal(edgeworth_cdf(x, 1000, mom), normal_cdf(x)))

	def test_gamma_oracle_exact_law(self):
		# the sum of n Gamma(a, 1) draws is Gamma(n a, 1)
		api = API.get_api()
		x = np.linspace(-3, 3, 121)
		for spec, shape, n in (("gamma:1:1", 1.0, 5), ("gamma:1:1", 1.0, 20), ("gamma:1:1", 1.0, 100), ("gamma:100:1", 100.0, 20)):
			mom = g_moments(api.make_builtin("identity"), api.distribution_from_spec(spec))
			exact = stats.gamma(n * shape).cdf(n * shape + x * sqrt(n * shape))
			gap_phi = np.max(np.abs(exact - normal_cdf(x)))
			gap_edgeworth = np.max(np.abs(exact - edgeworth_cdf(x, n, mom)))
			self.assertLess(gap_edgeworth, gap_phi, "%s, n=%d" % (spec, n))

	def test_gamma_oracle_monte_carlo(self):
		api = API.get_api()
		mom = g_moments(api.make_builtin("identity"), api.distribution_from_spec("gamma:1:1"))
		for n in (5, 20):
			statistics = gr.gamma_replicates(400000, n, seed=n)
			comparison = compare_edgeworth(statistics, mom, n, Interval(-3.0, 3.0), 61)
			self.assertTrue(comparison.sup_gap_edgeworth < comparison.sup_gap_phi, "n=%d" % n)
			self.assertEqual(list(comparison.table.columns),
				["x", "empirical_cdf", "phi_cdf", "edgeworth_cdf", "gap_phi", "gap_edgeworth"])


if __name__ == "__main__":
	unittest.main()
