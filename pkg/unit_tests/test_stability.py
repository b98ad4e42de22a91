import unittest
from sys import path as sys_path
from os import getcwd
sys_path.append(getcwd())

from itertools import combinations

import numpy as np

from backend import API
from backend.Errors import DegenerateSlopeError, DomainError, PreconditionError
from backend.Stability import (
	GRID_NOTE, perturbation_path, stability_delta, theorem4_bound, theorem4_constants, verify_stability,
)
from generics.Generator import Interval
from generics.modules.gn_composite import AffineGenerator, FunctionGenerator, increasing_form

BUILTINS = ("identity", "log", "reciprocal", "power:2", "exp")
BOX = Interval(1.0, 2.0)


class bound(unittest.TestCase):

	def setUp(self):
		self.api = API.get_api()

	def test_identical_generators(self):
		log = self.api.make_builtin("log")
		self.assertEqual(theorem4_bound(log, log, BOX), 0.0)
		report = verify_stability(log, log, BOX, 2, 51)
		self.assertEqual(report.sup_mean_distance, 0.0)
		self.assertTrue(report.satisfied)

	def test_shifted_identity(self):
		identity = self.api.make_builtin("identity")
		shifted = AffineGenerator(identity, 1.0, 0.3)
		self.assertAlmostEqual(theorem4_bound(identity, shifted, BOX), 2 * 0.3, places=12)
		report = verify_stability(identity, shifted, BOX, 2, 101)
		self.assertLess(report.sup_mean_distance, 1e-12)
		self.assertTrue(report.satisfied)

	def test_log_against_shifted_identity(self):
		log = self.api.make_builtin("log")
		line = AffineGenerator(self.api.make_builtin("identity"), 1.0, -1.0)
		B = Interval(0.5, 2.0)
		lipschitz, slope, distance = theorem4_constants(log, line, B)
		self.assertAlmostEqual(lipschitz, 2.0, places=10)
		self.assertAlmostEqual(slope, 0.5, places=10)
		self.assertAlmostEqual(distance, 1.0 - np.log(2.0), places=6)
		report = verify_stability(log, line, B, 2, 201)
		self.assertTrue(report.satisfied)
		self.assertLessEqual(report.sup_mean_distance, report.bound)

	def test_constants_are_not_symmetric(self):
		g, h = self.api.make_builtin("log"), self.api.make_builtin("identity")
		forward = theorem4_constants(g, h, BOX)
		backward = theorem4_constants(h, g, BOX)
		# the min slope and the distance are shared, the Lipschitz constant of the inverse belongs to g
		self.assertEqual(forward[1], backward[1])
		self.assertEqual(forward[2], backward[2])
		self.assertAlmostEqual(forward[0], 2.0, places=10)
		self.assertAlmostEqual(backward[0], 1.0, places=10)

	def test_delta(self):
		g, h = self.api.make_builtin("log"), self.api.make_builtin("identity")
		lipschitz, slope, _ = theorem4_constants(g, h, BOX)
		self.assertAlmostEqual(stability_delta(0.01, g, h, BOX), 0.01 / (lipschitz + 1 / slope))
		with self.assertRaises(PreconditionError):
			stability_delta(0.0, g, h, BOX)

	def test_degenerate_slope(self):
		flat = FunctionGenerator("flat", lambda x: np.zeros_like(x), inverse=lambda y: y, domain=Interval(0, 3))
		with self.assertRaises(DegenerateSlopeError):
			theorem4_bound(self.api.make_builtin("identity"), flat, BOX)


class verification(unittest.TestCase):

	def setUp(self):
		self.api = API.get_api()

	def test_examples(self):
		power = self.api.generator_from_spec
		report = verify_stability(power("power:1"), power("power:1.01"), BOX, 2, 201)
		self.assertTrue(report.satisfied)
		self.assertGreater(report.sup_mean_distance, 0.0)
		self.assertEqual((report.evaluation, report.points), ("grid", 201 ** 2))
		self.assertEqual(report.grid_note, GRID_NOTE)
		flipped = increasing_form(self.api.make_builtin("reciprocal"))
		report = verify_stability(self.api.make_builtin("log"), flipped, BOX, 2, 201)
		self.assertTrue(report.satisfied)

	def test_decreasing_generators_are_flipped(self):
		reciprocal = self.api.make_builtin("reciprocal")
		log = self.api.make_builtin("log")
		direct = verify_stability(log, reciprocal, BOX, 2, 51)
		flipped = verify_stability(log, increasing_form(reciprocal), BOX, 2, 51)
		self.assertEqual(direct.sup_mean_distance, flipped.sup_mean_distance)
		self.assertEqual(direct.bound, flipped.bound)

	def test_suite(self):
		for first, second in combinations(BUILTINS, 2):
			g, h = self.api.generator_from_spec(first), self.api.generator_from_spec(second)
			for n in (2, 3):
				report = verify_stability(g, h, BOX, n, 201)
				label = "%s vs %s, n=%d" % (first, second, n)
				self.assertTrue(report.satisfied, label)
				self.assertLessEqual(report.sup_mean_distance, report.bound * (1 + 1e-6), label)

	def test_random_points_above_three_dimensions(self):
		g, h = self.api.make_builtin("log"), self.api.make_builtin("identity")
		report = verify_stability(g, h, BOX, 6, 11, samples=5000, seed=1)
		self.assertEqual((report.evaluation, report.points), ("random", 5000))
		self.assertTrue(report.satisfied)
		again = verify_stability(g, h, BOX, 6, 11, samples=5000, seed=1)
		self.assertEqual(report.sup_mean_distance, again.sup_mean_distance)

	def test_evaluation_domain(self):
		g, h = self.api.make_builtin("log"), self.api.make_builtin("identity")
		wide = verify_stability(g, h, BOX, 2, 51, B=Interval(0.5, 3.0))
		narrow = verify_stability(g, h, BOX, 2, 51)
		self.assertEqual(wide.sup_mean_distance, narrow.sup_mean_distance)
		self.assertGreaterEqual(wide.bound, narrow.bound)
		with self.assertRaises(DomainError):
			verify_stability(g, h, BOX, 2, 51, B=Interval(1.5, 3.0))
		with self.assertRaises(DomainError):
			verify_stability(g, h, Interval(-1.0, 1.0), 2, 51)
		with self.assertRaises(PreconditionError):
			verify_stability(g, h, BOX, 0, 51)

	def test_report_fields(self):
		report = verify_stability(self.api.make_builtin("log"), self.api.make_builtin("exp"), BOX, 2, 21)
		fields = report.to_dict()
		self.assertEqual(fields["box"], "[1, 2]")
		self.assertAlmostEqual(fields["bound"], fields["bound_constant"] * fields["generator_distance"])


class perturbation(unittest.TestCase):

	def test_distance_grows_along_the_path(self):
		api = API.get_api()
		reports = perturbation_path(api.make_builtin("log"), api.make_builtin("identity"), BOX, 2, 201)
		distances = [r.sup_mean_distance for r in reports]
		self.assertEqual(distances[0], 0.0)
		for before, after in zip(distances, distances[1:]):
			self.assertGreaterEqual(after, before - 1e-12)
		self.assertTrue(all(r.satisfied for r in reports))


if __name__ == "__main__":
	unittest.main()
