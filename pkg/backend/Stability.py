"""
Stability of the regular mean under perturbation of its generator:
||M_g - M_h|| <= (L + 1/m) ||g - h||, L the Lipschitz constant of g^{-1}
and m the smaller of the two minimum slopes. Sup-norms are grid estimates.
"""
from dataclasses import asdict, dataclass

import numpy as np

from Constants import LIPSCHITZ_GRID, STABILITY_ABS_SLACK, STABILITY_REL_SLACK
from backend.Errors import DomainError, PreconditionError
from generics.Generator import Generator, Interval, min_slope
from generics.modules.gn_composite import BlendGenerator, increasing_form
from util.Logs import get_logger

_logger = get_logger("Stability")

GRID_NOTE = "sup-norms are maxima over the evaluation grid, not certified bounds"
# exhaustive grids up to this dimension, random points above it
MAX_GRID_DIMENSION = 3


@dataclass
class StabilityReport:
	g: str
	h: str
	box: str
	n: int
	evaluation: str
	points: int
	sup_mean_distance: float
	generator_distance: float
	lipschitz: float
	min_slope: float
	bound_constant: float
	bound: float
	satisfied: bool
	grid_note: str = GRID_NOTE

	def to_dict(self):
		return asdict(self)


def theorem4_constants(g: Generator, h: Generator, B: Interval, grid: int = LIPSCHITZ_GRID):
	"""(L, m, ||g - h||) on B for the increasing forms of g and h; L = 1/min g'."""
	g, h = increasing_form(g), increasing_form(h)
	slope_g = min_slope(g, B, grid)
	slope_h = min_slope(h, B, grid)
	points = B.grid(grid)
	distance = float(np.max(np.abs(g.forward(points) - h.forward(points))))
	return 1.0 / slope_g, min(slope_g, slope_h), distance


def theorem4_bound(g: Generator, h: Generator, B: Interval, grid: int = LIPSCHITZ_GRID):
	lipschitz, slope, distance = theorem4_constants(g, h, B, grid)
	return (lipschitz + 1.0 / slope) * distance


def stability_delta(eps: float, g: Generator, h: Generator, B: Interval, grid: int = LIPSCHITZ_GRID):
	"""Radius delta = eps / (L + 1/m): ||g - h|| < delta on B keeps ||M_g - M_h|| < eps."""
	if not eps > 0:
		raise PreconditionError("eps must be positive, got %r" % eps)
	lipschitz, slope, _ = theorem4_constants(g, h, B, grid)
	return eps / (lipschitz + 1.0 / slope)


def _grid_means(g, axis_points, n):
	"""Regular means over every point of the n-fold product grid."""
	values = g.forward(axis_points)
	total = values
	for _ in range(n - 1):
		total = np.add.outer(total, values)
	return np.asarray(g.inverse(total.reshape(-1) / n), dtype=float)


def _sample_means(g, points):
	return np.asarray(g.inverse(np.mean(g.forward(points), axis=1)), dtype=float)


def verify_stability(g: Generator, h: Generator, A_box: Interval, n: int, grid_per_dim: int,
		B: Interval = None, samples: int = 100000, seed: int = 0, slope_grid: int = LIPSCHITZ_GRID):
	"""
	Measures sup |M_g - M_h| over A_box^n and compares it with the bound on B
	(A_box itself unless given). Exhaustive product grid for n <= 3, `samples`
	uniform random points otherwise.
	"""
	if n < 1:
		raise PreconditionError("n must be at least 1, got %s" % n)
	if grid_per_dim < 2:
		raise PreconditionError("grid_per_dim must be at least 2, got %s" % grid_per_dim)
	B = A_box if B is None else B
	if not B.contains_interval(A_box):
		raise DomainError("Evaluation domain %s does not cover the box %s" % (B, A_box))
	for gen in (g, h):
		if not gen.domain.contains_interval(B):
			raise DomainError("%s is outside the input range %s of %s" % (B, gen.domain, gen.spec()))
	g_inc, h_inc = increasing_form(g), increasing_form(h)

	if n <= MAX_GRID_DIMENSION:
		axis_points = A_box.grid(grid_per_dim)
		distance = np.abs(_grid_means(g_inc, axis_points, n) - _grid_means(h_inc, axis_points, n))
		evaluation, points = "grid", int(grid_per_dim) ** n
	else:
		rng = np.random.default_rng(seed)
		sample = rng.uniform(A_box.lo, A_box.hi, (int(samples), n))
		distance = np.abs(_sample_means(g_inc, sample) - _sample_means(h_inc, sample))
		evaluation, points = "random", int(samples)
	sup_distance = float(np.max(distance))

	lipschitz, slope, generator_distance = theorem4_constants(g_inc, h_inc, B, slope_grid)
	constant = lipschitz + 1.0 / slope
	bound = constant * generator_distance
	satisfied = sup_distance <= bound * (1.0 + STABILITY_REL_SLACK) + STABILITY_ABS_SLACK
	if not satisfied:
		_logger.warning("%s vs %s on %s^%d: measured %.6g exceeds bound %.6g",
			g.spec(), h.spec(), A_box, n, sup_distance, bound)
	return StabilityReport(
		g=g.spec(), h=h.spec(), box=str(A_box), n=int(n), evaluation=evaluation, points=points,
		sup_mean_distance=sup_distance, generator_distance=generator_distance,
		lipschitz=lipschitz, min_slope=slope, bound_constant=constant, bound=bound,
		satisfied=bool(satisfied),
	)


def perturbation_path(g: Generator, h: Generator, A_box: Interval, n: int, grid_per_dim: int,
		ts=(0.0, 0.25, 0.5, 0.75, 1.0), slope_grid: int = LIPSCHITZ_GRID):
	"""verify_stability(g, h_t) for h_t = g + t(h - g) at each t, on the increasing forms."""
	g_inc, h_inc = increasing_form(g), increasing_form(h)
	reports = []
	for t in ts:
		h_t = BlendGenerator(g_inc, h_inc, t, A_box)
		reports.append(verify_stability(g_inc, h_t, A_box, n, grid_per_dim, slope_grid=slope_grid))
	distances = [r.sup_mean_distance for r in reports]
	if any(b < a for a, b in zip(distances, distances[1:])):
		_logger.info("Mean distance along the path is not monotone in t: %s", distances)
	return reports
