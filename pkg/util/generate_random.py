import numpy as np

def rand_positive(n=100, low=1.0, high=2.0, seed=0):
	"""Seeded uniform sample on [low, high), the usual test box."""
	rng = np.random.default_rng(seed)
	return low + (high - low) * rng.random(n)

def rand_returns(n=24, scale=0.05, seed=0):
	"""Period returns bounded away from -1, as a portfolio would see them."""
	rng = np.random.default_rng(seed)
	return np.clip(rng.normal(0.01, scale, n), -0.5, 0.5)

def gamma_replicates(replicates, n, shape=1.0, rate=1.0, seed=0):
	"""Row means of Gamma samples, standardized by the exact mean and variance."""
	rng = np.random.default_rng(seed)
	x = rng.gamma(shape, 1.0 / rate, (replicates, n))
	mu, var = shape / rate, shape / rate ** 2
	return np.sqrt(n) * (x.mean(axis=1) - mu) / np.sqrt(var)
