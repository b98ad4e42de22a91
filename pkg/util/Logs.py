import logging

logger = logging.getLogger("pyregmean")

_FORMAT = "%(asctime)s %(name)s %(levelname)s: %(message)s"


def configure(verbose=False, stream=None):
	"""Attach a single stderr handler to the package logger."""
	level = logging.INFO if verbose else logging.WARNING
	logger.setLevel(level)
	if not any(getattr(h, "_pyregmean", False) for h in logger.handlers):
		handler = logging.StreamHandler(stream)
		handler.setFormatter(logging.Formatter(_FORMAT))
		handler._pyregmean = True
		logger.addHandler(handler)
	return logger


def get_logger(name):
	return logger.getChild(name)
