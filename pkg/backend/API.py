from importlib import import_module
from os import listdir as ls
from os.path import abspath, dirname, join

from backend.Errors import ConfigurationError, InvalidParameterError
from util.Logs import get_logger

_MODULE_DIR = join(dirname(dirname(abspath(__file__))), "generics", "modules")


class API:
	'''
	Registry of generator and distribution plugins.
	Plugins are discovered as subclasses of the generic base classes after
	every module in generics/modules is imported; classes whose specName()
	is None (composites) stay out of the registry.
	'''
	modules = []
	generators = dict()
	distributions = dict()

	def __init__(self):
		# delay importing modules to creation of API instance
		from generics.Generator import Generator
		from generics.Distribution import DistributionModel

		self._logger = get_logger("API")
		self.modules = []
		for item in sorted(ls(_MODULE_DIR)):
			if item[-3:] == ".py" and item != "__init__.py":
				self.modules.append(import_module("generics.modules.%s" % (item[:-3])))

		for cls in Generator.__subclasses__():
			self.register_generator(cls)
		for cls in DistributionModel.__subclasses__():
			self.register_distribution(cls)

	@classmethod
	def _register(cls, table, kind, plugin):
		name = plugin.specName()
		if name is None:
			return None
		if table.get(name) not in (None, plugin):
			raise ConfigurationError("Two %s can't both have the same spec name: %s" % (kind, name))
		table[name] = plugin
		return plugin

	@classmethod
	def register_generator(cls, plugin):
		'''Adds a Generator subclass under its specName(); usable as a decorator.'''
		cls._register(cls.generators, "generators", plugin)
		return plugin

	@classmethod
	def register_distribution(cls, plugin):
		cls._register(cls.distributions, "distributions", plugin)
		return plugin

	def generator_from_spec(self, spec: str):
		'''"power:2" -> Power(p=2.0)'''
		return _build(self.generators, "generator", spec)

	def distribution_from_spec(self, spec: str):
		'''"pareto:10" -> Pareto(alpha=10.0, scale=1.0)'''
		return _build(self.distributions, "distribution", spec)

	def make_builtin(self, kind: str, p=None):
		if kind not in ("identity", "log", "reciprocal", "power", "exp"):
			raise ConfigurationError("Unknown built-in generator %r" % kind)
		if kind == "power":
			if p is None:
				raise InvalidParameterError("The power generator needs an exponent p > 0")
			return self.generators["power"](p=float(p))
		if p is not None:
			raise InvalidParameterError("Generator %r takes no exponent" % kind)
		return self.generators[kind]()


def _build(table, kind, spec):
	parts = [t.strip() for t in str(spec).split(":")]
	name, args = parts[0].lower(), parts[1:]
	plugin = table.get(name)
	if plugin is None:
		raise ConfigurationError("Unknown %s %r; choose from %s" % (kind, name, ", ".join(sorted(table))))
	options = sorted(plugin._variable_options, key=lambda p: plugin._variable_options[p].get("position", 0))
	required = [p for p in options if plugin._variable_options[p].get("required", False)]
	if not len(required) <= len(args) <= len(options):
		raise ConfigurationError("%s %r takes %d to %d parameters, got %d in %r"
			% (kind.capitalize(), name, len(required), len(options), len(args), spec))
	values = dict()
	for option, arg in zip(options, args):
		try:
			values[option] = float(arg)
		except ValueError:
			raise ConfigurationError("Parameter %s of %s %r is not a number: %r" % (option, kind, name, arg))
	return plugin(**values)


_default_api = None


def get_api():
	'''Shared registry instance, built on first use.'''
	global _default_api
	if _default_api is None:
		_default_api = API()
	return _default_api


def generator_from_spec(spec):
	return get_api().generator_from_spec(spec)


def distribution_from_spec(spec):
	return get_api().distribution_from_spec(spec)


def make_builtin(kind, p=None):
	return get_api().make_builtin(kind, p)


def register_generator(plugin):
	return API.register_generator(plugin)


def register_distribution(plugin):
	return API.register_distribution(plugin)
