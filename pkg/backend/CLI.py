import argparse, sys

import numpy as np
import pandas as pd

import Constants
from backend import CSVIO
from backend.Errors import ConfigurationError, RegularMeanError
from util.Logs import configure, get_logger

_logger = get_logger("CLI")

COMMANDS = ("mean", "axioms", "edgeworth", "simulate", "stability", "portfolio", "reproduce-figure1", "reproduce-figure2")


def metadata(args, **config):
	'''Version, seed and the parsed configuration, attached to every JSON output.'''
	echo = {k: v for k, v in vars(args).items() if k not in ("handler",)}
	echo.update(config)
	return {"version": Constants.version, "seed": args.seed, "command": args.command, "config": echo}


def _emit_json(args, payload):
	if args.out:
		CSVIO.writeJSON(payload, args.out)
	else:
		print(CSVIO.formatJSON(payload))


def _emit_table(args, table: pd.DataFrame, payload_key="rows"):
	if args.format == "json":
		_emit_json(args, {payload_key: table.to_dict(orient="records"), "metadata": metadata(args)})
	elif args.out:
		CSVIO.writeTable(table, args.out)
	else:
		sys.stdout.write(CSVIO.formatTable(table))


def _emit_record(args, payload):
	'''JSON by default; with --format csv, one row of the scalar fields with nested keys joined by dots.'''
	if args.format != "csv":
		_emit_json(args, payload)
		return
	row = pd.json_normalize(CSVIO.jsonable({k: v for k, v in payload.items() if k != "metadata"}))
	_emit_table(args, row[[c for c in row.columns if not isinstance(row[c].iloc[0], list)]])


def _grid_spec(text):
	parts = text.split(":")
	if len(parts) != 3:
		raise ConfigurationError("Grid must look like 'lo:hi:steps', got %r" % text)
	try:
		lo, hi, steps = float(parts[0]), float(parts[1]), int(parts[2])
	except ValueError:
		raise ConfigurationError("Grid must look like 'lo:hi:steps', got %r" % text)
	from generics.Generator import Interval
	return Interval(lo, hi), steps


def cmd_mean(args, api):
	from backend.RegularMean import mean, stable_mean
	g = api.generator_from_spec(args.generator)
	values = CSVIO.readValues(args.data)
	value = stable_mean(g, values) if args.stable else mean(g, values)
	if args.format == "json":
		_emit_json(args, {"generator": g.spec(), "n": int(values.size), "mean": value, "metadata": metadata(args)})
	elif args.format == "csv":
		_emit_table(args, pd.DataFrame([{"generator": g.spec(), "n": int(values.size), "mean": value}]))
	else:
		print(repr(value))


def cmd_axioms(args, api):
	from backend.RegularMean import check_axioms
	g = api.generator_from_spec(args.generator)
	report = check_axioms(g, args.n, args.n0, args.trials, args.tol, args.seed)
	payload = report.to_dict()
	payload["metadata"] = metadata(args)
	_emit_record(args, payload)


def cmd_edgeworth(args, api):
	from backend.Asymptotics import edgeworth_cdf, edgeworth_cdf_clamped, edgeworth_terms, g_moments, normal_cdf
	g = api.generator_from_spec(args.generator)
	dist = api.distribution_from_spec(args.dist)
	grid, steps = _grid_spec(args.grid)
	third_term = "kurtosis" if args.literal_kurtosis else "skewness"
	moments = g_moments(g, dist, args.method)
	x = grid.grid(steps)
	c1, c2, c3 = edgeworth_terms(x, args.n, moments, third_term)
	cdf = edgeworth_cdf_clamped if args.clamped else edgeworth_cdf
	table = pd.DataFrame({
		"x": x,
		"phi_cdf": normal_cdf(x),
		"edgeworth_cdf": cdf(x, args.n, moments, third_term),
		"correction_1": c1,
		"correction_2": c2,
		"correction_3": c3,
	})
	_emit_table(args, table)


def cmd_simulate(args, api):
	from backend.Simulation import ScenarioConfig, histogram, run_scenario
	g = api.generator_from_spec(args.generator)
	dist = api.distribution_from_spec(args.dist)
	report = run_scenario(ScenarioConfig(dist, g, args.n, args.replicates, args.seed), threads=args.threads)
	payload = report.to_dict()
	payload["metadata"]["cli"] = metadata(args)
	if args.hist:
		table = histogram(report, args.bins, args.statistic)
		CSVIO.writeTable(table, args.hist)
		if args.plot:
			from util.Plotting import plot_histogram
			plot_histogram(table, str(args.hist).rsplit(".", 1)[0] + ".png", "%s, %s" % (dist.spec(), g.spec()))
	_emit_record(args, payload)


def cmd_stability(args, api):
	from backend.Stability import verify_stability
	from generics.Generator import Interval
	g = api.generator_from_spec(args.g)
	h = api.generator_from_spec(args.h)
	box = Interval.parse(args.box)
	B = Interval.parse(args.domain) if args.domain else None
	report = verify_stability(g, h, box, args.n, args.grid, B=B, seed=args.seed)
	payload = report.to_dict()
	payload["metadata"] = metadata(args)
	_emit_record(args, payload)


def cmd_portfolio(args, api):
	from backend.Portfolio import ReturnSeries, portfolio_summary
	values = CSVIO.readValues(args.returns)
	series = ReturnSeries.from_percent(values, args.w0) if args.percent else ReturnSeries(values, args.w0)
	payload = portfolio_summary(series, args.ddof)
	payload["metadata"] = metadata(args)
	_emit_record(args, payload)


def _experiment(args, api):
	from backend.run_experiment import Experiment
	return Experiment(api, threads=args.threads, plot=args.plot, statistic=args.statistic,
		verbose=args.verbose, replicates=args.replicates, n=args.n)


def cmd_figure1(args, api):
	summary = _experiment(args, api).reproduce_figure1(args.out or "figure1", args.seed)
	sys.stdout.write(CSVIO.formatTable(summary))


def cmd_figure2(args, api):
	summary = _experiment(args, api).reproduce_figure2(args.out or "figure2", args.seed)
	print(CSVIO.formatJSON(summary))


def cliMain(argv=None):
	'''Main function for the PyRegMean CLI; returns the process exit code.'''
	args = _parse_args(argv)
	configure(args.verbose)
	# delay loading the plugin registry until the arguments are known to be valid
	from backend.API import get_api
	try:
		np.seterr(over="ignore")
		args.handler(args, get_api())
	except RegularMeanError as error:
		print("pyregmean: error: %s" % error, file=sys.stderr)
		return error.exit_code
	return 0


def _common_parser():
	common = argparse.ArgumentParser(add_help=False)
	common.add_argument("--seed", type=int, default=42, help="Master random seed (recorded in every output).")
	common.add_argument("--out", default=None, help="Output file (or directory for the figure reproductions).")
	common.add_argument("--format", choices=("json", "csv"), default=None, help="Output format where a command offers both.")
	common.add_argument("--threads", type=int, default=1, help="Worker processes for Monte Carlo replicates.")
	common.add_argument("--verbose", action="store_true", help="Log progress at INFO level on stderr.")
	return common


def _parse_args(argv=None, empty=False):
	"""Parse command line arguments"""
	parser = argparse.ArgumentParser(prog="PyRegMean",
		description="Regular (Kolmogorov) means: axioms, universal CLT, Edgeworth diagnostics, stability, portfolio returns.")
	common = _common_parser()
	sub = parser.add_subparsers(dest="command", metavar="command")
	sub.required = True

	p = sub.add_parser("mean", parents=[common], help="Regular mean of a data set.")
	p.add_argument("--generator", required=True, help="Generator spec, e.g. log or power:2.")
	p.add_argument("--data", required=True, help="CSV file or inline list such as '1,2,3'.")
	p.add_argument("--stable", action="store_true", help="Use the overflow-safe form of the generator.")
	p.set_defaults(handler=cmd_mean)

	p = sub.add_parser("axioms", parents=[common], help="Random-sample check of axioms A1-A4.")
	p.add_argument("--generator", required=True)
	p.add_argument("--n", type=int, required=True)
	p.add_argument("--n0", type=int, required=True)
	p.add_argument("--trials", type=int, default=1000)
	p.add_argument("--tol", type=float, default=Constants.AXIOM_TOL)
	p.set_defaults(handler=cmd_axioms)

	p = sub.add_parser("edgeworth", parents=[common], help="Edgeworth CDF of the standardized regular mean on a grid.")
	p.add_argument("--generator", required=True)
	p.add_argument("--dist", required=True, help="Distribution spec, e.g. lognormal:2:1 or pareto:10.")
	p.add_argument("--n", type=int, required=True)
	p.add_argument("--grid", default="-3:3:61", help="lo:hi:steps")
	p.add_argument("--method", choices=("auto", "closed_form", "quadrature", "monte_carlo"), default="auto")
	p.add_argument("--literal-kurtosis", action="store_true", help="Use kappa^2 instead of gamma^2 on the third term.")
	p.add_argument("--clamped", action="store_true", help="Clip the expansion to [0, 1].")
	p.set_defaults(handler=cmd_edgeworth)

	p = sub.add_parser("simulate", parents=[common], help="Monte Carlo check of the universal CLT for one scenario.")
	p.add_argument("--dist", required=True)
	p.add_argument("--generator", required=True)
	p.add_argument("--n", type=int, default=1000)
	p.add_argument("--replicates", type=int, default=1000)
	p.add_argument("--hist", default=None, help="Write the histogram table here.")
	p.add_argument("--bins", type=int, default=50)
	p.add_argument("--statistic", choices=("standardized", "scaled"), default="standardized")
	p.add_argument("--plot", action="store_true", help="Render the histogram next to --hist as PNG.")
	p.set_defaults(handler=cmd_simulate)

	p = sub.add_parser("stability", parents=[common], help="Measured mean distance against the generator-stability bound.")
	p.add_argument("--g", required=True)
	p.add_argument("--h", required=True)
	p.add_argument("--box", required=True, help="Per-coordinate box lo:hi.")
	p.add_argument("--domain", default=None, help="Evaluation domain B (lo:hi) for slopes and ||g - h||; defaults to the box.")
	p.add_argument("--n", type=int, default=2)
	p.add_argument("--grid", type=int, default=201)
	p.set_defaults(handler=cmd_stability)

	p = sub.add_parser("portfolio", parents=[common], help="Wealth, geometric average return and the Markowitz approximation.")
	p.add_argument("--returns", required=True, help="CSV file or inline list of period returns.")
	p.add_argument("--w0", type=float, default=1.0)
	p.add_argument("--percent", action="store_true", help="Returns are given in percent.")
	p.add_argument("--ddof", type=int, choices=(0, 1), default=0, help="Variance divisor n - ddof.")
	p.set_defaults(handler=cmd_portfolio)

	for name, handler, help_text in (
		("reproduce-figure1", cmd_figure1, "All scenario x generator cells; per-cell files and summary.csv."),
		("reproduce-figure2", cmd_figure2, "Heavy-tailed LogNormal, arithmetic against geometric; summary.json."),
	):
		p = sub.add_parser(name, parents=[common], help=help_text)
		p.add_argument("--plot", action="store_true")
		p.add_argument("--statistic", choices=("standardized", "scaled"), default="standardized")
		p.add_argument("--replicates", type=int, default=None, help="Override the configured replicate count.")
		p.add_argument("--n", type=int, default=None, help="Override the configured sample size.")
		p.set_defaults(handler=handler)

	# If no arguments specified, print help and completely exit.
	if empty:
		parser.print_help()
		sys.exit(1)

	# Return parsed arguments.
	return parser.parse_args(argv)
