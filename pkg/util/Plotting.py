import matplotlib
matplotlib.use("Agg")
from matplotlib import pyplot as plt

from backend.Errors import OutputError


def plot_histogram(table, path, title=""):
	'''
	Render a hist.csv table: bars scaled to a density, with the limiting
	normal density drawn through the bin midpoints.
	'''
	widths = table["bin_hi"] - table["bin_lo"]
	total = table["count"].sum()
	density = table["count"] / (total * widths)
	mids = 0.5 * (table["bin_lo"] + table["bin_hi"])

	fig, ax = plt.subplots(figsize=(5, 4))
	ax.bar(table["bin_lo"], density, width=widths, align="edge", alpha=0.5, edgecolor="black", linewidth=0.3)
	ax.plot(mids, table["normal_density_at_mid"], color="red")
	ax.set_title(title)
	ax.set_ylabel("density")
	fig.tight_layout()
	try:
		fig.savefig(path, dpi=120)
	except OSError as error:
		raise OutputError(path, error.strerror or str(error))
	finally:
		plt.close(fig)
	return path
