import csv, json, pathlib

import numpy as np
import pandas as pd

from Constants import CSV_FLOAT_FORMAT
from backend.Errors import ConfigurationError, OutputError

ERROR_PREFIX = "Data input: "


def readValuesCSV(csvPath, delimiter=","):
	'''
	Read every numeric cell of the csv at the given path, row by row, in to a list.
	A first row without numbers is treated as a header and skipped.
	'''
	values = []
	try:
		with open(csvPath, "r", newline="") as file:
			readCSV = csv.reader(file, delimiter=delimiter)
			for nRow, row in enumerate(readCSV, start=1):
				cells = [c.strip() for c in row if c.strip() != ""]
				try:
					values.extend(float(c) for c in cells)
				except ValueError:
					if nRow == 1:
						continue
					raise ConfigurationError(ERROR_PREFIX + "non-numeric value in row %d of %s" % (nRow, csvPath))
	except OSError as error:
		raise ConfigurationError(ERROR_PREFIX + "cannot read %s: %s" % (csvPath, error.strerror))
	return values


def parseInlineValues(text):
	'''"1, 2, 3" or "1 2 3" -> [1.0, 2.0, 3.0]'''
	tokens = text.replace(",", " ").split()
	try:
		return [float(t) for t in tokens]
	except ValueError:
		raise ConfigurationError(ERROR_PREFIX + "could not read %r as a list of numbers" % text)


def readValues(source):
	'''A csv path if one exists at `source`, otherwise an inline list.'''
	if pathlib.Path(source).is_file():
		values = readValuesCSV(source)
	else:
		values = parseInlineValues(source)
	if len(values) == 0:
		raise ConfigurationError(ERROR_PREFIX + "no values in %r" % source)
	return np.asarray(values, dtype=float)


def _prepare(path):
	path = pathlib.Path(path)
	try:
		path.parent.mkdir(parents=True, exist_ok=True)
	except OSError as error:
		raise OutputError(path.parent, error.strerror or str(error))
	return path


def writeTable(table: pd.DataFrame, path):
	'''Write a table with '.' decimals and 17 significant digits.'''
	path = _prepare(path)
	try:
		table.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
	except OSError as error:
		raise OutputError(path, error.strerror or str(error))
	return path


def formatTable(table: pd.DataFrame):
	return table.to_csv(index=False, float_format=CSV_FLOAT_FORMAT)


def jsonable(value):
	'''numpy scalars and arrays to plain Python; nan and inf to None.'''
	if isinstance(value, dict):
		return {str(k): jsonable(v) for k, v in value.items()}
	if isinstance(value, (list, tuple)):
		return [jsonable(v) for v in value]
	if isinstance(value, np.ndarray):
		return [jsonable(v) for v in value.tolist()]
	if isinstance(value, (bool, np.bool_)):
		return bool(value)
	if isinstance(value, (int, np.integer)):
		return int(value)
	if isinstance(value, (float, np.floating)):
		value = float(value)
		return value if np.isfinite(value) else None
	return value


def formatJSON(payload):
	return json.dumps(jsonable(payload), indent=2, sort_keys=True, allow_nan=False)


def writeJSON(payload, path):
	path = _prepare(path)
	try:
		path.write_text(formatJSON(payload) + "\n")
	except OSError as error:
		raise OutputError(path, error.strerror or str(error))
	return path
