# Every failure the CLI can hit must end as "pyregmean: error: ..." on stderr
# with the exit code of its error class, never as a traceback.

import unittest
from sys import path as sys_path
from os import getcwd
sys_path.append(getcwd())

from contextlib import redirect_stderr, redirect_stdout
from io import StringIO
from pathlib import Path
from tempfile import TemporaryDirectory

from backend.CLI import cliMain


def exit_code(*argv):
	err = StringIO()
	with redirect_stdout(StringIO()), redirect_stderr(err):
		code = cliMain(list(argv))
	return code, err.getvalue()


class exit_codes(unittest.TestCase):

	def expect(self, code, *argv):
		got, message = exit_code(*argv)
		self.assertEqual(got, code, "%s -> %s" % (argv, message))
		self.assertTrue(message.startswith("pyregmean: error: "), message)

	def test_configuration_errors(self):
		self.expect(2, "mean", "--generator", "sqrt", "--data", "1,2")
		self.expect(2, "mean", "--generator", "power:-1", "--data", "1,2")
		self.expect(2, "mean", "--generator", "power", "--data", "1,2")
		self.expect(2, "mean", "--generator", "log", "--data", "0,1")
		self.expect(2, "mean", "--generator", "identity", "--data", "one,two")
		self.expect(2, "simulate", "--dist", "normal:0:1", "--generator", "identity", "--n", "10", "--replicates", "5")
		self.expect(2, "simulate", "--dist", "uniform:2:1", "--generator", "identity", "--n", "10", "--replicates", "5")
		self.expect(2, "axioms", "--generator", "log", "--n", "3", "--n0", "5")
		self.expect(2, "edgeworth", "--generator", "log", "--dist", "gamma:2:1", "--n", "10", "--grid", "0:1")

	def test_domain_errors(self):
		self.expect(2, "portfolio", "--returns", "0.5,-1")
		self.expect(2, "stability", "--g", "log", "--h", "identity", "--box=-1:1")
		self.expect(2, "edgeworth", "--generator", "reciprocal", "--dist", "uniform:0:1", "--n", "10")

	def test_numeric_errors(self):
		self.expect(3, "edgeworth", "--dist", "pareto:3", "--generator", "identity", "--n", "100")
		self.expect(3, "mean", "--generator", "exp", "--data", "1000,1000")
		self.expect(3, "edgeworth", "--dist", "gamma:0.5:1", "--generator", "reciprocal", "--n", "100")

	def test_output_errors(self):
		with TemporaryDirectory() as tmp:
			blocker = Path(tmp) / "file"
			blocker.write_text("x")
			self.expect(2, "portfolio", "--returns", "0.1,0.2", "--out", str(blocker / "summary.json"))

	def test_success_is_zero(self):
		self.assertEqual(exit_code("mean", "--generator", "exp", "--data", "1000,1000", "--stable")[0], 0)


if __name__ == "__main__":
	unittest.main()
