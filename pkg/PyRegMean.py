#!/usr/bin/env python3
import sys
from Constants import version, versiondate

def main():
	if len(sys.argv) >= 2:
		from backend.CLI import cliMain
		# stdout carries the results, so the banner goes to stderr
		print("PyRegMean v" + version + " (CLI, " + versiondate + ")\n", file=sys.stderr)
		sys.exit(cliMain())
	else:
		from backend.CLI import _parse_args
		_parse_args(empty=True)

if __name__ == "__main__":
	main()
