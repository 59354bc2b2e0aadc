#!/usr/bin/env python
"""Sweep coupling-gain multipliers on the triangle scenario."""

import os
import sys

from edgesync.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
SCENARIO = os.path.join(HERE, "..", "scenarios", "linear_c3.scn")
DEFAULT_MULTIPLIERS = ["1.0", "2.0", "5.0"]

if __name__ == "__main__":
    extra = sys.argv[1:] or ["--multipliers"] + DEFAULT_MULTIPLIERS
    sys.exit(main(["sweep", SCENARIO] + extra))
