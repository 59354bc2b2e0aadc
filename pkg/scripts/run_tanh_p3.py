#!/usr/bin/env python
"""Run the perturbed double-integrator path scenario."""

import os
import sys

from edgesync.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
SCENARIO = os.path.join(HERE, "..", "scenarios", "tanh_p3.scn")

if __name__ == "__main__":
    sys.exit(main(["run", SCENARIO] + sys.argv[1:]))
