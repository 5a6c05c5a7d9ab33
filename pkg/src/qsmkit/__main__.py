# this_file: src/qsmkit/__main__.py
"""Entry point for python -m qsmkit."""

import sys

from qsmkit.cli import main

if __name__ == "__main__":
    sys.exit(main())
