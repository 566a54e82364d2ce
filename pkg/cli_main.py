#!/usr/bin/env python3
"""
Run the mKdV5 laboratory CLI from a source checkout: python cli_main.py --help
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from cli.typer_cli import app  # noqa: E402

if __name__ == "__main__":
    app(prog_name="mkdv5-lab")
