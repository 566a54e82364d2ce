#!/usr/bin/env python3
"""
Cross-platform runner for the mKdV5 laboratory

    python run.py help
    python run.py test-fast
    python run.py cli scatter --nz 201
"""

import argparse
import sys
from pathlib import Path
from typing import Optional

from rich.console import Console

from run import COMMAND_GROUPS, CommandRegistry


def build_registry(console: Optional[Console] = None) -> CommandRegistry:
    registry = CommandRegistry(Path(__file__).resolve().parent, console)
    for group in COMMAND_GROUPS:
        group(registry).register()
    return registry


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Cross-platform runner for the mKdV5 laboratory")
    parser.add_argument("command", nargs="?", default="help", help="Command to run (default: help)")
    parser.add_argument("args", nargs=argparse.REMAINDER, help="Arguments passed through to the command")
    ns = parser.parse_args(argv)

    registry = build_registry()
    if ns.command == "help":
        registry.show_help()
        return 0
    return 0 if registry.execute(ns.command, ns.args) else 1


if __name__ == "__main__":
    sys.exit(main())
