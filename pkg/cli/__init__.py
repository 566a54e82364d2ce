"""Typer command line for the mKdV5 laboratory"""

from .typer_cli import app, main

__all__ = ["app", "main"]
