#!/usr/bin/env python3
"""
Developer runner for the mKdV5 laboratory
"""

from .command_registry import Command, CommandRegistry
from .command_handlers import (
    PYTEST_PROFILES,
    LabCommands,
    PytestCommands,
    SetupCommands,
    UtilityCommands,
)

COMMAND_GROUPS = (SetupCommands, PytestCommands, LabCommands, UtilityCommands)

__all__ = [
    "COMMAND_GROUPS",
    "Command",
    "CommandRegistry",
    "LabCommands",
    "PYTEST_PROFILES",
    "PytestCommands",
    "SetupCommands",
    "UtilityCommands",
]
