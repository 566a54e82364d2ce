#!/usr/bin/env python3
"""
Command handlers for the mKdV5 laboratory runner

Each group registers its own commands; pytest invocations are declared as
profiles so the test commands differ only in their extra arguments.
"""

import shutil
import sys
from typing import Dict, List, Tuple

from .command_registry import CommandRegistry, Handler

PYTEST_PROFILES: Dict[str, Tuple[List[str], str]] = {
    "test": (["-v"], "Run all tests"),
    "test-fast": (["-m", "not slow"], "Run fast tests only"),
    "test-oracle": (["-m", "oracle"], "Run closed-form oracle tests"),
    "test-cov": (
        ["-m", "not slow", "--cov=mkdv_core", "--cov-report=html", "--cov-report=term-missing"],
        "Run fast tests with coverage",
    ),
    "test-parallel": (["-n", "auto"], "Run tests in parallel"),
}

CLEAN_DIRS = ("runs", "htmlcov", ".pytest_cache")


def lab_command(*argv: str) -> List[str]:
    return [sys.executable, "cli_main.py", *argv]


class SetupCommands:
    """Dependency installation and environment validation"""

    def __init__(self, registry: CommandRegistry):
        self.registry = registry

    def register(self):
        self.registry.register("install", self.install, "Install dependencies", "Setup")
        self.registry.register("install-dev", self.install_dev, "Install in development mode", "Setup")
        self.registry.register("validate", self.validate, "Validate project setup", "Setup")

    def install(self, args: List[str]) -> bool:
        return self.registry.run_subprocess([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])

    def install_dev(self, args: List[str]) -> bool:
        return self.registry.run_subprocess([sys.executable, "-m", "pip", "install", "-e", "."])

    def validate(self, args: List[str]) -> bool:
        return self.registry.run_subprocess(
            [sys.executable, "scripts/validate_setup.py"], env=self.registry.env_with_project_path()
        )


class PytestCommands:
    """One runner command per pytest profile"""

    def __init__(self, registry: CommandRegistry):
        self.registry = registry

    def register(self):
        for name, (_, help_text) in PYTEST_PROFILES.items():
            self.registry.register(name, self.profile(name), help_text, "Development")

    def profile(self, name: str) -> Handler:
        extra, _ = PYTEST_PROFILES[name]

        def handler(args: List[str]) -> bool:
            return self.registry.run_subprocess([sys.executable, "-m", "pytest", "tests/", *extra, *args])

        return handler


class LabCommands:
    """Shortcuts into the Typer CLI"""

    def __init__(self, registry: CommandRegistry):
        self.registry = registry

    def register(self):
        self.registry.register("cli", self.cli, "Run a CLI subcommand", "Run")
        self.registry.register("verify", self.verify, "Run every verification suite", "Run")
        self.registry.register("compare", self.compare, "Run the acceptance comparison", "Run")

    def cli(self, args: List[str]) -> bool:
        return self.registry.run_subprocess(lab_command(*(args or ["--help"])))

    def verify(self, args: List[str]) -> bool:
        return self.registry.run_subprocess(lab_command("verify", "--suite", "all", *args))

    def compare(self, args: List[str]) -> bool:
        self.registry.console.print("📈 The default comparison evolves to t = 200 on 2^16 points; expect a long run")
        return self.registry.run_subprocess(lab_command("compare", *args))


class UtilityCommands:
    """Housekeeping"""

    def __init__(self, registry: CommandRegistry):
        self.registry = registry

    def register(self):
        self.registry.register("clean", self.clean, "Remove caches, coverage and run outputs", "Utility")
        self.registry.register("check", self.check, "Validate, run fast tests and verify", "Utility")

    def clean(self, args: List[str]) -> bool:
        root = self.registry.project_root
        for cache in list(root.rglob("__pycache__")):
            shutil.rmtree(cache, ignore_errors=True)
        for name in CLEAN_DIRS:
            shutil.rmtree(root / name, ignore_errors=True)
        self.registry.console.print("✅ Cleanup complete", style="green")
        return True

    def check(self, args: List[str]) -> bool:
        for name in ("validate", "test-fast", "verify"):
            if not self.registry.execute(name, []):
                self.registry.console.print(f"❌ Stopped at '{name}'", style="red")
                return False
        self.registry.console.print("✅ All checks passed", style="green")
        return True
