#!/usr/bin/env python3
"""
Command registry for the mKdV5 laboratory runner
"""

import os
import subprocess
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

from rich.console import Console
from rich.table import Table

Handler = Callable[[List[str]], bool]

CATEGORY_ORDER = ("Setup", "Development", "Run", "Utility")


@dataclass(frozen=True)
class Command:
    name: str
    handler: Handler
    help_text: str
    category: str


class CommandRegistry:
    """Named runner commands, grouped by category for the help screen"""

    def __init__(self, project_root: Path, console: Optional[Console] = None):
        self.project_root = Path(project_root)
        self.console = console or Console(highlight=False)
        self._commands: Dict[str, Command] = {}

    @property
    def commands(self) -> Dict[str, Handler]:
        return {name: cmd.handler for name, cmd in self._commands.items()}

    def register(self, name: str, handler: Handler, help_text: str = "", category: str = "Utility"):
        if name in self._commands:
            raise ValueError(f"Command '{name}' is already registered")
        self._commands[name] = Command(name, handler, help_text, category)

    def grouped(self) -> Dict[str, List[Command]]:
        """Commands per category, known categories first, registration order within each"""
        groups: Dict[str, List[Command]] = {c: [] for c in CATEGORY_ORDER}
        for cmd in self._commands.values():
            groups.setdefault(cmd.category, []).append(cmd)
        return {c: cmds for c, cmds in groups.items() if cmds}

    def execute(self, name: str, args: Optional[Sequence[str]] = None) -> bool:
        command = self._commands.get(name)
        if command is None:
            self.console.print(f"❌ Unknown command: {name}", style="red")
            self.show_help()
            return False
        try:
            return bool(command.handler(list(args or [])))
        except Exception as e:
            self.console.print(f"❌ Command '{name}' raised: {e}", style="red")
            return False

    def show_help(self):
        self.console.print("📈 mKdV5 Lab - Cross-Platform Runner", style="bold")
        for category, cmds in self.grouped().items():
            table = Table(title=f"{category} Commands", title_justify="left", show_header=False, box=None)
            table.add_column("command", style="cyan", min_width=15)
            table.add_column("help")
            for cmd in cmds:
                table.add_row(cmd.name, cmd.help_text)
            self.console.print(table)
        self.console.print("Usage: python run.py [command] [args...]")

    def run_subprocess(self, cmd: Sequence[str], env: Optional[dict] = None) -> bool:
        """Run ``cmd`` from the project root; a non-zero exit is reported and returns False"""
        self.console.print(f"$ {' '.join(map(str, cmd))}", style="dim")
        try:
            subprocess.run(list(cmd), check=True, cwd=self.project_root, env=env)
            return True
        except subprocess.CalledProcessError as e:
            self.console.print(f"❌ Exit status {e.returncode}: {' '.join(map(str, cmd))}", style="red")
            return False
        except FileNotFoundError as e:
            self.console.print(f"❌ Cannot start {cmd[0]}: {e}", style="red")
            return False

    def env_with_project_path(self) -> dict:
        env = os.environ.copy()
        env["PYTHONPATH"] = os.pathsep.join(p for p in (str(self.project_root), env.get("PYTHONPATH", "")) if p)
        return env
