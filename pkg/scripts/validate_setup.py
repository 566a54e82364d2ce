#!/usr/bin/env python3
"""
Environment and layout validation for the mKdV5 laboratory

Each check returns None when it passes, or a short description of what is wrong.
"""

import math
import sys
from pathlib import Path
from typing import Callable, List, Optional, Tuple

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT))

from rich.console import Console  # noqa: E402
from rich.table import Table  # noqa: E402

REQUIRED_PACKAGES = {"numpy", "scipy", "pydantic", "typer", "rich", "pytest"}
PACKAGES = ("mkdv_core", "cli", "run", "tests")
CORE_MODULES = (
    "phase", "scattering", "evolution", "scalar_rhp", "model_rhp",
    "asymptotics", "harness", "storage", "verification",
)

console = Console(highlight=False)
Check = Callable[[], Optional[str]]


def check_python() -> Optional[str]:
    if sys.version_info < (3, 10):
        return f"Python 3.10+ required, found {sys.version.split()[0]}"
    return None


def check_requirements() -> Optional[str]:
    path = ROOT / "requirements.txt"
    try:
        raw = path.read_bytes()
    except OSError as e:
        return f"cannot read requirements.txt: {e}"
    if raw.startswith((b"\xff\xfe", b"\xfe\xff")) or b"\x00" in raw:
        return "requirements.txt is not UTF-8"
    pins = {}
    for line in raw.decode("utf-8").splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        name, sep, version = line.partition("==")
        if not sep or not version:
            return f"unpinned requirement: {line}"
        pins[name.strip().lower()] = version.strip()
    missing = REQUIRED_PACKAGES - set(pins)
    if missing:
        return f"missing requirements: {', '.join(sorted(missing))}"
    return None


def check_layout() -> Optional[str]:
    absent = [f"{p}/__init__.py" for p in PACKAGES if not (ROOT / p / "__init__.py").is_file()]
    absent += [f"mkdv_core/{m}.py" for m in CORE_MODULES if not (ROOT / "mkdv_core" / f"{m}.py").is_file()]
    if absent:
        return f"missing: {', '.join(absent)}"
    return None


def check_imports() -> Optional[str]:
    try:
        import mkdv_core  # noqa: F401
        from cli.typer_cli import app  # noqa: F401
    except ImportError as e:
        return f"import failed: {e}"
    return None


def check_config() -> Optional[str]:
    from mkdv_core import ExperimentConfig

    cfg = ExperimentConfig()
    if cfg.length < 2.5 * 80.0 * cfg.z0**4 * max(cfg.schedule):
        return "default domain does not hold the comparison schedule"
    return None


def check_numerics() -> Optional[str]:
    from mkdv_core import parse_descriptor, scatter, verify

    report = verify("phase")
    if not report.passed:
        return f"phase suite failed: {', '.join(c.name for c in report.failures())}"
    sd = scatter(parse_descriptor("box:1,1"), [0.0])
    if abs(abs(sd.r[0]) - math.tanh(1.0)) > 1e-8:
        return f"|r(0)| for box:1,1 is {abs(sd.r[0]):.12f}, expected tanh(1)"
    return None


CHECKS: List[Tuple[str, Check]] = [
    ("Python version", check_python),
    ("Requirements", check_requirements),
    ("Package layout", check_layout),
    ("Imports", check_imports),
    ("Default config", check_config),
    ("Numerics", check_numerics),
]


def run_checks(checks: List[Tuple[str, Check]] = CHECKS) -> List[Tuple[str, Optional[str]]]:
    results = []
    for name, check in checks:
        try:
            problem = check()
        except Exception as e:
            problem = f"{type(e).__name__}: {e}"
        results.append((name, problem))
        if name == "Imports" and problem:
            break
    return results


def main() -> int:
    console.print("🔍 mKdV5 Lab - Setup Validation", style="bold")
    results = run_checks()

    table = Table(show_header=True, header_style="bold")
    table.add_column("Check")
    table.add_column("Status")
    table.add_column("Detail")
    for name, problem in results:
        table.add_row(name, "❌" if problem else "✅", problem or "")
    console.print(table)

    if any(problem for _, problem in results) or len(results) < len(CHECKS):
        console.print("💡 Run from a checkout with: pip install -r requirements.txt", style="yellow")
        return 1
    console.print("✅ All validations passed!", style="green")
    return 0


if __name__ == "__main__":
    sys.exit(main())
