import hashlib
import logging
import sys
from typing import Optional

import numpy as np
from rich.console import Console
from rich.logging import RichHandler


def setup_logging(level: str = "INFO", console: Optional[Console] = None) -> logging.Logger:
    """
    Install a single Rich handler on the root logger.

    Args:
        level: Logging level name
        console: Console to render into (stderr console when omitted)

    Returns:
        The package logger
    """
    handler = RichHandler(
        console=console or Console(stderr=True),
        show_path=False,
        rich_tracebacks=True,
    )
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        datefmt="[%X]",
        handlers=[handler],
        force=True,
    )
    return logging.getLogger("mkdv_core")


def get_system_info() -> dict:
    """Get system and library information for run manifests."""
    import platform

    import pydantic
    import scipy

    from . import __version__

    return {
        "platform": platform.system(),
        "python_version": sys.version.split()[0],
        "architecture": platform.architecture()[0],
        "mkdv_core": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "pydantic": pydantic.VERSION,
    }


def config_hash(payload: str) -> str:
    """SHA-256 hex digest of a canonical JSON payload."""
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


def is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


def wrap_angle(angle):
    """
    Reduce angles to the principal interval (-pi, pi].

    Args:
        angle: Scalar or array of angles in radians

    Returns:
        Reduced angle(s), same shape as the input
    """
    reduced = np.pi - np.mod(np.pi - np.asarray(angle, dtype=float), 2.0 * np.pi)
    if np.ndim(reduced) == 0:
        return float(reduced)
    return reduced

