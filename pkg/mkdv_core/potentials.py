"""
potentials.py - Real potentials q(x) for the Zakharov-Shabat problem
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.signal import resample

from .exceptions import ValidationError

logger = logging.getLogger(__name__)

TRUNCATION_THRESHOLD = 1e-14


@dataclass(frozen=True)
class Potential:
    """
    Real potential supported (to truncation accuracy) on [left, right].

    ``evaluator`` maps an array of positions to real values. ``breakpoints``
    lists interior points where q is not smooth; integrators never step
    across them.
    """

    name: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    left: float
    right: float
    breakpoints: Tuple[float, ...] = ()
    samples: Optional[Tuple[np.ndarray, np.ndarray]] = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if not self.right > self.left:
            raise ValidationError(f"Empty potential window [{self.left}, {self.right}]")

    def __call__(self, x) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(x, dtype=float)), dtype=float)

    @property
    def segments(self) -> np.ndarray:
        """Edges of the smooth pieces covering [left, right]."""
        inner = [b for b in self.breakpoints if self.left < b < self.right]
        return np.array([self.left, *sorted(inner), self.right])

    def endpoint_level(self) -> float:
        """max |q| just outside the two window ends."""
        eps = 1e-9 * (self.right - self.left)
        ends = np.array([self.left - eps, self.right + eps])
        return float(np.max(np.abs(self(ends))))

    def is_zero(self) -> bool:
        return self.name == "zero"


def zero(half_width: float = 1.0) -> Potential:
    return Potential("zero", lambda x: np.zeros_like(x), -half_width, half_width)


def gaussian(amplitude: float, width: float = 1.0, threshold: float = TRUNCATION_THRESHOLD) -> Potential:
    """q(x) = amplitude * exp(-(x/width)^2), truncated where it drops below ``threshold``."""
    if width <= 0:
        raise ValidationError(f"Gaussian width must be positive, got {width}")
    if amplitude == 0:
        return zero()
    half = width * math.sqrt(max(math.log(abs(amplitude) / threshold), 1.0))
    return Potential(
        f"gaussian:{amplitude:g},{width:g}",
        lambda x: amplitude * np.exp(-((x / width) ** 2)),
        -half,
        half,
    )


def box(height: float, width: float = 1.0) -> Potential:
    """q = height on [0, width], zero elsewhere."""
    if width <= 0:
        raise ValidationError(f"Box width must be positive, got {width}")
    return Potential(
        f"box:{height:g},{width:g}",
        lambda x: np.where((x >= 0.0) & (x <= width), float(height), 0.0),
        0.0,
        float(width),
        breakpoints=(0.0, float(width)),
    )


def sech(amplitude: float, threshold: float = TRUNCATION_THRESHOLD) -> Potential:
    if amplitude == 0:
        return zero()
    half = max(math.log(2.0 * abs(amplitude) / threshold), 1.0)
    return Potential(
        f"sech:{amplitude:g}",
        lambda x: amplitude / np.cosh(x),
        -half,
        half,
    )


def from_samples(
    x: np.ndarray,
    q: np.ndarray,
    threshold: float = 1e-10,
    upsample: int = 8,
    name: str = "sampled",
) -> Potential:
    """
    Potential from samples on a uniform grid.

    The samples are spectrally upsampled, cropped to the window where
    |q| exceeds ``threshold`` and evaluated by a cubic spline.

    Args:
        x: Uniform, increasing positions
        q: Real samples
        threshold: Truncation level defining the support window
        upsample: Spectral upsampling factor (1 disables it)
        name: Label

    Returns:
        Potential
    """
    x = np.asarray(x, dtype=float)
    q = np.asarray(q, dtype=float)
    if x.ndim != 1 or x.shape != q.shape or x.size < 4:
        raise ValidationError("Sampled potential needs matching 1-D arrays of at least 4 points")
    dx = np.diff(x)
    if np.any(dx <= 0) or np.ptp(dx) > 1e-9 * abs(dx[0]) * x.size:
        raise ValidationError("Sampled potential must be on a uniform increasing grid")
    if not np.all(np.isfinite(q)):
        raise ValidationError("Sampled potential contains non-finite values")

    h = float(dx[0])
    if upsample > 1:
        fine = resample(q, q.size * upsample)
        xf = x[0] + (h / upsample) * np.arange(fine.size)
    else:
        fine, xf = q, x

    above = np.flatnonzero(np.abs(fine) > threshold)
    if above.size == 0:
        logger.debug("Sampled potential below threshold everywhere; treating as zero")
        return zero()
    pad = 4 * upsample
    lo = max(above[0] - pad, 0)
    hi = min(above[-1] + pad, fine.size - 1)
    spline = CubicSpline(xf[lo : hi + 1], fine[lo : hi + 1])
    logger.debug("Sampled potential window [%g, %g] (%d fine points)", xf[lo], xf[hi], hi - lo + 1)
    return Potential(name, spline, float(xf[lo]), float(xf[hi]), samples=(x, q))


def parse_descriptor(descriptor: str) -> Potential:
    """
    Build a potential from ``gaussian:A,w``, ``box:h,w``, ``sech:A``, ``zero``
    or the path of a CSV file with header ``x,q``.
    """
    text = descriptor.strip()
    kind, _, args = text.partition(":")
    kind = kind.lower()
    builders = {"gaussian": gaussian, "box": box, "sech": sech}
    if kind == "zero" and not args:
        return zero()
    if kind in builders:
        try:
            values = [float(v) for v in args.split(",") if v.strip()]
        except ValueError as e:
            raise ValidationError(f"Bad potential parameters in '{descriptor}': {e}") from e
        if not values:
            raise ValidationError(f"Missing parameters in '{descriptor}'")
        return builders[kind](*values)

    from .storage import read_field_csv

    x, q = read_field_csv(text)
    return from_samples(x, q, name=text)


def sample_periodic(descriptor: str, n_points: int, length: float) -> Tuple[np.ndarray, np.ndarray]:
    """Grid x_j = -L/2 + j L/N and the descriptor's potential sampled on it."""
    x = -0.5 * length + (length / n_points) * np.arange(n_points)
    text = descriptor.strip()
    kind = text.partition(":")[0].lower()
    if kind in ("gaussian", "box", "sech", "zero"):
        pot = parse_descriptor(text)
        inside = (x >= pot.left) & (x <= pot.right)
        q = np.zeros(n_points)
        q[inside] = pot(x[inside])
        return x, q

    from .storage import read_field_csv

    xs, qs = read_field_csv(text)
    q = np.interp(x, xs, qs, left=0.0, right=0.0)
    return x, q
