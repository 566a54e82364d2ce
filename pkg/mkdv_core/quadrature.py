"""
quadrature.py - Composite Gauss-Legendre rules on graded panels
"""

from functools import lru_cache
from typing import Callable, Iterable, Tuple

import numpy as np

DEFAULT_ORDER = 16


@lru_cache(maxsize=None)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the Gauss-Legendre rule on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_rule(breakpoints: Iterable[float], order: int = DEFAULT_ORDER) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite rule with one Gauss-Legendre panel between consecutive breakpoints.

    Args:
        breakpoints: Sorted panel edges
        order: Nodes per panel

    Returns:
        Flattened (nodes, weights) in panel order
    """
    edges = np.asarray(list(breakpoints), dtype=float)
    x, w = gauss_legendre(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = 0.5 * (hi + lo) + half * x[None, :]
    weights = half * w[None, :]
    return nodes.ravel(), weights.ravel()


def integrate(func: Callable[[np.ndarray], np.ndarray], breakpoints: Iterable[float], order: int = DEFAULT_ORDER):
    nodes, weights = panel_rule(breakpoints, order)
    return np.sum(func(nodes) * weights)


def graded_breakpoints(
    a: float,
    b: float,
    point: float,
    finest: float,
    ratio: float = 0.5,
) -> np.ndarray:
    """
    Panel edges on [a, b] refined geometrically toward ``point``.

    Edges are placed at point +/- span * ratio**k on each side until the
    distance drops below ``finest``. ``point`` itself is an edge when it lies
    strictly inside the interval.
    """
    edges = [a, b]
    point = min(max(point, a), b)
    if a < point < b:
        edges.append(point)
    for span, side in ((point - a, -1.0), (b - point, 1.0)):
        d = span * ratio
        while span > 0 and d > finest:
            edges.append(point + side * d)
            d *= ratio
    return merge_breakpoints(edges, a, b)


def merge_breakpoints(edges: Iterable[float], a: float, b: float, min_gap: float = 1e-14) -> np.ndarray:
    """Sorted unique edges clipped to [a, b], dropping near-duplicates."""
    pts = np.clip(np.asarray(list(edges), dtype=float), a, b)
    pts = np.unique(np.concatenate([pts, [a, b]]))
    keep = np.concatenate([[True], np.diff(pts) > min_gap * max(1.0, b - a)])
    pts = pts[keep]
    pts[-1] = b
    return pts
