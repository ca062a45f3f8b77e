#!/usr/bin/env python3
"""
Panelled Gauss-Legendre quadrature for smooth oscillatory integrands.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple, Union

import numpy as np
from pydantic import BaseModel, Field, field_validator

from .errors import ToleranceNotMet

Integrand = Callable[[np.ndarray], np.ndarray]


class QuadratureConfig(BaseModel):
    """Tolerances and panel policy shared by every oscillatory integral."""

    abs_tol: float = Field(default=1e-10, gt=0, lt=1)
    rel_tol: float = Field(default=1e-10, gt=0, lt=1)
    max_panels: int = Field(default=1 << 16, gt=0)
    nodes_per_panel: int = Field(default=20, gt=1)
    # panel width as a fraction of the local period of the fastest phase
    oscillation_safety: float = Field(default=0.5, gt=0)
    # integration-by-parts margin for decay-based truncation
    safety: float = Field(default=10.0, ge=1)

    @field_validator("nodes_per_panel")
    @classmethod
    def _bounded_nodes(cls, value: int) -> int:
        if value > 200:
            raise ValueError(f"nodes_per_panel must be at most 200, got {value}")
        return value

    def tightened(self, factor: float) -> "QuadratureConfig":
        return self.model_copy(
            update={"abs_tol": self.abs_tol * factor, "rel_tol": self.rel_tol * factor}
        )


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point rule on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(n)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def panel_nodes(
    lo: float, hi: float, panels: int, n: int
) -> Tuple[np.ndarray, np.ndarray]:
    """Flattened nodes and weights of `panels` equal Gauss-Legendre panels."""
    nodes, weights = gauss_legendre(n)
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return x, w


def integrate(fn: Integrand, lo: float, hi: float, panels: int, n: int) -> np.ndarray:
    """Fixed-panel rule; fn maps the node vector to shape (nodes, ...)."""
    x, w = panel_nodes(lo, hi, panels, n)
    return np.tensordot(w, fn(x), axes=(0, 0))


@dataclass
class QuadratureResult:
    value: Union[complex, float, np.ndarray]
    panels: int
    error: float


def adaptive_integrate(
    fn: Integrand,
    lo: float,
    hi: float,
    cfg: QuadratureConfig,
    min_panels: int = 4,
) -> QuadratureResult:
    """Double the panel count until two successive rules agree."""
    if hi <= lo:
        return QuadratureResult(value=0.0, panels=0, error=0.0)
    n = cfg.nodes_per_panel
    panels = max(1, min_panels)
    if panels > cfg.max_panels:
        raise ToleranceNotMet(
            f"Oscillation needs {panels} panels on [{lo}, {hi}], "
            f"above max_panels={cfg.max_panels}"
        )
    previous = integrate(fn, lo, hi, panels, n)
    while True:
        panels *= 2
        if panels > cfg.max_panels:
            raise ToleranceNotMet(
                f"Quadrature on [{lo}, {hi}] did not reach abs_tol={cfg.abs_tol} "
                f"within {cfg.max_panels} panels"
            )
        current = integrate(fn, lo, hi, panels, n)
        error = float(np.max(np.abs(current - previous)))
        scale = float(np.max(np.abs(current))) if np.size(current) else 0.0
        if error <= max(cfg.abs_tol, cfg.rel_tol * scale):
            value = current if np.ndim(current) else current.item()
            return QuadratureResult(value=value, panels=panels, error=error)
        previous = current


def oscillation_panels(length: float, period: float, cfg: QuadratureConfig) -> int:
    """Panels needed so each is at most oscillation_safety * period wide."""
    if period <= 0:
        raise ValueError(f"Oscillation period must be positive, got {period}")
    return max(4, int(np.ceil(length / (cfg.oscillation_safety * period))))
