#!/usr/bin/env python3
"""
Unit tests for voronoi_forge.quadrature module.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from voronoi_forge.errors import ToleranceNotMet
from voronoi_forge.quadrature import (
    QuadratureConfig,
    adaptive_integrate,
    gauss_legendre,
    integrate,
    oscillation_panels,
)


class TestQuadratureConfig:
    """Test cases for the configuration model."""

    def test_defaults(self):
        """Test the default tolerances."""
        cfg = QuadratureConfig()
        assert cfg.abs_tol == 1e-10 and cfg.nodes_per_panel == 20

    def test_node_bound(self):
        """Test that nodes_per_panel is capped."""
        with pytest.raises(ValidationError, match="at most 200"):
            QuadratureConfig(nodes_per_panel=500)

    def test_tightened(self):
        """Test scaling both tolerances."""
        cfg = QuadratureConfig().tightened(0.1)
        assert cfg.abs_tol == pytest.approx(1e-11)
        assert cfg.rel_tol == pytest.approx(1e-11)


class TestIntegration:
    """Test cases for the fixed and adaptive rules."""

    def test_weights_sum(self):
        """Test that the weights integrate 1 over [-1, 1]."""
        _, weights = gauss_legendre(12)
        assert weights.sum() == pytest.approx(2.0)

    def test_fixed_polynomial(self):
        """Test that a single panel is exact on a low-degree polynomial."""
        assert integrate(lambda x: x**5, 0.0, 1.0, 1, 5) == pytest.approx(1 / 6)

    def test_adaptive_sine(self):
        """Test the integral of sin over [0, pi]."""
        result = adaptive_integrate(np.sin, 0.0, np.pi, QuadratureConfig())
        assert result.value == pytest.approx(2.0, abs=1e-12)
        assert result.error <= 1e-10

    def test_oscillatory(self):
        """Test a fast oscillation against its closed form."""
        result = adaptive_integrate(
            lambda x: np.exp(50j * x), 0.0, 1.0, QuadratureConfig(), min_panels=16
        )
        expected = (np.exp(50j) - 1) / 50j
        assert abs(result.value - expected) < 1e-10

    def test_vector_valued(self):
        """Test an integrand returning several components per node."""
        result = adaptive_integrate(
            lambda x: np.stack([x, x**2], axis=1), 0.0, 1.0, QuadratureConfig()
        )
        assert np.allclose(result.value, [0.5, 1 / 3])

    def test_empty_interval(self):
        """Test that hi <= lo integrates to zero."""
        assert adaptive_integrate(np.sin, 1.0, 1.0, QuadratureConfig()).value == 0.0

    def test_panel_cap(self):
        """Test that the panel cap raises ToleranceNotMet."""
        cfg = QuadratureConfig(max_panels=4)
        with pytest.raises(ToleranceNotMet, match="did not reach"):
            adaptive_integrate(lambda x: np.cos(1e4 * x), 0.0, 1.0, cfg)

    def test_oscillation_panels(self):
        """Test the panel count from a period."""
        assert oscillation_panels(100.0, 1.0, QuadratureConfig()) == 200
        with pytest.raises(ValueError, match="must be positive"):
            oscillation_panels(1.0, 0.0, QuadratureConfig())
