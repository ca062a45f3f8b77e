#!/usr/bin/env python3
"""
Unit tests for voronoi_forge.lfunction module.
"""

import math

import pytest

from voronoi_forge.characters import (
    parse_character,
    primitive_characters,
    quadratic_character,
)
from voronoi_forge.errors import AccuracyNotCertified, NotPrimitive
from voronoi_forge.lfunction import (
    completed_L,
    dirichlet_series,
    functional_equation_check,
    l_value,
    mellin_gamma,
)
from voronoi_forge.modforms import eigenform_by_label


@pytest.fixture(scope="module")
def delta():
    return eigenform_by_label("12")


class TestGammaFactor:
    """Test cases for the archimedean factor."""

    def test_known_value(self):
        """Test Gamma(6) (2 pi)^-6 at s = 1/2, k = 12."""
        expected = 120 / (2 * math.pi) ** 6
        assert mellin_gamma(12, 0.5) == pytest.approx(expected, rel=1e-12)

    def test_recurrence(self):
        """Test Gamma(w + 1) = w Gamma(w) after the (2 pi) shift."""
        w = 1 + 1j + 11 / 2
        ratio = mellin_gamma(12, 2 + 1j) / mellin_gamma(12, 1 + 1j)
        assert ratio == pytest.approx(w / (2 * math.pi), rel=1e-12)


class TestWindow:
    """Test cases for the certified window."""

    def test_large_modulus(self, delta):
        """Test moduli above 7 are refused."""
        chi = primitive_characters(8)[0]
        with pytest.raises(AccuracyNotCertified, match="outside the certified window"):
            completed_L(delta, chi, 0.5)

    def test_large_height(self, delta):
        """Test |Im s| above 5 is refused."""
        with pytest.raises(AccuracyNotCertified, match="outside the certified window"):
            completed_L(delta, quadratic_character(3), 0.5 + 6j)

    def test_imprimitive(self, delta):
        """Test imprimitive characters are refused."""
        with pytest.raises(NotPrimitive):
            completed_L(delta, parse_character("4"), 0.5)

    def test_series_half_plane(self, delta):
        """Test the Dirichlet series only converges for Re s > 1."""
        with pytest.raises(AccuracyNotCertified, match="Re s > 1"):
            dirichlet_series(delta, quadratic_character(3), 1.0)


class TestLValues:
    """Test cases for certified L-values."""

    def test_series_tail(self, delta):
        """Test the truncated series for a far-right point has a tiny tail."""
        value, tail = dirichlet_series(delta, quadratic_character(3), 4)
        assert tail < 1e-8
        assert abs(value - 1) < 0.5

    def test_series_tail_partial_summation(self, delta):
        """Test the tail at s = 2 comes from the partial sums, not the d(n) envelope."""
        _, tail = dirichlet_series(delta, quadratic_character(3), 2)
        envelope = 2 * 2000**-1 * (math.log(2000) + 1)
        assert 0 < tail < envelope / 10

    @pytest.mark.slow
    def test_series_tail_near_line_two(self):
        """Test the partial-summation tail at s = 2 beats the d(n) envelope."""
        form = eigenform_by_label("12", 10_000)
        _, tail = dirichlet_series(form, quadratic_character(3), 2)
        envelope = 2 * 10_000**-1 * (math.log(10_000) + 1)
        assert tail < envelope / 100
        assert tail < 1e-5

    @pytest.mark.slow
    @pytest.mark.parametrize("s", [2, 2 + 1j])
    def test_matches_series(self, s):
        """Test the integral representation against the Dirichlet series on Re s = 2."""
        form = eigenform_by_label("12", 10_000)
        chi = quadratic_character(3)
        result = completed_L(form, chi, s)
        series, tail = dirichlet_series(form, chi, s)
        assert result.error_bound / abs(result.gamma_factor) <= 1e-6
        assert abs(result.l_value - series) <= tail + 1e-6
        assert result.working_dps >= 15

    @pytest.mark.slow
    @pytest.mark.parametrize("s", [0.5, 0.5 + 1j])
    def test_functional_equation(self, delta, s):
        """Test L(s) against the root number times the dual value."""
        result = functional_equation_check(delta, quadratic_character(3), s)
        assert result.residual < 1e-4

    @pytest.mark.slow
    def test_l_value_is_completed_over_gamma(self, delta):
        """Test l_value is Lambda(s)/gamma(s)."""
        chi = quadratic_character(5)
        completed = completed_L(delta, chi, 0.5)
        assert l_value(delta, chi, 0.5) == pytest.approx(completed.l_value, rel=1e-12)
