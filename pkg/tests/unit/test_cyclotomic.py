#!/usr/bin/env python3
"""
Unit tests for voronoi_forge.cyclotomic module.
Tests exact arithmetic and zero testing in Z[zeta_L].
"""

import cmath

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from voronoi_forge.cyclotomic import (
    CyclotomicElement,
    common_order,
    cyc_from_exponents,
    cyc_int,
    cyc_reduce,
    cyc_root,
    cyc_sum,
    cyc_zero,
    cyclotomic_polynomial,
)
from voronoi_forge.errors import OverflowPolicyError

elements = st.builds(
    lambda L, coeffs: cyc_from_exponents(L, list(range(len(coeffs))), coeffs),
    st.sampled_from([1, 3, 4, 5, 6, 12]),
    st.lists(st.integers(min_value=-20, max_value=20), min_size=1, max_size=6),
)


class TestCyclotomicPolynomial:
    """Test cases for Phi_L."""

    def test_small_orders(self):
        """Test the first few cyclotomic polynomials."""
        assert cyclotomic_polynomial(1) == (-1, 1)
        assert cyclotomic_polynomial(3) == (1, 1, 1)
        assert cyclotomic_polynomial(4) == (1, 0, 1)
        assert cyclotomic_polynomial(6) == (1, -1, 1)

    def test_degree_is_phi(self):
        """Test deg Phi_12 = 4."""
        assert len(cyclotomic_polynomial(12)) == 5


class TestZeroTest:
    """Test cases for the exact zero test."""

    def test_sum_of_cube_roots(self):
        """Test 1 + zeta_3 + zeta_3^2 = 0."""
        assert cyc_from_exponents(3, [0, 1, 2]).is_zero()

    def test_primitive_twelfth_roots(self):
        """Test that the primitive 12th roots sum to mu(12) = 0."""
        assert cyc_from_exponents(12, [1, 5, 7, 11]).is_zero()

    def test_nonzero(self):
        """Test that a single root is not zero."""
        assert not cyc_root(7, 3).is_zero()
        assert not cyc_int(1, 1).is_zero()

    def test_i_squared(self):
        """Test zeta_4^2 = -1 across different orders."""
        assert (cyc_root(4, 1) * cyc_root(4, 1)).equals(cyc_int(2, -1))

    def test_overflow_policy(self):
        """Test that huge orders are refused."""
        with pytest.raises(OverflowPolicyError, match="exceeds the configured bound"):
            common_order(999_983, 1_000_003)

    def test_big_coefficients(self):
        """Test that arithmetic switches to Python ints without losing exactness."""
        x = cyc_root(5, 1) * (2**61)
        y = x * (2**10)
        assert y.coeffs.dtype == object
        assert (y - x * (2**10)).is_zero()

    @given(elements)
    def test_self_difference(self, x):
        """Test x - x = 0."""
        assert (x - x).is_zero()

    @given(elements, elements)
    def test_product_embeds(self, x, y):
        """Test that embedding is a ring homomorphism."""
        assert abs((x * y).embed() - x.embed() * y.embed()) < 1e-8

    @given(elements)
    def test_conjugation(self, x):
        """Test that conj embeds to the complex conjugate."""
        assert abs(x.conj().embed() - x.embed().conjugate()) < 1e-9


class TestElementBasics:
    """Test cases for construction, lifting and reduction."""

    def test_length_mismatch(self):
        """Test that a wrong coefficient length is rejected."""
        with pytest.raises(ValueError, match="expected 3"):
            CyclotomicElement(3, np.zeros(4, dtype=np.int64))

    def test_lift(self):
        """Test lifting zeta_3 into order 6."""
        lifted = cyc_root(3, 1).lift(6)
        assert lifted.order == 6 and lifted.coeffs[2] == 1

    def test_bad_lift(self):
        """Test that lifting to a non-multiple fails."""
        with pytest.raises(ValueError, match="Cannot lift"):
            cyc_root(3, 1).lift(4)

    def test_embed(self):
        """Test the complex value of zeta_8."""
        assert abs(cyc_root(8, 1).embed() - cmath.exp(2j * cmath.pi / 8)) < 1e-15

    def test_reduce(self):
        """Test zeta_3^2 = -1 - zeta_3 in the power basis."""
        assert cyc_reduce(cyc_root(3, 2)) == (-1, -1)

    def test_sum_of_nothing(self):
        """Test that the empty sum is zero."""
        assert cyc_sum([]).is_zero()
        assert cyc_zero(5).embed() == 0
