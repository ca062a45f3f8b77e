#!/usr/bin/env python3
"""
Unit tests for voronoi_forge.modforms module.
Tests exact q-expansions, Hecke operators and eigenforms.
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from voronoi_forge.errors import InvalidParams, OutOfRange, PrecisionExhausted
from voronoi_forge.modforms import (
    QExpansion,
    QuadraticNumber,
    cusp_basis,
    delta_product_expansion,
    dimension,
    eigenform_by_label,
    eigenforms,
    eigenvector_check,
    eisenstein_and_delta,
    hecke_apply,
    hecke_relation_check,
)
from voronoi_forge.residues import is_prime

TAU = {1: 1, 2: -24, 3: 252, 4: -1472, 5: 4830, 6: -6048, 7: -16744}

integer_lists = st.lists(
    st.integers(min_value=-(10**30), max_value=10**30), min_size=1, max_size=25
)


class TestQuadraticNumber:
    """Test cases for exact x + y sqrt(D) arithmetic."""

    def test_arithmetic(self):
        """Test (1 + sqrt 2)(1 - sqrt 2) = -1 and division back."""
        a = QuadraticNumber(1, 1, 2)
        b = a.conjugate()
        assert a * b == -1
        assert (a * b) / b == a
        assert a - a == 0

    def test_float(self):
        """Test the real embedding."""
        assert float(QuadraticNumber(Fraction(1, 2), 3, 5)) == pytest.approx(
            0.5 + 3 * 5**0.5
        )

    def test_mixed_fields(self):
        """Test that different fields do not mix."""
        with pytest.raises(InvalidParams, match="Mixed quadratic fields"):
            QuadraticNumber(1, 1, 2) + QuadraticNumber(1, 1, 3)

    def test_division_by_zero(self):
        """Test division by zero."""
        with pytest.raises(ZeroDivisionError):
            QuadraticNumber(1, 1, 2) / 0


class TestExpansions:
    """Test cases for Eisenstein series and Delta."""

    def test_eisenstein_coefficients(self):
        """Test the first coefficients of E4 and E6."""
        E4, E6, _ = eisenstein_and_delta(10)
        assert E4.coeffs[:4] == (1, 240, 2160, 6720)
        assert E6.coeffs[:3] == (1, -504, -16632)

    def test_ramanujan_tau(self):
        """Test tau(1..7)."""
        _, _, Delta = eisenstein_and_delta(10)
        assert Delta.coeffs[0] == 0
        assert all(Delta[n] == tau for n, tau in TAU.items())

    def test_product_oracle(self):
        """Test Delta against q prod (1 - q^n)^24."""
        _, _, Delta = eisenstein_and_delta(300)
        assert Delta.coeffs == delta_product_expansion(300)

    def test_precision_guard(self):
        """Test reading past the known precision."""
        _, _, Delta = eisenstein_and_delta(10)
        with pytest.raises(PrecisionExhausted, match="known to n=10"):
            Delta[11]

    def test_precision_range(self):
        """Test the supported precision range."""
        with pytest.raises(OutOfRange, match="outside"):
            eisenstein_and_delta(0)

    def test_weight_mismatch(self):
        """Test that only equal weights add."""
        E4, E6, _ = eisenstein_and_delta(10)
        with pytest.raises(InvalidParams, match="Cannot add weight 4"):
            E4 + E6

    @given(integer_lists, integer_lists)
    def test_integer_product(self, a, b):
        """Test the big-integer product against a schoolbook convolution."""
        N = min(len(a), len(b)) - 1
        product = QExpansion(0, tuple(a)) * QExpansion(0, tuple(b))
        expected = [sum(a[i] * b[n - i] for i in range(n + 1)) for n in range(N + 1)]
        assert list(product.coeffs) == expected

    def test_power(self):
        """Test E4^3 against repeated multiplication."""
        E4, _, _ = eisenstein_and_delta(30)
        assert E4.power(3).coeffs == (E4 * E4 * E4).coeffs
        assert E4.power(0).coeffs[:3] == (1, 0, 0)


class TestHecke:
    """Test cases for Hecke operators."""

    def test_delta_eigenvector(self):
        """Test T_2 Delta = -24 Delta."""
        _, _, Delta = eisenstein_and_delta(40)
        image = hecke_apply(2, Delta)
        assert image.precision == 20
        assert image.coeffs == tuple(-24 * c for c in Delta.coeffs[:21])

    def test_bad_index(self):
        """Test the Hecke index check."""
        _, _, Delta = eisenstein_and_delta(10)
        with pytest.raises(InvalidParams, match="must be positive"):
            hecke_apply(0, Delta)
        with pytest.raises(PrecisionExhausted):
            hecke_apply(11, Delta)

    @pytest.mark.parametrize("k, dim", [(12, 1), (14, 0), (16, 1), (24, 2), (26, 1)])
    def test_dimension(self, k, dim):
        """Test dim S_k for level one."""
        assert dimension(k) == dim
        assert len(cusp_basis(k, 10)) == dim

    def test_unsupported_weight(self):
        """Test weights outside 12..26."""
        with pytest.raises(OutOfRange, match="outside the supported range"):
            cusp_basis(28, 10)


class TestEigenforms:
    """Test cases for normalized eigenforms."""

    def test_delta_lambda(self):
        """Test lambda(2) = -24 / 2^(11/2)."""
        f = eigenforms(12, 10)[0]
        assert f.label == "12"
        assert f.lam(2) == pytest.approx(-0.530330085889911, abs=1e-15)
        assert f.lambda_array(3)[0] == 0

    def test_weight_24_field(self):
        """Test the two conjugate eigenforms of weight 24."""
        a, b = eigenforms(24, 30)
        assert (a.label, b.label) == ("24a", "24b")
        assert a.field_degree == 2
        assert a.a(2) == QuadraticNumber(540, 12, 144169)
        assert b.a(2) == QuadraticNumber(540, -12, 144169)

    @pytest.mark.parametrize(
        "label", ["12", "16", "18", "20", "22", "24a", "24b", "26"]
    )
    def test_eigenvector(self, label):
        """Test T_m f = a(m) f exactly."""
        f = eigenform_by_label(label, 60)
        for m in (2, 3, 5):
            assert eigenvector_check(f, m).exact is True

    @pytest.mark.parametrize("label", ["12", "20", "24a"])
    def test_hecke_relation(self, label):
        """Test lambda(m) lambda(n) = sum over d | (m, n) of lambda(mn/d^2)."""
        f = eigenform_by_label(label, 200)
        for m, n in [(2, 2), (2, 3), (4, 6), (9, 12)]:
            assert hecke_relation_check(f, m, n).residual < 1e-10

    def test_deligne_bound(self):
        """Test |lambda(p)| <= 2 for primes up to 200."""
        for k in (12, 16, 18, 20, 22, 24, 26):
            for f in eigenforms(k, 200):
                lam = np.array([f.lam(p) for p in range(2, 201) if is_prime(p)])
                assert np.all(np.abs(lam) <= 2)

    def test_label_lookup(self):
        """Test malformed and unknown labels."""
        with pytest.raises(InvalidParams, match="Malformed"):
            eigenform_by_label("delta")
        with pytest.raises(InvalidParams, match="No eigenform"):
            eigenform_by_label("12a", 10)

    def test_unsupported_weight(self):
        """Test weights without eigenforms."""
        with pytest.raises(OutOfRange, match="No eigenforms for weight 14"):
            eigenforms(14)

    def test_lambda_range(self):
        """Test lambda beyond the precision."""
        f = eigenforms(12, 10)[0]
        with pytest.raises(PrecisionExhausted):
            f.lam(11)
        with pytest.raises(PrecisionExhausted):
            f.lambda_array(11)
